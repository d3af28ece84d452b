"""First-order perturbative scalars, dense operators, tensor terms and superoperators.

Every quantity that can depend on a deformation parameter is stored as a pair
``(order0, order1)`` meaning ``order0 + eps * order1``; products truncate the
``eps**2`` term.  Superoperators use the column-stacking convention

    vec(A @ rho @ B) = kron(B.T, A) @ vec(rho),     vec(X) = X.reshape(-1, order="F").
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, NotHermitian, ParamMismatch

PARAMS = ("z", "h", "inv_kappa", "none")
STACKING = "column"

HERMITICITY_TOL = 1e-8
EQUALITY_TOL = 1e-12


def merge_params(a: str, b: str) -> str:
    if a == b or b == "none":
        return a
    if a == "none":
        return b
    raise ParamMismatch(f"cannot combine quantities in {a!r} and {b!r}")


# ---------------------------------------------------------------------------
# Jet: truncated scalar a0 + a1*eps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Jet:
    """Complex number truncated at first order in a named deformation parameter."""

    order0: complex = 0j
    order1: complex = 0j
    param: str = "none"

    def __post_init__(self):
        object.__setattr__(self, "order0", complex(self.order0))
        object.__setattr__(self, "order1", complex(self.order1))
        if self.param not in PARAMS:
            raise ValueError(f"unknown parameter tag {self.param!r}")
        if self.param == "none" and self.order1 != 0:
            raise ValueError("a Jet tagged 'none' must have order1 == 0")

    @classmethod
    def coerce(cls, x: "JetLike") -> "Jet":
        if isinstance(x, Jet):
            return x
        if isinstance(x, Number):
            return cls(complex(x))
        raise TypeError(f"cannot interpret {type(x).__name__} as a Jet")

    @classmethod
    def eps(cls, param: str, coeff: complex = 1.0) -> "Jet":
        return cls(0j, coeff, param)

    def __add__(self, other):
        try:
            o = Jet.coerce(other)
        except TypeError:
            return NotImplemented
        return Jet(self.order0 + o.order0, self.order1 + o.order1, merge_params(self.param, o.param))

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.order0, -self.order1, self.param)

    def __sub__(self, other):
        try:
            o = Jet.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return Jet.coerce(other) - self

    def __mul__(self, other):
        try:
            o = Jet.coerce(other)
        except TypeError:
            return NotImplemented
        param = merge_params(self.param, o.param)
        return Jet(
            self.order0 * o.order0,
            self.order0 * o.order1 + self.order1 * o.order0,
            param,
        )

    __rmul__ = __mul__

    def conj(self) -> "Jet":
        # the formal parameter is real
        return Jet(self.order0.conjugate(), self.order1.conjugate(), self.param)

    def at(self, value: float | None) -> complex:
        if self.param == "none" or self.order1 == 0:
            return self.order0
        if value is None:
            raise ValueError(f"a value for {self.param!r} is required")
        return self.order0 + value * self.order1

    def is_zero(self, tol: float = 0.0) -> bool:
        return abs(self.order0) <= tol and abs(self.order1) <= tol

    def __repr__(self):
        if self.param == "none":
            return f"Jet({self.order0:.6g})"
        return f"Jet({self.order0:.6g} + {self.order1:.6g}*{self.param})"


JetLike = Union[Jet, Number]

ONE = Jet(1.0)
ZERO = Jet(0.0)


def jet_mul(a: JetLike, b: JetLike) -> Jet:
    return Jet.coerce(a) * Jet.coerce(b)


# ---------------------------------------------------------------------------
# Jet-valued matrices
# ---------------------------------------------------------------------------


class _JetMatrix:
    """Immutable pair of complex matrices (order 0, order 1) with a parameter tag."""

    __slots__ = ("o0", "o1", "param")

    def __init__(self, o0, o1=None, param: str = "none"):
        a0 = np.array(o0, dtype=complex)
        a1 = np.zeros_like(a0) if o1 is None else np.array(o1, dtype=complex)
        if a0.ndim != 2 or a0.shape[0] != a0.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a0.shape}")
        if a1.shape != a0.shape:
            raise DimensionMismatch("order-0 and order-1 parts differ in shape")
        if param not in PARAMS:
            raise ValueError(f"unknown parameter tag {param!r}")
        if param == "none" and np.any(a1 != 0):
            raise ValueError("a matrix tagged 'none' must have a zero order-1 part")
        if not (np.all(np.isfinite(a0)) and np.all(np.isfinite(a1))):
            raise ValueError("matrix entries must be finite")
        a0.setflags(write=False)
        a1.setflags(write=False)
        object.__setattr__(self, "o0", a0)
        object.__setattr__(self, "o1", a1)
        object.__setattr__(self, "param", param)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def _new(self, o0, o1, param):
        return type(self)(o0, o1, param)

    @property
    def size(self) -> int:
        return self.o0.shape[0]

    def _check(self, other: "_JetMatrix"):
        if self.o0.shape != other.o0.shape:
            raise DimensionMismatch(f"shapes {self.o0.shape} and {other.o0.shape} differ")
        return merge_params(self.param, other.param)

    def __add__(self, other):
        if not isinstance(other, _JetMatrix):
            return NotImplemented
        p = self._check(other)
        return self._new(self.o0 + other.o0, self.o1 + other.o1, p)

    def __sub__(self, other):
        if not isinstance(other, _JetMatrix):
            return NotImplemented
        p = self._check(other)
        return self._new(self.o0 - other.o0, self.o1 - other.o1, p)

    def __neg__(self):
        return self._new(-self.o0, -self.o1, self.param)

    def __mul__(self, scalar):
        try:
            c = Jet.coerce(scalar)
        except TypeError:
            return NotImplemented
        p = merge_params(self.param, c.param)
        return self._new(c.order0 * self.o0, c.order0 * self.o1 + c.order1 * self.o0, p)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, _JetMatrix):
            return NotImplemented
        p = self._check(other)
        return self._new(self.o0 @ other.o0, self.o0 @ other.o1 + self.o1 @ other.o0, p)

    def dag(self):
        return self._new(self.o0.conj().T, self.o1.conj().T, self.param)

    def transpose(self):
        return self._new(self.o0.T, self.o1.T, self.param)

    def at(self, value: float | None = None) -> np.ndarray:
        """Numeric matrix with the deformation parameter set to ``value``."""
        if self.param == "none" or not np.any(self.o1):
            return np.array(self.o0)
        if value is None:
            raise ValueError(f"a value for {self.param!r} is required")
        return self.o0 + value * self.o1

    def order(self, k: int) -> np.ndarray:
        return np.array((self.o0, self.o1)[k])

    def entry(self, i: int, j: int) -> Jet:
        return Jet(self.o0[i, j], self.o1[i, j], self.param)

    def max_abs(self) -> float:
        """Largest entry modulus over both orders."""
        return float(max(np.abs(self.o0).max(initial=0.0), np.abs(self.o1).max(initial=0.0)))

    def allclose(self, other, tol: float = EQUALITY_TOL) -> bool:
        return (self - other).max_abs() <= tol

    def __repr__(self):
        return f"{type(self).__name__}(size={self.size}, param={self.param!r})"


class Operator(_JetMatrix):
    """Dense operator on a d-dimensional Hilbert space."""

    __slots__ = ()

    @property
    def dim(self) -> int:
        return self.o0.shape[0]

    @classmethod
    def identity(cls, d: int) -> "Operator":
        return cls(np.eye(d))

    @classmethod
    def zeros(cls, d: int, param: str = "none") -> "Operator":
        return cls(np.zeros((d, d)), None, param)

    def trace(self) -> Jet:
        return Jet(np.trace(self.o0), np.trace(self.o1), self.param)

    def hermiticity_defect(self, value: float | None = None) -> float:
        m = self.at(value)
        return float(np.linalg.norm(m - m.conj().T))


class SuperOp(_JetMatrix):
    """d^2 x d^2 matrix of a linear map on operators (column stacking)."""

    __slots__ = ()
    convention = STACKING

    @property
    def dim(self) -> int:
        return _sqrt_dim(self.o0.shape[0])

    @classmethod
    def identity(cls, d: int) -> "SuperOp":
        return cls(np.eye(d * d))

    @classmethod
    def zeros(cls, d: int, param: str = "none") -> "SuperOp":
        return cls(np.zeros((d * d, d * d)), None, param)

    def apply(self, rho: Operator) -> Operator:
        if rho.dim != self.dim:
            raise DimensionMismatch(f"superoperator on dim {self.dim} applied to dim {rho.dim}")
        p = merge_params(self.param, rho.param)
        v0, v1 = stack(rho.o0), stack(rho.o1)
        return Operator(unstack(self.o0 @ v0), unstack(self.o0 @ v1 + self.o1 @ v0), p)


def _sqrt_dim(n: int) -> int:
    d = int(round(np.sqrt(n)))
    if d * d != n:
        raise DimensionMismatch(f"{n} is not a perfect square")
    return d


def as_operator(x) -> Operator:
    if isinstance(x, Operator):
        return x
    return Operator(np.asarray(x, dtype=complex))


def stack(m: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(m).reshape(-1, order="F")


def unstack(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    d = _sqrt_dim(v.shape[0])
    return v.reshape((d, d), order="F")


def kron(a: _JetMatrix, b: _JetMatrix, cls=Operator):
    p = merge_params(a.param, b.param)
    return cls(np.kron(a.o0, b.o0), np.kron(a.o0, b.o1) + np.kron(a.o1, b.o0), p)


# ---------------------------------------------------------------------------
# Sweedler sums and the diamond action
# ---------------------------------------------------------------------------

Term = tuple  # (left: Operator, right: Operator, coeff: Jet)


@dataclass(frozen=True)
class TensorElement:
    """Finite sum of simple tensors ``coeff * left (x) right``."""

    terms: tuple = ()

    def __post_init__(self):
        terms = tuple((as_operator(a), as_operator(b), Jet.coerce(c)) for a, b, c in self.terms)
        if terms:
            d = terms[0][0].dim
            for a, b, _ in terms:
                if a.dim != d or b.dim != d:
                    raise DimensionMismatch("all tensor legs must share one dimension")
        object.__setattr__(self, "terms", terms)

    @property
    def dim(self) -> int:
        if not self.terms:
            raise DimensionMismatch("empty tensor element has no dimension")
        return self.terms[0][0].dim

    @property
    def param(self) -> str:
        p = "none"
        for a, b, c in self.terms:
            p = merge_params(merge_params(p, a.param), merge_params(b.param, c.param))
        return p

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return TensorElement(self.terms + other.terms)

    def scaled(self, c: JetLike) -> "TensorElement":
        c = Jet.coerce(c)
        return TensorElement(tuple((a, b, k * c) for a, b, k in self.terms))

    def dagger(self) -> "TensorElement":
        """Leg-swapped adjoint: ``c A (x) B -> conj(c) B^dag (x) A^dag``.

        On Hermitian ``rho`` this reproduces ``diamond(t, rho)^dag``.
        """
        return TensorElement(tuple((b.dag(), a.dag(), c.conj()) for a, b, c in self.terms))

    def matrix(self) -> Operator:
        """The element as an operator on the d^2-dimensional tensor space."""
        d = self.dim
        out = Operator.zeros(d * d)
        for a, b, c in self.terms:
            out = out + c * kron(a, b)
        return out


def diamond(t: TensorElement, rho: Operator) -> Operator:
    """``(A (x) B) <> rho = A rho B`` extended linearly."""
    rho = as_operator(rho)
    out = Operator.zeros(rho.dim)
    for a, b, c in t.terms:
        if a.dim != rho.dim:
            raise DimensionMismatch(f"tensor on dim {a.dim} applied to dim {rho.dim}")
        out = out + c * (a @ rho @ b)
    return out


def superop_of(terms: Iterable[Term] | TensorElement) -> SuperOp:
    """Matrix of ``rho -> sum c * A rho B`` in column stacking."""
    if isinstance(terms, TensorElement):
        terms = terms.terms
    terms = list(terms)
    if not terms:
        raise DimensionMismatch("cannot infer a dimension from an empty term list")
    d = as_operator(terms[0][0]).dim
    out = SuperOp.zeros(d)
    for a, b, c in terms:
        a, b = as_operator(a), as_operator(b)
        if a.dim != d or b.dim != d:
            raise DimensionMismatch("inconsistent term dimensions")
        out = out + Jet.coerce(c) * kron(b.transpose(), a, cls=SuperOp)
    return out


# ---------------------------------------------------------------------------
# Hermitian operator basis and spectra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HermitianBasis:
    dim: int
    elements: tuple

    @property
    def matrices(self) -> np.ndarray:
        """Stacked numeric basis, shape (d^2, d, d)."""
        return np.array([f.o0 for f in self.elements])


def hermitian_basis(d: int) -> HermitianBasis:
    """Orthonormal Hermitian basis: identity/sqrt(d), then normalized generalized Gell-Mann.

    Off-diagonal elements come in (symmetric, antisymmetric) pairs for each
    index pair j < k; diagonal elements follow.  For d = 2 this gives
    ``(I, sx, sy, sz) / sqrt(2)``.
    """
    if d < 2:
        raise ValueError("hermitian_basis needs d >= 2")
    mats = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=complex)
            s[j, k] = s[k, j] = 1
            a = np.zeros((d, d), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            mats += [s / np.sqrt(2), a / np.sqrt(2)]
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1
        diag[l] = -l
        mats.append(np.diag(diag).astype(complex) * np.sqrt(1.0 / (l * (l + 1))))
    return HermitianBasis(d, tuple(Operator(m) for m in mats))


def min_eigenvalue(h, param_value: float | None = None) -> float:
    """Smallest eigenvalue of a Hermitian operator, evaluated at ``param_value``."""
    m = h.at(param_value) if isinstance(h, _JetMatrix) else np.asarray(h, dtype=complex)
    if np.abs(m - m.conj().T).max(initial=0.0) > HERMITICITY_TOL:
        raise NotHermitian("min_eigenvalue needs a Hermitian operator")
    return float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])


# Pauli and spin-1/2 matrices in the basis (|z,+>, |z,->)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
J_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
J_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
J_Z = SZ / 2


def commutator_superop(h: np.ndarray) -> np.ndarray:
    """Numeric matrix of ``rho -> [h, rho]``."""
    h = np.asarray(h, dtype=complex)
    eye = np.eye(h.shape[0])
    return np.kron(eye, h) - np.kron(h.T, eye)


def left_right_superop(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Numeric matrix of ``rho -> a rho b``."""
    return np.kron(np.asarray(b).T, np.asarray(a))


def frobenius(m) -> float:
    return float(np.linalg.norm(np.asarray(m)))
