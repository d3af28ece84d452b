"""Hopf-algebra models, the su(2) coproduct/antipode solvers and physicality audits."""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import EmptyGrid, InconsistentInput, UnknownSymbol, UnsupportedDimension
from .opalg import (
    J_MINUS,
    J_PLUS,
    J_Z,
    Jet,
    Operator,
)
from .symalg import (
    HopfData,
    SymElement,
    SymTensor,
    antipode,
    apply_legs,
    coproduct,
    counit,
    counit_leg,
    dagger,
    evaluate,
    multiply_legs,
    tensor_matrix,
)

AUDIT_TOL = 1e-8
RANK_CUTOFF = 1e-8
DEFAULT_PARAM_VALUE = 0.1

LABELS = ("+", "-", "z")
SU2_SYMBOLS = {"+": "J+", "-": "J-", "z": "Jz"}
_CONJ = {"+": "-", "-": "+", "z": "z"}


@dataclass(frozen=True)
class HopfModel:
    name: str
    data: HopfData
    mode: str  # "exact" | "first-order"
    param: str = "none"
    param_value: float | None = None
    scale: float = 1.0
    metric: np.ndarray | None = None
    physical: bool = True
    hamiltonians: Mapping[str, SymElement] = field(default_factory=dict)
    default_hamiltonian: str | None = None
    ctable: "CTable | None" = None
    stable: "STable | None" = None
    expand: Callable[[], "HopfModel"] | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.data.dim

    def value(self) -> float | None:
        """Numeric parameter value used whenever Jets must be evaluated."""
        if self.mode == "exact" or self.param == "none":
            return None
        return DEFAULT_PARAM_VALUE if self.param_value is None else self.param_value

    def first_order(self) -> "HopfModel":
        if self.mode == "first-order":
            return self
        if self.expand is not None:
            return self.expand()
        return self

    def hamiltonian(self, name: str | None = None) -> SymElement:
        key = name or self.default_hamiltonian
        if key not in self.hamiltonians:
            raise UnknownSymbol(f"model {self.name!r} has no Hamiltonian {key!r}")
        return self.hamiltonians[key]

    def descriptor(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode,
            "param": self.param,
            "param_value": self.value(),
            "dim": self.dim,
            "scale": self.scale,
            "physical": self.physical,
        }


# ---------------------------------------------------------------------------
# su(2): qubit representation and shared structure
# ---------------------------------------------------------------------------


def _qubit_rep() -> dict:
    return {"J+": J_PLUS, "J-": J_MINUS, "Jz": J_Z}


def _su2_daggers() -> dict:
    return {"J+": SymElement.gen("J-"), "J-": SymElement.gen("J+"), "Jz": SymElement.gen("Jz")}


def _su2_relations(plus_minus: SymElement) -> dict:
    g = SymElement.gen
    return {
        ("Jz", "J+"): g("J+"),
        ("Jz", "J-"): -g("J-"),
        ("J+", "J-"): plus_minus,
    }


def _su2_hamiltonians(deformed_hx: SymElement | None = None) -> dict:
    g = SymElement.gen
    hams = {
        "hx-plain": g("J+") + g("J-"),
        "hy": (g("J+") - g("J-")) * (-1j),
        "hz": g("Jz"),
    }
    hams["hx"] = deformed_hx if deformed_hx is not None else hams["hx-plain"]
    return hams


def _split_parameter(z: complex) -> tuple[float, complex]:
    """``z = magnitude * phase`` with a real expansion variable ``magnitude``."""
    z = complex(z)
    mag = abs(z)
    if mag == 0:
        return 0.0, 1.0
    phase = z / mag
    if abs(phase.imag) < 1e-15:
        phase = complex(phase.real, 0)
    return mag, phase


def build_uq_su2(z: complex = 0.1, mode: str = "exact", scale: float = 1.0, dim: int = 2) -> HopfModel:
    """U_q(su(2)) with ``q = exp(z/2)`` in the qubit representation.

    ``mode="first-order"`` expands every q-dependence to first order in z;
    complex z is allowed (imaginary z breaks coproduct hermiticity).
    """
    if dim != 2:
        raise UnsupportedDimension("only the qubit representation of U_q(su(2)) is supported")
    if mode not in ("exact", "first-order"):
        raise ValueError(f"unknown mode {mode!r}")
    z = complex(z)
    g = SymElement.gen

    if mode == "exact":
        def qpow(c):  # q**(c*Jz)
            return SymElement.exp(c * z / 2, "Jz")

        def qscalar(c):  # q**c as a number
            return Jet(cmath.exp(c * z / 2))

        q = cmath.exp(z / 2)
        gap = q - 1 / q
        if abs(gap) > 1e-12:
            pm = (qpow(2) - qpow(-2)) * (1 / gap)
        else:
            pm = g("Jz") * 2
        param, value = "none", None
    else:
        mag, phase = _split_parameter(z)

        def qpow(c):
            return SymElement.exp(Jet(0, c * phase / 2, "z"), "Jz")

        def qscalar(c):
            return Jet(1, c * phase / 2, "z")

        pm = g("Jz") * 2  # [2Jz]_q = 2Jz + O(z^2)
        param, value = "z", mag

    coproducts = {
        "J+": SymTensor.simple(g("J+"), qpow(-1)) + SymTensor.simple(qpow(1), g("J+")),
        "J-": SymTensor.simple(g("J-"), qpow(-1)) + SymTensor.simple(qpow(1), g("J-")),
        "Jz": SymTensor.primitive("Jz"),
    }
    antipodes = {
        "J+": g("J+") * (-qscalar(-1)),
        "J-": g("J-") * (-qscalar(1)),
        "Jz": -g("Jz"),
    }
    data = HopfData(
        coproducts=coproducts,
        antipodes=antipodes,
        counits={s: 0 for s in coproducts},
        daggers=_su2_daggers(),
        representation=_qubit_rep(),
        relations=_su2_relations(pm),
    )
    deformed = qpow(0.5) * (g("J+") + g("J-")) * qpow(0.5)
    physical = abs(z.imag) < 1e-15
    return HopfModel(
        name="uq-su2",
        data=data,
        mode=mode,
        param=param,
        param_value=value,
        scale=scale,
        physical=physical,
        hamiltonians=_su2_hamiltonians(deformed),
        default_hamiltonian="hx",
        expand=(lambda: build_uq_su2(z, "first-order", scale)) if mode == "exact" else None,
    )


def build_trivial_su2(scale: float = 1.0) -> HopfModel:
    """Undeformed su(2): primitive coproducts and S(X) = -X."""
    g = SymElement.gen
    syms = ("J+", "J-", "Jz")
    data = HopfData(
        coproducts={s: SymTensor.primitive(s) for s in syms},
        antipodes={s: -g(s) for s in syms},
        counits={s: 0 for s in syms},
        daggers=_su2_daggers(),
        representation=_qubit_rep(),
        relations=_su2_relations(g("Jz") * 2),
    )
    return HopfModel(
        name="trivial-su2",
        data=data,
        mode="exact",
        scale=scale,
        hamiltonians=_su2_hamiltonians(),
        default_hamiltonian="hx",
    )


# ---------------------------------------------------------------------------
# General first-order deformation of su(2)
# ---------------------------------------------------------------------------

FREE_KEYS = (
    ("z", "+", "+"),
    ("z", "+", "z"),
    ("z", "-", "-"),
    ("z", "-", "z"),
    ("z", "z", "+"),
    ("z", "z", "-"),
    ("+", "+", "z"),
    ("+", "z", "+"),
)

# hermiticity: dependent entry <- conj(independent entry) * sign
HERMITICITY_RULES = (
    (("z", "+", "+"), ("z", "-", "-"), 1),
    (("z", "+", "z"), ("z", "-", "z"), 1),
    (("z", "z", "+"), ("z", "z", "-"), 1),
    # forced by combining c(-)_{-z} = -c(+)_{z+} with c(-)_{-z} = conj(c(+)_{+z})
    (("+", "z", "+"), ("+", "+", "z"), -1),
)


def _index(k: str, i: str, j: str) -> int:
    return 9 * LABELS.index(k) + 3 * LABELS.index(i) + LABELS.index(j)


@dataclass(frozen=True)
class CTable:
    """Coefficients c^{(k)}_{ij} of the first-order coproduct correction h * c J_i (x) J_j."""

    values: np.ndarray = field(default_factory=lambda: np.zeros((3, 3, 3), dtype=complex))

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).reshape(3, 3, 3)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __getitem__(self, key) -> complex:
        k, i, j = key
        return complex(self.values[LABELS.index(k), LABELS.index(i), LABELS.index(j)])

    def flat(self) -> np.ndarray:
        return self.values.reshape(-1).copy()

    def free(self) -> dict:
        return {key: self[key] for key in FREE_KEYS}

    def scaled(self, lam: complex) -> "CTable":
        return CTable(self.values * lam)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        for k in LABELS:
            for i in LABELS:
                for j in LABELS:
                    if abs(self[_CONJ[k], _CONJ[i], _CONJ[j]] - self[k, i, j].conjugate()) > tol:
                        return False
        return True

    def as_dict(self) -> dict:
        return {f"{k}|{i}{j}": [self[k, i, j].real, self[k, i, j].imag] for k in LABELS for i in LABELS for j in LABELS}


@dataclass(frozen=True)
class RankReport:
    rank: int
    nullity: int
    singular_values: tuple


def _ad_matrix(x: str) -> np.ndarray:
    """A[a, i] = coefficient of J_a in [J_x, J_i] (undeformed su(2))."""
    a = np.zeros((3, 3))
    p, m, z = (LABELS.index(s) for s in LABELS)
    if x == "+":
        a[z, m] = 2.0  # [J+, J-] = 2Jz
        a[p, z] = -1.0  # [J+, Jz] = -J+
    elif x == "-":
        a[z, p] = -2.0
        a[m, z] = 1.0
    else:
        a[p, p] = 1.0
        a[m, m] = -1.0
    return a


def _bracket(x: str, y: str) -> np.ndarray:
    """Coefficients of [J_x, J_y] in the (+,-,z) basis."""
    return _ad_matrix(x)[:, LABELS.index(y)]


def homomorphism_matrix() -> np.ndarray:
    """27x27 real matrix of the first-order conditions Delta([X,Y]) = [Delta X, Delta Y].

    Built from structure constants only: the order-h part reads
    ad2_X c(Y) - ad2_Y c(X) - sum_k f^k_{XY} c(k) = 0 with ad2_X = ad_X (x) 1 + 1 (x) ad_X.
    """
    pairs = (("+", "-"), ("z", "+"), ("z", "-"))
    rows = []
    for x, y in pairs:
        ax, ay = _ad_matrix(x), _ad_matrix(y)
        f = _bracket(x, y)
        block = np.zeros((9, 27))
        for col in range(27):
            c = np.zeros(27)
            c[col] = 1.0
            c = c.reshape(3, 3, 3)
            cx, cy = c[LABELS.index(x)], c[LABELS.index(y)]
            out = ax @ cy + cy @ ax.T - ay @ cx - cx @ ay.T
            out = out - np.tensordot(f, c, axes=(0, 0))
            block[:, col] = out.reshape(-1)
        rows.append(block)
    return np.vstack(rows)


def _rank(m: np.ndarray) -> tuple[int, np.ndarray]:
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0, s
    return int(np.sum(s > RANK_CUTOFF * s[0])), s


def solve_general_su2_coproducts(free=None) -> tuple[CTable, RankReport]:
    """Solve the homomorphism constraints for the 27 coefficients.

    ``free`` may be None (all free parameters zero), a mapping from
    ``FREE_KEYS`` entries to values, a sequence of 8 values in ``FREE_KEYS``
    order, or a full :class:`CTable` (validated and returned).
    """
    m = homomorphism_matrix()
    rank, s = _rank(m)
    report = RankReport(rank, 27 - rank, tuple(float(x) for x in s))

    if isinstance(free, CTable):
        defect = np.abs(m @ free.flat()).max()
        if defect > 1e-10:
            raise InconsistentInput(f"coefficient table violates homomorphism constraints by {defect:.3e}")
        return free, report

    if free is None:
        values = {}
    elif isinstance(free, Mapping):
        values = dict(free)
        unknown = set(values) - set(FREE_KEYS)
        if unknown:
            raise InconsistentInput(f"not free parameters: {sorted(unknown)}")
    else:
        free = list(free)
        if len(free) != len(FREE_KEYS):
            raise InconsistentInput(f"expected {len(FREE_KEYS)} free values, got {len(free)}")
        values = dict(zip(FREE_KEYS, free))

    free_idx = [_index(*k) for k in FREE_KEYS]
    dep_idx = [i for i in range(27) if i not in free_idx]
    x_free = np.array([complex(values.get(k, 0)) for k in FREE_KEYS])
    sol, *_ = np.linalg.lstsq(m[:, dep_idx], -m[:, free_idx] @ x_free, rcond=None)
    full = np.zeros(27, dtype=complex)
    full[free_idx] = x_free
    full[dep_idx] = sol
    if np.abs(m @ full).max(initial=0.0) > 1e-10:
        raise InconsistentInput("free parameters do not determine a consistent table")
    return CTable(full), report


def apply_hermiticity(c: CTable) -> CTable:
    """Overwrite dependent entries so that Delta(J_z) is Hermitian and Delta(J_-) = Delta(J_+)^dag."""
    free = c.free()
    for dep, src, sign in HERMITICITY_RULES:
        free[dep] = sign * free[src].conjugate()
    out, _ = solve_general_su2_coproducts(free)
    return out


def random_hermitian_ctable(rng: np.random.Generator, scale: float = 1.0) -> CTable:
    """Random table satisfying both the homomorphism and hermiticity constraints."""
    free = {}
    for _, src, _ in HERMITICITY_RULES:
        free[src] = scale * complex(rng.normal(), rng.normal())
    table, _ = solve_general_su2_coproducts(free)
    return apply_hermiticity(table)


@dataclass(frozen=True)
class STable:
    """First-order antipode corrections on the span {J+, J-, Jz, 1} per generator."""

    coeffs: Mapping[str, tuple]
    residuals: Mapping[str, float]

    BASIS = ("+", "-", "z", "1")

    def __getitem__(self, key) -> complex:
        k, i = key
        return complex(self.coeffs[k][self.BASIS.index(i)])

    @property
    def residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def as_dict(self) -> dict:
        return {
            "coeffs": {k: {b: [complex(v).real, complex(v).imag] for b, v in zip(self.BASIS, vals)} for k, vals in self.coeffs.items()},
            "residuals": dict(self.residuals),
        }


def _quadratic_target(c: CTable, k: str, rep: Mapping[str, np.ndarray]) -> np.ndarray:
    """sum_ij c^{(k)}_{ij} J_i J_j in the representation."""
    out = 0
    for i in LABELS:
        for j in LABELS:
            out = out + c[k, i, j] * (rep[SU2_SYMBOLS[i]] @ rep[SU2_SYMBOLS[j]])
    return out


def _span_basis(rep: Mapping[str, np.ndarray]) -> list:
    d = next(iter(rep.values())).shape[0]
    return [rep["J+"], rep["J-"], rep["Jz"], np.eye(d)]


def solve_antipode_first_order(model_or_table, rep: Mapping[str, np.ndarray] | None = None) -> STable:
    """Least-squares first-order antipode corrections in the representation.

    Solves sum_i s_i J_i + s_1 * 1 = sum_ij c_ij J_i J_j for each generator;
    the residual of the fit is reported, not hidden.
    """
    if isinstance(model_or_table, HopfModel):
        table = model_or_table.ctable
        if table is None:
            raise InconsistentInput(f"model {model_or_table.name!r} carries no coefficient table")
        rep = rep or {s: model_or_table.data.representation[s].o0 for s in SU2_SYMBOLS.values()}
    else:
        table = model_or_table
    rep = rep or _qubit_rep()
    basis = _span_basis(rep)
    a = np.array([b.reshape(-1) for b in basis]).T
    coeffs, residuals = {}, {}
    for k in LABELS:
        target = _quadratic_target(table, k, rep)
        s, *_ = np.linalg.lstsq(a, target.reshape(-1), rcond=None)
        coeffs[k] = tuple(complex(v) for v in s)
        residuals[k] = float(np.linalg.norm(a @ s - target.reshape(-1)))
    return STable(coeffs, residuals)


def tabulated_antipode_table(c: CTable, rep: Mapping[str, np.ndarray] | None = None) -> STable:
    """The closed-form antipode corrections obtained by abstract reduction.

    Residuals are measured in the representation against the same condition
    used by :func:`solve_antipode_first_order`.
    """
    rep = rep or _qubit_rep()
    coeffs = {
        "z": (-c["z", "+", "z"] + c["z", "z", "+"], c["z", "-", "z"] - c["z", "z", "-"], 0, 0),
        "+": (-c["+", "+", "z"] + c["+", "z", "+"], 0, 0.5 * (c["z", "-", "z"] - c["z", "z", "-"]), 0),
        "-": (0, c["+", "z", "+"] - c["+", "+", "z"], 0.5 * (c["z", "z", "+"] - c["z", "+", "z"]), 0),
    }
    basis = _span_basis(rep)
    residuals = {}
    for k in LABELS:
        lhs = sum(s * b for s, b in zip(coeffs[k], basis))
        residuals[k] = float(np.linalg.norm(lhs - _quadratic_target(c, k, rep)))
    return STable({k: tuple(complex(v) for v in vals) for k, vals in coeffs.items()}, residuals)


def build_general_su2(
    ctable: CTable | None = None,
    h: float = DEFAULT_PARAM_VALUE,
    antipode_table: str | STable = "solved",
    scale: float = 1.0,
) -> HopfModel:
    """First-order su(2) deformation Delta(J_k) = prim + h sum c^{(k)}_{ij} J_i (x) J_j."""
    ctable = ctable if ctable is not None else CTable()
    if isinstance(antipode_table, STable):
        stable = antipode_table
    elif antipode_table == "solved":
        stable = solve_antipode_first_order(ctable)
    elif antipode_table == "tabulated":
        stable = tabulated_antipode_table(ctable)
    else:
        raise ValueError(f"unknown antipode table {antipode_table!r}")

    g = SymElement.gen
    coproducts, antipodes = {}, {}
    for k in LABELS:
        sk = SU2_SYMBOLS[k]
        t = SymTensor.primitive(sk)
        for i in LABELS:
            for j in LABELS:
                cij = ctable[k, i, j]
                if cij != 0:
                    t = t + SymTensor.simple(g(SU2_SYMBOLS[i]), g(SU2_SYMBOLS[j])) * Jet(0, cij, "h")
        coproducts[sk] = t
        s = -g(sk)
        for b, v in zip(STable.BASIS, stable.coeffs[k]):
            if v != 0:
                elem = SymElement.one() if b == "1" else g(SU2_SYMBOLS[b])
                s = s + elem * Jet(0, v, "h")
        antipodes[sk] = s

    data = HopfData(
        coproducts=coproducts,
        antipodes=antipodes,
        counits={s: 0 for s in coproducts},
        daggers=_su2_daggers(),
        representation=_qubit_rep(),
        relations=_su2_relations(g("Jz") * 2),
    )
    return HopfModel(
        name="general-su2",
        data=data,
        mode="first-order",
        param="h",
        param_value=h,
        scale=scale,
        hamiltonians=_su2_hamiltonians(),
        default_hamiltonian="hz",
        ctable=ctable,
        stable=stable,
    )


# ---------------------------------------------------------------------------
# kappa-Galilei translations
# ---------------------------------------------------------------------------


def default_grid(n_points: int = 8, n_space: int = 1) -> np.ndarray:
    """Momentum samples uniform in [-1, 1]; for n_space > 1 a tensor grid."""
    axis = np.linspace(-1.0, 1.0, n_points)
    if n_space == 1:
        return axis[:, None]
    mesh = np.meshgrid(*([axis] * n_space), indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def build_kappa_galilei(
    kappa: float = 10.0,
    grid: Sequence | np.ndarray | None = None,
    mapped: bool = False,
    p0: Sequence[float] | None = None,
    metric: np.ndarray | None = None,
    scale: float = 1.0,
) -> HopfModel:
    """Translation sector of kappa-Galilei at first order in 1/kappa.

    The representation is diagonal on the momentum grid.  ``mapped=True``
    multiplies every deformation term by -i (not Hermitian-consistent).
    """
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid.ndim == 1:
        grid = grid[:, None]
    if grid.size == 0:
        raise EmptyGrid("momentum grid is empty")
    n_space = grid.shape[1]
    metric = np.eye(n_space) if metric is None else np.asarray(metric, dtype=float)
    if metric.shape != (n_space, n_space):
        raise ValueError(f"metric must be {n_space}x{n_space}")
    p0_diag = 0.5 * np.sum(grid**2, axis=1) if p0 is None else np.asarray(p0, dtype=float)
    if p0_diag.shape != (grid.shape[0],):
        raise ValueError("P0 table must have one entry per grid point")

    inv_kappa = 0.0 if np.isinf(kappa) else 1.0 / kappa
    eps = Jet(0, -1j if mapped else 1.0, "inv_kappa")
    g = SymElement.gen
    spatial = [f"P{i + 1}" for i in range(n_space)]

    p_squared = SymElement()
    dp0 = SymTensor.primitive("P0")
    for a, pa in enumerate(spatial):
        for b, pb in enumerate(spatial):
            if metric[a, b] != 0:
                dp0 = dp0 + SymTensor.simple(g(pa), g(pb)) * (eps * metric[a, b])
                p_squared = p_squared + g(pa) * g(pb) * metric[a, b]

    coproducts = {"P0": dp0}
    antipodes = {"P0": -g("P0") + p_squared * eps}
    for pa in spatial:
        coproducts[pa] = SymTensor.primitive(pa) + SymTensor.simple(g(pa), g("P0")) * eps
        antipodes[pa] = -g(pa) + g(pa) * g("P0") * eps

    rep = {"P0": np.diag(p0_diag)}
    for a, pa in enumerate(spatial):
        rep[pa] = np.diag(grid[:, a])
    syms = ["P0", *spatial]
    relations = {(x, y): SymElement() for i, x in enumerate(syms) for y in syms[i + 1:]}
    data = HopfData(
        coproducts=coproducts,
        antipodes=antipodes,
        counits={s: 0 for s in syms},
        daggers={s: g(s) for s in syms},
        representation=rep,
        relations=relations,
    )
    return HopfModel(
        name="kappa-galilei-mapped" if mapped else "kappa-galilei",
        data=data,
        mode="first-order",
        param="inv_kappa",
        param_value=inv_kappa,
        scale=scale,
        metric=metric,
        physical=not mapped,
        hamiltonians={"p0": g("P0")},
        default_hamiltonian="p0",
    )


def kappa_operators(model: HopfModel) -> tuple[np.ndarray, list]:
    """Numeric P0 and spatial momenta of a kappa-Galilei model."""
    rep = model.data.representation
    spatial = sorted((s for s in rep if s != "P0"), key=lambda s: int(s[1:]))
    return rep["P0"].o0, [rep[s].o0 for s in spatial]


# ---------------------------------------------------------------------------
# Audits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuditReport:
    coproduct_hermiticity_defect: float
    coproduct_homomorphism_defect: float
    antipode_condition_defect: float
    counit_defect: float
    per_generator: Mapping[str, Mapping[str, float]]
    tolerance: float = AUDIT_TOL

    @property
    def verdicts(self) -> dict:
        return {
            "coproduct_hermiticity": self.coproduct_hermiticity_defect < self.tolerance,
            "coproduct_homomorphism": self.coproduct_homomorphism_defect < self.tolerance,
            "antipode_condition": self.antipode_condition_defect < self.tolerance,
            "counit": self.counit_defect < self.tolerance,
        }

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    def as_dict(self) -> dict:
        return {
            "defects": {
                "coproduct_hermiticity": self.coproduct_hermiticity_defect,
                "coproduct_homomorphism": self.coproduct_homomorphism_defect,
                "antipode_condition": self.antipode_condition_defect,
                "counit": self.counit_defect,
            },
            "verdicts": {k: "PASS" if v else "FAIL" for k, v in self.verdicts.items()},
            "per_generator": {k: dict(v) for k, v in self.per_generator.items()},
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _norm(op: Operator, value: float | None) -> float:
    return float(np.linalg.norm(op.at(value)))


def inferred_relation(data: HopfData, x: str, y: str) -> SymElement | None:
    """Express [rep X, rep Y] in span{generators, 1} when the fit is exact."""
    rep = {s: data.representation[s].o0 for s in data.symbols}
    target = rep[x] @ rep[y] - rep[y] @ rep[x]
    names = list(data.symbols)
    cols = [rep[s].reshape(-1) for s in names] + [np.eye(data.dim).reshape(-1)]
    a = np.array(cols).T
    coef, *_ = np.linalg.lstsq(a, target.reshape(-1), rcond=None)
    if np.linalg.norm(a @ coef - target.reshape(-1)) > 1e-10:
        return None
    out = SymElement()
    for s, c in zip(names + [None], coef):
        if abs(c) > 1e-14:
            out = out + (SymElement.one() if s is None else SymElement.gen(s)) * complex(c)
    return out


def audit_model(model: HopfModel) -> AuditReport:
    """Hermiticity, homomorphism, antipode and counit checks in the representation."""
    data = model.data
    v = model.value()
    g = SymElement.gen
    per: dict = {s: {} for s in data.symbols}
    d = data.dim
    one = Operator.identity(d)

    herm = 0.0
    coprod_mats = {s: tensor_matrix(data.coproducts[s], data) for s in data.symbols}
    for s in data.symbols:
        if s not in data.daggers:
            continue
        img = data.daggers[s]
        target = tensor_matrix(coproduct(img, data), data)
        defect = _norm(coprod_mats[s].dag() - target, v)
        per[s]["coproduct_hermiticity"] = defect
        herm = max(herm, defect)

    hom = 0.0
    syms = list(data.symbols)
    for i, x in enumerate(syms):
        for y in syms[i + 1:]:
            if (x, y) in data.relations:
                rel = data.relations[(x, y)]
            elif (y, x) in data.relations:
                rel = -data.relations[(y, x)]
            else:
                rel = inferred_relation(data, x, y)
                if rel is None:
                    continue
            dx, dy = coprod_mats[x], coprod_mats[y]
            lhs = dx @ dy - dy @ dx
            rhs = tensor_matrix(coproduct(rel, data), data)
            rx, ry = evaluate(g(x), data), evaluate(g(y), data)
            rep_defect = _norm(rx @ ry - ry @ rx - evaluate(rel, data), v)
            hom = max(hom, _norm(lhs - rhs, v), rep_defect)

    anti = 0.0
    cou = 0.0
    for s in syms:
        x = g(s)
        dx = data.coproducts[s]
        eps_x = counit(x, data)
        left = multiply_legs(apply_legs(dx, data, left=antipode))
        right = multiply_legs(apply_legs(dx, data, right=antipode))
        a = max(
            _norm(evaluate(left, data) - eps_x * one, v),
            _norm(evaluate(right, data) - eps_x * one, v),
        )
        per[s]["antipode_condition"] = a
        anti = max(anti, a)
        c = max(
            _norm(evaluate(counit_leg(dx, data, "left"), data) - evaluate(x, data), v),
            _norm(evaluate(counit_leg(dx, data, "right"), data) - evaluate(x, data), v),
        )
        per[s]["counit"] = c
        cou = max(cou, c)

    return AuditReport(herm, hom, anti, cou, per)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

MODEL_IDS = ("trivial-su2", "uq-su2", "general-su2", "kappa-galilei", "kappa-galilei-mapped")


def build_model(
    model_id: str,
    *,
    z: complex | None = None,
    h: float | None = None,
    inv_kappa: float | None = None,
    mode: str = "first-order",
    seed: int = 0,
    scale: float = 1.0,
) -> HopfModel:
    """Construct a shipped model by identifier (used by the CLI)."""
    if model_id == "trivial-su2":
        return build_trivial_su2(scale)
    if model_id == "uq-su2":
        return build_uq_su2(DEFAULT_PARAM_VALUE if z is None else z, mode, scale)
    if model_id == "general-su2":
        table = random_hermitian_ctable(np.random.default_rng(seed))
        return build_general_su2(table, DEFAULT_PARAM_VALUE if h is None else h, scale=scale)
    if model_id in ("kappa-galilei", "kappa-galilei-mapped"):
        ik = DEFAULT_PARAM_VALUE if inv_kappa is None else inv_kappa
        kappa = np.inf if ik == 0 else 1.0 / ik
        return build_kappa_galilei(kappa, mapped=model_id.endswith("mapped"), scale=scale)
    raise UnknownSymbol(f"unknown model id {model_id!r}")


def with_scale(model: HopfModel, scale: float) -> HopfModel:
    return replace(model, scale=scale)
