"""Free *-algebra on generator symbols with group-like exponential atoms.

Words are tuples of atoms.  An atom is either a generator symbol (``"J+"``,
``"P0"``, ...) or an :class:`ExpAtom` ``exp(a*K)`` on a primitive generator
``K``.  No commutation rules are applied to words; identities are checked
after evaluation in a representation.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Union

import numpy as np
from scipy.linalg import expm

from .errors import DimensionMismatch, NonPrimitiveExponential, UnknownSymbol
from .opalg import ONE, Jet, JetLike, Operator, TensorElement, kron, merge_params

_EXPONENT_ZERO = 1e-14


@dataclass(frozen=True)
class ExpAtom:
    """``exp(exponent * symbol)``; ``q**(c*Jz)`` is ``ExpAtom(c*log(q), "Jz")``."""

    exponent: Jet
    symbol: str

    def __post_init__(self):
        object.__setattr__(self, "exponent", Jet.coerce(self.exponent))

    def __repr__(self):
        return f"exp({self.exponent!r}*{self.symbol})"


Atom = Union[str, ExpAtom]
Word = tuple


def make_word(atoms: Iterable[Atom]) -> Word:
    """Canonical word: adjacent exponentials of the same generator merge, trivial ones vanish."""
    out: list = []
    for atom in atoms:
        if isinstance(atom, ExpAtom):
            if out and isinstance(out[-1], ExpAtom) and out[-1].symbol == atom.symbol:
                atom = ExpAtom(out.pop().exponent + atom.exponent, atom.symbol)
            if atom.exponent.is_zero(_EXPONENT_ZERO):
                continue
        elif not isinstance(atom, str):
            raise TypeError(f"bad atom {atom!r}")
        out.append(atom)
    return tuple(out)


def _prune(terms: dict) -> dict:
    return {k: v for k, v in terms.items() if not v.is_zero()}


class SymElement:
    """Finite linear combination of words with Jet coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, JetLike] | None = None):
        acc: dict = {}
        for w, c in (terms or {}).items():
            w = make_word(w)
            acc[w] = acc.get(w, Jet()) + Jet.coerce(c)
        object.__setattr__(self, "_terms", MappingProxyType(_prune(acc)))
        _ = self.param  # validates tag consistency

    def __setattr__(self, name, value):
        raise AttributeError("SymElement is immutable")

    @property
    def terms(self) -> Mapping[Word, Jet]:
        return self._terms

    @property
    def param(self) -> str:
        p = "none"
        for w, c in self._terms.items():
            p = merge_params(p, c.param)
            for a in w:
                if isinstance(a, ExpAtom):
                    p = merge_params(p, a.exponent.param)
        return p

    @classmethod
    def one(cls) -> "SymElement":
        return cls({(): ONE})

    @classmethod
    def gen(cls, symbol: str) -> "SymElement":
        return cls({(symbol,): ONE})

    @classmethod
    def exp(cls, exponent: JetLike, symbol: str) -> "SymElement":
        return cls({(ExpAtom(exponent, symbol),): ONE})

    @classmethod
    def word(cls, *atoms: Atom, coeff: JetLike = 1.0) -> "SymElement":
        return cls({tuple(atoms): coeff})

    def __add__(self, other):
        other = _as_element(other)
        acc = dict(self._terms)
        for w, c in other.terms.items():
            acc[w] = acc.get(w, Jet()) + c
        return SymElement(acc)

    __radd__ = __add__

    def __neg__(self):
        return SymElement({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_as_element(other))

    def __rsub__(self, other):
        return _as_element(other) - self

    def __mul__(self, other):
        if isinstance(other, SymElement):
            return sym_mul(self, other)
        c = Jet.coerce(other)
        return SymElement({w: k * c for w, k in self._terms.items()})

    def __rmul__(self, other):
        c = Jet.coerce(other)
        return SymElement({w: c * k for w, k in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, SymElement):
            return NotImplemented
        return dict(self._terms) == dict(other._terms)

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def symbols(self) -> set:
        out = set()
        for w in self._terms:
            for a in w:
                out.add(a.symbol if isinstance(a, ExpAtom) else a)
        return out

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for w, c in self._terms.items():
            name = " ".join(repr(a) if isinstance(a, ExpAtom) else a for a in w) or "1"
            parts.append(f"{c!r}*[{name}]")
        return " + ".join(parts)


def _as_element(x) -> SymElement:
    if isinstance(x, SymElement):
        return x
    return SymElement({(): Jet.coerce(x)})


def sym_mul(x: SymElement, y: SymElement) -> SymElement:
    acc: dict = {}
    for w1, c1 in x.terms.items():
        for w2, c2 in y.terms.items():
            w = make_word(w1 + w2)
            acc[w] = acc.get(w, Jet()) + c1 * c2
    return SymElement(acc)


class SymTensor:
    """Finite sum of ``coeff * word (x) word``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple, JetLike] | None = None):
        acc: dict = {}
        for (w1, w2), c in (terms or {}).items():
            key = (make_word(w1), make_word(w2))
            acc[key] = acc.get(key, Jet()) + Jet.coerce(c)
        object.__setattr__(self, "_terms", MappingProxyType(_prune(acc)))

    def __setattr__(self, name, value):
        raise AttributeError("SymTensor is immutable")

    @property
    def terms(self) -> Mapping[tuple, Jet]:
        return self._terms

    @classmethod
    def simple(cls, left: SymElement, right: SymElement) -> "SymTensor":
        acc: dict = {}
        for w1, c1 in left.terms.items():
            for w2, c2 in right.terms.items():
                acc[(w1, w2)] = acc.get((w1, w2), Jet()) + c1 * c2
        return cls(acc)

    @classmethod
    def primitive(cls, symbol: str) -> "SymTensor":
        return cls({((symbol,), ()): ONE, ((), (symbol,)): ONE})

    def __add__(self, other: "SymTensor") -> "SymTensor":
        acc = dict(self._terms)
        for k, c in other.terms.items():
            acc[k] = acc.get(k, Jet()) + c
        return SymTensor(acc)

    def __neg__(self):
        return SymTensor({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SymTensor):
            acc: dict = {}
            for (a1, b1), c1 in self._terms.items():
                for (a2, b2), c2 in other.terms.items():
                    key = (make_word(a1 + a2), make_word(b1 + b2))
                    acc[key] = acc.get(key, Jet()) + c1 * c2
            return SymTensor(acc)
        c = Jet.coerce(other)
        return SymTensor({k: v * c for k, v in self._terms.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        return dict(self._terms) == dict(other._terms)

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return f"SymTensor({len(self._terms)} terms)"


# ---------------------------------------------------------------------------
# Hopf data and the structure maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HopfData:
    """Per-generator coproducts, antipodes, counits, daggers and a representation.

    ``relations`` optionally maps an ordered generator pair ``(X, Y)`` to the
    algebra element equal to ``[X, Y]``; audits use it for the coproduct
    homomorphism check.
    """

    coproducts: Mapping[str, SymTensor]
    antipodes: Mapping[str, SymElement]
    counits: Mapping[str, Jet]
    daggers: Mapping[str, SymElement]
    representation: Mapping[str, Operator]
    relations: Mapping[tuple, SymElement] = field(default_factory=dict)

    def __post_init__(self):
        rep = {k: v if isinstance(v, Operator) else Operator(v) for k, v in self.representation.items()}
        dims = {m.dim for m in rep.values()}
        if len(dims) > 1:
            raise DimensionMismatch("representation matrices must share one dimension")
        object.__setattr__(self, "representation", MappingProxyType(rep))
        object.__setattr__(self, "counits", MappingProxyType({k: Jet.coerce(v) for k, v in self.counits.items()}))
        for name in ("coproducts", "antipodes", "daggers", "relations"):
            object.__setattr__(self, name, MappingProxyType(dict(getattr(self, name))))
        for s, d in self.daggers.items():
            back = dagger(d, self, _check=False)
            if back != SymElement.gen(s):
                raise ValueError(f"dagger data is not an involution on {s!r}")

    @property
    def symbols(self) -> tuple:
        return tuple(self.coproducts)

    @property
    def dim(self) -> int:
        return next(iter(self.representation.values())).dim

    def is_primitive(self, symbol: str) -> bool:
        if symbol not in self.coproducts:
            raise UnknownSymbol(symbol)
        return self.coproducts[symbol] == SymTensor.primitive(symbol)


def _require(symbol: str, table: Mapping, what: str):
    try:
        return table[symbol]
    except KeyError:
        raise UnknownSymbol(f"no {what} for generator {symbol!r}") from None


def _check_primitive(atom: ExpAtom, data: HopfData):
    if not data.is_primitive(atom.symbol):
        raise NonPrimitiveExponential(f"exp atom on non-primitive generator {atom.symbol!r}")


def coproduct(x: SymElement, data: HopfData) -> SymTensor:
    """Homomorphic extension of the generator coproducts."""
    out = SymTensor()
    for w, c in x.terms.items():
        t = SymTensor({((), ()): c})
        for atom in w:
            if isinstance(atom, ExpAtom):
                _check_primitive(atom, data)
                a = SymElement.word(atom)
                t = t * SymTensor.simple(a, a)
            else:
                t = t * _require(atom, data.coproducts, "coproduct")
        out = out + t
    return out


def antipode(x: SymElement, data: HopfData) -> SymElement:
    """Anti-homomorphic extension: S(ab) = S(b) S(a), S(exp(aK)) = exp(-aK)."""
    out = SymElement()
    for w, c in x.terms.items():
        t = SymElement({(): c})
        for atom in reversed(w):
            if isinstance(atom, ExpAtom):
                _check_primitive(atom, data)
                t = t * SymElement.exp(-atom.exponent, atom.symbol)
            else:
                t = t * _require(atom, data.antipodes, "antipode")
        out = out + t
    return out


def counit(x: SymElement, data: HopfData) -> Jet:
    total = Jet()
    for w, c in x.terms.items():
        t = c
        for atom in w:
            if isinstance(atom, ExpAtom):
                continue
            t = t * _require(atom, data.counits, "counit")
        total = total + t
    return total


def dagger(x: SymElement, data: HopfData, _check: bool = True) -> SymElement:
    """Antilinear anti-homomorphism fixed by the per-generator dagger table."""
    out = SymElement()
    for w, c in x.terms.items():
        t = SymElement({(): c.conj()})
        for atom in reversed(w):
            if isinstance(atom, ExpAtom):
                img = _require(atom.symbol, data.daggers, "dagger")
                if img != SymElement.gen(atom.symbol):
                    raise ValueError(f"exp atom needs a self-adjoint generator, got {atom.symbol!r}")
                t = t * SymElement.exp(atom.exponent.conj(), atom.symbol)
            else:
                t = t * _require(atom, data.daggers, "dagger")
        out = out + t
    return out


def _eval_atom(atom: Atom, data: HopfData, cache: dict) -> Operator:
    if atom in cache:
        return cache[atom]
    if isinstance(atom, ExpAtom):
        gen = _require(atom.symbol, data.representation, "representation")
        if np.any(gen.o1):
            raise ValueError("exponentials need a parameter-free representation matrix")
        a = atom.exponent
        e0 = expm(a.order0 * gen.o0)
        val = Operator(e0, a.order1 * gen.o0 @ e0, a.param)
    else:
        val = _require(atom, data.representation, "representation")
    cache[atom] = val
    return val


def evaluate_word(w: Word, data: HopfData, cache: dict | None = None) -> Operator:
    cache = {} if cache is None else cache
    out = Operator.identity(data.dim)
    for atom in w:
        out = out @ _eval_atom(atom, data, cache)
    return out


def evaluate(x: SymElement, data: HopfData) -> Operator:
    """Linear extension of word evaluation in the representation."""
    cache: dict = {}
    out = Operator.zeros(data.dim)
    for w, c in x.terms.items():
        out = out + c * evaluate_word(w, data, cache)
    return out


def evaluate_tensor(t: SymTensor, data: HopfData) -> TensorElement:
    cache: dict = {}
    return TensorElement(
        tuple(
            (evaluate_word(w1, data, cache), evaluate_word(w2, data, cache), c)
            for (w1, w2), c in t.terms.items()
        )
    )


def tensor_matrix(t: SymTensor, data: HopfData) -> Operator:
    """``t`` as an operator on the two-copy space (Kronecker order left (x) right)."""
    d = data.dim
    cache: dict = {}
    out = Operator.zeros(d * d)
    for (w1, w2), c in t.terms.items():
        out = out + c * kron(evaluate_word(w1, data, cache), evaluate_word(w2, data, cache))
    return out


# ---------------------------------------------------------------------------
# Compositions used by the Hopf axioms and adjoint actions
# ---------------------------------------------------------------------------


def apply_legs(t: SymTensor, data: HopfData, left=None, right=None) -> SymTensor:
    """Apply maps (e.g. the antipode) to the left and/or right legs of ``t``."""
    out = SymTensor()
    for (w1, w2), c in t.terms.items():
        a = SymElement.word(*w1)
        b = SymElement.word(*w2)
        if left is not None:
            a = left(a, data)
        if right is not None:
            b = right(b, data)
        out = out + SymTensor.simple(a, b) * c
    return out


def multiply_legs(t: SymTensor) -> SymElement:
    """The multiplication map m(a (x) b) = ab."""
    out = SymElement()
    for (w1, w2), c in t.terms.items():
        out = out + SymElement({w1 + w2: c})
    return out


def counit_leg(t: SymTensor, data: HopfData, side: str = "left") -> SymElement:
    """``(eps (x) id)`` (side='left') or ``(id (x) eps)`` (side='right') applied to ``t``."""
    out = SymElement()
    for (w1, w2), c in t.terms.items():
        if side == "left":
            out = out + SymElement.word(*w2) * (c * counit(SymElement.word(*w1), data))
        else:
            out = out + SymElement.word(*w1) * (c * counit(SymElement.word(*w2), data))
    return out
