"""Adjoint actions, prescription generators and density-matrix evolution."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, InconsistentInput, InvalidState, NotHermitian, StepTooLarge
from .models import HopfModel, build_uq_su2
from .opalg import (
    HERMITICITY_TOL,
    Jet,
    Operator,
    SuperOp,
    TensorElement,
    as_operator,
    commutator_superop,
    diamond,
    left_right_superop,
    superop_of,
)
from .symalg import SymElement, antipode, apply_legs, coproduct, evaluate, evaluate_tensor

STEP_BOUND = 0.5
STATE_TOL = 1e-8


@dataclass(frozen=True)
class HamiltonianSpec:
    expr: SymElement
    scale: float = 1.0

    def operator(self, model: HopfModel) -> Operator:
        return evaluate(self.expr, model.data) * self.scale

    def plus_identity(self, lam: float) -> "HamiltonianSpec":
        """Same Hamiltonian shifted by ``lam`` times the identity operator."""
        return HamiltonianSpec(self.expr + SymElement.one() * (lam / self.scale), self.scale)

    def check(self, model: HopfModel) -> None:
        if not model.physical:
            return
        defect = self.operator(model).hermiticity_defect(model.value())
        if defect > HERMITICITY_TOL:
            raise NotHermitian(f"Hamiltonian is not Hermitian (defect {defect:.3e})")


def hamiltonian_for(model: HopfModel, name: str | None = None, scale: float | None = None) -> HamiltonianSpec:
    spec = HamiltonianSpec(model.hamiltonian(name), model.scale if scale is None else scale)
    spec.check(model)
    return spec


@dataclass(frozen=True)
class PrescriptionCoeffs:
    alpha: complex = 0j
    beta: complex = 0j
    gamma: complex = 0j
    delta: complex = 0j

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def as_tuple(self) -> tuple:
        return (self.alpha, self.beta, self.gamma, self.delta)

    def real8(self) -> np.ndarray:
        """(alpha0, alpha1, beta0, beta1, gamma0, gamma1, delta0, delta1)."""
        return np.array([p for c in self.as_tuple() for p in (c.real, c.imag)])

    @classmethod
    def from_real8(cls, x: Sequence[float]) -> "PrescriptionCoeffs":
        x = np.asarray(x, dtype=float)
        if x.shape != (8,):
            raise InconsistentInput("expected 8 real coefficient components")
        return cls(*(complex(x[2 * k], x[2 * k + 1]) for k in range(4)))

    @classmethod
    def preset(cls, name: str) -> "PrescriptionCoeffs":
        if name not in PRESETS:
            raise InconsistentInput(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        return PRESETS[name]

    @classmethod
    def parse(cls, text: str) -> "PrescriptionCoeffs":
        """Parse ``"a,b,c,d"`` with complex entries such as ``0.5-0.1i``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4 or not all(parts):
            raise InconsistentInput(f"expected four comma-separated coefficients, got {text!r}")
        return cls(*(parse_complex(p) for p in parts))

    def as_dict(self) -> dict:
        return {k: [v.real, v.imag] for k, v in zip(("alpha", "beta", "gamma", "delta"), self.as_tuple())}


def parse_complex(text: str) -> complex:
    """Accept ``x``, ``yi``, ``x+yi`` (``j`` also works)."""
    s = text.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        raise InconsistentInput(f"not a complex number: {text!r}") from None


PRESETS: Mapping[str, PrescriptionCoeffs] = {
    "half": PrescriptionCoeffs(0.5, -0.5, 0, 0),
    "quarter": PrescriptionCoeffs(0.25, -0.25, -0.25, 0.25),
}


# ---------------------------------------------------------------------------
# Adjoint actions
# ---------------------------------------------------------------------------


def left_tensor(h: HamiltonianSpec, model: HopfModel) -> TensorElement:
    """(id (x) S) Delta H, evaluated leg-wise."""
    t = apply_legs(coproduct(h.expr, model.data), model.data, right=antipode)
    return evaluate_tensor(t, model.data).scaled(h.scale)


def right_tensor(h: HamiltonianSpec, model: HopfModel) -> TensorElement:
    """(S (x) id) Delta H, evaluated leg-wise."""
    t = apply_legs(coproduct(h.expr, model.data), model.data, left=antipode)
    return evaluate_tensor(t, model.data).scaled(h.scale)


def _check_dim(rho: Operator, model: HopfModel) -> Operator:
    rho = as_operator(rho)
    if rho.dim != model.dim:
        raise DimensionMismatch(f"state of dimension {rho.dim} for a model of dimension {model.dim}")
    return rho


def ad_left(h: HamiltonianSpec, rho, model: HopfModel) -> Operator:
    return diamond(left_tensor(h, model), _check_dim(rho, model))


def ad_right(h: HamiltonianSpec, rho, model: HopfModel) -> Operator:
    return diamond(right_tensor(h, model), _check_dim(rho, model))


def action_superops(h: HamiltonianSpec, model: HopfModel) -> tuple:
    """Superoperators of ad^L, (ad^L)^dag, ad^R, (ad^R)^dag (linear extensions)."""
    tl, tr = left_tensor(h, model), right_tensor(h, model)
    return (superop_of(tl), superop_of(tl.dagger()), superop_of(tr), superop_of(tr.dagger()))


def combine(parts: Sequence[SuperOp], c: PrescriptionCoeffs) -> SuperOp:
    out = SuperOp.zeros(parts[0].dim, parts[0].param)
    for p, k in zip(parts, c.as_tuple()):
        if k != 0:
            out = out + p * k
    return out * (-1j)


def build_generator(h: HamiltonianSpec, model: HopfModel, c: PrescriptionCoeffs) -> SuperOp:
    """L(rho) = -i[alpha adL + beta adL^dag + gamma adR + delta adR^dag](rho)."""
    return combine(action_superops(h, model), c)


def naive_generator(h: HamiltonianSpec, model: HopfModel) -> SuperOp:
    """Un-symmetrized rho -> -i adL(rho); leaks trace when H has an identity part."""
    return superop_of(left_tensor(h, model)) * (-1j)


# ---------------------------------------------------------------------------
# Demo generators
# ---------------------------------------------------------------------------

SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|


def lindblad_superop(h: np.ndarray, jumps: Sequence[np.ndarray], rates: Sequence[float] | None = None) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    d = h.shape[0]
    m = -1j * commutator_superop(h)
    rates = [1.0] * len(jumps) if rates is None else rates
    eye = np.eye(d)
    for a, g in zip(jumps, rates):
        a = np.asarray(a, dtype=complex)
        ad = a.conj().T @ a
        m = m + g * (left_right_superop(a, a.conj().T) - 0.5 * (left_right_superop(ad, eye) + left_right_superop(eye, ad)))
    return m


def damping_generator(rate: float = 1.0) -> SuperOp:
    """Amplitude damping towards |0> with jump sigma_- = |0><1|."""
    return SuperOp(lindblad_superop(np.zeros((2, 2)), [SIGMA_MINUS], [rate]))


def redfield_generator(z: float = 0.1, scale: float = 1.0) -> SuperOp:
    """rho -> -i[H,rho] - (z/2)([rho,Jz]H + H[Jz,rho]) with the qubit H = scale*(J+ + J-)."""
    model = build_uq_su2(z, "first-order", scale)
    h = HamiltonianSpec(model.hamiltonian("hx-plain"), scale).operator(model).o0
    jz = model.data.representation["Jz"].o0
    eye = np.eye(2)
    rho_jz = left_right_superop(eye, jz) - left_right_superop(jz, eye)  # rho -> [rho, Jz]
    m = -1j * commutator_superop(h)
    m = m - (z / 2) * (left_right_superop(eye, h) @ rho_jz - left_right_superop(h, eye) @ rho_jz)
    return SuperOp(m)


DEMO_GENERATORS = {
    "damping-demo": damping_generator,
    "redfield-demo": redfield_generator,
}


# ---------------------------------------------------------------------------
# Evolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    trace_defect: np.ndarray
    herm_defect: np.ndarray
    min_eig: np.ndarray
    purity: np.ndarray
    meta: Mapping = field(default_factory=dict)

    HEADER = ("t", "trace_defect", "herm_defect", "min_eig", "purity")

    def columns(self) -> list:
        d = self.states.shape[1]
        cols = list(self.HEADER)
        for i in range(d):
            for j in range(d):
                cols += [f"rho_{i}{j}_re", f"rho_{i}{j}_im"]
        return cols

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(self.columns())
        for k, t in enumerate(self.times):
            row = [t, self.trace_defect[k], self.herm_defect[k], self.min_eig[k], self.purity[k]]
            for v in self.states[k].reshape(-1):
                row += [v.real, v.imag]
            w.writerow([repr(float(x)) for x in row])

    def to_csv(self, path=None) -> str | None:
        if path is None:
            buf = io.StringIO()
            self.write_csv(buf)
            return buf.getvalue()
        with open(path, "w", newline="") as fh:
            self.write_csv(fh)
        return None

    def summary(self) -> dict:
        return {
            "steps": int(len(self.times) - 1),
            "t_final": float(self.times[-1]),
            "final": {
                "trace_defect": float(self.trace_defect[-1]),
                "herm_defect": float(self.herm_defect[-1]),
                "min_eig": float(self.min_eig[-1]),
                "purity": float(self.purity[-1]),
            },
            "min_over_run": {"min_eig": float(self.min_eig.min()), "purity": float(self.purity.min())},
            "max_over_run": {
                "purity": float(self.purity.max()),
                "trace_defect": float(self.trace_defect.max()),
                "herm_defect": float(self.herm_defect.max()),
            },
        }


def validate_state(rho) -> np.ndarray:
    m = np.asarray(rho.o0 if isinstance(rho, Operator) else rho, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidState("state must be a square matrix")
    if np.abs(m - m.conj().T).max() > STATE_TOL:
        raise InvalidState("state is not Hermitian")
    if abs(np.trace(m) - 1) > STATE_TOL:
        raise InvalidState("state does not have unit trace")
    if np.linalg.eigvalsh((m + m.conj().T) / 2)[0] < -STATE_TOL:
        raise InvalidState("state is not positive semidefinite")
    return m


def _monitors(states: np.ndarray) -> tuple:
    tr = np.einsum("kii->k", states)
    dag = np.conj(np.swapaxes(states, 1, 2))
    herm = np.linalg.norm((states - dag).reshape(len(states), -1), axis=1)
    min_eig = np.linalg.eigvalsh((states + dag) / 2)[:, 0]
    purity = np.einsum("kij,kji->k", states, states).real
    return np.abs(tr - 1), herm, min_eig, purity


def evolve(L, rho0, t_final: float, dt: float, param_value: float | None = None) -> Trajectory:
    """Fixed-step RK4 for d rho/dt = L(rho)."""
    m = L.at(param_value) if isinstance(L, SuperOp) else np.asarray(L, dtype=complex)
    rho = validate_state(rho0)
    d = rho.shape[0]
    if m.shape != (d * d, d * d):
        raise DimensionMismatch(f"generator of size {m.shape} for a state of dimension {d}")
    if not (dt > 0) or not math.isfinite(dt):
        raise InconsistentInput("dt must be positive")
    if t_final < 0 or not math.isfinite(t_final):
        raise InconsistentInput("t_final must be nonnegative")
    if np.linalg.norm(m, 2) * dt > STEP_BOUND:
        raise StepTooLarge(f"||L|| * dt = {np.linalg.norm(m, 2) * dt:.3g} exceeds {STEP_BOUND}")

    n = max(int(math.ceil(t_final / dt - 1e-9)), 0)
    h = t_final / n if n else 0.0
    # for a linear ODE one classical RK4 step is exactly this Taylor polynomial in h*L
    hm = h * m
    step = np.eye(d * d) + hm @ (np.eye(d * d) + hm @ (np.eye(d * d) / 2 + hm @ (np.eye(d * d) / 6 + hm / 24)))
    vecs = np.empty((n + 1, d * d), dtype=complex)
    vecs[0] = rho.reshape(-1, order="F")
    for k in range(n):
        vecs[k + 1] = step @ vecs[k]
    states = np.transpose(vecs.reshape(n + 1, d, d), (0, 2, 1))  # undo column stacking
    times = np.linspace(0.0, t_final, n + 1)
    tr, herm, me, pur = _monitors(states)
    return Trajectory(times, states, tr, herm, me, pur, {"dt": h, "param_value": param_value})


def named_state(name: str, dim: int = 2) -> np.ndarray:
    """Named qubit states: z+, z-, x+, x-, y+, y-, mixed."""
    if name == "mixed":
        return np.eye(dim, dtype=complex) / dim
    vecs = {
        "z+": [1, 0],
        "z-": [0, 1],
        "x+": [1, 1],
        "x-": [1, -1],
        "y+": [-1j, 1],
        "y-": [1j, 1],
    }
    if name not in vecs:
        raise InvalidState(f"unknown state {name!r}")
    if dim != 2:
        raise InvalidState(f"named state {name!r} is a qubit state")
    v = np.array(vecs[name], dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())
