"""Generator classification: preservation tests, Hamiltonian projection, GKSL form, witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotOrthogonal
from .opalg import Operator, SuperOp, hermitian_basis

PRESERVATION_TOL = 1e-10
VON_NEUMANN_TOL = 1e-10
PSD_TOL = 1e-10
WITNESS_TOL = 1e-10
ORTHO_TOL = 1e-10
DEFAULT_SAMPLES = 10_000

VERDICTS = ("VON_NEUMANN", "GKSL", "NON_GKSL", "NOT_HERMITICITY_PRESERVING", "NOT_TRACE_PRESERVING")


def _matrix(L, param_value: float | None = None) -> np.ndarray:
    if isinstance(L, SuperOp):
        return L.at(param_value)
    return np.asarray(L, dtype=complex)


def _dim(m: np.ndarray) -> int:
    return int(round(np.sqrt(m.shape[0])))


def _apply(m: np.ndarray, x: np.ndarray) -> np.ndarray:
    d = x.shape[0]
    return (m @ x.reshape(-1, order="F")).reshape(d, d, order="F")


@dataclass(frozen=True)
class Preservation:
    trace_preserving: bool
    trace_defect: float
    hermiticity_preserving: bool
    hermiticity_defect: float


def trace_defect(L, param_value: float | None = None) -> float:
    """max_k |Tr L(E_k)| over matrix units."""
    m = _matrix(L, param_value)
    d = _dim(m)
    return float(np.abs(np.eye(d).reshape(-1, order="F") @ m).max())


def hermiticity_defect(L, param_value: float | None = None) -> float:
    """max over matrix units E of ||L(E)^dag - L(E^dag)||."""
    m = _matrix(L, param_value)
    d = _dim(m)
    worst = 0.0
    for j in range(d):
        for k in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[j, k] = 1
            worst = max(worst, float(np.linalg.norm(_apply(m, e).conj().T - _apply(m, e.T))))
    return worst


def preservation_tests(L, param_value: float | None = None, tol: float = PRESERVATION_TOL) -> Preservation:
    tdef = trace_defect(L, param_value)
    hdef = hermiticity_defect(L, param_value)
    return Preservation(tdef < tol, tdef, hdef < tol, hdef)


def commutator_basis(d: int) -> tuple:
    """Traceless Hermitian basis F_1.. and the superoperators rho -> -i[F_k, rho]."""
    f = hermitian_basis(d).matrices[1:]
    eye = np.eye(d)
    s = np.array([-1j * (np.kron(eye, fk) - np.kron(fk.T, eye)) for fk in f])
    return f, s


def hamiltonian_projection(L, param_value: float | None = None) -> tuple:
    """Closest rho -> -i[h, rho] with h Hermitian traceless; returns (h, residual)."""
    m = _matrix(L, param_value)
    d = _dim(m)
    f, s = commutator_basis(d)
    a = s.reshape(len(s), -1).T
    a_real = np.vstack([a.real, a.imag])
    b_real = np.concatenate([m.reshape(-1).real, m.reshape(-1).imag])
    x, *_ = np.linalg.lstsq(a_real, b_real, rcond=None)
    h = np.tensordot(x, f, axes=1)
    residual = float(np.linalg.norm(a_real @ x - b_real))
    return Operator(h), residual


def hamiltonian_remainder(L, param_value: float | None = None) -> np.ndarray:
    """The part of L orthogonal to all Hermitian commutator superoperators."""
    m = _matrix(L, param_value)
    h, _ = hamiltonian_projection(m)
    d = _dim(m)
    eye = np.eye(d)
    return m + 1j * (np.kron(eye, h.o0) - np.kron(h.o0.T, eye))


def process_matrix(L, param_value: float | None = None) -> np.ndarray:
    """chi with L(rho) = sum_ab chi_ab F_a rho F_b over the full Hermitian basis."""
    m = _matrix(L, param_value)
    d = _dim(m)
    f = hermitian_basis(d).matrices
    t = m.reshape(d, d, d, d)  # t[p, i, q, j] = M[d*p + i, d*q + j]
    return np.einsum("bqp,aij,piqj->ab", f.conj(), f.conj(), t)


def dissipator_superop(c: np.ndarray, f: np.ndarray) -> np.ndarray:
    """rho -> sum_ij c_ij (F_i rho F_j - 1/2 {F_j F_i, rho})."""
    d = f.shape[1]
    eye = np.eye(d)
    out = np.zeros((d * d, d * d), dtype=complex)
    for i in range(len(f)):
        for j in range(len(f)):
            if c[i, j] == 0:
                continue
            fj_fi = f[j] @ f[i]
            out += c[i, j] * (np.kron(f[j].T, f[i]) - 0.5 * (np.kron(eye, fj_fi) + np.kron(fj_fi.T, eye)))
    return out


@dataclass(frozen=True)
class GeneratorReport:
    trace_preserving: tuple
    hermiticity_preserving: tuple
    h_eff: Operator
    hamiltonian_residual: float
    kossakowski: np.ndarray | None
    kossakowski_min_eig: float | None
    kossakowski_eigenvalues: np.ndarray | None
    reconstruction_residual: float | None
    verdict: str
    param_value: float | None = None
    order_parts: dict = field(default_factory=dict)

    @property
    def c_norm(self) -> float | None:
        return None if self.kossakowski is None else float(np.linalg.norm(self.kossakowski))

    def as_dict(self) -> dict:
        def cm(a):
            return None if a is None else [[[float(v.real), float(v.imag)] for v in row] for row in np.atleast_2d(a)]

        return {
            "verdict": self.verdict,
            "param_value": self.param_value,
            "trace_preserving": {"pass": bool(self.trace_preserving[0]), "defect": float(self.trace_preserving[1])},
            "hermiticity_preserving": {
                "pass": bool(self.hermiticity_preserving[0]),
                "defect": float(self.hermiticity_preserving[1]),
            },
            "h_eff": cm(self.h_eff.o0),
            "hamiltonian_residual": self.hamiltonian_residual,
            "kossakowski": cm(self.kossakowski),
            "kossakowski_norm": self.c_norm,
            "kossakowski_eigenvalues": None
            if self.kossakowski_eigenvalues is None
            else [float(v) for v in self.kossakowski_eigenvalues],
            "kossakowski_min_eig": self.kossakowski_min_eig,
            "reconstruction_residual": self.reconstruction_residual,
            "order_parts": {k: v.as_dict() for k, v in self.order_parts.items()},
        }


def gksl_decompose(L, param_value: float | None = None) -> GeneratorReport:
    """Split L into -i[h, .] plus a dissipator over the traceless Hermitian basis."""
    m = _matrix(L, param_value)
    d = _dim(m)
    pres = preservation_tests(m)
    h_proj, ham_res = hamiltonian_projection(m)
    tp = (pres.trace_preserving, pres.trace_defect)
    hp = (pres.hermiticity_preserving, pres.hermiticity_defect)
    if not pres.trace_preserving or not pres.hermiticity_preserving:
        verdict = "NOT_TRACE_PRESERVING" if not pres.trace_preserving else "NOT_HERMITICITY_PRESERVING"
        return GeneratorReport(tp, hp, h_proj, ham_res, None, None, None, None, verdict, param_value)

    basis = hermitian_basis(d).matrices
    chi = process_matrix(m)
    chi = (chi + chi.conj().T) / 2
    c = chi[1:, 1:]
    f = basis[1:]
    g = chi[0, 0] / (2 * d) * np.eye(d) + np.tensordot(chi[1:, 0], f, axes=1) / np.sqrt(d)
    h = 0.5j * (g - g.conj().T)
    h = h - np.trace(h) / d * np.eye(d)
    h = (h + h.conj().T) / 2

    eye = np.eye(d)
    rebuilt = -1j * (np.kron(eye, h) - np.kron(h.T, eye)) + dissipator_superop(c, f)
    recon = float(np.linalg.norm(rebuilt - m))
    eig = np.linalg.eigvalsh(c)
    c_norm = float(np.linalg.norm(c))
    if c_norm < VON_NEUMANN_TOL:
        verdict = "VON_NEUMANN"
    elif eig[0] >= -PSD_TOL * (1 + c_norm):
        verdict = "GKSL"
    else:
        verdict = "NON_GKSL"
    return GeneratorReport(tp, hp, Operator(h), ham_res, c, float(eig[0]), eig, recon, verdict, param_value)


def classify_formal(L: SuperOp) -> dict:
    """Classify the order-0 and order-1 parts of a first-order generator separately."""
    return {"order0": gksl_decompose(L.o0), "order1": gksl_decompose(L.o1)}


@dataclass(frozen=True)
class PositivityWitness:
    phi: np.ndarray
    psi: np.ndarray
    value: float
    imag: float
    verdict: str
    samples: int = 0

    def as_dict(self) -> dict:
        def vec(v):
            return [[float(x.real), float(x.imag)] for x in v]

        return {
            "phi": vec(self.phi),
            "psi": vec(self.psi),
            "value": self.value,
            "imag": self.imag,
            "verdict": self.verdict,
            "samples": self.samples,
        }


def _witness_values(m: np.ndarray, phis: np.ndarray, psis: np.ndarray) -> np.ndarray:
    """Batched <psi| L(|phi><phi|) |psi> for rows of phis/psis."""
    rho_vecs = np.einsum("nj,ni->nji", phis.conj(), phis).reshape(len(phis), -1)  # column stacking
    out = rho_vecs @ m.T
    ket_vecs = np.einsum("nj,ni->nji", psis, psis.conj()).reshape(len(psis), -1)
    return np.einsum("nk,nk->n", ket_vecs, out)


def haar_pairs(d: int, n: int, rng: np.random.Generator) -> tuple:
    """n random orthonormal pairs from Haar-distributed unitaries."""
    g = rng.normal(size=(n, d, 2)) + 1j * rng.normal(size=(n, d, 2))
    q, r = np.linalg.qr(g)
    phase = np.diagonal(r, axis1=1, axis2=2)
    q = q * (phase / np.abs(phase))[:, None, :]
    return q[:, :, 0], q[:, :, 1]


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    return v / np.linalg.norm(v)


def positivity_witness(
    L,
    phi="search",
    psi="search",
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    param_value: float | None = None,
) -> PositivityWitness:
    """w = <psi|L(|phi><phi|)|psi> for orthogonal unit vectors; 'search' minimizes over random pairs."""
    m = _matrix(L, param_value)
    d = _dim(m)
    fixed_phi = not (isinstance(phi, str) and phi == "search")
    fixed_psi = not (isinstance(psi, str) and psi == "search")

    if fixed_phi and fixed_psi:
        a, b = _unit(phi), _unit(psi)
        if abs(np.vdot(b, a)) > ORTHO_TOL:
            raise NotOrthogonal(f"|<psi|phi>| = {abs(np.vdot(b, a)):.3e}")
        phis, psis, n = a[None], b[None], 0
    else:
        rng = np.random.default_rng(seed)
        phis, psis = haar_pairs(d, samples, rng)
        n = samples
        if fixed_phi or fixed_psi:
            anchor = _unit(phi if fixed_phi else psi)
            other = psis if fixed_phi else phis
            other = other - np.outer(other @ anchor.conj(), anchor)
            norms = np.linalg.norm(other, axis=1)
            keep = norms > 1e-8
            other = other[keep] / norms[keep, None]
            anchors = np.repeat(anchor[None], len(other), axis=0)
            phis, psis = (anchors, other) if fixed_phi else (other, anchors)

    w = _witness_values(m, phis, psis)
    k = int(np.argmin(w.real))
    value = float(w[k].real)
    verdict = "violated" if value < -WITNESS_TOL else "not_violated_here"
    return PositivityWitness(phis[k], psis[k], value, float(w[k].imag), verdict, n)
