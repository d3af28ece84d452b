"""Admissible prescription coefficients and Lindblad feasibility."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classify import gksl_decompose, hamiltonian_remainder
from .dynamics import HamiltonianSpec, PrescriptionCoeffs, action_superops, combine
from .models import (
    CTable,
    HopfModel,
    build_general_su2,
    random_hermitian_ctable,
)
from .opalg import SuperOp
from .symalg import SymElement

CUTOFF = 1e-8
SOLUTION_TOL = 1e-10
IMAGE_TOL = 1e-10
N_COMPONENTS = 8
COMPONENT_NAMES = ("alpha0", "alpha1", "beta0", "beta1", "gamma0", "gamma1", "delta0", "delta1")
IMAG_INDICES = (1, 3, 5, 7)


def _ri(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m).reshape(-1)
    return np.concatenate([m.real, m.imag])


@dataclass(frozen=True)
class SolutionSet:
    kind: str  # unique | affine | infeasible
    basepoint: np.ndarray
    nullspace_basis: tuple
    system: tuple  # (matrix, rhs)
    rank: int
    residual: float
    singular_values: tuple = ()

    @property
    def nullity(self) -> int:
        return len(self.nullspace_basis)

    def coeffs(self) -> PrescriptionCoeffs:
        return PrescriptionCoeffs.from_real8(self.basepoint)

    def point(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.nullity == 0:
            return self.basepoint.copy()
        return self.basepoint + np.array(self.nullspace_basis).T @ t

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "basepoint": {k: float(v) for k, v in zip(COMPONENT_NAMES, self.basepoint)},
            "coeffs": self.coeffs().as_dict(),
            "nullspace": [[float(v) for v in n] for n in self.nullspace_basis],
            "rank": self.rank,
            "residual": self.residual,
            "singular_values": [float(s) for s in self.singular_values],
        }


def _solve(a: np.ndarray, b: np.ndarray) -> SolutionSet:
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    rank = int(np.sum(s > CUTOFF * s[0])) if s.size and s[0] > 0 else 0
    x = vt[:rank].T @ ((u[:, :rank].T @ b) / s[:rank]) if rank else np.zeros(a.shape[1])
    residual = float(np.linalg.norm(a @ x - b))
    null = tuple(vt[rank:].copy())
    if residual > SOLUTION_TOL:
        kind = "infeasible"
    elif rank == a.shape[1]:
        kind = "unique"
    else:
        kind = "affine"
    return SolutionSet(kind, x, null, (a, b), rank, residual, tuple(s))


def _first_order(model: HopfModel, h: HamiltonianSpec) -> tuple:
    """Expanded model, with a named Hamiltonian swapped for its expanded form."""
    if model.mode != "exact":
        return model, h
    expanded = model.first_order()
    for name, expr in model.hamiltonians.items():
        if expr == h.expr and name in expanded.hamiltonians:
            return expanded, HamiltonianSpec(expanded.hamiltonians[name], h.scale)
    return expanded, h


def unit_generators(model: HopfModel, h: HamiltonianSpec) -> list:
    """Generators at the 8 unit coefficient directions (exact: the map is linear)."""
    parts = action_superops(h, model)
    out = []
    for k in range(N_COMPONENTS):
        e = np.zeros(N_COMPONENTS)
        e[k] = 1.0
        out.append(combine(parts, PrescriptionCoeffs.from_real8(e)))
    return out


def _vn_blocks(model: HopfModel, h: HamiltonianSpec) -> tuple:
    """Order-0 von Neumann rows and identity-cancellation rows."""
    units = unit_generators(model, h)
    h0 = h.operator(model).o0
    d = model.dim
    eye = np.eye(d)
    target = -1j * (np.kron(eye, h0) - np.kron(h0.T, eye))
    a_rows = np.array([_ri(u.o0) for u in units]).T
    a_rhs = _ri(target)

    ident = HamiltonianSpec(SymElement.one(), 1.0)
    id_units = unit_generators(model, ident)
    b_rows = np.array([_ri(u.o0) for u in id_units]).T
    b_rhs = np.zeros(b_rows.shape[0])
    return units, (a_rows, a_rhs), (b_rows, b_rhs)


def _pin_rows(indices, values=None) -> tuple:
    rows = np.zeros((len(indices), N_COMPONENTS))
    for r, k in enumerate(indices):
        rows[r, k] = 1.0
    rhs = np.zeros(len(indices)) if values is None else np.asarray(values, dtype=float)
    return rows, rhs


def _normalized(rows: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(rows)
    return rows / n if n > 0 else rows


def remainder_rows(units: list) -> np.ndarray:
    """Columns: order-1 remainder (after Hamiltonian projection) of each unit generator."""
    return np.array([_ri(hamiltonian_remainder(u.o1)) for u in units]).T


def solve_prescription(
    model: HopfModel,
    h: HamiltonianSpec,
    mode: str = "von_neumann",
    real: bool = False,
) -> SolutionSet:
    """Coefficients for which the generator is -i[H0, .] at order 0 and a pure commutator at order 1."""
    if mode != "von_neumann":
        raise ValueError(f"unsupported mode {mode!r}")
    model, h = _first_order(model, h)
    units, (a, ar), (b, br) = _vn_blocks(model, h)
    c = _normalized(remainder_rows(units))
    blocks = [a, b, c]
    rhs = [ar, br, np.zeros(c.shape[0])]
    if real:
        p, pr = _pin_rows(IMAG_INDICES)
        blocks.append(p)
        rhs.append(pr)
    return _solve(np.vstack(blocks), np.concatenate(rhs))


def generator_at(model: HopfModel, h: HamiltonianSpec, x) -> SuperOp:
    """Generator at an 8-component real coefficient vector."""
    model, h = _first_order(model, h)
    return combine(action_superops(h, model), PrescriptionCoeffs.from_real8(x))


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    certificate: dict
    image_norm_bound: float
    constraint_set: SolutionSet | None = None
    checked_points: int = 0

    def as_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "image_norm_bound": self.image_norm_bound,
            "checked_points": self.checked_points,
            "certificate": self.certificate,
        }


def _tp_hp_rows(units: list) -> np.ndarray:
    """Linear trace- and hermiticity-preservation conditions on the order-1 part."""
    d = units[0].dim
    cols = []
    for u in units:
        m = u.o1
        tp = np.eye(d).reshape(-1, order="F") @ m
        hp = []
        for j in range(d):
            for k in range(d):
                e = np.zeros((d, d), dtype=complex)
                e[j, k] = 1
                le = (m @ e.reshape(-1, order="F")).reshape(d, d, order="F")
                let = (m @ e.T.reshape(-1, order="F")).reshape(d, d, order="F")
                hp.append((le.conj().T - let).reshape(-1))
        cols.append(np.concatenate([_ri(tp), _ri(np.concatenate(hp))]))
    return np.array(cols).T


def lindblad_feasibility(
    model: HopfModel,
    h: HamiltonianSpec,
    pinned: PrescriptionCoeffs | dict | None = None,
    seed: int = 0,
    samples: int = 100,
) -> Feasibility:
    """Search the order-1 dissipative image for a nonzero PSD Kossakowski matrix.

    ``pinned`` fixes coefficients: a full :class:`PrescriptionCoeffs`, or a
    mapping from component names (``alpha0`` ... ``delta1``) to values.
    """
    model, h = _first_order(model, h)
    units, (a, ar), (b, br) = _vn_blocks(model, h)
    tphp = _normalized(_tp_hp_rows(units))
    blocks, rhs = [a, b, tphp], [ar, br, np.zeros(tphp.shape[0])]
    if pinned is not None:
        if isinstance(pinned, PrescriptionCoeffs):
            idx, vals = list(range(N_COMPONENTS)), list(pinned.real8())
        else:
            idx = [COMPONENT_NAMES.index(k) for k in pinned]
            vals = [float(v) for v in pinned.values()]
        p, pr = _pin_rows(idx, vals)
        blocks.append(p)
        rhs.append(pr)
    base = _solve(np.vstack(blocks), np.concatenate(rhs))
    if base.kind == "infeasible":
        return Feasibility(False, {"reason": "order-0 and preservation constraints are inconsistent", "residual": base.residual}, 0.0, base)

    remainder_of = remainder_rows(units)  # real-linear in the coefficients

    def image(x):
        return remainder_of @ x

    bound = float(np.linalg.norm(image(base.basepoint)) + sum(np.linalg.norm(image(k)) for k in base.nullspace_basis))
    if bound < IMAGE_TOL:
        return Feasibility(
            False,
            {"reason": "dissipative image is {0}", "image_norm_bound": bound},
            bound,
            base,
        )

    rng = np.random.default_rng(seed)
    points = [base.basepoint]
    for k in base.nullspace_basis:
        points += [base.basepoint + k, base.basepoint - k]
    for _ in range(samples if base.nullity else 0):
        points.append(base.point(rng.normal(size=base.nullity)))

    best = None
    for n_checked, x in enumerate(points, start=1):
        report = gksl_decompose(generator_at(model, h, x).o1)
        if report.verdict == "GKSL":
            cert = {
                "coefficients": PrescriptionCoeffs.from_real8(x).as_dict(),
                "kossakowski_eigenvalues_order1": [float(v) for v in report.kossakowski_eigenvalues],
                "kossakowski_norm_order1": report.c_norm,
            }
            return Feasibility(True, cert, bound, base, n_checked)
        if best is None or report.kossakowski_min_eig is not None and report.kossakowski_min_eig > best[0]:
            best = (report.kossakowski_min_eig, x)
    cert = {"reason": "no sampled point gives a nonzero PSD Kossakowski matrix", "best_min_eig": best[0] if best else None}
    return Feasibility(False, cert, bound, base, len(points))


def random_table_scenario(n_tables: int = 20, seed: int = 0, h_value: float = 0.1) -> dict:
    """Solve for J_x- and J_y-type Hamiltonians over seeded random Hermitian tables."""
    rng = np.random.default_rng(seed)
    rows = []
    ok = True
    for k in range(n_tables):
        table = random_hermitian_ctable(rng)
        model = build_general_su2(table, h_value)
        sols = {}
        for name in ("hx", "hy"):
            h = HamiltonianSpec(model.hamiltonian(name), 1.0)
            sol = solve_prescription(model, h, real=True)
            rem = float(np.linalg.norm(hamiltonian_remainder(generator_at(model, h, sol.basepoint).o1)))
            sols[name] = (sol, rem)
        same = np.abs(sols["hx"][0].basepoint - sols["hy"][0].basepoint).max()
        good = all(s.kind == "unique" and r < 1e-10 for s, r in sols.values()) and same < 1e-10
        ok = ok and good
        rows.append(
            {
                "table": k,
                "kinds": {n: s.kind for n, (s, _) in sols.items()},
                "basepoint_hx": [float(v) for v in sols["hx"][0].basepoint],
                "max_basepoint_difference": float(same),
                "order1_remainder": {n: r for n, (_, r) in sols.items()},
                "pass": bool(good),
            }
        )
    zero = build_general_su2(CTable(), h_value)
    zsol = solve_prescription(zero, HamiltonianSpec(zero.hamiltonian("hx"), 1.0))
    zero_ok = zsol.kind == "affine" and zsol.nullity == 4
    return {
        "tables": rows,
        "zero_table": {"kind": zsol.kind, "nullity": zsol.nullity, "pass": bool(zero_ok)},
        "pass": bool(ok and zero_ok),
    }
