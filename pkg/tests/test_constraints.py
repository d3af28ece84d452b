import numpy as np
import pytest

from hopfevo.classify import gksl_decompose
from hopfevo.constraints import (
    generator_at,
    lindblad_feasibility,
    random_table_scenario,
    solve_prescription,
)
from hopfevo.dynamics import PRESETS, PrescriptionCoeffs, hamiltonian_for, lindblad_superop
from hopfevo.models import build_general_su2, build_kappa_galilei, build_trivial_su2, build_uq_su2, random_hermitian_ctable

QUARTER = np.array([0.25, 0, -0.25, 0, -0.25, 0, 0.25, 0])


def test_trivial_model_solution_set():
    m = build_trivial_su2()
    sol = solve_prescription(m, hamiltonian_for(m, "hx"))
    assert sol.kind == "affine"
    assert (sol.rank, sol.nullity) == (4, 4)
    for t in np.random.default_rng(0).normal(size=(5, 4)):
        g = generator_at(m, hamiltonian_for(m, "hx"), sol.point(t)).at(None)
        assert gksl_decompose(g).verdict == "VON_NEUMANN"


def test_uq_real_coefficients_unique():
    m = build_uq_su2(0.1, "first-order")
    sol = solve_prescription(m, hamiltonian_for(m, "hx"), real=True)
    assert sol.kind == "unique"
    assert np.allclose(sol.basepoint, QUARTER, atol=1e-10)


def test_uq_complex_coefficients_leave_one_direction():
    m = build_uq_su2(0.1, "first-order")
    h = hamiltonian_for(m, "hx")
    sol = solve_prescription(m, h)
    assert sol.kind == "affine" and sol.nullity == 1
    assert np.allclose(sol.basepoint, QUARTER, atol=1e-10)
    direction = np.array([0, 1, 0, 1, 0, -1, 0, -1]) / 2
    assert abs(abs(np.dot(sol.nullspace_basis[0], direction)) - 1) < 1e-10
    # moving along it keeps a pure commutator generator
    g = generator_at(m, h, sol.point([0.7])).at(0.1)
    assert gksl_decompose(g).verdict == "VON_NEUMANN"


def test_exact_model_is_expanded_first():
    ex = build_uq_su2(0.1, "exact")
    sol = solve_prescription(ex, hamiltonian_for(ex, "hx"), real=True)
    assert np.allclose(sol.basepoint, QUARTER, atol=1e-10)


@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("ham", ["hx", "hy", "hz"])
def test_general_family_quarter(seed, ham):
    m = build_general_su2(random_hermitian_ctable(np.random.default_rng(seed)), 0.1)
    h = hamiltonian_for(m, ham)
    sol = solve_prescription(m, h, real=True)
    assert sol.kind == "unique"
    assert np.allclose(sol.basepoint, QUARTER, atol=1e-10)
    rep = gksl_decompose(generator_at(m, h, sol.basepoint), 0.1)
    assert rep.verdict == "VON_NEUMANN"


def test_kappa_quarter_solves():
    m = build_kappa_galilei(10.0)
    sol = solve_prescription(m, hamiltonian_for(m))
    assert sol.kind in ("unique", "affine")
    assert sol.residual < 1e-10
    g = generator_at(m, hamiltonian_for(m), QUARTER)
    assert gksl_decompose(g, 0.1).verdict == "VON_NEUMANN"


def test_lindblad_infeasible_for_uq():
    m = build_uq_su2(0.1, "first-order")
    f = lindblad_feasibility(m, hamiltonian_for(m, "hx"))
    assert not f.feasible
    assert f.image_norm_bound < 1e-10


def test_lindblad_pinned_coefficients():
    m = build_uq_su2(0.1, "first-order")
    f = lindblad_feasibility(m, hamiltonian_for(m, "hx"), pinned=PRESETS["half"])
    assert not f.feasible
    f = lindblad_feasibility(m, hamiltonian_for(m, "hx"), pinned={"alpha1": 0.0, "beta1": 0.0})
    assert not f.feasible


def test_lindblad_feasible_when_the_image_contains_a_dissipator(monkeypatch):
    # sanity check of the search itself: a mapped kappa model has a genuine GKSL order-1 part
    m = build_kappa_galilei(10.0, mapped=True)
    f = lindblad_feasibility(m, hamiltonian_for(m), pinned=PRESETS["half"])
    assert f.feasible
    assert min(f.certificate["kossakowski_eigenvalues_order1"]) > -1e-10


def test_random_table_scenario_small():
    out = random_table_scenario(n_tables=3, seed=5)
    assert out["zero_table"]["pass"]
    for row in out["tables"]:
        assert max(row["order1_remainder"].values()) < 1e-10
        assert row["max_basepoint_difference"] < 1e-10


def test_solution_as_dict():
    m = build_trivial_su2()
    d = solve_prescription(m, hamiltonian_for(m, "hx")).as_dict()
    assert d["kind"] == "affine" and len(d["nullspace"]) == 4
    assert set(d["basepoint"]) == {"alpha0", "alpha1", "beta0", "beta1", "gamma0", "gamma1", "delta0", "delta1"}


@pytest.mark.parametrize("table_kind", ["solved", "tabulated"])
def test_solution_independent_of_antipode_table(table_kind):
    t = random_hermitian_ctable(np.random.default_rng(11))
    m = build_general_su2(t, 0.1, antipode_table=table_kind)
    h = hamiltonian_for(m, "hz")
    sol = solve_prescription(m, h, real=True)
    assert sol.kind == "unique"
    assert np.allclose(sol.basepoint, QUARTER, atol=1e-10)
