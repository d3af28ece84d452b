import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import comm
from hopfevo.classify import (
    classify_formal,
    gksl_decompose,
    hamiltonian_projection,
    positivity_witness,
    preservation_tests,
    process_matrix,
)
from hopfevo.dynamics import PRESETS, build_generator, damping_generator, hamiltonian_for, lindblad_superop
from hopfevo.errors import NotOrthogonal
from hopfevo.models import build_uq_su2
from hopfevo.opalg import J_MINUS, J_PLUS, J_Z, commutator_superop, hermitian_basis, stack, unstack

X = J_PLUS + J_MINUS


def random_lindblad(rng, d, n_jumps):
    h = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = h + h.conj().T
    jumps = []
    for _ in range(n_jumps):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        jumps.append(a - np.trace(a) / d * np.eye(d))
    return h, jumps


def expected_kossakowski(jumps, d):
    f = hermitian_basis(d).matrices[1:]
    coef = np.array([[np.trace(fi @ a) for fi in f] for a in jumps])  # a = sum_i coef_i F_i
    return np.einsum("ki,kj->ij", coef, coef.conj())


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4), st.integers(1, 3), st.integers(0, 2**31))
def test_recovers_random_lindblad_data(d, n_jumps, seed):
    rng = np.random.default_rng(seed)
    h, jumps = random_lindblad(rng, d, n_jumps)
    rep = gksl_decompose(lindblad_superop(h, jumps))
    assert rep.verdict == "GKSL"
    assert np.allclose(rep.kossakowski, expected_kossakowski(jumps, d), atol=1e-9)
    assert np.allclose(rep.h_eff.o0, h - np.trace(h) / d * np.eye(d), atol=1e-9)
    assert rep.reconstruction_residual < 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4), st.integers(0, 2**31))
def test_commutators_are_von_neumann(d, seed):
    rng = np.random.default_rng(seed)
    h = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = h + h.conj().T
    rep = gksl_decompose(-1j * commutator_superop(h))
    assert rep.verdict == "VON_NEUMANN"
    assert rep.c_norm < 1e-10
    proj, res = hamiltonian_projection(-1j * commutator_superop(h))
    assert res < 1e-10
    assert np.allclose(proj.o0, h - np.trace(h) / d * np.eye(d))


def test_damping_kossakowski():
    rep = gksl_decompose(damping_generator(1.0))
    assert np.allclose(rep.kossakowski_eigenvalues, [0, 0, 1], atol=1e-12)
    want = np.array([[0.5, -0.5j, 0], [0.5j, 0.5, 0], [0, 0, 0]])
    assert np.allclose(rep.kossakowski, want)


def test_negative_rate_is_non_gksl():
    rng = np.random.default_rng(1)
    h, jumps = random_lindblad(rng, 2, 1)
    m = lindblad_superop(h, jumps, [-0.3])
    assert gksl_decompose(m).verdict == "NON_GKSL"


def test_preservation_failures():
    d = 2
    not_tp = np.kron(np.eye(d), np.diag([1.0, 2.0]))  # rho -> A rho
    assert gksl_decompose(not_tp).verdict == "NOT_TRACE_PRESERVING"
    # rho -> i (rho - Tr(rho) I / d): trace preserving, not hermiticity preserving
    m = 1j * (np.eye(d * d) - np.outer(stack(np.eye(d)), stack(np.eye(d))) / d)
    p = preservation_tests(m)
    assert p.trace_preserving and not p.hermiticity_preserving
    assert gksl_decompose(m).verdict == "NOT_HERMITICITY_PRESERVING"


def test_process_matrix_reconstructs_superoperator(rng):
    d = 3
    m = rng.normal(size=(d * d, d * d)) + 1j * rng.normal(size=(d * d, d * d))
    chi = process_matrix(m)
    f = hermitian_basis(d).matrices
    rebuilt = sum(chi[a, b] * np.kron(f[b].T, f[a]) for a in range(d * d) for b in range(d * d))
    assert np.allclose(rebuilt, m)


def test_damping_witness():
    w = positivity_witness(damping_generator(1.0), [0, 1], [1, 0])
    assert w.value == pytest.approx(1.0)
    assert w.verdict == "not_violated_here"
    search = positivity_witness(damping_generator(1.0), seed=0, samples=2000)
    assert search.value >= -1e-10


def test_witness_requires_orthogonal_pair():
    with pytest.raises(NotOrthogonal):
        positivity_witness(damping_generator(), [1, 0], [1, 1])


def half_preset_witness_oracle(phi, psi, z):
    # -i/2 (adL(rho) - adL(rho)^dag) with adL(rho) = [X, rho] - z [Jz, rho] X
    rho = np.outer(phi, phi.conj())
    a = comm(X, rho) - z * comm(J_Z, rho) @ X
    out = -0.5j * (a - a.conj().T)
    return (psi.conj() @ out @ psi).real


@pytest.mark.parametrize("z", [0.05, 0.1, 0.2])
def test_half_preset_witness_values(z):
    m = build_uq_su2(z, "first-order")
    g = build_generator(hamiltonian_for(m, "hx"), m, PRESETS["half"])
    yp = np.array([1, 1j]) / np.sqrt(2)
    ym = np.array([1, -1j]) / np.sqrt(2)
    for phi, psi in ((yp, ym), (ym, yp)):
        w = positivity_witness(g, phi, psi, param_value=z)
        assert w.value == pytest.approx(half_preset_witness_oracle(phi, psi, z), abs=1e-12)
    assert positivity_witness(g, ym, yp, param_value=z).value == pytest.approx(-z / 2, abs=1e-12)
    assert positivity_witness(g, yp, ym, param_value=z).value == pytest.approx(z / 2, abs=1e-12)
    search = positivity_witness(g, seed=1, samples=5000, param_value=z)
    assert search.verdict == "violated"
    assert search.value <= -z / 2 + 1e-3


def test_witness_search_is_deterministic():
    m = build_uq_su2(0.1, "first-order")
    g = build_generator(hamiltonian_for(m, "hx"), m, PRESETS["half"])
    a = positivity_witness(g, seed=7, samples=500, param_value=0.1)
    b = positivity_witness(g, seed=7, samples=500, param_value=0.1)
    assert a.value == b.value and np.array_equal(a.phi, b.phi)


def test_half_preset_breaks_trace_preservation_at_first_order():
    m = build_uq_su2(0.1, "first-order")
    g = build_generator(hamiltonian_for(m, "hx"), m, PRESETS["half"])
    parts = classify_formal(g)
    assert parts["order0"].verdict == "VON_NEUMANN"
    assert parts["order1"].verdict == "NOT_TRACE_PRESERVING"
    # d/dt Tr(rho) = z <sigma_y>
    yp = np.array([[0.5, -0.5j], [0.5j, 0.5]])
    assert np.trace(unstack(g.at(0.1) @ stack(yp))).real == pytest.approx(0.1)


def test_quarter_preset_is_von_neumann():
    m = build_uq_su2(0.1, "first-order")
    rep = gksl_decompose(build_generator(hamiltonian_for(m, "hx"), m, PRESETS["quarter"]), 0.1)
    assert rep.verdict == "VON_NEUMANN"
