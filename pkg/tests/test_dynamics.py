import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from conftest import comm, random_state
from hopfevo.dynamics import (
    PRESETS,
    PrescriptionCoeffs,
    ad_left,
    ad_right,
    build_generator,
    damping_generator,
    evolve,
    hamiltonian_for,
    naive_generator,
    named_state,
    parse_complex,
    redfield_generator,
    validate_state,
)
from hopfevo.errors import InconsistentInput, InvalidState, NotHermitian, StepTooLarge
from hopfevo.models import build_kappa_galilei, build_trivial_su2, build_uq_su2, kappa_operators
from hopfevo.opalg import J_MINUS, J_PLUS, J_Z, SX, SY, stack, unstack

X = J_PLUS + J_MINUS


def apply(m, rho):
    return unstack(m @ stack(rho))


def test_parse_coefficients():
    c = PrescriptionCoeffs.parse("0.5, -0.5+0.1i, 2i, 0")
    assert c.as_tuple() == (0.5, -0.5 + 0.1j, 2j, 0)
    assert parse_complex("1e-3i") == 1e-3j
    with pytest.raises(InconsistentInput):
        PrescriptionCoeffs.parse("1,2,3")
    with pytest.raises(InconsistentInput):
        PrescriptionCoeffs.parse("1,2,x,4")


def test_real8_roundtrip():
    c = PrescriptionCoeffs(1 + 2j, 3, -4j, 0.5)
    assert PrescriptionCoeffs.from_real8(c.real8()) == c


def test_trivial_actions_are_commutators(rng):
    m = build_trivial_su2()
    h = hamiltonian_for(m, "hx")
    rho = random_state(rng)
    assert np.allclose(ad_left(h, rho, m).o0, comm(X, rho))
    assert np.allclose(ad_right(h, rho, m).o0, -comm(X, rho))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.floats(-0.5, 0.5))
def test_uq_first_order_actions(seed, z):
    m = build_uq_su2(z, "first-order")
    h = hamiltonian_for(m, "hx")
    rho = random_state(np.random.default_rng(seed))
    left = ad_left(h, rho, m).at(m.value())
    right = ad_right(h, rho, m).at(m.value())
    assert np.allclose(left, comm(X, rho) - z * comm(J_Z, rho) @ X, atol=1e-12)
    assert np.allclose(right, -comm(X, rho) + z * J_Z @ comm(X, rho), atol=1e-12)


def test_kappa_first_order_actions(rng):
    kappa = 10.0
    m = build_kappa_galilei(kappa)
    h = hamiltonian_for(m)
    p0, (p,) = kappa_operators(m)
    rho = random_state(rng, m.dim)
    eps = 1 / kappa
    assert np.allclose(ad_left(h, rho, m).at(eps), comm(p0, rho) + eps * (rho @ p @ p - p @ rho @ p))
    assert np.allclose(ad_right(h, rho, m).at(eps), -comm(p0, rho) + eps * (p @ p @ rho - p @ rho @ p))


def test_quarter_kappa_generator_has_deformed_hamiltonian():
    kappa = 10.0
    m = build_kappa_galilei(kappa)
    p0, (p,) = kappa_operators(m)
    g = build_generator(hamiltonian_for(m), m, PRESETS["quarter"]).at(m.value())
    heff = p0 - p @ p / (2 * kappa)
    eye = np.eye(m.dim)
    assert np.allclose(g, -1j * (np.kron(eye, heff) - np.kron(heff.T, eye)))


def test_mapped_kappa_half_generator():
    kappa = 10.0
    m = build_kappa_galilei(kappa, mapped=True)
    p0, (p,) = kappa_operators(m)
    g = build_generator(hamiltonian_for(m), m, PRESETS["half"]).at(m.value())
    rho = random_state(np.random.default_rng(3), m.dim)
    want = -1j * comm(p0, rho) + (p @ rho @ p - 0.5 * (p @ p @ rho + rho @ p @ p)) / kappa
    assert np.allclose(apply(g, rho), want)


def test_identity_shift_cancels_for_quarter_but_not_naive():
    m = build_uq_su2(0.1, "first-order")
    h = hamiltonian_for(m, "hx")
    a = build_generator(h, m, PRESETS["quarter"]).at(0.1)
    b = build_generator(h.plus_identity(5.0), m, PRESETS["quarter"]).at(0.1)
    assert np.allclose(a, b, atol=1e-12)
    n = naive_generator(h.plus_identity(5.0), m).at(0.1)
    assert np.abs(np.eye(2).reshape(-1) @ n).max() > 1.0


def test_non_hermitian_hamiltonian_rejected():
    m = build_trivial_su2()
    from hopfevo.dynamics import HamiltonianSpec
    from hopfevo.symalg import SymElement

    with pytest.raises(NotHermitian):
        HamiltonianSpec(SymElement.gen("J+")).check(m)


def test_named_states():
    for name, axis, sign in (("z+", J_Z * 2, 1), ("z-", J_Z * 2, -1), ("x+", SX, 1), ("y+", SY, 1), ("y-", SY, -1)):
        rho = named_state(name)
        assert np.trace(rho @ axis).real == pytest.approx(sign)
    assert np.allclose(named_state("mixed"), np.eye(2) / 2)
    with pytest.raises(InvalidState):
        named_state("w+")


def test_validate_state():
    with pytest.raises(InvalidState):
        validate_state(np.diag([1.5, -0.5]))
    with pytest.raises(InvalidState):
        validate_state(np.eye(2))
    with pytest.raises(InvalidState):
        validate_state(np.array([[0.5, 1], [0, 0.5]]))


def test_unitary_evolution_matches_matrix_exponential():
    m = build_trivial_su2()
    g = build_generator(hamiltonian_for(m, "hx"), m, PRESETS["quarter"])
    rho0 = named_state("z+")
    traj = evolve(g, rho0, 2.0, 1e-3)
    u = expm(-1j * X * 2.0)  # each of the four terms contributes [H, rho]/4
    assert np.allclose(traj.states[-1], u @ rho0 @ u.conj().T, atol=1e-10)
    assert np.abs(traj.purity - 1).max() < 1e-10


def test_damping_closed_form():
    traj = evolve(damping_generator(1.0), named_state("z-"), 3.0, 1e-3)
    t = traj.times
    assert np.allclose(traj.states[:, 1, 1].real, np.exp(-t), atol=1e-10)
    assert traj.purity[-1] > traj.purity[len(t) // 3]
    assert traj.min_eig.min() > -1e-12


def test_redfield_demo_is_trace_preserving_first_order():
    g = redfield_generator(0.1).at(None)
    assert np.abs(np.eye(2).reshape(-1) @ g).max() < 1e-12


def test_step_bound_and_bad_inputs():
    g = damping_generator(100.0)
    with pytest.raises(StepTooLarge):
        evolve(g, named_state("z+"), 1.0, 0.1)
    with pytest.raises(InconsistentInput):
        evolve(g, named_state("z+"), 1.0, -1e-3)


def test_trajectory_csv_layout(tmp_path):
    traj = evolve(damping_generator(), named_state("x+"), 0.01, 1e-3)
    path = tmp_path / "t.csv"
    traj.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0].split(",")[:5] == ["t", "trace_defect", "herm_defect", "min_eig", "purity"]
    assert lines[0].split(",")[5:7] == ["rho_00_re", "rho_00_im"]
    assert len(lines) == len(traj.times) + 1
    assert float(lines[1].split(",")[7]) == pytest.approx(0.5)
