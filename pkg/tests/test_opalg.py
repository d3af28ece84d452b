import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfevo.errors import DimensionMismatch, NotHermitian, ParamMismatch
from hopfevo.opalg import (
    SX,
    SY,
    SZ,
    Jet,
    Operator,
    SuperOp,
    TensorElement,
    diamond,
    hermitian_basis,
    kron,
    left_right_superop,
    min_eigenvalue,
    stack,
    superop_of,
    unstack,
)

finite = st.floats(-10, 10, allow_nan=False)


@given(finite, finite, finite, finite)
def test_jet_product_drops_second_order(a, b, c, d):
    x = Jet(a, b, "z") * Jet(c, d, "z")
    assert x.order0 == pytest.approx(a * c)
    assert x.order1 == pytest.approx(a * d + b * c, abs=1e-9)


def test_jet_param_tags():
    assert (Jet(1, 2, "z") + 3).param == "z"
    with pytest.raises(ParamMismatch):
        Jet(1, 1, "z") + Jet(1, 1, "h")
    with pytest.raises(ValueError):
        Jet(1, 1, "none")


def test_jet_evaluation():
    assert Jet(2, 3, "h").at(0.1) == pytest.approx(2.3)
    assert Jet(2, 3, "h").conj() == Jet(2, 3, "h")
    assert Jet(1j, 1j, "h").conj() == Jet(-1j, -1j, "h")


def test_stack_is_column_major(rng):
    m = rng.normal(size=(3, 3))
    v = stack(m)
    assert np.allclose(v[:3], m[:, 0])
    assert np.allclose(unstack(v), m)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(0, 2**31))
def test_left_right_superop_matches_sandwich(d, seed):
    r = np.random.default_rng(seed)
    a, b, rho = (r.normal(size=(d, d)) + 1j * r.normal(size=(d, d)) for _ in range(3))
    got = unstack(left_right_superop(a, b) @ stack(rho))
    assert np.allclose(got, a @ rho @ b)


def test_superop_of_and_diamond_agree(rng):
    a, b, rho = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3))
    t = TensorElement(((a, b, Jet(0.5, 2.0, "z")),))
    sop = superop_of(t)
    assert isinstance(sop, SuperOp)
    direct = diamond(t, Operator(rho))
    applied = sop.apply(Operator(rho))
    assert np.allclose(direct.o0, applied.o0)
    assert np.allclose(direct.o1, applied.o1)
    assert np.allclose(direct.o0, 0.5 * a @ rho @ b)
    assert np.allclose(direct.o1, 2.0 * a @ rho @ b)


def test_tensor_dagger_gives_adjoint_on_hermitian_input(rng):
    a, b = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(2))
    h = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    h = h + h.conj().T
    t = TensorElement(((a, b, 1 + 2j),))
    lhs = diamond(t.dagger(), Operator(h)).o0
    rhs = diamond(t, Operator(h)).o0.conj().T
    assert np.allclose(lhs, rhs)


def test_tensor_matrix_is_kron(rng):
    a, b = rng.normal(size=(2, 2)), rng.normal(size=(2, 2))
    m = TensorElement(((a, b, 1.0),)).matrix()
    assert np.allclose(m.o0, np.kron(a, b))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        diamond(TensorElement(((np.eye(2), np.eye(2), 1),)), Operator(np.eye(3)))
    with pytest.raises(DimensionMismatch):
        TensorElement(((np.eye(2), np.eye(3), 1),))


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_hermitian_basis_orthonormal(d):
    f = hermitian_basis(d).matrices
    assert f.shape == (d * d, d, d)
    gram = np.einsum("aij,bji->ab", f, f)
    assert np.allclose(gram, np.eye(d * d))
    assert np.allclose(f, np.conj(np.swapaxes(f, 1, 2)))
    assert np.allclose(f[0], np.eye(d) / np.sqrt(d))
    assert np.allclose(np.einsum("aii->a", f[1:]), 0)


def test_qubit_basis_is_pauli():
    f = hermitian_basis(2).matrices
    assert np.allclose(f[1:], np.array([SX, SY, SZ]) / np.sqrt(2))


def test_kron_jets():
    a = Operator(np.eye(2), np.eye(2), "z")
    b = Operator(SX)
    k = kron(a, b)
    assert np.allclose(k.o0, np.kron(np.eye(2), SX))
    assert np.allclose(k.o1, np.kron(np.eye(2), SX))


def test_min_eigenvalue():
    assert min_eigenvalue(SZ) == pytest.approx(-1)
    with pytest.raises(NotHermitian):
        min_eigenvalue(np.array([[0, 1], [0, 0]]))
