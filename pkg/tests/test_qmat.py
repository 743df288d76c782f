import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from switchengine import qmat
from switchengine.errors import DimensionMismatch, DomainError, NotHermitian


def test_tensor_and_ket():
    assert np.allclose(qmat.tensor(qmat.ket(0), qmat.ket(1)), qmat.ket(0, 1))
    with pytest.raises(DomainError):
        qmat.tensor(np.array([np.nan]), qmat.I2)


def test_hamiltonian_ground_state_is_zero():
    assert qmat.expectation(qmat.hamiltonian(), qmat.P00) == -1.0
    assert qmat.expectation(qmat.hamiltonian(), qmat.P11) == 1.0


def test_hermitize_rejects_asymmetry():
    with pytest.raises(NotHermitian):
        qmat.hermitize(qmat.P01)
    with pytest.raises(DimensionMismatch):
        qmat.hermitize(np.zeros((2, 3)))
    m = qmat.hermitize(qmat.X + 1e-12 * qmat.P01)
    assert np.allclose(m, m.conj().T)


def test_partial_trace_product():
    a = np.diag([0.3, 0.7]).astype(complex)
    b = 0.5 * (qmat.I2 + 0.4 * qmat.X)
    rho = qmat.tensor(a, b)
    assert np.allclose(qmat.partial_trace(rho, "first"), a)
    assert np.allclose(qmat.partial_trace(rho, 1), b)
    with pytest.raises(DomainError):
        qmat.partial_trace(rho, "middle")
    with pytest.raises(DimensionMismatch):
        qmat.partial_trace(np.eye(3), 0)


def test_bell_state_marginal_is_maximally_mixed():
    v = (qmat.ket(0, 0) + qmat.ket(1, 1)) / np.sqrt(2)
    rho = np.outer(v, v.conj())
    assert np.allclose(qmat.partial_trace(rho, "first"), qmat.I2 / 2)
    assert qmat.von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-12)
    assert qmat.von_neumann_entropy(qmat.I2 / 2) == pytest.approx(np.log(2))


def test_eig_hermitian_descending():
    w, v = qmat.eig_hermitian(np.diag([0.2, 0.8]))
    assert w[0] > w[1]
    assert np.allclose(v @ np.diag(w) @ v.conj().T, np.diag([0.2, 0.8]))


def test_binary_entropy():
    assert qmat.binary_entropy(0.0) == 0.0
    assert qmat.binary_entropy(1.0) == 0.0
    assert qmat.binary_entropy(0.5) == pytest.approx(np.log(2))
    with pytest.raises(DomainError):
        qmat.binary_entropy(1.1)


def test_expectation_checks():
    with pytest.raises(DimensionMismatch):
        qmat.expectation(qmat.Z, np.eye(4))
    with pytest.raises(NotHermitian):
        qmat.expectation(qmat.Y, qmat.P01)


def test_is_density_and_distance():
    assert qmat.is_density(qmat.I2 / 2)
    assert not qmat.is_density(qmat.Z)
    assert qmat.trace_distance(qmat.P00, qmat.P11) == pytest.approx(1.0)
    assert qmat.purity(qmat.P00) == pytest.approx(1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_entropy_matches_binary_entropy_of_spectrum(p, x, y):
    r = np.array([x, y, 2 * p - 1])
    r = r / max(1.0, np.linalg.norm(r))
    rho = 0.5 * (qmat.I2 + r[0] * qmat.X + r[1] * qmat.Y + r[2] * qmat.Z)
    lam = 0.5 * (1 + np.linalg.norm(r))
    assert qmat.von_neumann_entropy(rho) == pytest.approx(qmat.binary_entropy(lam), abs=1e-9)
