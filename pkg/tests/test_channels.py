import numpy as np
import pytest

from switchengine import channels, qmat
from switchengine.errors import DomainError
from switchengine.states import Family, InitialStateSpec, initial_state, xi_max


def test_channel_resets_state():
    rho = 0.5 * (qmat.I2 + 0.3 * qmat.X - 0.2 * qmat.Y + 0.5 * qmat.Z)
    assert np.allclose(channels.apply_channel(0.3, rho), np.diag([0.3, 0.7]))
    assert channels.kraus_completeness(channels.measurement_kraus(0.3)) < 1e-12
    with pytest.raises(DomainError):
        channels.measurement_kraus(1.5)


def test_switch_kraus_complete():
    assert channels.kraus_completeness(channels.switch_kraus(0.2, 0.9)) < 1e-12


def test_switch_order_convention():
    # control |0> runs a then a', leaving the a' output
    rho = qmat.tensor(np.diag([0.6, 0.4]), qmat.P00)
    out = channels.apply_switch(0.2, 0.9, rho)
    assert np.allclose(qmat.partial_trace(out, "first"), np.diag([0.9, 0.1]))


def test_decomposition_matches_kraus_entangled():
    be = 0.7
    spec = InitialStateSpec(Family.ENTANGLED, theta=1.1, phi=0.3, xi=xi_max(be),
                            varphi=0.5, beta_eps=be)
    rho = initial_state(spec)
    dec = channels.switch_decomposition(0.3, 0.8, rho)
    assert np.allclose(dec.output(), channels.apply_switch(0.3, 0.8, rho), atol=1e-13)
    assert np.allclose(dec.lambda_x, dec.lambda_x.conj().T)
    assert np.allclose(dec.lambda_y, dec.lambda_y.conj().T)


def test_projection_matches_xi_operator():
    spec = InitialStateSpec(Family.SEPARABLE, zeta0=0.9, zeta1=0.2, theta=1.0)
    rho = initial_state(spec)
    out = channels.apply_switch(0.25, 0.6, rho)
    dec = channels.switch_decomposition(0.25, 0.6, rho)
    for pp in (0.0, 0.8, 2.5):
        xi = channels.xi_operator(dec, pp)
        plus, minus = channels.project_control(out, pp)
        inc = channels.measured_state(dec.a_bar)
        assert np.allclose(plus, 0.5 * (inc + xi), atol=1e-13)
        assert np.allclose(minus, 0.5 * (inc - xi), atol=1e-13)


def test_control_basis_orthonormal():
    p, m = channels.control_basis(0.7)
    assert abs(np.vdot(p, m)) < 1e-15
    assert np.vdot(p, p).real == pytest.approx(1.0)
