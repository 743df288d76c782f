import numpy as np
import pytest

from switchengine import qmat
from switchengine.errors import DomainError, NotPositive
from switchengine.states import (DEFAULT_BETA_EPS, Family, InitialStateSpec, check_local_thermality,
                                 gibbs_state, initial_state, omega_mix, xi_admissible, xi_max)


def test_gibbs_populations():
    t = np.tanh(1.0)
    assert np.allclose(gibbs_state(1.0), np.diag([(1 + t) / 2, (1 - t) / 2]))
    assert np.allclose(gibbs_state(0.0), np.eye(2) / 2)


def test_omega_mix_is_density():
    w = omega_mix(0.3, 1.0, 2.0)
    assert qmat.is_density(w)
    with pytest.raises(DomainError):
        omega_mix(1.2, 0, 0)


@pytest.mark.parametrize("family", list(Family))
def test_initial_state_locally_thermal(family):
    spec = InitialStateSpec(family, theta=1.2, phi=0.4, zeta=0.7, zeta0=0.8, zeta1=0.3,
                            xi=0.5 * xi_admissible(DEFAULT_BETA_EPS, 0.8, 0.3), varphi=1.0)
    rho = initial_state(spec)
    assert qmat.is_density(rho)
    assert check_local_thermality(rho, spec.beta_eps)


def test_uncorrelated_is_product():
    spec = InitialStateSpec(Family.UNCORRELATED, theta=0.0, zeta=1.0)
    rho = initial_state(spec)
    assert np.allclose(rho, qmat.tensor(gibbs_state(spec.beta_eps), qmat.P00))


def test_maximal_entanglement_is_pure():
    be = DEFAULT_BETA_EPS
    spec = InitialStateSpec(Family.ENTANGLED, zeta0=1.0, zeta1=0.0, xi=xi_max(be), beta_eps=be)
    assert qmat.purity(initial_state(spec)) == pytest.approx(1.0, abs=1e-12)


def test_xi_bound_and_positivity():
    be = 0.5
    assert xi_max(be) == pytest.approx(0.5 / np.cosh(be))
    with pytest.raises(DomainError):
        InitialStateSpec(Family.ENTANGLED, xi=1.01 * xi_max(be), beta_eps=be)
    # inside the coarse bound but outside the exact one for these weights
    with pytest.raises(NotPositive):
        initial_state(InitialStateSpec(Family.ENTANGLED, zeta0=0.6, zeta1=0.5,
                                       xi=0.9 * xi_max(be), beta_eps=be))
    ok = InitialStateSpec(Family.ENTANGLED, zeta0=0.6, zeta1=0.5,
                          xi=xi_admissible(be, 0.6, 0.5), beta_eps=be)
    assert np.linalg.eigvalsh(initial_state(ok))[0] > -1e-12


def test_spec_validation():
    with pytest.raises(DomainError):
        InitialStateSpec(theta=4.0)
    with pytest.raises(DomainError):
        InitialStateSpec(Family.SEPARABLE, zeta0=0.4, zeta1=0.1)
    with pytest.raises(DomainError):
        InitialStateSpec(Family.SEPARABLE, zeta0=0.6, zeta1=0.7)
    spec = InitialStateSpec(Family.SEPARABLE)
    assert spec.replace(zeta1=0.2).zetas == (1.0, 0.2)
    assert InitialStateSpec(zeta=0.4).zetas == (0.4, 0.4)
    assert spec.correlation == 0.0
