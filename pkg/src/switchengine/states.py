"""Thermal medium states and joint medium-control initial states.

The joint state lives on Q ⊗ C (medium first). Control states are written
in terms of

    |psi(theta, phi)> = cos(theta/2)|0> + sin(theta/2) e^{i phi}|1>

and its orthogonal partner |psi(theta - pi, phi)>.
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import qmat
from .errors import DomainError, NotPositive

DEFAULT_BETA_EPS = 1 / 1.65


class Family(str, enum.Enum):
    UNCORRELATED = "uncorrelated"
    SEPARABLE = "separable"
    ENTANGLED = "entangled"


def xi_max(beta_eps):
    """Largest correlation amplitude, sech(beta_eps)/2."""
    return 0.5 / np.cosh(beta_eps)


def xi_admissible(beta_eps, zeta0, zeta1):
    """Largest amplitude keeping the joint state positive for given weights.

    The coherence couples |0>|psi> (weight p0*zeta0) with |1>|psi_perp>
    (weight p1*(1-zeta1)), so positivity needs xi^2 <= p0 p1 zeta0 (1-zeta1).
    """
    return xi_max(beta_eps) * np.sqrt(max(zeta0 * (1.0 - zeta1), 0.0))


@dataclass(frozen=True)
class InitialStateSpec:
    """Parameters of a joint initial state of medium and control.

    ``zeta`` is used by the uncorrelated family only; ``zeta0``/``zeta1``
    by the separable and entangled families; ``xi`` and ``varphi`` by the
    entangled family only.
    """

    family: Family = Family.UNCORRELATED
    theta: float = np.pi / 2
    phi: float = np.pi / 4
    zeta: float = 1.0
    zeta0: float = 1.0
    zeta1: float = 0.0
    xi: float = 0.0
    varphi: float = 0.0
    beta_eps: float = DEFAULT_BETA_EPS

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        tol = 1e-12
        if not np.isfinite(self.beta_eps) or self.beta_eps < 0:
            raise DomainError(f"beta_eps must be finite and >= 0, got {self.beta_eps}")
        if not -tol <= self.theta <= np.pi + tol:
            raise DomainError(f"theta must lie in [0, pi], got {self.theta}")
        if not -tol <= self.phi <= 2 * np.pi + tol:
            raise DomainError(f"phi must lie in [0, 2pi], got {self.phi}")
        if self.family is Family.UNCORRELATED:
            if not -tol <= self.zeta <= 1 + tol:
                raise DomainError(f"zeta must lie in [0, 1], got {self.zeta}")
            return
        z0, z1 = self.zeta0, self.zeta1
        if not (-tol <= z1 <= z0 + tol and z0 <= 1 + tol and z0 >= 0.5 - tol):
            raise DomainError(
                f"need 0 <= zeta1 <= zeta0 <= 1 and zeta0 >= 1/2, got ({z0}, {z1})")
        if self.family is Family.ENTANGLED:
            if self.xi < 0 or self.xi > xi_max(self.beta_eps) + tol:
                raise DomainError(
                    f"xi must lie in [0, sech(beta_eps)/2], got {self.xi}")
            if not -tol <= self.varphi <= 2 * np.pi + tol:
                raise DomainError(f"varphi must lie in [0, 2pi], got {self.varphi}")

    @property
    def zetas(self):
        """Conditional weights (zeta0, zeta1) in the common parametrization."""
        if self.family is Family.UNCORRELATED:
            return self.zeta, self.zeta
        return self.zeta0, self.zeta1

    @property
    def correlation(self):
        """Coherence amplitude between |0>|psi> and |1>|psi_perp>."""
        return self.xi if self.family is Family.ENTANGLED else 0.0

    def replace(self, **changes):
        fields = dict(self.__dict__)
        fields.update(changes)
        return InitialStateSpec(**fields)


def gibbs_state(beta_eps):
    """Thermal state of H = -eps Z at inverse temperature beta (as beta*eps)."""
    if beta_eps < 0:
        raise DomainError(f"beta_eps must be >= 0, got {beta_eps}")
    t = np.tanh(beta_eps)
    return np.diag([(1 + t) / 2, (1 - t) / 2]).astype(complex)


def control_ket(theta, phi):
    return np.array([np.cos(theta / 2), np.sin(theta / 2) * np.exp(1j * phi)])


def control_pure(theta, phi):
    """|psi(theta, phi)><psi(theta, phi)|."""
    v = control_ket(theta, phi)
    return np.outer(v, v.conj())


def omega_mix(zeta, theta, phi):
    """zeta |psi(theta)><psi(theta)| + (1 - zeta) |psi(theta-pi)><psi(theta-pi)|."""
    if not 0.0 <= zeta <= 1.0:
        raise DomainError(f"zeta must lie in [0, 1], got {zeta}")
    return zeta * control_pure(theta, phi) + (1 - zeta) * control_pure(theta - np.pi, phi)


def initial_state(spec):
    """Joint density operator of medium and control for ``spec``."""
    t = np.tanh(spec.beta_eps)
    p = ((1 + t) / 2, (1 - t) / 2)
    if spec.family is Family.UNCORRELATED:
        rho = qmat.tensor(gibbs_state(spec.beta_eps),
                          omega_mix(spec.zeta, spec.theta, spec.phi))
    else:
        rho = np.zeros((4, 4), dtype=complex)
        for ell, zeta_ell in enumerate(spec.zetas):
            proj = np.zeros((2, 2), dtype=complex)
            proj[ell, ell] = 1.0
            rho += p[ell] * qmat.tensor(proj, omega_mix(zeta_ell, spec.theta, spec.phi))
        if spec.family is Family.ENTANGLED and spec.xi > 0:
            u = control_ket(spec.theta, spec.phi)
            v = control_ket(spec.theta - np.pi, spec.phi)
            off = spec.xi * np.exp(-1j * spec.varphi) * qmat.tensor(qmat.P01, np.outer(u, v.conj()))
            rho += off + off.conj().T
    wmin = np.linalg.eigvalsh(rho)[0]
    if wmin < -1e-10:
        raise NotPositive(f"joint state has eigenvalue {wmin:.3e}; xi too large for these zetas")
    return rho


def check_local_thermality(rho, beta_eps):
    """True if the medium marginal equals the Gibbs state within 1e-10."""
    local = qmat.partial_trace(rho, "first")
    return bool(np.max(np.abs(local - gibbs_state(beta_eps))) < 1e-10)
