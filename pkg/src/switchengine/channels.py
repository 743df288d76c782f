"""Measurement channels and the two-order switch built from them.

A measurement channel of strength lam resets any qubit state to
diag(lam, 1 - lam). The switch applies two such channels, of strengths a and
a', in an order controlled by a second qubit: control |0> runs a then a',
control |1> runs a' then a.
"""

from dataclasses import dataclass

import numpy as np

from . import qmat
from .errors import DomainError


def _check_strength(lam):
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"measurement strength must lie in [0, 1], got {lam}")


def measured_state(lam):
    """diag(lam, 1 - lam), the fixed output of a strength-lam channel."""
    return np.diag([lam, 1.0 - lam]).astype(complex)


def measurement_kraus(lam):
    """The four Kraus operators of a strength-lam measurement channel."""
    _check_strength(lam)
    s0, s1 = np.sqrt(lam), np.sqrt(1.0 - lam)
    return [s0 * qmat.P00, s0 * qmat.P01, s1 * qmat.P10, s1 * qmat.P11]


def kraus_completeness(ops):
    """max |sum K†K - I|."""
    d = ops[0].shape[0]
    acc = sum(k.conj().T @ k for k in ops)
    return float(np.max(np.abs(acc - np.eye(d))))


def apply_kraus(ops, rho):
    return sum(k @ rho @ k.conj().T for k in ops)


def apply_channel(lam, rho):
    """Apply the strength-lam channel through its Kraus operators.

    For any unit-trace input the result is diag(lam, 1 - lam).
    """
    return apply_kraus(measurement_kraus(lam), np.asarray(rho, dtype=complex))


def switch_kraus(a, a_prime):
    """Sixteen Kraus operators of the switch on Q ⊗ C."""
    ops = []
    for mi in measurement_kraus(a):
        for mj in measurement_kraus(a_prime):
            ops.append(qmat.tensor(mj @ mi, qmat.P00) + qmat.tensor(mi @ mj, qmat.P11))
    return ops


def apply_switch(a, a_prime, rho_in):
    """Switch output computed by the explicit Kraus sum."""
    return apply_kraus(switch_kraus(a, a_prime), np.asarray(rho_in, dtype=complex))


@dataclass(frozen=True)
class SwitchDecomposition:
    """Switch output in block form.

    The output equals
    ``lam ρ_a' ⊗ |0><0| + (1-lam) ρ_a ⊗ |1><1| + lambda_x ⊗ X + lambda_y ⊗ Y``.
    """

    a: float
    a_prime: float
    lambda_weight: float
    lambda_x: np.ndarray
    lambda_y: np.ndarray

    @property
    def a_bar(self):
        """Effective strength seen by the medium once the control is traced out."""
        return self.lambda_weight * self.a_prime + (1 - self.lambda_weight) * self.a

    def output(self):
        lam = self.lambda_weight
        return (lam * qmat.tensor(measured_state(self.a_prime), qmat.P00)
                + (1 - lam) * qmat.tensor(measured_state(self.a), qmat.P11)
                + qmat.tensor(self.lambda_x, qmat.X)
                + qmat.tensor(self.lambda_y, qmat.Y))


def switch_decomposition(a, a_prime, rho_in):
    """Block decomposition of the switch output, computed without Kraus sums."""
    _check_strength(a)
    _check_strength(a_prime)
    rho_in = np.asarray(rho_in, dtype=complex)
    lam = 0.5 * (1 + np.real(np.trace(rho_in @ qmat.tensor(qmat.I2, qmat.Z))))
    # coefficient of |0><1| on the control
    t_block = qmat.partial_trace(rho_in @ qmat.tensor(qmat.I2, qmat.P10), "first")
    m = measured_state(a_prime) @ t_block @ measured_state(a)
    lx = 0.5 * (m + m.conj().T)
    ly = 0.5j * (m - m.conj().T)
    return SwitchDecomposition(a, a_prime, float(lam), lx, ly)


def xi_operator(dec, phi_prime):
    """2(cos phi' Λ_X + sin phi' Λ_Y): the interference term seen in |±>."""
    return 2 * (np.cos(phi_prime) * dec.lambda_x + np.sin(phi_prime) * dec.lambda_y)


def control_basis(phi_prime):
    """Kets |+> and |->, with |±> = (|0> ± e^{i phi'}|1>)/√2."""
    e = np.exp(1j * phi_prime)
    return (np.array([1, e]) / np.sqrt(2), np.array([1, -e]) / np.sqrt(2))


def project_control(out, phi_prime):
    """Unnormalized medium states tr_c[S (I ⊗ |±><±|)] for outcomes + and -."""
    res = []
    for v in control_basis(phi_prime):
        proj = qmat.tensor(qmat.I2, np.outer(v, v.conj()))
        res.append(qmat.partial_trace(out @ proj, "first"))
    return tuple(res)
