"""Circuits for state preparation, the two-order switch and the work stroke.

Qubit layout:

    q0  control
    q1  working medium
    q2  meter of the strength-a channel
    q3  meter of the strength-a' channel
    q4  purifier of q2
    q5  purifier of q3
    q6  auxiliary purifier for the joint medium-control state

A measurement channel of strength lam is realized by swapping the medium with
a meter prepared in diag(lam, 1 - lam). The swap dilation has exactly the
four rank-one Kraus operators of the channel, so the switch built from
controlled swaps of the two meters reproduces the switch output, interference
terms included.
"""

import enum
import logging

import numpy as np

from .. import engine, qmat
from ..errors import AngleDomainError, CircuitWidthError, DomainError
from ..states import Family, initial_state
from .gates import Circuit, GateKind as K, reduced_density, statevector_run

log = logging.getLogger(__name__)

CONTROL, MEDIUM, METER_A, METER_B, PUR_A, PUR_B, AUX = range(7)
WIDTH = 7
RANK_TOL = 1e-12


class CircuitMode(str, enum.Enum):
    INCOHERENT = "incoherent"
    COHERENT = "coherent"


class Stroke(str, enum.Enum):
    EXTRACT = "extract"
    INVEST = "invest"


def _mixed_qubit(c, q, p0, purifier):
    """Put qubit q in diag(p0, 1 - p0), purified on ``purifier``."""
    p0 = min(max(p0, 0.0), 1.0)
    c.add(K.ROT_Y, q, angle=2 * np.arccos(np.sqrt(p0)))
    c.add(K.CNOT, purifier, controls=q)


def _bloch_angles(v):
    """(theta, phi) with RZ(phi) RY(theta)|0> proportional to v."""
    v = v / np.linalg.norm(v)
    theta = 2 * np.arctan2(abs(v[1]), abs(v[0]))
    phi = np.angle(v[1]) - np.angle(v[0]) if abs(v[1]) > 0 and abs(v[0]) > 0 else 0.0
    return theta, phi


def _prepare_logical(c, b, logical):
    """Prepare the single-qubit density matrix b on ``logical`` using AUX."""
    w, v = np.linalg.eigh(qmat.hermitize(b, tol=1e-9))
    w, v = w[::-1], v[:, ::-1]
    _mixed_qubit(c, logical, float(np.clip(w[0], 0, 1)), AUX)
    theta, phi = _bloch_angles(v[:, 0])
    if theta:
        c.add(K.ROT_Y, logical, angle=theta)
    if phi:
        c.add(K.ROT_Z, logical, angle=phi)


_MAPS = {"zero": (0, 0), "one": (1, 1), "copy": (0, 1), "flip": (1, 0)}


def _embedding(logical_is_medium, fmap):
    """Isometry C^2 -> C^4 (medium ⊗ control) for |k> -> |k, f(k)> or |f(k), k>."""
    e = np.zeros((4, 2), dtype=complex)
    for k in (0, 1):
        other = _MAPS[fmap][k]
        q, ctl = (k, other) if logical_is_medium else (other, k)
        e[2 * q + ctl, k] = 1.0
    return e


def _find_encoding(sigma):
    for logical_is_medium in (True, False):
        for fmap in _MAPS:
            e = _embedding(logical_is_medium, fmap)
            b = e.conj().T @ sigma @ e
            if np.max(np.abs(e @ b @ e.conj().T - sigma)) < 1e-10:
                return logical_is_medium, fmap, b
    return None


def _apply_map(c, logical_is_medium, fmap):
    src, dst = (MEDIUM, CONTROL) if logical_is_medium else (CONTROL, MEDIUM)
    if fmap in ("copy", "flip"):
        c.add(K.CNOT, dst, controls=src)
    if fmap in ("one", "flip"):
        c.add(K.NOT, dst)


def _control_frame(theta, phi):
    """Unitary V with V|0> ∝ |psi(theta, phi)> and V|1> ∝ |psi(theta - pi, phi)>."""
    from .gates import ry, rz
    return rz(phi) @ ry(theta)


def _prep_joint_dilation(c, spec):
    rho = initial_state(spec)
    v = qmat.tensor(qmat.I2, _control_frame(spec.theta, spec.phi))
    sigma = v.conj().T @ rho @ v
    enc = _find_encoding(sigma)
    if enc is None:
        rank = int(np.sum(np.linalg.eigvalsh(sigma) > RANK_TOL))
        raise CircuitWidthError(
            f"joint state of rank {rank} needs more than one auxiliary purifier "
            f"within a width of {WIDTH}")
    logical_is_medium, fmap, b = enc
    _prepare_logical(c, b, MEDIUM if logical_is_medium else CONTROL)
    _apply_map(c, logical_is_medium, fmap)
    if spec.theta:
        c.add(K.ROT_Y, CONTROL, angle=spec.theta)
    if spec.phi:
        c.add(K.ROT_Z, CONTROL, angle=spec.phi)


def literal_angles(beta_eps, a, a_prime, phi):
    """Caption angles (theta_y1..theta_y4, theta_z) of the literal circuit."""
    vals = {"theta_y2": 2 * a - 1, "theta_y3": 2 * a_prime - 1}
    for name, x in vals.items():
        if x < 0:
            raise AngleDomainError(f"{name} = arccos(sqrt({x:.6g})) is not real")
    return {
        "theta_y1": float(np.arccos(np.sqrt(np.tanh(beta_eps)))),
        "theta_y2": float(np.arccos(np.sqrt(vals["theta_y2"]))),
        "theta_y3": float(np.arccos(np.sqrt(vals["theta_y3"]))),
        "theta_y4": np.pi / 2,
        "theta_z": phi / 4,
    }


def _caption_gate_angle(theta):
    # a caption angle fixes the excess population cos^2(theta); RY needs arccos of it
    return float(np.arccos(np.cos(theta) ** 2))


def _prep_literal(c, spec, a, a_prime):
    if spec.family is not Family.UNCORRELATED or spec.zeta != 1.0:
        raise DomainError("literal preparation covers the uncorrelated pure-control state only")
    ang = literal_angles(spec.beta_eps, a, a_prime, spec.phi)
    c.add(K.ROT_Y, MEDIUM, angle=_caption_gate_angle(ang["theta_y1"]))
    c.add(K.CNOT, AUX, controls=MEDIUM)
    c.add(K.ROT_Y, METER_A, angle=_caption_gate_angle(ang["theta_y2"]))
    c.add(K.CNOT, PUR_A, controls=METER_A)
    c.add(K.ROT_Y, METER_B, angle=_caption_gate_angle(ang["theta_y3"]))
    c.add(K.CNOT, PUR_B, controls=METER_B)
    c.add(K.ROT_Y, CONTROL, angle=_caption_gate_angle(ang["theta_y4"]))
    c.add(K.ROT_Z, CONTROL, angle=ang["theta_z"])
    if not np.isclose(spec.theta, np.pi / 2) or not np.isclose(ang["theta_z"], spec.phi):
        log.warning("literal circuit prepares theta=pi/2, phi=%.6g; requested theta=%.6g, phi=%.6g",
                    ang["theta_z"], spec.theta, spec.phi)
    return c


def prep_circuit(spec, a, a_prime, mode="dilation"):
    """Prepare the joint initial state on (q1, q0) and the two meters.

    ``mode="dilation"`` works for any a, a' in [0, 1] and any joint state of
    rank at most 2. ``mode="literal"`` uses the caption angles, which are real
    only for a, a' >= 1/2.
    """
    for lam in (a, a_prime):
        if not 0.0 <= lam <= 1.0:
            raise DomainError(f"measurement strength must lie in [0, 1], got {lam}")
    c = Circuit(WIDTH)
    if mode == "literal":
        return _prep_literal(c, spec, a, a_prime)
    if mode != "dilation":
        raise ValueError(f"unknown preparation mode {mode!r}")
    _prep_joint_dilation(c, spec)
    _mixed_qubit(c, METER_A, a, PUR_A)
    _mixed_qubit(c, METER_B, a_prime, PUR_B)
    return c


def switch_stage(c):
    """Order a-then-a' for control 0 and a'-then-a for control 1."""
    c.add(K.CSWAP, (METER_A, METER_B), controls=CONTROL)
    c.add(K.CSWAP, (MEDIUM, METER_A))
    c.add(K.CSWAP, (MEDIUM, METER_B))
    c.add(K.CSWAP, (METER_A, METER_B), controls=CONTROL)
    return c


def readout_stage(c, phi_prime):
    """Rotate the control so |+> -> |0> and |-> -> |1> (up to phase)."""
    if phi_prime:
        c.add(K.ROT_Z, CONTROL, angle=-phi_prime)
    c.add(K.HADAMARD, CONTROL)
    return c


def generalized_rotation_angles(a_bar, coherence, branch=Stroke.EXTRACT):
    """(alpha1, alpha2, alpha3) aligning the Bloch vector with +z (extract) or -z.

    alpha2 is the phase of the coherence (0 when it vanishes) and alpha3 the
    polar angle of the rotation axis.
    """
    branch = Stroke(branch)
    w = 1 - 2 * a_bar
    r = np.hypot(w, 2 * abs(coherence))
    alpha2 = float(np.angle(coherence)) if abs(coherence) > 0 else 0.0
    if r == 0:
        return -np.pi, alpha2, 0.0
    ratio = np.clip(w / r, -1.0, 1.0)
    if branch is Stroke.EXTRACT:
        alpha3 = np.arccos(np.sqrt(0.5 * (1 - ratio)))
    else:
        alpha3 = np.arccos(-np.sqrt(0.5 * (1 + ratio)))
    return -np.pi, alpha2, float(alpha3)


def generalized_rotation(alphas):
    """2x2 unitary Rz(-a2) Ry(a3) Rz(a1) Ry(-a3) Rz(a2)."""
    from .gates import ry, rz
    a1, a2, a3 = alphas
    return rz(-a2) @ ry(a3) @ rz(a1) @ ry(-a3) @ rz(a2)


def _rotation_gates(c, alphas, controls=()):
    a1, a2, a3 = alphas
    for kind, ang in ((K.ROT_Z, a2), (K.ROT_Y, -a3), (K.ROT_Z, a1),
                      (K.ROT_Y, a3), (K.ROT_Z, -a2)):
        if ang:
            c.add(kind, MEDIUM, controls=controls, angle=ang)


def _stroke_for(c, br, branch, controls=()):
    if br.degenerate:
        return
    if abs(br.coherence) == 0:
        flip = br.a_bar < 0.5 if Stroke(branch) is Stroke.EXTRACT else br.a_bar > 0.5
        if flip:
            c.add(K.NOT, MEDIUM, controls=controls)
        return
    _rotation_gates(c, generalized_rotation_angles(br.a_bar, br.coherence, branch), controls)


def engine_circuit(mode, spec, a, a_prime, phi_prime=0.0, *, prep_mode="dilation",
                   work_stroke=True, branch=Stroke.EXTRACT):
    """Full circuit: preparation, switch, readout (coherent) and work stroke.

    In the coherent mode the control is rotated so that outcome 0 means |+>;
    the branch-dependent work stroke is applied as gates controlled on q0,
    which is equivalent to classical feed-forward after measuring it.
    """
    mode = CircuitMode(mode)
    c = prep_circuit(spec, a, a_prime, prep_mode)
    switch_stage(c)
    if mode is CircuitMode.INCOHERENT:
        if work_stroke:
            br = engine.incoherent_cycle(a, a_prime, spec).branches[0]
            _stroke_for(c, br, branch)
        return c
    readout_stage(c, phi_prime)
    if work_stroke:
        plus, minus = engine.coherent_branches(a, a_prime, phi_prime, spec)
        c.add(K.NOT, CONTROL)
        _stroke_for(c, plus, branch, controls=(CONTROL,))
        c.add(K.NOT, CONTROL)
        _stroke_for(c, minus, branch, controls=(CONTROL,))
    return c


def conditional_medium_states(psi):
    """Probabilities and normalized medium states for control outcomes 0 and 1."""
    rho = reduced_density(psi, (CONTROL, MEDIUM))
    out = []
    for k in (0, 1):
        block = rho[2 * k:2 * k + 2, 2 * k:2 * k + 2]
        p = float(np.real(np.trace(block)))
        out.append((p, block / p if p > 0 else block))
    return tuple(out)


def medium_state(psi):
    return reduced_density(psi, (MEDIUM,))


def run(c):
    return statevector_run(c)
