"""Three-stroke engine cycles driven by measurement channels.

Stroke 1 applies the measurement(s) and is classified as heat, stroke 2 is an
isentropic measurement of strength b that extracts work, and stroke 3
rethermalizes the medium. Energies are in units of eps, entropies in nats,
and every quantity is obtained from the explicit medium density matrices.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from . import channels, qmat
from .errors import ConsistencyError, DomainError
from .states import gibbs_state, initial_state

STRICT_SLACK = 1e-12
DEGENERATE_P = 1e-12
LN2 = np.log(2.0)


class Mode(str, enum.Enum):
    DEFINITE = "definite"
    INCOHERENT = "incoherent"
    COHERENT = "coherent"


class Outcome(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"

    @property
    def sign(self):
        return 1 if self is Outcome.PLUS else -1


class Kind(str, enum.Enum):
    HEAT = "heat"
    WORK = "work"


CONDITION_NAMES = ("lower", "upper", "coherence")


@dataclass(frozen=True)
class StrokeRecord:
    index: int
    u_before: float
    u_after: float
    s_before: float
    s_after: float
    kind: Kind
    value: float


@dataclass(frozen=True)
class BranchResult:
    outcome: Outcome | None
    probability: float
    a_bar: float
    coherence: complex
    b_strength: float
    q_hot: float
    w_ext: float
    q_cold: float
    strokes: tuple
    conditions_ok: tuple
    efficiency: float
    degenerate: bool = False

    @property
    def valid(self):
        return not self.degenerate and all(self.conditions_ok)

    @property
    def reported_efficiency(self):
        """Efficiency, or 0 when the engine conditions fail."""
        return self.efficiency if self.valid else 0.0

    @property
    def radius(self):
        """Bloch-vector length of the post-measurement medium state."""
        return 2 * self.b_strength - 1


@dataclass(frozen=True)
class CycleReport:
    mode: Mode
    branches: tuple
    avg_w_ext: float
    avg_q_hot: float
    w_cost: float
    eta: float
    eta_tilde: float
    delta_eta: float
    eta_cost: float
    t_d_crit: float
    eta_inc: float
    a_bar_inc: float
    flags: tuple = field(default=())
    vectors: "WorkVectors | None" = None

    @property
    def valid(self):
        return not self.flags


@dataclass(frozen=True)
class WorkVectors:
    w_inc: tuple
    w_sco: tuple


def engine_conditions(a_bar, coherence, beta_eps):
    """Strict heat-engine inequalities (lower, upper, coherence bound).

    Accepts scalars or arrays; scalars give a tuple of plain bools.
    """
    t = np.tanh(beta_eps)
    a_bar = np.asarray(a_bar, dtype=float)
    w = 1 - 2 * a_bar
    r = np.sqrt(w * w + 4 * np.abs(coherence) ** 2)
    conds = (
        a_bar - (1 - t) / 2 > STRICT_SLACK,
        (1 + t) / 2 - a_bar > STRICT_SLACK,
        t - r > STRICT_SLACK,
    )
    if a_bar.ndim == 0 and np.ndim(coherence) == 0:
        return tuple(bool(c) for c in conds)
    return conds


def inc_efficiency(a_bar, beta_eps):
    """(w + |w|)/(w + tanh) with w = 1 - 2 a_bar; nan if the heat is not positive."""
    w = 1 - 2 * a_bar
    den = w + np.tanh(beta_eps)
    return (w + abs(w)) / den if den > 0 else float("nan")


def run_branch(rho1, beta_eps, outcome=None, probability=1.0, investing=False):
    """Simulate strokes 2 and 3 starting from the post-measurement state rho1."""
    h = qmat.hamiltonian()
    rho0 = gibbs_state(beta_eps)
    a_bar = float(np.real(rho1[0, 0]))
    coh = complex(rho1[0, 1])
    r = np.sqrt((1 - 2 * a_bar) ** 2 + 4 * abs(coh) ** 2)
    b = 0.5 * (1 - r) if investing else 0.5 * (1 + r)
    rho2 = channels.measured_state(b)

    u0, s0 = qmat.expectation(h, rho0), qmat.von_neumann_entropy(rho0)
    u1, s1 = qmat.expectation(h, rho1), qmat.von_neumann_entropy(rho1)
    u2, s2 = qmat.expectation(h, rho2), qmat.binary_entropy(b)
    if abs(s2 - s1) > 1e-9:
        raise ConsistencyError(f"work stroke changed entropy by {s2 - s1:.3e}")

    strokes = (
        StrokeRecord(1, u0, u1, s0, s1, Kind.HEAT, u1 - u0),
        StrokeRecord(2, u1, u2, s1, s2, Kind.WORK, -(u2 - u1)),
        StrokeRecord(3, u2, u0, s2, s0, Kind.HEAT, u0 - u2),
    )
    q_hot, w_ext, q_cold = u1 - u0, u1 - u2, u0 - u2
    return BranchResult(
        outcome=outcome,
        probability=float(probability),
        a_bar=a_bar,
        coherence=coh,
        b_strength=float(b),
        q_hot=q_hot,
        w_ext=w_ext,
        q_cold=q_cold,
        strokes=strokes,
        conditions_ok=engine_conditions(a_bar, coh, beta_eps),
        efficiency=w_ext / q_hot if q_hot > 0 else float("nan"),
    )


def _degenerate_branch(outcome, probability):
    nan = float("nan")
    return BranchResult(outcome, float(probability), nan, complex(nan, nan), nan,
                        nan, nan, nan, (), (False, False, False), nan, degenerate=True)


def _single_branch_report(mode, br, beta_eps):
    flags = tuple(f"{name}" for name, ok in zip(CONDITION_NAMES, br.conditions_ok) if not ok)
    eta = br.reported_efficiency
    return CycleReport(
        mode=mode,
        branches=(br,),
        avg_w_ext=br.w_ext,
        avg_q_hot=br.q_hot,
        w_cost=0.0,
        eta=eta,
        eta_tilde=eta,
        delta_eta=0.0,
        eta_cost=0.0,
        t_d_crit=0.0,
        eta_inc=eta,
        a_bar_inc=br.a_bar,
        flags=flags,
    )


def definite_cycle(a, beta_eps, investing=False):
    """Cycle with a single measurement of strength a in stroke 1.

    ``investing=True`` selects the work-investing choice of b; it exists for
    debugging only.
    """
    if beta_eps <= 0:
        raise DomainError(f"beta_eps must be > 0, got {beta_eps}")
    rho1 = channels.apply_channel(a, gibbs_state(beta_eps))
    br = run_branch(rho1, beta_eps, investing=investing)
    return _single_branch_report(Mode.DEFINITE, br, beta_eps)


def incoherent_cycle(a, a_prime, spec):
    """Cycle driven by the switch with the control discarded."""
    out = channels.switch_decomposition(a, a_prime, initial_state(spec)).output()
    rho1 = qmat.partial_trace(out, "first")
    br = run_branch(rho1, spec.beta_eps)
    return _single_branch_report(Mode.INCOHERENT, br, spec.beta_eps)


def _switch_terms(a, a_prime, phi_prime, spec):
    dec = channels.switch_decomposition(a, a_prime, initial_state(spec))
    return dec, channels.xi_operator(dec, phi_prime)


def coherent_branches(a, a_prime, phi_prime, spec):
    """Branch results for control outcomes + and - in the |±> basis."""
    dec, xi = _switch_terms(a, a_prime, phi_prime, spec)
    return _branches_from(dec, xi, spec.beta_eps)


def _branches_from(dec, xi, beta_eps):
    rho_inc = channels.measured_state(dec.a_bar)
    res = []
    for outcome in (Outcome.PLUS, Outcome.MINUS):
        unnorm = 0.5 * (rho_inc + outcome.sign * xi)
        p = float(np.real(np.trace(unnorm)))
        if p < DEGENERATE_P:
            res.append(_degenerate_branch(outcome, max(p, 0.0)))
            continue
        res.append(run_branch(unnorm / p, beta_eps, outcome, p))
    return tuple(res)


def coherent_cycle(a, a_prime, phi_prime, spec, beta_d_inv=0.0):
    """Cycle with the control read out in the |±> basis.

    ``beta_d_inv`` is the detector temperature k_B T_D in units of eps; it
    sets the cost of erasing the one-bit record of the readout.
    """
    if beta_d_inv < 0:
        raise DomainError(f"beta_d_inv must be >= 0, got {beta_d_inv}")
    dec, xi = _switch_terms(a, a_prime, phi_prime, spec)
    branches = _branches_from(dec, xi, spec.beta_eps)
    t = np.tanh(spec.beta_eps)
    a_inc = dec.a_bar
    w = 1 - 2 * a_inc

    flags = []
    live = [br for br in branches if not br.degenerate]
    for br in branches:
        if br.degenerate:
            flags.append(f"{br.outcome.value}:degenerate")
            continue
        for name, ok in zip(CONDITION_NAMES, br.conditions_ok):
            if not ok:
                flags.append(f"{br.outcome.value}:{name}")

    avg_w = sum(br.probability * br.w_ext for br in live)
    avg_q = sum(br.probability * br.q_hot for br in live)
    mean_r = sum(br.probability * br.radius for br in live)
    w_cost = -beta_d_inv * LN2
    den = w + t
    if avg_q > 0 and den > 0:
        eta = (avg_w + w_cost) / avg_q
        eta_tilde = avg_w / avg_q
        delta_eta = (mean_r - abs(w)) / den
        eta_cost = beta_d_inv * LN2 / den
        eta_inc = (w + abs(w)) / den
    else:
        flags.append("hot-heat-nonpositive")
        eta = eta_tilde = delta_eta = eta_cost = eta_inc = float("nan")
    return CycleReport(
        mode=Mode.COHERENT,
        branches=branches,
        avg_w_ext=avg_w,
        avg_q_hot=avg_q,
        w_cost=w_cost,
        eta=eta,
        eta_tilde=eta_tilde,
        delta_eta=delta_eta,
        eta_cost=eta_cost,
        t_d_crit=(mean_r - abs(w)) / LN2,
        eta_inc=eta_inc,
        a_bar_inc=a_inc,
        flags=tuple(flags),
        vectors=_vectors_from(dec, xi),
    )


def work_vectors(a, a_prime, phi_prime, spec):
    """Population and coherence work vectors of the incoherent and switch terms."""
    return _vectors_from(*_switch_terms(a, a_prime, phi_prime, spec))


def _vectors_from(dec, xi):
    return WorkVectors(
        w_inc=(1 - 2 * dec.a_bar, 0.0),
        w_sco=(qmat.expectation(qmat.Z, xi), 2 * abs(xi[0, 1])),
    )


def delta_eta_from_vectors(v, beta_eps):
    """Efficiency gain of the coherent readout from the work vectors."""
    den = v.w_inc[0] + np.tanh(beta_eps)
    if den <= 0:
        raise DomainError(f"hot heat {den} is not positive")
    wi = np.asarray(v.w_inc, dtype=float)
    ws = np.asarray(v.w_sco, dtype=float)
    half_sum = 0.5 * (np.linalg.norm(wi + ws) + np.linalg.norm(wi - ws))
    return float((half_sum - np.linalg.norm(wi)) / den)
