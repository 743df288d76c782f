"""Closed-form engine quantities for the three initial-state families.

All three families share one parametrization: conditional control weights
(zeta0, zeta1) and a correlation amplitude xi. The uncorrelated family is
zeta0 = zeta1 = zeta, xi = 0, and the separable family is xi = 0. Functions
are vectorized over theta so that they can be scanned on a grid.

The quantities below follow from the switch output in block form:

    a_bar  = (a + a')/2 + (q - 1/2)(a' - a) cos(theta),  q = tr[diag(zeta0, zeta1) rho0]
    tr Xi  = sin(theta) cos(phi - phi') ((zeta0 + zeta1 - 1) Sigma - (zeta0 - zeta1) delta)
    W_diag = sin(theta) cos(phi - phi') ((zeta0 - zeta1) Sigma - (zeta0 + zeta1 - 1) delta)
    W_off  = 2 xi sqrt((x - y)^2 + 4 x y sin^2(phi - phi'))

with x = a(1-a') sin^2(theta/2), y = a'(1-a) cos^2(theta/2).
"""

from dataclasses import dataclass

import numpy as np

from . import engine
from .errors import ConsistencyError, InfeasibleError
from .states import Family, xi_max

THETA_GRID = 801
THETA_TOL = 1e-8
TIE_TOL = 1e-12
GOLDEN = (np.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class DeltaSigma:
    delta: float
    sigma: float


@dataclass(frozen=True)
class Terms:
    """Closed-form ingredients at one (or an array of) parameter point(s)."""

    beta_eps: float
    t: float
    a_bar: np.ndarray
    tr_xi: np.ndarray
    w_diag: np.ndarray
    w_off: np.ndarray


@dataclass(frozen=True)
class BranchValue:
    probability: np.ndarray
    a_bar: np.ndarray
    coherence_abs: np.ndarray
    w_ext: np.ndarray
    q_hot: np.ndarray
    efficiency: np.ndarray
    feasible: np.ndarray


@dataclass(frozen=True)
class ClosedFormResult:
    value: float
    feasible: bool
    phi: float


@dataclass(frozen=True)
class OptResult:
    theta_opt: float
    value: float
    constrained: bool


def delta_sigma(a, a_prime, beta_eps):
    t = np.tanh(beta_eps)
    n = (1 - a) * (1 - a_prime) * (1 - t) / 2
    p = a * a_prime * (1 + t) / 2
    return DeltaSigma(n - p, n + p)


def _zetas(family, zetas):
    if Family(family) is Family.UNCORRELATED:
        z = float(np.atleast_1d(zetas)[0])
        return z, z
    return float(zetas[0]), float(zetas[1])


def terms(a, a_prime, beta_eps, theta, dphi, zeta0, zeta1, xi):
    """Closed-form a_bar, tr Xi, W_diag and W_off; vectorized over theta/dphi."""
    theta = np.asarray(theta, dtype=float)
    t = np.tanh(beta_eps)
    ds = delta_sigma(a, a_prime, beta_eps)
    q = (zeta0 * (1 + t) + zeta1 * (1 - t)) / 2
    a_bar = (a + a_prime) / 2 + (q - 0.5) * (a_prime - a) * np.cos(theta)
    sc = np.sin(theta) * np.cos(dphi)
    w_diag = sc * ((zeta0 - zeta1) * ds.sigma - (zeta0 + zeta1 - 1) * ds.delta)
    tr_xi = sc * ((zeta0 + zeta1 - 1) * ds.sigma - (zeta0 - zeta1) * ds.delta)
    x = a * (1 - a_prime) * np.sin(theta / 2) ** 2
    y = a_prime * (1 - a) * np.cos(theta / 2) ** 2
    w_off = 2 * xi * np.sqrt((x - y) ** 2 + 4 * x * y * np.sin(dphi) ** 2)
    return Terms(beta_eps, t, a_bar, tr_xi, w_diag, w_off)


def spec_terms(spec, a, a_prime, phi_prime=0.0, theta=None):
    z0, z1 = spec.zetas
    th = spec.theta if theta is None else theta
    return terms(a, a_prime, spec.beta_eps, th, spec.phi - phi_prime, z0, z1, spec.correlation)


def abar_inc(family, theta, zetas, a, a_prime, beta_eps):
    """Effective strength after tracing out the control."""
    z0, z1 = _zetas(family, zetas)
    return terms(a, a_prime, beta_eps, theta, 0.0, z0, z1, 0.0).a_bar


def wsco_components(spec, a, a_prime, phi_prime=0.0):
    """(diag, off) components of the switch work vector."""
    tm = spec_terms(spec, a, a_prime, phi_prime)
    return float(tm.w_diag), float(tm.w_off)


def branch(tm, sign):
    """Closed-form branch quantities for outcome sign +1 (plus) or -1 (minus)."""
    p = 0.5 * (1 + sign * tm.tr_xi)
    x = 1 - 2 * tm.a_bar - sign * tm.w_diag
    hyp = np.hypot(x, tm.w_off)
    live = p >= engine.DEGENERATE_P
    with np.errstate(divide="ignore", invalid="ignore"):
        two_p = np.where(live, 2 * p, np.nan)
        a_b = 0.5 * (1 - x / two_p)
        coh = tm.w_off / (2 * two_p)
        w_ext = (hyp + x) / two_p
        q_hot = (x + two_p * tm.t) / two_p
        eff_den = x + two_p * tm.t
        eff = np.where(eff_den > 0, (hyp + x) / eff_den, np.nan)
    conds = engine.engine_conditions(a_b, coh, tm.beta_eps)
    feasible = live & conds[0] & conds[1] & conds[2]
    return BranchValue(p, a_b, coh, w_ext, q_hot, eff, feasible)


def efficiencies(tm):
    """eta_tilde, delta_eta and eta_inc from closed-form terms (nan if Q_hot <= 0)."""
    w = 1 - 2 * tm.a_bar
    d, o = tm.w_diag, tm.w_off
    half = 0.5 * (np.hypot(w + d, o) + np.hypot(w - d, o))
    den = w + tm.t
    with np.errstate(divide="ignore", invalid="ignore"):
        ok = den > 0
        eta_tilde = np.where(ok, (half + w) / den, np.nan)
        delta_eta = np.where(ok, (half - np.abs(w)) / den, np.nan)
        eta_inc = np.where(ok, (w + np.abs(w)) / den, np.nan)
    return eta_tilde, delta_eta, eta_inc


def both_feasible(tm):
    return branch(tm, 1).feasible & branch(tm, -1).feasible


def eta_tilde_at(spec, a, a_prime, phi_prime=0.0, theta=None):
    """(eta_tilde, feasible) at the state described by ``spec``."""
    tm = spec_terms(spec, a, a_prime, phi_prime, theta)
    return efficiencies(tm)[0], both_feasible(tm)


def eta_postselected_at(spec, outcome, a, a_prime, phi_prime=0.0, theta=None):
    """(eta, feasible) for a single readout outcome at the state ``spec``."""
    br = branch(spec_terms(spec, a, a_prime, phi_prime, theta), engine.Outcome(outcome).sign)
    return br.efficiency, br.feasible


def _phase_offsets(family, postselected):
    if Family(family) is Family.ENTANGLED:
        return (0.0, np.pi / 2, np.pi) if postselected else (0.0, np.pi / 2)
    return (0.0, np.pi) if postselected else (0.0,)


def _best_over_phases(spec, phi_prime, evaluate, postselected):
    best = None
    for off in _phase_offsets(spec.family, postselected):
        phi = float(np.mod(phi_prime + off, 2 * np.pi))
        value, feasible = evaluate(spec.replace(phi=phi))
        value, feasible = float(value), bool(feasible)
        cand = ClosedFormResult(value if feasible else 0.0, feasible, phi)
        if best is None or (cand.feasible, cand.value) > (best.feasible, best.value):
            best = cand
    return best


def eta_closed_form(spec, a, a_prime, phi_prime=0.0):
    """eta_tilde maximized over the control phase phi.

    The remaining parameters (theta, zetas, xi) are taken from ``spec``.
    Infeasible points report value 0 with ``feasible`` False.
    """
    return _best_over_phases(
        spec, phi_prime, lambda s: eta_tilde_at(s, a, a_prime, phi_prime), False)


def eta_postselected_closed_form(spec, outcome, a, a_prime, phi_prime=0.0):
    """Single-outcome efficiency maximized over the control phase phi."""
    return _best_over_phases(
        spec, phi_prime,
        lambda s: eta_postselected_at(s, outcome, a, a_prime, phi_prime), True)


def golden_max(f, lo, hi, tol=THETA_TOL):
    """Golden-section search for a maximum of f on [lo, hi]."""
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = f(d)
    x = 0.5 * (lo + hi)
    return x, f(x)


def optimize_theta(objective, constrained=True, n_grid=THETA_GRID):
    """Maximize a feasibility-masked objective over theta in [0, pi].

    Parameters
    ----------
    objective : callable
        Maps an array of theta values to ``(values, feasible)`` arrays.
    constrained : bool
        If False, the feasibility mask is ignored.

    Returns
    -------
    OptResult
        Best theta after grid search and golden-section refinement; ties go
        to the smallest theta.
    """
    grid = np.linspace(0.0, np.pi, n_grid)

    def masked(th):
        values, feasible = objective(th)
        values = np.asarray(values, dtype=float)
        ok = np.isfinite(values)
        if constrained:
            ok &= np.asarray(feasible, dtype=bool)
        return np.where(ok, values, -np.inf), ok

    vals, ok = masked(grid)
    if not ok.any():
        raise InfeasibleError("no theta satisfies the engine constraints")
    vmax = vals.max()
    i = int(np.flatnonzero(vals >= vmax - TIE_TOL)[0])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, n_grid - 1)]
    th, v = golden_max(lambda x: float(masked(np.array([x]))[0][0]), lo, hi)
    theta_opt, value = float(grid[i]), float(vals[i])
    if v > value + TIE_TOL:
        theta_opt, value = th, v
    return OptResult(theta_opt, value, bool(constrained and not ok.all()))


def family_configs(family, beta_eps, xi_fractions=(0.0, 0.25, 0.5, 0.75, 1.0)):
    """Candidate control configurations (zeta0, zeta1, xi, phi - phi') per family.

    These are the boundary configurations at which the optimum over the
    control weights and phase is attained; theta is optimized separately.
    """
    if Family(family) is Family.UNCORRELATED:
        return [(z, z, 0.0, dp) for z in (1.0, 0.0) for dp in (0.0, np.pi)]
    cfgs = [(z0, z1, 0.0, dp) for z0, z1 in ((1.0, 0.0), (1.0, 1.0)) for dp in (0.0, np.pi)]
    if Family(family) is Family.ENTANGLED:
        xm = xi_max(beta_eps)
        cfgs += [(1.0, 0.0, f * xm, dp) for f in xi_fractions if f > 0
                 for dp in (0.0, np.pi / 2, np.pi)]
    return cfgs


def _cfg_objective(cfg, a, a_prime, beta_eps, kind):
    z0, z1, xi, dp = cfg

    def f(theta):
        tm = terms(a, a_prime, beta_eps, theta, dp, z0, z1, xi)
        if kind == "eta_tilde":
            return efficiencies(tm)[0], both_feasible(tm)
        if kind == "eta_minus":
            br = branch(tm, -1)
            return br.efficiency, br.feasible
        if kind == "eta_postselected":
            bp, bm = branch(tm, 1), branch(tm, -1)
            vp = np.where(bp.feasible, bp.efficiency, -np.inf)
            vm = np.where(bm.feasible, bm.efficiency, -np.inf)
            return np.maximum(vp, vm), bp.feasible | bm.feasible
        raise ValueError(f"unknown objective {kind!r}")
    return f


def optimize_controls(family, a, a_prime, beta_eps, kind="eta_tilde", constrained=True,
                      xi_fractions=(0.0, 0.25, 0.5, 0.75, 1.0)):
    """Maximize an efficiency over theta and the family's control configurations.

    Returns ``(OptResult, cfg)``; raises InfeasibleError when nothing is feasible.
    """
    grid = np.linspace(0.0, np.pi, THETA_GRID)
    best = None
    any_infeasible = False
    for cfg in family_configs(family, beta_eps, xi_fractions):
        vals, ok = _cfg_objective(cfg, a, a_prime, beta_eps, kind)(grid)
        vals = np.asarray(vals, dtype=float)
        ok = np.asarray(ok, dtype=bool) & np.isfinite(vals) if constrained else np.isfinite(vals)
        any_infeasible |= not ok.all()
        if ok.any():
            v = float(np.max(vals[ok]))
            if best is None or v > best[0] + TIE_TOL:
                best = (v, cfg)
    if best is None:
        raise InfeasibleError("no control configuration satisfies the engine constraints")
    cfg = best[1]
    res = optimize_theta(_cfg_objective(cfg, a, a_prime, beta_eps, kind), constrained)
    return OptResult(res.theta_opt, res.value, bool(constrained and any_infeasible)), cfg


def map_cell(family, a, a_prime, beta_eps):
    """Optimized gain and post-selected efficiencies for one (a, a') cell.

    Returns a dict with keys delta_eta, eta_minus_opt, eta_plus_at_opt,
    feasible. Infeasible quantities are reported as 0.
    """
    out = {"delta_eta": 0.0, "eta_minus_opt": 0.0, "eta_plus_at_opt": 0.0, "feasible": False}
    try:
        res, cfg = optimize_controls(family, a, a_prime, beta_eps, "eta_tilde")
        z0, z1, xi, dp = cfg
        tm = terms(a, a_prime, beta_eps, res.theta_opt, dp, z0, z1, xi)
        eta_tilde, _, eta_inc = efficiencies(tm)
        out["delta_eta"] = float(eta_tilde - eta_inc)
        out["feasible"] = True
    except InfeasibleError:
        pass
    try:
        res, cfg = optimize_controls(family, a, a_prime, beta_eps, "eta_minus")
        out["eta_minus_opt"] = res.value
        z0, z1, xi, dp = cfg
        bp = branch(terms(a, a_prime, beta_eps, res.theta_opt, dp, z0, z1, xi), 1)
        out["eta_plus_at_opt"] = float(bp.efficiency) if bool(bp.feasible) else 0.0
    except InfeasibleError:
        pass
    return out


def cross_check(spec, a, a_prime, phi_prime=0.0, tol=1e-9):
    """Compare closed forms against the matrix-level engine; raise on mismatch.

    Returns the largest absolute discrepancy found.
    """
    tm = spec_terms(spec, a, a_prime, phi_prime)
    rep = engine.coherent_cycle(a, a_prime, phi_prime, spec)
    wv = rep.vectors
    pairs = [
        ("a_bar", float(tm.a_bar), rep.a_bar_inc),
        ("w_diag", float(tm.w_diag), wv.w_sco[0]),
        ("w_off", float(tm.w_off), wv.w_sco[1]),
    ]
    eta_tilde, delta_eta, _ = efficiencies(tm)
    if np.isfinite(eta_tilde):
        pairs += [("eta_tilde", float(eta_tilde), rep.eta_tilde),
                  ("delta_eta", float(delta_eta), rep.delta_eta)]
    for br in rep.branches:
        if br.degenerate:
            continue
        bv = branch(tm, br.outcome.sign)
        pairs += [(f"p_{br.outcome.value}", float(bv.probability), br.probability),
                  (f"w_ext_{br.outcome.value}", float(bv.w_ext), br.w_ext)]
        if np.isfinite(br.efficiency) and np.isfinite(bv.efficiency):
            pairs.append((f"eta_{br.outcome.value}", float(bv.efficiency), br.efficiency))
    worst = 0.0
    for name, closed, brute in pairs:
        err = abs(closed - brute)
        if not err <= tol:
            raise ConsistencyError(
                f"{name}: closed form {closed!r} vs matrix path {brute!r} at a={a}, a'={a_prime}")
        worst = max(worst, err)
    return worst
