import numpy as np
import pytest

from switchengine import analytic, engine
from switchengine.errors import InfeasibleError
from switchengine.states import Family, InitialStateSpec, xi_max


def test_delta_sigma():
    ds = analytic.delta_sigma(0.3, 0.6, 1.0)
    t = np.tanh(1.0)
    p = 0.3 * 0.6 * (1 + t) / 2
    n = 0.7 * 0.4 * (1 - t) / 2
    assert ds.delta == pytest.approx(n - p)
    assert ds.sigma == pytest.approx(n + p)


@pytest.mark.parametrize("zeta", [0.0, 0.3, 1.0])
def test_abar_inc_ordering_of_weights(zeta):
    # the weight 1 - q multiplies the a' - a tilt in the other ordering; only one matches
    be, th, a, ap = 0.8, 0.7, 0.2, 0.9
    spec = InitialStateSpec(Family.SEPARABLE, theta=th, zeta0=max(zeta, 0.5), zeta1=0.1,
                            beta_eps=be)
    closed = analytic.abar_inc(spec.family, th, spec.zetas, a, ap, be)
    brute = engine.incoherent_cycle(a, ap, spec).a_bar_inc
    assert closed == pytest.approx(brute, abs=1e-13)
    t = np.tanh(be)
    z0, z1 = spec.zetas
    q = (z0 * (1 + t) + z1 * (1 - t)) / 2
    swapped = (a + ap) / 2 + (0.5 - q) * (ap - a) * np.cos(th)
    assert abs(swapped - brute) > 1e-3


def test_cross_check_runs_for_each_family():
    be = 1 / 1.65
    for spec in (InitialStateSpec(), InitialStateSpec(Family.SEPARABLE, zeta1=0.3),
                 InitialStateSpec(Family.ENTANGLED, xi=0.7 * xi_max(be), varphi=1.0)):
        assert analytic.cross_check(spec, 0.35, 0.55, 0.4) < 1e-10


def test_golden_max():
    x, v = analytic.golden_max(lambda x: -(x - 1.3) ** 2, 0.0, 3.0)
    assert x == pytest.approx(1.3, abs=1e-6)


def test_optimize_theta_tie_prefers_smaller_angle():
    res = analytic.optimize_theta(lambda th: (np.ones_like(th), np.ones_like(th, bool)))
    assert res.theta_opt == 0.0


def test_optimize_theta_infeasible():
    with pytest.raises(InfeasibleError):
        analytic.optimize_theta(lambda th: (np.ones_like(th), np.zeros_like(th, bool)))


def test_map_cell_symmetric_point_uncorrelated():
    cell = analytic.map_cell(Family.UNCORRELATED, 0.5, 0.5, 0.1)
    assert cell["feasible"]
    assert cell["delta_eta"] > 0


def test_map_cell_infeasible_reports_zero():
    cell = analytic.map_cell(Family.UNCORRELATED, 0.0, 0.0, 10.0)
    if not cell["feasible"]:
        assert cell["delta_eta"] == 0.0


def test_separable_gain_localizes_at_half():
    vals = [analytic.map_cell(Family.SEPARABLE, a, 1 - a, 10.0)["delta_eta"]
            for a in np.linspace(0, 1, 11)]
    assert np.argmax(vals) == 5


def test_optimal_theta_clusters():
    # deep inside the coherence-dominated region the optimum is perpendicular
    res, _ = analytic.optimize_controls(Family.UNCORRELATED, 0.5, 0.5, 2.0, "eta_tilde")
    assert res.theta_opt == pytest.approx(np.pi / 2, abs=1e-3)
