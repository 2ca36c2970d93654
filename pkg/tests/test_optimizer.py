import math

import numpy as np
import pytest

from framepot.bounds import design_bound, fekete_ratio, lifted_etf_value, welch_bound
from framepot.constructions import half_circle
from framepot.core import canonical_invariant, is_frame
from framepot.optimizer import (
    OptimizerSettings,
    _reduce,
    conjecture_interval,
    conjecture_test,
    derived_seeds,
    fp_gradient,
    minimize,
    minimize_coherence,
    sweep,
)
from framepot.potentials import coherence, fp_eval

FAST = OptimizerSettings(restarts=12, seed=5)


def numpy_energy(x, p):
    t = np.abs(x @ x.T)
    np.fill_diagonal(t, 0.0)
    return float(np.sum(t**p))


def finite_difference_gradient(x, p, h=1e-6):
    g = np.zeros_like(x)
    for idx in np.ndindex(*x.shape):
        xp, xm = x.copy(), x.copy()
        xp[idx] += h
        xm[idx] -= h
        g[idx] = (numpy_energy(xp, p) - numpy_energy(xm, p)) / (2 * h)
    return g


@pytest.mark.parametrize("p", [1.3, 2.0, 3.7, 6.0])
def test_gradient_matches_finite_differences(p):
    rng = np.random.default_rng(int(p * 10))
    for _ in range(20):
        x = rng.standard_normal((5, 3))
        x /= np.linalg.norm(x, axis=1)[:, None]
        g = fp_gradient(x, p)
        fd = finite_difference_gradient(x, p)
        assert np.linalg.norm(g - fd) / np.linalg.norm(fd) < 1e-5


def test_settings_validation():
    for bad in ({"restarts": 0}, {"armijo_beta": 1.0}, {"step_init": 0}, {"smoothing_eps": -1}, {"workers": 0}):
        with pytest.raises(ValueError):
            OptimizerSettings(**bad)


@pytest.mark.parametrize("n,d,p,expected", [
    (4, 2, 2, 4.0),
    (5, 3, 2, 25 / 3 - 5),
    (5, 2, 6, 2.8125),
    (4, 2, 0.5, 4.0),
    (4, 3, 1.0, 2.0),
    (6, 2, 1.0, 12.0),
])
def test_known_minima(n, d, p, expected):
    res = minimize(n, d, p, FAST)
    assert res.best_value == pytest.approx(expected, abs=1e-8)
    assert len(res.per_restart_values) == FAST.restarts
    assert res.best_value <= min(res.per_restart_values) + 1e-12


@pytest.mark.parametrize("n,d", [(4, 2), (5, 3)])
@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 4.0])
def test_minimizers_are_frames_and_respect_bounds(n, d, p):
    res = minimize(n, d, p, FAST)
    assert is_frame(res.best_config, 1e-8)
    assert res.best_value ** (1 / p) >= welch_bound(n, d).value - 1e-8
    if p in (2.0, 4.0):
        assert res.best_value >= design_bound(n, d, p).value - 1e-8
    assert fp_eval(res.best_config, p) == pytest.approx(res.best_value, abs=1e-12)


def test_deterministic_given_seed():
    a = minimize(5, 3, 1.7, FAST)
    b = minimize(5, 3, 1.7, FAST)
    assert a.per_restart_values == b.per_restart_values
    assert np.array_equal(a.best_config.vectors, b.best_config.vectors)
    c = minimize(5, 3, 1.7, OptimizerSettings(restarts=12, seed=6))
    assert c.per_restart_values != a.per_restart_values


def test_threaded_restarts_match_serial():
    serial = minimize(5, 2, 2.5, FAST)
    threaded = minimize(5, 2, 2.5, OptimizerSettings(restarts=12, seed=5, workers=4))
    assert serial.per_restart_values == threaded.per_restart_values


def test_tie_break_prefers_lowest_index():
    x = half_circle(3)
    results = [(x.vectors, 1.0 + 5e-13, 10, 0), (x.vectors, 1.0, 10, 0), (x.vectors, 1.0 - 1e-9, 10, 0)]
    assert _reduce(results[:2], 0, 2.0).best_restart == 0
    assert _reduce(results, 0, 2.0).best_restart == 2


def test_non_finite_restarts_discarded():
    x = half_circle(3)
    res = _reduce([(x.vectors, math.nan, 3, 3), (x.vectors, 1.5, 3, 0)], 0, 2.0)
    assert res.best_restart == 1 and res.discarded == [0]


def test_initial_configuration_is_used():
    res = minimize(4, 2, 3.0, OptimizerSettings(restarts=1, seed=0), initial=half_circle(4))
    assert res.best_value == pytest.approx(fp_eval(half_circle(4), 3.0), abs=1e-12)


def test_fewer_vectors_than_dimensions():
    res = minimize(2, 3, 1.5, FAST)
    assert res.best_value == pytest.approx(0.0, abs=1e-12)


def test_coherence_minimization():
    assert minimize_coherence(3, 2, FAST).best_value == pytest.approx(0.5, abs=1e-4)
    res = minimize_coherence(4, 2, FAST)
    assert res.best_value == pytest.approx(math.cos(math.pi / 4), abs=1e-4)
    assert coherence(res.best_config) == res.best_value
    assert minimize_coherence(3, 3, FAST).best_value == pytest.approx(0.0, abs=1e-12)


def test_sweep_rows_and_monotonicity():
    grid = np.linspace(1.0, 6.0, 11)
    res = sweep(5, 2, grid, OptimizerSettings(restarts=8, seed=1))
    assert [r[0] for r in res.rows] == list(grid)
    assert res.rows[0][3] == derived_seeds(1, 11)[0]
    values = res.values()
    assert np.all(np.diff(values) <= 1e-9)
    replay = minimize(5, 2, grid[3], OptimizerSettings(restarts=8, seed=res.rows[3][3]))
    assert replay.best_value == values[3]


def test_warm_start_sweep_against_half_circle():
    # the half circle is optimal for N = 6 at even p in (2, 10] and for p > 10;
    # between even values a doubled 3-vector frame can do better
    grid = np.linspace(2.5, 11.0, 18)
    res = sweep(6, 2, grid, OptimizerSettings(restarts=10, seed=2), warm_start=True)
    for p, value, _, _ in res.rows:
        reference = fp_eval(half_circle(6), p)
        assert value <= reference + 1e-9
        if p in (4.0, 6.0, 8.0, 10.0) or p > 10:
            assert value == pytest.approx(reference, abs=1e-8)
    below = [v for (p, v, _, _) in res.rows if p == 2.5][0]
    assert below == pytest.approx(6 + 3 * math.sqrt(2), abs=1e-9)


def test_sweep_rejects_bad_grid():
    with pytest.raises(ValueError):
        sweep(4, 2, [2.0, 1.0])
    with pytest.raises(ValueError):
        sweep(4, 2, [])


def test_fekete_ratios_of_minima_nondecreasing():
    s = OptimizerSettings(restarts=20, seed=3)
    values = [(n, minimize(n, 2, 1.5, s).best_value) for n in range(3, 9)]
    assert np.all(np.diff(fekete_ratio(values)) >= -1e-6)


def test_conjecture_interval_endpoints():
    assert conjecture_interval(3, 1) == (0.1, pytest.approx(math.log(3) / math.log(2)))
    assert conjecture_interval(3, 3)[1] == 2.0
    with pytest.raises(ValueError):
        conjecture_interval(3, 4)


def test_conjecture_report():
    rep = conjecture_test(2, 2, OptimizerSettings(seed=7))
    assert rep.trials == 50 and rep.beat_count_significant == 0
    assert lifted_etf_value(2, 2.0) == pytest.approx(design_bound(3, 2, 2).value)
    again = conjecture_test(2, 2, OptimizerSettings(seed=7))
    assert again.to_dict() == rep.to_dict()
    ps = [r["p"] for r in rep.records]
    assert ps[:5] == [rep.p_min] * 5 and ps[5:10] == [rep.p_max] * 5
    assert all(rep.p_min <= p <= rep.p_max for p in ps)


def test_result_serializes():
    d = minimize(3, 2, 2.0, OptimizerSettings(restarts=2)).to_dict()
    assert d["seed"] == 0 and len(d["canonical_invariant"]) == 3
    assert d["rng"] == "numpy.random.PCG64"
    assert np.allclose(sorted(d["canonical_invariant"]), canonical_invariant(half_circle(3)), atol=1e-6)
