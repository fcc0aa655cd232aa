import numpy as np
import pytest

import growthlab as gl
from growthlab.errors import MissingQV, MissingSpec, NonPositiveReturn


def test_half_double_constant_wealth():
    path = gl.alternating_path(8)
    curve = gl.wealth_discrete(path, gl.constant_map([0.5, 0.5]))
    # per-step factors alternate 1 and 9/8
    steps = np.diff(curve.log_values)
    assert np.abs(steps[0::2]).max() <= 1e-15
    assert np.abs(steps[1::2] - np.log(9 / 8)).max() <= 1e-15
    assert abs(curve.final - 4 * np.log(9 / 8)) <= 1e-14


def test_market_map_is_numeraire_discrete():
    path = gl.bounded_ratio_path(2000, 3, seed=2)
    curve = gl.wealth_discrete(path, gl.market_map(3))
    assert abs(curve.final) <= 1e-9


def test_pure_stock_telescopes():
    path = gl.bounded_ratio_path(500, 2, seed=3)
    curve = gl.wealth_discrete(path, gl.constant_map([1.0, 0.0]))
    expect = np.log(path.weights[-1, 0] / path.weights[0, 0])
    assert abs(curve.final - expect) <= 1e-10


def test_wealth_discrete_rejects_nonpositive_factor():
    from growthlab.portfolios import pointwise_map

    path = gl.alternating_path(4)
    # a shorting rule can produce a nonpositive one-step factor; the engine
    # must refuse rather than take log of it
    shorting = pointwise_map(lambda X: np.tile([3.0, -2.0], (X.shape[0], 1)))
    with pytest.raises(NonPositiveReturn):
        gl.wealth_discrete(path, shorting)


def test_master_equation_constant_generator_is_flat(wf_path_T100):
    sub = wf_path_T100.subsample(100)
    pq = gl.quadratic_variation(sub, gl.RefiningPartition(0.1))
    G1 = gl.generator("power_product", np.zeros(2), dim=2, M=1.0, validate=False)
    curve = gl.wealth_master_equation(pq, G1)
    assert np.abs(curve.log_values).max() <= 1e-12


def test_master_equation_requires_qv(wf_path_T100):
    G = gl.generator("quadratic", [2.0, 1.0], dim=2)
    with pytest.raises(MissingQV):
        gl.wealth_master_equation(wf_path_T100, G)


def test_master_equation_quadratic_closed_form():
    # hand-checkable: Hessian = -c1 I so the drift is tr(dQV) c1 / (2 G)
    w = np.array([[0.5, 0.5], [0.6, 0.4], [0.45, 0.55]])
    path = gl.MarketPath("sampled-continuous", np.arange(3) * 1.0, w)
    pq = gl.quadratic_variation(path, gl.RefiningPartition(1.0))
    G = gl.generator("quadratic", [2.0, 1.0], dim=2)
    curve = gl.wealth_master_equation(pq, G)
    gv = G.value(w)
    drift = 0.0
    for t in range(2):
        dq = pq.qv[t + 1] - pq.qv[t]
        drift += np.trace(dq) / (2 * gv[t])
    expect = np.log(gv[-1]) - np.log(gv[0]) + drift
    assert abs(curve.final - expect) <= 1e-14
    assert np.all(curve.meta["g_increments"] >= -1e-12)


def test_master_drift_sign_concave(wf_path_T100):
    pq = gl.quadratic_variation(wf_path_T100, gl.RefiningPartition(1e-3))
    for fam, params in (("quadratic", [2.0, 1.0]), ("entropy", [1.0, 0.5]),
                        ("affine_mixture", [1.0, 1.0])):
        G = gl.generator(fam, params, dim=2)
        curve = gl.wealth_master_equation(pq, G)
        assert curve.meta["g_increments"].min() >= -1e-12


def test_engine_agreement_discrete_vs_master(wf_path_T100):
    """Same-grid master equation versus the rebalancing recursion for the
    equal-weight generated map: gap shrinks under mesh halving."""
    G = gl.generator("power_product", [0.5, 0.5], dim=2, M=16.0)
    fgm = gl.fg_map(G)
    short = gl.MarketPath(
        wf_path_T100.kind, wf_path_T100.times[:2001], wf_path_T100.weights[:2001]
    )
    diffs = []
    for stride in (4, 2, 1):
        sub = short.subsample(stride)
        pq = gl.quadratic_variation(sub, gl.RefiningPartition(1e-3 * stride))
        m = gl.wealth_master_equation(pq, G).final
        d = gl.wealth_discrete(sub, fgm).final
        diffs.append(abs(m - d))
    assert diffs[-1] <= 1e-2
    assert diffs[-1] <= diffs[0]


def test_engine_agreement_exponential_order(wf_spec, uniform2):
    """Master vs stochastic-exponential wealth on paths simulated at each
    mesh: the difference decays with empirical order >= 0.5."""
    G = gl.generator("quadratic", [2.0, 1.0], dim=2)
    fgm = gl.fg_map(G)
    dts = (8e-3, 4e-3, 2e-3, 1e-3)
    logdiff = np.zeros(len(dts))
    for seed in (1, 2, 3):
        ds = []
        for dt in dts:
            p = gl.simulate_diffusion(wf_spec, 50.0, dt, uniform2, seed)
            pq = gl.quadratic_variation(p, gl.RefiningPartition(dt))
            m = gl.wealth_master_equation(pq, G).final
            e = gl.wealth_diffusion_exponential(p, fgm, wf_spec).final
            ds.append(abs(m - e))
        logdiff += np.log(ds)
    order = np.polyfit(np.log(dts), logdiff / 3, 1)[0]
    assert order >= 0.5


def test_exponential_engine_market_map(wf_path_T100, wf_spec):
    curve = gl.wealth_diffusion_exponential(wf_path_T100, gl.market_map(2), wf_spec)
    assert abs(curve.final) <= 1e-9


def test_exponential_engine_requires_spec(wf_path_T100):
    with pytest.raises(MissingSpec):
        gl.wealth_diffusion_exponential(wf_path_T100, gl.market_map(2), None)


def test_universal_domination_exact():
    path = gl.bounded_ratio_path(300, 2, seed=8)
    mix = gl.sample_mixture("constant", 64, 5, d=2)
    u = gl.wealth_universal(path, mix)
    logs = u.meta["atom_final_logs"]
    for k in range(mix.n_atoms):
        assert u.final >= np.log(mix.weights[k]) + logs[k] - 1e-12


def test_lipschitz_in_b_bound_random_pairs():
    """Wealth of two constant vectors differs by at most the ratio-spread
    constant times their l1 distance on bounded-ratio paths."""
    rng = np.random.default_rng(10)
    for trial in range(50):
        path = gl.bounded_ratio_path(200, 2, seed=100 + trial, shock=0.3)
        R = path.ratios()
        C, c = R.max(), R.min()
        f = np.log
        for _ in range(20):
            b1 = rng.dirichlet(np.ones(2))
            b2 = rng.dirichlet(np.ones(2))
            v1 = gl.wealth_discrete(path, gl.constant_map(b1)).final / 200
            v2 = gl.wealth_discrete(path, gl.constant_map(b2)).final / 200
            bound = (np.log(C) - np.log(c)) * np.abs(b1 - b2).sum()
            assert abs(v1 - v2) <= bound + 1e-12


def test_universal_weights_at_posterior_mean():
    path = gl.alternating_path(20)
    a1 = gl.constant_map([0.7, 0.3])
    a2 = gl.constant_map([0.2, 0.8])
    mix = gl.MixtureMeasure((a1, a2), np.array([0.25, 0.75]))
    w0 = gl.universal_weights_at(path, mix, 0)
    assert np.abs(w0.coords - (0.25 * np.array([0.7, 0.3]) + 0.75 * np.array([0.2, 0.8]))).max() <= 1e-12
    single = gl.MixtureMeasure((a1,), np.array([1.0]))
    w1 = gl.universal_weights_at(path, single, 7)
    assert np.allclose(w1.coords, [0.7, 0.3])


def test_pathwise_integrator_accumulates():
    from growthlab.wealth import PathwiseIntegrator

    acc = PathwiseIntegrator(2)
    acc.add(0.1, np.array([0.01, -0.01]))
    acc.add(0.2, np.array([0.03, -0.03]))
    assert abs(acc.g_total - 0.3) <= 1e-15
    assert np.allclose(acc.returns, [0.04, -0.04])


def test_universal_weights_softmax_limit():
    times = np.arange(3, dtype=float)
    w = np.tile([0.5, 0.5], (3, 1))
    path = gl.MarketPath("discrete", times, w)
    a1 = gl.constant_map([0.9, 0.1])
    a2 = gl.constant_map([0.1, 0.9])
    mix = gl.MixtureMeasure((a1, a2), np.array([0.5, 0.5]))
    # synthetic 50-nat gap via direct mixture formula
    logs = np.array([[0.0, 25.0, 50.0], [0.0, 0.0, 0.0]])
    lw = logs + np.log(mix.weights)[:, None]
    soft = np.exp(lw[:, -1] - lw[:, -1].max())
    soft = soft / soft.sum()
    blended = soft[0] * np.array([0.9, 0.1]) + soft[1] * np.array([0.1, 0.9])
    assert np.abs(blended - [0.9, 0.1]).max() <= 1e-12
