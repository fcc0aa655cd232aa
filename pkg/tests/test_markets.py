import numpy as np
import pytest

import growthlab as gl
from growthlab.errors import KernelProducedInvalidPoint, NonPositiveEntry
from growthlab.markets import (
    audit_structure,
    cycle_kernel,
    identity_kernel,
    two_point_kernel,
    _euler_step,
)
from growthlab.rng import stream

from oracles import beta_inverse_moment, beta_moments_mc


def test_structure_conditions_on_grid(wf_spec):
    rec = audit_structure(wf_spec, n_grid=100)
    assert rec["pass"]
    assert rec["max_c_ones"] <= 1e-10
    assert rec["max_ones_c_lambda"] <= 1e-10


def test_structure_conditions_d4():
    spec = gl.wright_fisher(2.0, [0.4, 0.3, 0.2, 0.1], 1.0)
    assert audit_structure(spec, n_grid=100)["pass"]


def test_simulate_discrete_identity_kernel():
    k = identity_kernel(2)
    mu0 = gl.make_simplex_point([0.3, 0.7])
    path = gl.simulate_discrete(k, 5, mu0, 0)
    assert np.allclose(path.weights, np.tile([0.3, 0.7], (6, 1)))


def test_simulate_discrete_two_cycle():
    a, b = [0.5, 0.5], [2 / 3, 1 / 3]
    k = cycle_kernel(a, b)
    path = gl.simulate_discrete(k, 4, gl.make_simplex_point(a), 0)
    expect = np.array([a, b, a, b, a])
    assert np.abs(path.weights - expect).max() <= 1e-12


def test_simulate_discrete_rejects_invalid_kernel():
    def bad_sampler(state, rng):
        return gl.SimplexPoint(np.array([0.5, 0.5]))

    def bad_batch(state, n, rng):
        return np.tile([0.7, 0.4], (n, 1))  # sums to 1.1

    k = gl.MarkovKernel(2, lambda s, r: _BadPoint(), bad_batch)
    with pytest.raises(KernelProducedInvalidPoint):
        gl.simulate_discrete(k, 2, gl.make_simplex_point([0.5, 0.5]), 0)


class _BadPoint:
    coords = np.array([0.7, 0.4])


def test_zero_dynamics_paths_are_constant(uniform2):
    spec = gl.zero_dynamics(2)
    path = gl.simulate_diffusion(spec, 1.0, 0.01, uniform2, 3)
    assert np.abs(path.weights - 0.5).max() == 0.0
    k = gl.euler_kernel(spec, 0.01)
    y = k.batch(np.array([0.25, 0.75]), 5, stream(1, 0))
    assert np.allclose(y, [0.25, 0.75])


def test_seed_determinism_bitwise(wf_spec, uniform2):
    a = gl.simulate_diffusion(wf_spec, 2.0, 1e-3, uniform2, 42)
    b = gl.simulate_diffusion(wf_spec, 2.0, 1e-3, uniform2, 42)
    assert np.array_equal(a.weights, b.weights)
    c = gl.simulate_diffusion(wf_spec, 2.0, 1e-3, uniform2, 43)
    assert not np.array_equal(a.weights, c.weights)


def test_generic_loop_matches_fast_path(uniform2):
    """The jitted mean-reverting loop and the generic callable loop implement
    the same schemeup to fp dust over short horizons."""
    spec = gl.wright_fisher(1.5, [0.5, 0.5], 1.0)
    fast = gl.simulate_diffusion(spec, 0.1, 1e-3, uniform2, 11)
    generic = gl.DiffusionSpec(2, spec.c, spec.lam, {"model": "custom"})
    slow = gl.simulate_diffusion(generic, 0.1, 1e-3, uniform2, 11)
    assert np.abs(fast.weights - slow.weights).max() <= 1e-12


def test_euler_kernel_determinism_and_dispersion(wf_spec):
    k = gl.euler_kernel(wf_spec, 0.01)
    x = np.array([0.4, 0.6])
    y1 = k.batch(x, 4, stream(7, 0))
    y2 = k.batch(x, 4, stream(7, 0))
    y3 = k.batch(x, 4, stream(8, 0))
    assert np.array_equal(y1, y2)
    assert not np.array_equal(y1, y3)


def test_euler_kernel_one_step_mean(wf_spec):
    dt = 0.01
    k = gl.euler_kernel(wf_spec, dt)
    x = np.array([0.3, 0.7])
    y = k.batch(x, 100_000, stream(5, 0))
    drift = 1.5 * (np.array([0.5, 0.5]) - x) * dt
    se = y.std(axis=0, ddof=1) / np.sqrt(y.shape[0])
    assert np.all(np.abs(y.mean(axis=0) - (x + drift)) <= 3 * se + 1e-6)


def test_boundary_handling_reported(uniform2):
    spec = gl.wright_fisher(1.5, [0.5, 0.5], 1.0)
    path = gl.simulate_diffusion(spec, 200.0, 1e-3, uniform2, 42)
    assert path.weights.min() >= 1e-10
    assert path.meta["clip_fraction"] < 1e-3


def test_wf_long_run_beta_moments(wf_spec, uniform2):
    """Time averages against the Beta(1.5, 1.5) stationary law."""
    path = gl.simulate_diffusion(wf_spec, 2000.0, 1e-3, uniform2, 42)
    x = path.weights[::100, 0]
    se = max(gl.batch_means_se(x), 1e-4)
    assert abs(x.mean() - 0.5) <= 3 * se
    inv_series = 1.0 / path.weights[:, 0]
    target = beta_inverse_moment(1.5, 1.5)
    se_inv = gl.batch_means_se(inv_series)  # heavy tail shows up in the SE
    assert abs(inv_series.mean() - target) <= 3 * se_inv
    mc = beta_moments_mc(1.5, 1.5, 200_000, 0)
    assert abs(mc["mean"] - 0.5) <= 3 * mc["se_mean"]
    assert abs(mc["var"] - 0.0625) <= 0.002


def test_two_seed_ergodic_agreement(wf_spec, uniform2):
    k = gl.euler_kernel(wf_spec, 0.01)
    means = []
    for seed in (1, 2):
        p = gl.simulate_discrete(k, 50_000, uniform2, seed)
        means.append(p.weights[:, 0].mean())
    se = 0.25 / np.sqrt(50_000 * 0.01 * 1.5)  # mixing-rate heuristic
    assert abs(means[0] - means[1]) <= 6 * se
    for m in means:
        assert abs(m - 0.5) <= 3 * se


def test_invariant_sample_identity_kernel():
    k = identity_kernel(2)
    mu0 = gl.make_simplex_point([0.3, 0.7])
    inv = gl.invariant_sample(k, 50, 10, 2, 0, mu0=mu0)
    assert np.allclose(inv.samples, [0.3, 0.7])


def test_invariant_sample_wf_moments(wf_spec):
    inv = gl.invariant_sample(wf_spec, 10_000, 50_000, 100, 3, dt=0.01)
    x = inv.samples[:, 0]
    se = max(gl.batch_means_se(x), 1e-4)
    assert abs(x.mean() - 0.5) <= 3 * se
    var = x.var(ddof=1)
    se_var = gl.batch_means_se((x - x.mean()) ** 2)
    assert abs(var - 0.0625) <= 3 * se_var + 1e-3


def test_wf_qv_matches_integrated_diffusion(wf_spec, uniform2):
    """Pathwise quadratic variation against the Riemann sum of the model's
    diffusion coefficient, improving as the partition refines."""
    dt = 1e-3
    path = gl.simulate_diffusion(wf_spec, 20.0, dt, uniform2, 77)
    x = path.weights[:-1, 0]
    integral = np.sum(1.0 * x * (1 - x) * dt)
    errs = []
    for level, stride in ((0, 4), (1, 2), (2, 1)):
        qv = gl.quadratic_variation(path, gl.RefiningPartition(4 * dt, level))
        errs.append(abs(qv.qv[-1, 0, 0] / integral - 1.0))
    assert errs[-1] <= 0.02
    assert errs[-1] <= errs[0] + 0.01


def test_two_point_kernel_exact_batch():
    k = two_point_kernel([0.5, 0.5], [2 / 3, 1 / 3], [1 / 3, 2 / 3], 0.6)
    Y = k.batch(np.array([0.5, 0.5]), 10, None)
    assert (Y[:6] == np.array([2 / 3, 1 / 3])).all()
    assert (Y[6:] == np.array([1 / 3, 2 / 3])).all()


def test_simulate_diffusion_argument_validation(wf_spec, uniform2):
    with pytest.raises(NonPositiveEntry):
        gl.simulate_diffusion(wf_spec, 1.0, 0.0, uniform2, 0)
    with pytest.raises(NonPositiveEntry):
        gl.simulate_diffusion(wf_spec, 0.0005, 1e-3, uniform2, 0)
