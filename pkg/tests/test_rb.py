"""Unit tests for the randomized-benchmarking harness."""

import math
from dataclasses import replace

import numpy as np
import pytest
from scipy import stats

from noisy_euler import (
    DecayFit,
    EulerAngles,
    NoiseParams,
    OptimizerConfig,
    RbConfig,
    build_inverse_gate,
    compose_zyz,
    fit_decay,
    run_drift_sweep,
    run_rb_experiment,
    sample_random_gate,
)

ROME_Q3 = NoiseParams.from_times(46.4e-6, 105e-6, 35.6e-9)


def small_config(**overrides):
    base = dict(
        noise=ROME_Q3,
        n_circuits=3,
        n_gates=40,
        depth_schedule=(1, 10, 20, 30, 40),
        shots=None,
        rng_seed=5,
    )
    base.update(overrides)
    return RbConfig(**base)


# ------------------------------------------------------------ gate sampling

def test_sampled_gates_are_valid_unitaries():
    rng = np.random.default_rng(0)
    for _ in range(200):
        ang = sample_random_gate(rng)
        u = compose_zyz(ang)
        assert np.abs(u @ u.conj().T - np.eye(2)).max() < 1e-12


def test_sampled_gate_axis_and_angle_marginals():
    """Recover (rotation angle, axis z) from each gate; the generator draws
    the angle and the axis z-coordinate uniformly.

    (omega, axis) is only defined up to the flip (2 pi - omega, -axis), so
    both are canonicalized to axis_z >= 0 first; uniform marginals survive
    that quotient as uniform on [0, 2 pi) x [0, 1].
    """
    rng = np.random.default_rng(1)
    n = 30000
    omegas = np.empty(n)
    axis_z = np.empty(n)
    for i in range(n):
        ang = sample_random_gate(rng)
        v = np.exp(-1j * ang.global_phase) * compose_zyz(ang)
        c = np.clip(v.trace().real / 2.0, -1.0, 1.0)
        omega = 2.0 * math.acos(c)  # in [0, 2 pi]
        s = math.sin(omega / 2.0)
        nz = -v[0, 0].imag / s if s > 1e-9 else 0.0
        if nz < 0:
            omega, nz = 2 * math.pi - omega, -nz
        omegas[i] = omega
        axis_z[i] = nz
    for data, lo, hi in ((omegas, 0.0, 2 * math.pi), (axis_z, 0.0, 1.0)):
        hist, _ = np.histogram(data, bins=20, range=(lo, hi))
        expected = n / 20.0
        chi2 = float(np.sum((hist - expected) ** 2 / expected))
        assert chi2 < 43.8  # dof 19, p ~ 1e-3


def test_sampled_gate_image_of_zero_is_not_uniform():
    """Axis-angle sampling is not Haar: the image of |0> is biased toward
    the pole with E[cos(theta)] = 1/3."""
    rng = np.random.default_rng(2)
    n = 30000
    zs = np.empty(n)
    for i in range(n):
        u = compose_zyz(sample_random_gate(rng))
        psi = u[:, 0]
        zs[i] = 2.0 * abs(psi[0]) ** 2 - 1.0
    se = zs.std(ddof=1) / math.sqrt(n)
    assert abs(zs.mean() - 1.0 / 3.0) < 4 * se


def test_gate_stream_deterministic():
    a = [sample_random_gate(np.random.default_rng(9)) for _ in range(5)]
    b = [sample_random_gate(np.random.default_rng(9)) for _ in range(5)]
    assert a == b


# ----------------------------------------------------------------- inverse

def test_inverse_gate_undoes_prefix():
    rng = np.random.default_rng(3)
    gates = [sample_random_gate(rng) for _ in range(50)]
    net = np.eye(2, dtype=complex)
    for g in gates:
        net = compose_zyz(g) @ net
    inv = build_inverse_gate(gates)
    assert np.abs(compose_zyz(inv) @ net - np.eye(2)).max() < 1e-10


def test_inverse_gate_single():
    rng = np.random.default_rng(4)
    g = sample_random_gate(rng)
    inv = build_inverse_gate([g])
    assert np.abs(compose_zyz(inv) - compose_zyz(g).conj().T).max() < 1e-12


def test_inverse_gate_empty_prefix():
    with pytest.raises(ValueError):
        build_inverse_gate([])


# --------------------------------------------------------------- decay fit

def test_fit_decay_exact_recovery():
    depths = np.arange(1, 247, 7)
    a_true = 3.2e-3
    y = 0.5 * (1.0 + np.exp(-a_true * depths))
    fit = fit_decay(depths, y)
    assert abs(fit.a - a_true) / a_true < 1e-9
    assert abs(fit.error_rate - 0.5 * (1 - math.exp(-a_true))) < 1e-12
    assert abs(fit.error_rate_approx - a_true / 2) < 1e-12
    assert fit.degenerate is None


def test_fit_decay_steep_and_shallow():
    depths = np.arange(1, 100, 3)
    for a_true in (1e-5, 5e-2, 0.5):
        y = 0.5 * (1.0 + np.exp(-a_true * depths))
        fit = fit_decay(depths, y)
        assert abs(fit.a - a_true) / a_true < 1e-6


def test_fit_decay_tolerates_noise():
    rng = np.random.default_rng(5)
    depths = np.arange(1, 247, 7)
    a_true = 2e-3
    y = 0.5 * (1.0 + np.exp(-a_true * depths)) + rng.normal(0, 1e-4, depths.size)
    fit = fit_decay(depths, np.clip(y, 0, 1))
    assert abs(fit.a - a_true) / a_true < 0.05


def test_fit_decay_degenerate_all_one():
    fit = fit_decay([1, 5, 9], [1.0, 1.0, 1.0 - 1e-12])
    assert fit.degenerate == "all-one"
    assert fit.a == 0.0
    assert fit.error_rate == 0.0


def test_fit_decay_degenerate_all_half():
    fit = fit_decay([1, 5, 9], [0.5, 0.5 + 1e-12, 0.5])
    assert fit.degenerate == "all-half"
    assert math.isinf(fit.a)
    assert fit.error_rate == 0.5


def test_fit_decay_validation():
    with pytest.raises(ValueError):
        fit_decay([1, 2], [1.0, 0.9])  # too few points
    with pytest.raises(ValueError):
        fit_decay([1, 2, 3], [1.0, 0.9])  # length mismatch
    with pytest.raises(ValueError):
        fit_decay([1, 2, 3], [1.0, 0.9, 1.2])  # outside [0, 1]


# ------------------------------------------------------------------ config

def test_rb_config_validation():
    with pytest.raises(ValueError):
        small_config(depth_schedule=(10, 5))
    with pytest.raises(ValueError):
        small_config(depth_schedule=(1, 50))  # beyond n_gates
    with pytest.raises(ValueError):
        small_config(shots=0)
    with pytest.raises(ValueError):
        small_config(drift_factor=0.0)
    with pytest.raises(ValueError):
        small_config(readout=(1.2, 0.0))
    with pytest.raises(ValueError):
        small_config(mitigate=True)  # no readout given
    with pytest.raises(ValueError):
        small_config(n_circuits=0)


def test_rb_run_shapes_and_accessors():
    cfg = small_config()
    res = run_rb_experiment(cfg)
    assert res.depths == cfg.depth_schedule
    for arm in (res.unopt, res.opt):
        assert arm.survivals.shape == (3, 5)
        assert arm.mean.shape == (5,)
        assert arm.stderr.shape == (5,)
        assert np.all((arm.survivals >= 0.0) & (arm.survivals <= 1.0))
    assert res.arm("unopt") is res.unopt
    assert res.arm("opt") is res.opt
    with pytest.raises(KeyError):
        res.arm("middle")


# -------------------------------------------------------------- simulation

def test_noiseless_rb_survival_is_one():
    cfg = small_config(noise=NoiseParams.from_lambda(0.0), n_circuits=2)
    res = run_rb_experiment(cfg)
    for arm in (res.unopt, res.opt):
        assert np.all(arm.survivals > 1.0 - 1e-9)
        assert arm.fit.degenerate == "all-one"
        assert arm.fit.error_rate == 0.0


def test_rb_deterministic():
    cfg = small_config()
    a = run_rb_experiment(cfg)
    b = run_rb_experiment(cfg)
    assert np.array_equal(a.unopt.survivals, b.unopt.survivals)
    assert np.array_equal(a.opt.survivals, b.opt.survivals)


def test_rb_jobs_equivalence():
    cfg = small_config(n_circuits=2, n_gates=20, depth_schedule=(1, 10, 20))
    serial = run_rb_experiment(cfg, jobs=1)
    parallel = run_rb_experiment(cfg, jobs=2)
    assert np.array_equal(serial.unopt.survivals, parallel.unopt.survivals)
    assert np.array_equal(serial.opt.survivals, parallel.opt.survivals)


def test_survival_decays_with_depth():
    cfg = small_config(n_circuits=4)
    res = run_rb_experiment(cfg)
    rho, pval = stats.spearmanr(res.depths, res.unopt.mean)
    assert rho < 0
    assert pval < 0.01


def test_optimized_arm_never_worse():
    cfg = small_config(n_circuits=4)
    res = run_rb_experiment(cfg)
    combined = np.sqrt(res.unopt.stderr ** 2 + res.opt.stderr ** 2)
    assert np.all(res.opt.mean >= res.unopt.mean - 2 * combined)
    assert res.opt.fit.error_rate < res.unopt.fit.error_rate


def test_shot_sampling_unbiased():
    exact = run_rb_experiment(small_config(n_circuits=2))
    shots = 4096
    sampled = run_rb_experiment(small_config(n_circuits=2, shots=shots))
    # binomial SE per cell, combined over 2 circuits
    p = exact.unopt.survivals
    se_cells = np.sqrt(p * (1 - p) / shots)
    se = np.sqrt(np.sum(se_cells ** 2, axis=0)) / 2
    diff = np.abs(sampled.unopt.mean - exact.unopt.mean)
    assert np.all(diff <= 4 * se + 1e-12)


def test_readout_error_shifts_survival_down():
    plain = run_rb_experiment(small_config(n_circuits=2))
    noisy = run_rb_experiment(small_config(n_circuits=2, readout=(0.03, 0.08)))
    assert np.all(noisy.unopt.mean < plain.unopt.mean)
    # mitigation undoes the confusion matrix exactly when shots are exact
    fixed = run_rb_experiment(
        small_config(n_circuits=2, readout=(0.03, 0.08), mitigate=True)
    )
    assert np.abs(fixed.unopt.survivals - plain.unopt.survivals).max() < 1e-12


def test_track_noisy_state_variant_runs():
    cfg = small_config(n_circuits=2, track_noisy_state=True)
    res = run_rb_experiment(cfg)
    combined = np.sqrt(res.unopt.stderr ** 2 + res.opt.stderr ** 2)
    assert np.all(res.opt.mean >= res.unopt.mean - 2 * combined)


# ------------------------------------------------------------------- drift

def test_drift_k1_matches_plain_rb():
    cfg = small_config(n_circuits=2)
    plain = run_rb_experiment(cfg)
    (k, drifted), = run_drift_sweep(cfg, [1.0])
    assert k == 1.0
    assert np.array_equal(plain.opt.survivals, drifted.opt.survivals)
    assert np.array_equal(plain.unopt.survivals, drifted.unopt.survivals)


def test_drift_unopt_baseline_horizontal():
    """The true system noise never changes with k; only the optimizer's
    assumed rates do, so the unoptimized arm is k-independent bit for bit."""
    cfg = small_config(n_circuits=2)
    runs = run_drift_sweep(cfg, [1e-3, 1.0, 1e6])
    base = runs[0][1].unopt.survivals
    for _, result in runs[1:]:
        assert np.array_equal(result.unopt.survivals, base)


def test_drift_tiny_k_optimizer_is_noop():
    """Assumed noise ~ 1e-7 leaves every per-gate seed inside the gradient
    tolerance, so the optimized arm runs the plain decompositions."""
    cfg = small_config(n_circuits=2)
    (_, res), = run_drift_sweep(cfg, [1e-3])
    assert np.array_equal(res.opt.survivals, res.unopt.survivals)


def test_drift_huge_k_scrambles_with_multistart():
    """With assumed damping saturated the objective is flat to the ulp; the
    multistart tie-break then picks essentially random angles and deep
    circuits lose all signal (survival -> 1/2)."""
    cfg = small_config(
        n_circuits=5,
        n_gates=300,
        depth_schedule=(300,),
        optimizer=OptimizerConfig(
            gradient_tolerance=1e-5, multistart_count=8, rng_seed=0
        ),
    )
    (_, res), = run_drift_sweep(cfg, [1e6])
    assert res.opt.mean[0] < res.unopt.mean[0] - 0.05
    assert res.opt.mean[0] < 0.85


def test_drift_moderate_k_still_helps():
    cfg = small_config(n_circuits=3)
    for k in (0.5, 2.0):
        (_, res), = run_drift_sweep(cfg, [k])
        combined = np.sqrt(res.unopt.stderr ** 2 + res.opt.stderr ** 2)
        assert np.all(res.opt.mean >= res.unopt.mean - 2 * combined)
