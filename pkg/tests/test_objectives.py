"""Unit tests for fidelity objectives, input-state distributions and the
adaptive quadrature used for expected fidelities."""

import math

import numpy as np
import pytest
from scipy import integrate

from noisy_euler import (
    BlochState,
    EulerAngles,
    InitialStateDistribution,
    NoiseParams,
    bloch_from_statevector,
    bloch_to_density,
    compose_zyz,
    expected_fidelity,
    expected_fidelity_gradient,
    extract_euler,
    fidelity,
    named_gate,
    noisy_gate_stepwise,
    prep_fidelity,
    state_fidelity,
)

HADAMARD = extract_euler(named_gate("h"))


def random_angles(rng):
    return EulerAngles(*rng.uniform(-math.pi, math.pi, 3))


def random_state(rng):
    return BlochState(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))


# ---------------------------------------------------------------- fidelity

def test_fidelity_matches_stepwise_oracle():
    """Independent route: noiseless target output via matrix algebra, trial
    output via the stepwise channel simulation."""
    rng = np.random.default_rng(0)
    for _ in range(300):
        target, trial = random_angles(rng), random_angles(rng)
        state = random_state(rng)
        params = NoiseParams.from_lambdas(rng.uniform(0, 0.5), rng.uniform(0, 0.5))
        psi_t = compose_zyz(target) @ state.state_vector()
        rho = noisy_gate_stepwise(trial, bloch_to_density(state), params)
        oracle = float(np.real(psi_t.conj() @ rho @ psi_t))
        assert abs(fidelity(target, trial, state, params) - oracle) < 1e-13


def test_fidelity_bounds_and_perfect_case():
    rng = np.random.default_rng(2)
    for _ in range(200):
        target, trial = random_angles(rng), random_angles(rng)
        state = random_state(rng)
        params = NoiseParams.from_lambdas(rng.uniform(0, 1), rng.uniform(0, 1))
        f = fidelity(target, trial, state, params)
        assert 0.0 <= f <= 1.0
    noiseless = NoiseParams.from_lambda(0.0)
    target = random_angles(rng)
    assert fidelity(target, target, random_state(rng), noiseless) > 1.0 - 1e-14


def test_fidelity_orthogonal_target_is_zero():
    noiseless = NoiseParams.from_lambda(0.0)
    identity = EulerAngles(0.0, 0.0, 0.0)
    x_gate = extract_euler(named_gate("x"))
    # acting on |0>: identity keeps |0>, X reaches |1>
    assert fidelity(x_gate, identity, BlochState(0.0, 0.0), noiseless) < 1e-14


def test_prep_fidelity_matches_state_route():
    rng = np.random.default_rng(4)
    for _ in range(100):
        target = random_state(rng)
        beta, gamma = rng.uniform(-math.pi, math.pi, 2)
        params = NoiseParams.from_lambdas(rng.uniform(0, 0.3), rng.uniform(0, 0.3))
        rho = noisy_gate_stepwise(
            EulerAngles(beta, gamma, 0.0),
            bloch_to_density(BlochState(0.0, 0.0)),
            params,
        )
        oracle = state_fidelity(target, rho)
        assert abs(prep_fidelity(target, beta, gamma, params) - oracle) < 1e-13


def test_prep_fidelity_noiseless_seed_is_one():
    rng = np.random.default_rng(6)
    p0 = NoiseParams.from_lambda(0.0)
    for _ in range(50):
        t = random_state(rng)
        assert prep_fidelity(t, t.phi, t.theta, p0) > 1.0 - 1e-13


# ----------------------------------------------------------- distributions

def test_point_constructor_canonicalizes():
    d = InitialStateDistribution.point(-0.4, 1.0)
    assert d.kind == "point"
    assert abs(d.theta - 0.4) < 1e-15


def test_cap_constructor_validation():
    with pytest.raises(ValueError):
        InitialStateDistribution.spherical_cap(0.0)
    with pytest.raises(ValueError):
        InitialStateDistribution.spherical_cap(3.5)
    with pytest.raises(ValueError):
        InitialStateDistribution.spherical_cap(math.nan)


@pytest.mark.parametrize("dist", [
    InitialStateDistribution.uniform_sphere(),
    InitialStateDistribution.spherical_cap(0.7),
    InitialStateDistribution.spherical_cap(math.pi),
])
def test_density_normalized(dist):
    # integrate only over the cap: the density drops to zero outside and the
    # step would defeat the adaptive integrator
    total, err = integrate.dblquad(
        lambda phi, theta: float(dist.density(theta, phi)),
        0.0, dist.theta_max - 1e-15, 0.0, 2 * math.pi,
    )
    assert abs(total - 1.0) < 1e-8


def test_point_density_raises():
    with pytest.raises(ValueError):
        InitialStateDistribution.point(0.1, 0.2).density(0.1, 0.2)


def test_cap_sampling_stays_inside_and_matches_cdf():
    rng = np.random.default_rng(8)
    dist = InitialStateDistribution.spherical_cap(0.9)
    theta, phi = dist.sample(rng, 20000)
    assert theta.max() <= 0.9 + 1e-12
    assert theta.min() >= 0.0
    assert phi.min() >= 0.0 and phi.max() < 2 * math.pi
    # cos(theta) uniform on [cos(theta_max), 1]
    u = (1.0 - np.cos(theta)) / (1.0 - math.cos(0.9))
    hist, _ = np.histogram(u, bins=20, range=(0, 1))
    chi2 = np.sum((hist - 1000.0) ** 2 / 1000.0)
    assert chi2 < 60  # 19 dof, p ~ 3e-6 false-alarm bound


def test_uniform_sampling_moments():
    rng = np.random.default_rng(10)
    theta, _ = InitialStateDistribution.uniform_sphere().sample(rng, 50000)
    z = np.cos(theta)
    assert abs(z.mean()) < 4.0 / math.sqrt(3 * 50000) * 3
    assert abs((z ** 2).mean() - 1.0 / 3.0) < 0.01


def test_point_sampling_is_constant():
    rng = np.random.default_rng(12)
    theta, phi = InitialStateDistribution.point(0.3, 0.4).sample(rng, 5)
    assert np.all(theta == 0.3) and np.all(phi == 0.4)


# ------------------------------------------------------- expected fidelity

def test_point_expected_fidelity_equals_fidelity():
    rng = np.random.default_rng(14)
    for _ in range(50):
        target, trial = random_angles(rng), random_angles(rng)
        state = random_state(rng)
        params = NoiseParams.from_lambdas(rng.uniform(0, 0.3), rng.uniform(0, 0.3))
        dist = InitialStateDistribution.point(state.theta, state.phi)
        assert expected_fidelity(target, trial, dist, params) == fidelity(
            target, trial, state, params
        )


@pytest.mark.parametrize("dist", [
    InitialStateDistribution.uniform_sphere(),
    InitialStateDistribution.spherical_cap(0.6),
])
def test_expected_fidelity_matches_scipy_dblquad(dist):
    rng = np.random.default_rng(16)
    target, trial = random_angles(rng), random_angles(rng)
    params = NoiseParams.from_lambdas(0.08, 0.03)

    def integrand(phi, theta):
        f = fidelity(target, trial, BlochState(theta, phi), params)
        return f * float(dist.density(theta, phi))

    ref, err = integrate.dblquad(
        integrand, 0.0, dist.theta_max, 0.0, 2 * math.pi,
        epsabs=1e-10, epsrel=1e-10,
    )
    got = expected_fidelity(target, trial, dist, params)
    assert abs(got - ref) < 1e-6


def test_monte_carlo_agrees_with_quadrature():
    rng = np.random.default_rng(18)
    target, trial = random_angles(rng), random_angles(rng)
    params = NoiseParams.from_lambda(0.05)
    dist = InitialStateDistribution.uniform_sphere()
    exact = expected_fidelity(target, trial, dist, params)
    n = 40000
    mc = expected_fidelity(
        target, trial, dist, params, mode="monte-carlo", mc_samples=n, rng=5
    )
    # fidelity values live in [0, 1], so SD <= 0.5
    assert abs(mc - exact) < 3 * 0.5 / math.sqrt(n)


def test_monte_carlo_deterministic_given_seed():
    target = HADAMARD
    trial = EulerAngles(0.1, 1.4, 3.0)
    params = NoiseParams.from_lambda(0.02)
    dist = InitialStateDistribution.spherical_cap(1.0)
    a = expected_fidelity(target, trial, dist, params, mode="monte-carlo", rng=7)
    b = expected_fidelity(target, trial, dist, params, mode="monte-carlo", rng=7)
    assert a == b


def test_expected_fidelity_mode_validation():
    dist = InitialStateDistribution.uniform_sphere()
    params = NoiseParams.from_lambda(0.1)
    with pytest.raises(ValueError):
        expected_fidelity(HADAMARD, HADAMARD, dist, params, mode="trapezoid")


# ---------------------------------------------------------------- gradient

def test_gradient_matches_coarse_finite_difference():
    """FD gradient at the default step agrees with an independent wider-step
    Richardson-style reference built from expected_fidelity calls."""
    rng = np.random.default_rng(20)
    target = HADAMARD
    trial = EulerAngles(0.3, 1.2, 2.5)
    params = NoiseParams.from_lambda(0.05)
    dist = InitialStateDistribution.spherical_cap(1.2)
    grad = expected_fidelity_gradient(target, trial, dist, params)
    x = np.array([trial.beta, trial.gamma, trial.delta])
    h = 1e-4
    for i in range(3):
        def f(v):
            return expected_fidelity(
                target, EulerAngles(v[0], v[1], v[2]), dist, params
            )
        hi1, lo1, hi2, lo2 = x.copy(), x.copy(), x.copy(), x.copy()
        hi1[i] += h
        lo1[i] -= h
        hi2[i] += 2 * h
        lo2[i] -= 2 * h
        # 4th-order central difference
        ref = (8 * (f(hi1) - f(lo1)) - (f(hi2) - f(lo2))) / (12 * h)
        assert abs(grad[i] - ref) < 1e-6 + 1e-4 * abs(ref)


def test_gradient_point_distribution():
    rng = np.random.default_rng(22)
    target, trial = random_angles(rng), random_angles(rng)
    state = random_state(rng)
    params = NoiseParams.from_lambda(0.03)
    dist = InitialStateDistribution.point(state.theta, state.phi)
    grad = expected_fidelity_gradient(target, trial, dist, params)
    h = 1e-6
    x = np.array([trial.beta, trial.gamma, trial.delta])
    for i in range(3):
        hi, lo = x.copy(), x.copy()
        hi[i] += h
        lo[i] -= h
        ref = (
            fidelity(target, EulerAngles(*hi), state, params)
            - fidelity(target, EulerAngles(*lo), state, params)
        ) / (2 * h)
        assert abs(grad[i] - ref) < 1e-12


def test_target_angles_stationary_under_uniform_average():
    """For an isotropic input distribution the exact decomposition is a
    stationary point of the expected fidelity, at any damping level."""
    rng = np.random.default_rng(24)
    dist = InitialStateDistribution.uniform_sphere()
    for lam in (1e-3, 1e-2, 1e-1):
        params = NoiseParams.from_lambda(lam)
        for _ in range(5):
            target = random_angles(rng)
            grad = expected_fidelity_gradient(target, target, dist, params)
            assert np.linalg.norm(grad) < 1e-5
