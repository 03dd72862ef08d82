"""Fidelity objectives for noise-aware gate decomposition.

``fidelity`` scores a trial decomposition (beta, gamma, delta) against a
target unitary for one known pure input state: the overlap between the target
output state and the noisy output of the trial decomposition.
``expected_fidelity`` averages that score over a distribution of input states,
either by tensor-product Gauss-Legendre quadrature or by Monte Carlo.

Supported input-state distributions:

  * point(theta, phi)        - a single known state (delta function)
  * uniform_sphere()         - p(theta, phi) = sin(theta) / (4 pi)
  * spherical_cap(theta_max) - uniform over the polar cap theta < theta_max,
                               p = sin(theta) / (2 pi (1 - cos(theta_max)))

A spherical cap with theta_max = pi is the uniform sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gates import BlochState, EulerAngles, compose_zyz
from .noise import NoiseParams, _closed_form_entries, _closed_form_entries_arrays

TWO_PI = 2.0 * math.pi


class NumericalAccuracyError(RuntimeError):
    """Raised when adaptive quadrature cannot certify the requested accuracy."""


@dataclass(frozen=True)
class InitialStateDistribution:
    """Distribution of input states on the Bloch sphere.

    Build with the ``point``, ``uniform_sphere`` or ``spherical_cap``
    constructors; ``kind`` is one of "point", "uniform", "cap".
    """

    kind: str
    theta: float = 0.0
    phi: float = 0.0
    theta_max: float = math.pi

    @classmethod
    def point(cls, theta: float, phi: float) -> "InitialStateDistribution":
        s = BlochState(theta, phi)
        return cls("point", theta=s.theta, phi=s.phi, theta_max=0.0)

    @classmethod
    def uniform_sphere(cls) -> "InitialStateDistribution":
        return cls("uniform", theta_max=math.pi)

    @classmethod
    def spherical_cap(cls, theta_max: float) -> "InitialStateDistribution":
        if not math.isfinite(theta_max) or not 0.0 < theta_max <= math.pi:
            raise ValueError("theta_max must lie in (0, pi]")
        return cls("cap", theta_max=theta_max)

    def density(self, theta, phi):
        """Probability density p(theta, phi) with measure d(theta) d(phi)."""
        if self.kind == "point":
            raise ValueError("a point distribution has no density")
        norm = TWO_PI * (1.0 - math.cos(self.theta_max))
        inside = np.asarray(theta) < self.theta_max
        return np.where(inside, np.sin(theta) / norm, 0.0)

    def sample(self, rng: np.random.Generator, n: int):
        """Draw n states; returns (theta, phi) arrays.

        Cap sampling inverts the CDF of cos(theta):
        theta = arccos(1 - u (1 - cos(theta_max))).
        """
        if self.kind == "point":
            return np.full(n, self.theta), np.full(n, self.phi)
        u = rng.uniform(0.0, 1.0, n)
        theta = np.arccos(1.0 - u * (1.0 - math.cos(self.theta_max)))
        phi = rng.uniform(0.0, TWO_PI, n)
        return theta, phi


def _target_output_state(target: EulerAngles, state: BlochState) -> np.ndarray:
    return compose_zyz(target) @ state.state_vector()


def fidelity(
    target: EulerAngles,
    trial: EulerAngles,
    state: BlochState,
    params: NoiseParams,
) -> float:
    """Overlap of the noisy trial output with the noiseless target output.

    F = <psi_t| rho_trial |psi_t> with |psi_t> = U(target) |psi(state)> and
    rho_trial the closed-form noisy output of the trial decomposition.
    Always lies in [0, 1] (floating-point overshoot is clamped).
    """
    psi_t = _target_output_state(target, state)
    a, b = _closed_form_entries(
        trial.beta,
        trial.gamma,
        trial.delta,
        state.theta,
        state.phi,
        params.lambda_a,
        params.lambda_p,
    )
    p0 = (psi_t[0].conjugate() * psi_t[0]).real
    f = a * p0 + (1.0 - a) * (1.0 - p0) + 2.0 * (psi_t[0].conjugate() * b * psi_t[1]).real
    return min(max(f, 0.0), 1.0)


def prep_fidelity(
    target_state: BlochState, beta: float, gamma: float, params: NoiseParams
) -> float:
    """Fidelity of preparing |psi(theta_t, phi_t)> from |0> with the two-angle
    decomposition (beta, gamma, 0); the noiseless preparation uses
    beta = phi_t, gamma = theta_t."""
    target = EulerAngles(target_state.phi, target_state.theta, 0.0)
    return fidelity(target, EulerAngles(beta, gamma, 0.0), BlochState(0.0, 0.0), params)


@lru_cache(maxsize=None)
def _leggauss(order: int) -> tuple[tuple[float, ...], tuple[float, ...]]:
    x, w = np.polynomial.legendre.leggauss(order)
    return tuple(x), tuple(w)


class _FixedQuadrature:
    """Tensor Gauss-Legendre rule on [0, theta_max] x [0, 2 pi], nodes frozen.

    Precomputes everything that does not depend on the trial angles, so each
    objective evaluation is a handful of vectorized operations.
    """

    def __init__(self, order: int, dist: InitialStateDistribution):
        x, w = _leggauss(order)
        x = np.asarray(x)
        w = np.asarray(w)
        tmax = dist.theta_max
        theta = 0.5 * tmax * (x + 1.0)
        wt = 0.5 * tmax * w
        phi = math.pi * (x + 1.0)
        wp = math.pi * w
        tg, pg = np.meshgrid(theta, phi, indexing="ij")
        self.theta = tg.ravel()
        self.phi = pg.ravel()
        dens = np.sin(self.theta) / (TWO_PI * (1.0 - math.cos(tmax)))
        self.weight = np.outer(wt, wp).ravel() * dens

    def integrate(
        self, target: EulerAngles, trial: EulerAngles, params: NoiseParams
    ) -> float:
        return float(np.dot(self.weight, _fidelity_nodes(target, trial, self.theta, self.phi, params)))


def _fidelity_nodes(
    target: EulerAngles,
    trial: EulerAngles,
    theta: np.ndarray,
    phi: np.ndarray,
    params: NoiseParams,
) -> np.ndarray:
    """Vectorized fidelity over node arrays (theta_i, phi_i)."""
    u = compose_zyz(target)
    c = np.cos(0.5 * theta)
    s = np.sin(0.5 * theta) * np.exp(1j * phi)
    psi0 = u[0, 0] * c + u[0, 1] * s
    psi1 = u[1, 0] * c + u[1, 1] * s
    a, b = _closed_form_entries_arrays(
        trial.beta,
        trial.gamma,
        trial.delta,
        theta,
        phi,
        params.lambda_a,
        params.lambda_p,
    )
    p0 = np.abs(psi0) ** 2
    f = a * p0 + (1.0 - a) * (1.0 - p0) + 2.0 * np.real(np.conj(psi0) * b * psi1)
    return np.clip(f, 0.0, 1.0)


_QUAD_START_ORDER = 16
_QUAD_MAX_ORDER = 128
_QUAD_CONVERGENCE = 1e-8
_QUAD_ERROR_LIMIT = 1e-7


def _adaptive_orders() -> list[int]:
    orders = []
    order = _QUAD_START_ORDER
    while order <= _QUAD_MAX_ORDER:
        orders.append(order)
        order *= 2
    return orders


@lru_cache(maxsize=64)
def _cached_rule(order: int, theta_max: float) -> _FixedQuadrature:
    return _FixedQuadrature(order, InitialStateDistribution.spherical_cap(theta_max))


def _adaptive_quadrature(
    target: EulerAngles,
    trial: EulerAngles,
    dist: InitialStateDistribution,
    params: NoiseParams,
) -> tuple[float, int]:
    """(value, certified_order): doubles the order until two successive
    estimates agree below 1e-8; the coarser order of the agreeing pair is the
    one certified.  Raises if even the capped order leaves > 1e-7."""
    history: list[tuple[int, float]] = []
    for order in _adaptive_orders():
        cur = _cached_rule(order, dist.theta_max).integrate(target, trial, params)
        if history and abs(cur - history[-1][1]) < _QUAD_CONVERGENCE:
            return cur, history[-1][0]
        history.append((order, cur))
    if len(history) >= 2 and abs(history[-1][1] - history[-2][1]) <= _QUAD_ERROR_LIMIT:
        return history[-1][1], history[-1][0]
    raise NumericalAccuracyError(
        f"quadrature did not converge below {_QUAD_ERROR_LIMIT} "
        f"by order {_QUAD_MAX_ORDER}"
    )


def expected_fidelity(
    target: EulerAngles,
    trial: EulerAngles,
    dist: InitialStateDistribution,
    params: NoiseParams,
    *,
    mode: str = "gauss",
    mc_samples: int = 4096,
    rng: np.random.Generator | int | None = None,
) -> float:
    """Average fidelity over the input-state distribution.

    A point distribution reduces exactly to ``fidelity``.  mode="gauss" uses
    adaptive tensor Gauss-Legendre quadrature; mode="monte-carlo" averages
    over ``mc_samples`` draws from ``dist`` using ``rng``.
    """
    if dist.kind == "point":
        return fidelity(target, trial, BlochState(dist.theta, dist.phi), params)
    if mode == "gauss":
        value, _ = _adaptive_quadrature(target, trial, dist, params)
        return value
    if mode == "monte-carlo":
        if mc_samples < 1:
            raise ValueError("mc_samples must be positive")
        if not isinstance(rng, np.random.Generator):
            rng = np.random.default_rng(rng)
        theta, phi = dist.sample(rng, mc_samples)
        return float(np.mean(_fidelity_nodes(target, trial, theta, phi, params)))
    raise ValueError(f"unknown quadrature mode {mode!r}")


def expected_fidelity_gradient(
    target: EulerAngles,
    trial: EulerAngles,
    dist: InitialStateDistribution,
    params: NoiseParams,
    *,
    fd_step: float = 1e-6,
) -> np.ndarray:
    """Central finite-difference gradient of the expected fidelity with
    respect to (beta, gamma, delta)."""
    x = np.array([trial.beta, trial.gamma, trial.delta])
    if dist.kind == "point":
        state = BlochState(dist.theta, dist.phi)

        def f(v: np.ndarray) -> float:
            return fidelity(target, EulerAngles(v[0], v[1], v[2]), state, params)

    else:
        # Certify the quadrature order once at the trial point and freeze it,
        # so the rule's own error cancels between the +h and -h evaluations
        # instead of polluting the difference.
        _, order = _adaptive_quadrature(target, trial, dist, params)
        rule = _cached_rule(order, dist.theta_max)

        def f(v: np.ndarray) -> float:
            return rule.integrate(target, EulerAngles(v[0], v[1], v[2]), params)

    grad = np.empty(3)
    for i in range(3):
        hi, lo = x.copy(), x.copy()
        hi[i] += fd_step
        lo[i] -= fd_step
        grad[i] = (f(hi) - f(lo)) / (2.0 * fd_step)
    return grad
