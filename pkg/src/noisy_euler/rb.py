"""Randomized-benchmarking simulation for noise-aware gate decomposition.

Per circuit: sample N gates with uniform rotation axis and uniform angle.
At each scheduled depth d the net rotation of the first d gates is undone by
the two-pulse decomposition of its exact inverse (applied with the same noise
as any other gate) and the probability of measuring |0> is recorded, then the
circuit continues.  Two arms share each gate stream:

  * "unopt": every gate uses its canonically extracted Euler angles.
  * "opt":   every gate's angles are re-optimized for the noiseless state the
             ideal circuit would be in just before that gate.

Drift model: the simulated hardware always runs at the configured noise; the
optimizer instead sees the noise implied by coherence times 1/k of the true
ones (``NoiseParams.assuming_drift``).  k = 1 means calibration is exact,
k < 1 means the optimizer under-trusts the hardware, and large k drives the
assumed damping toward 1 where the optimized angles carry no information.

Survival probabilities can be corrupted by a readout confusion matrix,
sampled at a finite shot count, and optionally mitigated by inverting the
confusion matrix, in that order.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import least_squares

from .calibration import apply_readout_error, mitigate_readout
from .gates import EulerAngles, bloch_from_statevector, compose_zyz, extract_euler
from .io import fold_seed, parallel_map
from .noise import NoiseParams, noisy_gate_stepwise
from .objectives import InitialStateDistribution
from .optimize import (
    OptimizerConfig,
    optimize_gate,
    optimize_gate_mixed,
    optimizer_config_with_seed,
)

TWO_PI = 2.0 * math.pi

ARMS = ("unopt", "opt")

# Per-gate optimizations use a looser gradient tolerance than the standalone
# optimizer default.  This is the usual quasi-Newton library default, and it
# is what makes a vanishing assumed-noise model (drift factor -> 0) leave
# every gate at its seed instead of chasing O(lambda_assumed) gradients.
RB_GRADIENT_TOLERANCE = 1e-5

RB_OPTIMIZER = OptimizerConfig(gradient_tolerance=RB_GRADIENT_TOLERANCE)


@dataclass(frozen=True)
class RbConfig:
    """Configuration of one randomized-benchmarking simulation.

    shots=None measures exact probabilities (no binomial sampling).
    readout is an optional (p_meas1_prep0, p_meas0_prep1) pair; mitigate
    inverts it after shot sampling.  drift_factor k scales the coherence
    times the optimizer assumes: assumed T = true T / k.
    """

    noise: NoiseParams
    n_circuits: int = 10
    n_gates: int = 246
    depth_schedule: tuple[int, ...] = tuple(range(1, 247, 7))
    shots: int | None = None
    drift_factor: float = 1.0
    readout: tuple[float, float] | None = None
    mitigate: bool = False
    rng_seed: int = 0
    optimizer: OptimizerConfig = RB_OPTIMIZER
    track_noisy_state: bool = False

    def __post_init__(self) -> None:
        if self.n_circuits < 1:
            raise ValueError("n_circuits must be >= 1")
        if self.n_gates < 1:
            raise ValueError("n_gates must be >= 1")
        depths = tuple(int(d) for d in self.depth_schedule)
        object.__setattr__(self, "depth_schedule", depths)
        if not depths:
            raise ValueError("depth_schedule must be nonempty")
        if depths[0] < 1:
            raise ValueError("depths must be >= 1")
        if any(b <= a for a, b in zip(depths, depths[1:])):
            raise ValueError("depth_schedule must be strictly increasing")
        if depths[-1] > self.n_gates:
            raise ValueError("max depth exceeds n_gates")
        if self.shots is not None and int(self.shots) < 1:
            raise ValueError("shots must be >= 1, or None for exact probabilities")
        if self.shots is not None:
            object.__setattr__(self, "shots", int(self.shots))
        if not (math.isfinite(self.drift_factor) and self.drift_factor > 0):
            raise ValueError("drift_factor must be positive and finite")
        if self.readout is not None:
            p10, p01 = self.readout
            for name, p in (("p_meas1_prep0", p10), ("p_meas0_prep1", p01)):
                if not 0.0 <= float(p) <= 1.0:
                    raise ValueError(f"readout {name} must lie in [0, 1]")
            object.__setattr__(self, "readout", (float(p10), float(p01)))
        if self.mitigate and self.readout is None:
            raise ValueError("mitigate requires readout probabilities")


@dataclass(frozen=True)
class DecayFit:
    """Fit of survival vs depth to f(x) = (1 + e^{-a x}) / 2.

    error_rate is the per-gate error 1 - f(1); error_rate_approx is the
    small-a approximation a/2.  degenerate marks data the model cannot
    distinguish: "all-one" (a = 0) or "all-half" (a = inf).
    """

    a: float
    error_rate: float
    error_rate_approx: float
    degenerate: str | None = None


@dataclass(frozen=True, eq=False)
class RbArmResult:
    arm: str
    survivals: np.ndarray  # (n_circuits, n_depths)
    mean: np.ndarray  # (n_depths,)
    stderr: np.ndarray  # (n_depths,)
    fit: DecayFit | None


@dataclass(frozen=True, eq=False)
class RbRunResult:
    config: RbConfig
    depths: tuple[int, ...]
    unopt: RbArmResult
    opt: RbArmResult

    def arm(self, name: str) -> RbArmResult:
        if name == "unopt":
            return self.unopt
        if name == "opt":
            return self.opt
        raise KeyError(f"unknown arm {name!r}; expected 'unopt' or 'opt'")


def _sample_axis_angle(rng: np.random.Generator) -> tuple[np.ndarray, float]:
    """Rotation axis uniform on the sphere (z uniform on [-1, 1], azimuth
    uniform) and rotation angle uniform on [0, 2 pi)."""
    z = rng.uniform(-1.0, 1.0)
    azimuth = rng.uniform(0.0, TWO_PI)
    angle = rng.uniform(0.0, TWO_PI)
    s = math.sqrt(max(0.0, 1.0 - z * z))
    axis = np.array([s * math.cos(azimuth), s * math.sin(azimuth), z])
    return axis, angle


def sample_random_gate(rng: np.random.Generator) -> EulerAngles:
    """Random rotation: uniform axis, uniform angle, as Euler angles."""
    (nx, ny, nz), angle = _sample_axis_angle(rng)
    c = math.cos(0.5 * angle)
    s = math.sin(0.5 * angle)
    u = np.array(
        [
            [c - 1j * s * nz, -s * (ny + 1j * nx)],
            [s * (ny - 1j * nx), c + 1j * s * nz],
        ],
        dtype=complex,
    )
    return extract_euler(u)


def build_inverse_gate(prefix) -> EulerAngles:
    """Euler angles of (G_d ... G_1)^dagger for a gate-sequence prefix."""
    prefix = list(prefix)
    if not prefix:
        raise ValueError("prefix must be nonempty")
    net = np.eye(2, dtype=complex)
    for gate in prefix:
        net = compose_zyz(gate) @ net
    return extract_euler(net.conj().T)


def _measure(p0: float, cfg: RbConfig, rng: np.random.Generator) -> float:
    if cfg.readout is not None:
        p0 = apply_readout_error(p0, cfg.readout[0], cfg.readout[1])
    if cfg.shots is not None:
        p0 = float(rng.binomial(cfg.shots, p0)) / cfg.shots
    if cfg.readout is not None and cfg.mitigate:
        p0, _ = mitigate_readout(p0, cfg.readout[0], cfg.readout[1])
    return float(p0)


def _optimize_step(
    cfg: RbConfig,
    target: EulerAngles,
    psi: np.ndarray,
    rho_opt: np.ndarray,
    assumed: NoiseParams,
    stream,
) -> EulerAngles:
    ocfg = optimizer_config_with_seed(cfg.optimizer, fold_seed(stream))
    if cfg.track_noisy_state:
        return optimize_gate_mixed(target, rho_opt, assumed, ocfg).angles_opt
    state = bloch_from_statevector(psi)
    dist = InitialStateDistribution.point(state.theta, state.phi)
    return optimize_gate(target, dist, assumed, ocfg).angles_opt


def _circuit_worker(cfg: RbConfig, circuit: int) -> np.ndarray:
    """Survival probabilities for one circuit: array (2, n_depths) in ARMS
    order.  All randomness derives from named streams of (rng_seed, circuit),
    so circuits are independent and order of execution is irrelevant."""
    system = cfg.noise
    assumed = system.assuming_drift(cfg.drift_factor)
    rng_gates = np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([cfg.rng_seed, circuit, 0]))
    )
    shot_rngs = {
        arm: np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([cfg.rng_seed, circuit, 1, ai]))
        )
        for ai, arm in enumerate(ARMS)
    }

    depth_set = frozenset(cfg.depth_schedule)
    out = np.empty((len(ARMS), len(cfg.depth_schedule)))
    psi = np.array([1.0, 0.0], dtype=complex)
    net = np.eye(2, dtype=complex)
    rho = {
        "unopt": np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex),
        "opt": np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex),
    }

    depth_index = 0
    for i in range(cfg.n_gates):
        gate = sample_random_gate(rng_gates)
        opt_angles = _optimize_step(
            cfg, gate, psi, rho["opt"], assumed, [cfg.rng_seed, circuit, 2, i]
        )
        rho["unopt"] = noisy_gate_stepwise(gate, rho["unopt"], system)
        rho["opt"] = noisy_gate_stepwise(opt_angles, rho["opt"], system)
        u = compose_zyz(gate)
        psi = u @ psi
        psi = psi / np.linalg.norm(psi)
        net = u @ net

        depth = i + 1
        if depth in depth_set:
            inverse = extract_euler(net.conj().T)
            inv_opt = _optimize_step(
                cfg, inverse, psi, rho["opt"], assumed, [cfg.rng_seed, circuit, 3, depth]
            )
            for ai, arm in enumerate(ARMS):
                angles = inverse if arm == "unopt" else inv_opt
                rho_final = noisy_gate_stepwise(angles, rho[arm], system)
                p0 = min(max(float(np.real(rho_final[0, 0])), 0.0), 1.0)
                out[ai, depth_index] = _measure(p0, cfg, shot_rngs[arm])
            depth_index += 1
    return out


def run_rb_experiment(cfg: RbConfig, jobs: int = 1) -> RbRunResult:
    """Simulate all circuits, reduce to per-depth means and standard errors
    per arm, and fit the decay ansatz when the schedule has >= 3 depths."""
    worker = functools.partial(_circuit_worker, cfg)
    per_circuit = parallel_map(worker, range(cfg.n_circuits), jobs)
    data = np.stack(per_circuit)  # (n_circuits, 2, n_depths)
    arms = []
    for ai, arm in enumerate(ARMS):
        survivals = data[:, ai, :]
        mean = survivals.mean(axis=0)
        if cfg.n_circuits > 1:
            stderr = survivals.std(axis=0, ddof=1) / math.sqrt(cfg.n_circuits)
        else:
            stderr = np.zeros_like(mean)
        fit = fit_decay(cfg.depth_schedule, mean) if len(cfg.depth_schedule) >= 3 else None
        arms.append(RbArmResult(arm, survivals, mean, stderr, fit))
    return RbRunResult(cfg, cfg.depth_schedule, arms[0], arms[1])


def run_drift_sweep(cfg: RbConfig, k_values, jobs: int = 1) -> list[tuple[float, RbRunResult]]:
    """run_rb_experiment for each drift factor k; the gate streams depend
    only on rng_seed, so the unoptimized arm is identical across k."""
    results = []
    for k in k_values:
        k = float(k)
        results.append((k, run_rb_experiment(replace(cfg, drift_factor=k), jobs=jobs)))
    return results


def fit_decay(depths, fidelities) -> DecayFit:
    """Least-squares fit of f(x) = (1 + e^{-a x}) / 2, a >= 0."""
    x = np.asarray(depths, dtype=float)
    y = np.asarray(fidelities, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("depths and fidelities must be 1-D and equally long")
    if x.size < 3:
        raise ValueError("need at least 3 points to fit the decay")
    if np.any((y < 0.0) | (y > 1.0)):
        raise ValueError("fidelities must lie in [0, 1]")
    if np.all(np.abs(y - 1.0) <= 1e-9):
        return DecayFit(0.0, 0.0, 0.0, degenerate="all-one")
    if np.all(np.abs(y - 0.5) <= 1e-9):
        return DecayFit(math.inf, 0.5, math.inf, degenerate="all-half")

    def residuals(p):
        return 0.5 * (1.0 + np.exp(-p[0] * x)) - y

    # log-linear starting point: ln(2f - 1) = -a x
    z = np.clip(2.0 * y - 1.0, 1e-12, None)
    slope = np.polyfit(x, np.log(z), 1)[0]
    a0 = max(1e-12, -float(slope))
    res = least_squares(
        residuals, x0=[a0], bounds=([0.0], [np.inf]), ftol=1e-15, xtol=1e-15, gtol=1e-15
    )
    a = float(res.x[0])
    return DecayFit(a, 0.5 * -math.expm1(-a), 0.5 * a)
