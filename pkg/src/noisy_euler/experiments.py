"""Sweep studies over damping strength and initial-state knowledge.

prep_improvement_sweep: for each damping level lambda (applied as
lambda_a = lambda_p = lambda), draw target states uniformly on the Bloch
sphere, optimize the two preparation angles against the noise model, and
record the fidelity gained over the default decomposition.

knowledge_sweep: for each (lambda, theta_max) cell, draw a Haar-random target
gate, optimize its decomposition for an input state known only to lie in the
polar cap theta < theta_max (expected-fidelity objective), then draw one
actual input state from the cap and score optimized minus default fidelity on
it.  theta_max = pi means no knowledge; theta_max -> 0 reduces to preparing
the state gate|0>, whose improvement statistics match the preparation sweep
because a Haar gate sends |0> to a uniformly random state.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .gates import BlochState, EulerAngles, extract_euler
from .io import fold_seed, parallel_map
from .noise import NoiseParams
from .objectives import InitialStateDistribution, fidelity
from .optimize import (
    OptimizerConfig,
    optimize_gate,
    optimize_prep,
    optimizer_config_with_seed,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SweepConfig:
    """Grids and sample counts for the sweep studies.

    lambda_grid entries are equal amplitude/phase damping probabilities.
    theta_max_grid (knowledge sweep only) lists polar-cap sizes in (0, pi].
    targets_per_point is the number of sampled targets per grid cell.
    """

    lambda_grid: tuple[float, ...]
    targets_per_point: int = 100
    theta_max_grid: tuple[float, ...] = ()
    rng_seed: int = 0
    optimizer: OptimizerConfig = OptimizerConfig()

    def __post_init__(self) -> None:
        lams = tuple(float(v) for v in self.lambda_grid)
        object.__setattr__(self, "lambda_grid", lams)
        if not lams:
            raise ValueError("lambda_grid must be nonempty")
        if any(not (0.0 <= lam < 1.0) for lam in lams):
            raise ValueError("lambda values must lie in [0, 1)")
        caps = tuple(float(v) for v in self.theta_max_grid)
        object.__setattr__(self, "theta_max_grid", caps)
        if any(not (0.0 < tm <= math.pi + 1e-12) for tm in caps):
            raise ValueError("theta_max values must lie in (0, pi]")
        if self.targets_per_point < 1:
            raise ValueError("targets_per_point must be >= 1")


@dataclass(frozen=True)
class SweepRow:
    lam: float
    theta_max: float | None
    mean_improvement: float
    stderr: float
    n_samples: int


@dataclass(frozen=True)
class SweepResult:
    kind: str  # "prep" or "knowledge"
    config: SweepConfig
    rows: tuple[SweepRow, ...]


def _haar_gate(rng: np.random.Generator) -> EulerAngles:
    """Haar-random SU(2) element via a uniform unit quaternion."""
    v = rng.normal(size=4)
    w, x, y, z = v / np.linalg.norm(v)
    u = np.array(
        [[w - 1j * z, -y - 1j * x], [y - 1j * x, w + 1j * z]], dtype=complex
    )
    return extract_euler(u)


def _row_stats(lam: float, theta_max: float | None, imps: np.ndarray) -> SweepRow:
    n = imps.size
    stderr = float(imps.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return SweepRow(lam, theta_max, float(imps.mean()), stderr, n)


def _prep_cell(cfg: SweepConfig, item) -> SweepRow:
    li, lam = item
    params = NoiseParams.from_lambda(lam)
    imps = np.empty(cfg.targets_per_point)
    for t in range(cfg.targets_per_point):
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([cfg.rng_seed, 0, li, t]))
        )
        z = rng.uniform(-1.0, 1.0)
        phi = rng.uniform(0.0, TWO_PI)
        target = BlochState(math.acos(z), phi)
        ocfg = optimizer_config_with_seed(
            cfg.optimizer, fold_seed([cfg.rng_seed, 0, li, t, 1])
        )
        res = optimize_prep(target, params, ocfg)
        imps[t] = res.improvement
    return _row_stats(lam, None, imps)


def _knowledge_cell(cfg: SweepConfig, item) -> SweepRow:
    li, lam, mi, theta_max = item
    params = NoiseParams.from_lambda(lam)
    dist = InitialStateDistribution.spherical_cap(theta_max)
    imps = np.empty(cfg.targets_per_point)
    for r in range(cfg.targets_per_point):
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([cfg.rng_seed, 1, li, mi, r]))
        )
        target = _haar_gate(rng)
        ocfg = optimizer_config_with_seed(
            cfg.optimizer, fold_seed([cfg.rng_seed, 1, li, mi, r, 1])
        )
        res = optimize_gate(target, dist, params, ocfg)
        theta, phi = dist.sample(rng, 1)
        state = BlochState(float(theta[0]), float(phi[0]))
        imps[r] = fidelity(target, res.angles_opt, state, params) - fidelity(
            target, target, state, params
        )
    return _row_stats(lam, theta_max, imps)


def prep_improvement_sweep(cfg: SweepConfig, jobs: int = 1) -> SweepResult:
    """Mean preparation-fidelity improvement per damping level."""
    items = list(enumerate(cfg.lambda_grid))
    rows = parallel_map(functools.partial(_prep_cell, cfg), items, jobs)
    return SweepResult("prep", cfg, tuple(rows))


def knowledge_sweep(cfg: SweepConfig, jobs: int = 1) -> SweepResult:
    """Mean pointwise fidelity improvement per (lambda, theta_max) cell,
    optimizing the cap-expected fidelity and scoring on one cap sample."""
    if not cfg.theta_max_grid:
        raise ValueError("knowledge_sweep requires a nonempty theta_max_grid")
    items = [
        (li, lam, mi, theta_max)
        for li, lam in enumerate(cfg.lambda_grid)
        for mi, theta_max in enumerate(cfg.theta_max_grid)
    ]
    rows = parallel_map(functools.partial(_knowledge_cell, cfg), items, jobs)
    return SweepResult("knowledge", cfg, tuple(rows))
