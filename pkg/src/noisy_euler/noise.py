"""Amplitude/phase damping noise model for the two-pulse native gate.

Decoherence is modeled as amplitude damping (probability lambda_a) composed
with phase damping (probability lambda_p), attached once after each of the two
physical R_x(+-pi/2) pulses; virtual R_z rotations are noiseless.  For a gate
of duration t_star on a qubit with relaxation times T1, T2,

    lambda_a = 1 - exp(-t_star / T1)
    lambda_p = 1 - exp(-t_star / T2).

Amplitude damping Kraus operators:

    A0 = [[1, 0], [0, sqrt(1 - lambda_a)]],  A1 = [[0, sqrt(lambda_a)], [0, 0]]

phase damping Kraus operators:

    P0 = [[1, 0], [0, sqrt(1 - lambda_p)]],  P1 = [[0, 0], [0, sqrt(lambda_p)]]

The composite channel has the closed form (for trace-1 input)

    N(rho) = [[rho00 (1-la) + la,            rho01 sqrt(1-la) sqrt(1-lp)],
              [rho10 sqrt(1-la) sqrt(1-lp),  rho11 (1-la)]].

``noisy_gate_stepwise`` applies the native decomposition pulse by pulse and
works for arbitrary (mixed) inputs; ``noisy_gate_closed_form`` evaluates the
equivalent closed-form output state for a pure Bloch-sphere input.  The two
routes agree to ~1e-15 and are both kept as independent implementations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .gates import BlochState, EulerAngles, rx, rz, validate_density_matrix

# Damping probabilities are clamped to [0, 1 - 1e-15] so sqrt(1 - lambda)
# never vanishes exactly and extreme drift factors stay finite.
LAMBDA_MAX = 1.0 - 1e-15


def _clamp(lam: float) -> float:
    return min(max(lam, 0.0), LAMBDA_MAX)


def damping_probabilities(t1: float, t2: float, t_star: float) -> tuple[float, float]:
    """(lambda_a, lambda_p) = (1 - e^{-t*/T1}, 1 - e^{-t*/T2}).

    Times must share a unit; T1, T2 > 0 and t_star >= 0.
    """
    for name, val in (("t1", t1), ("t2", t2), ("t_star", t_star)):
        if not math.isfinite(val):
            raise ValueError(f"{name} must be finite")
    if t1 <= 0 or t2 <= 0:
        raise ValueError("T1 and T2 must be positive")
    if t_star < 0:
        raise ValueError("t_star must be non-negative")
    return _clamp(-math.expm1(-t_star / t1)), _clamp(-math.expm1(-t_star / t2))


@dataclass(frozen=True)
class NoiseParams:
    """Per-pulse damping probabilities, optionally carrying the times that
    produced them.  Construct via ``from_times`` or ``from_lambdas``."""

    lambda_a: float
    lambda_p: float
    t1: float | None = None
    t2: float | None = None
    t_star: float | None = None

    def __post_init__(self) -> None:
        for name in ("lambda_a", "lambda_p"):
            lam = getattr(self, name)
            if not math.isfinite(lam) or lam < 0.0 or lam > 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
            object.__setattr__(self, name, _clamp(lam))

    @classmethod
    def from_times(cls, t1: float, t2: float, t_star: float) -> "NoiseParams":
        la, lp = damping_probabilities(t1, t2, t_star)
        return cls(la, lp, t1=t1, t2=t2, t_star=t_star)

    @classmethod
    def from_lambdas(cls, lambda_a: float, lambda_p: float) -> "NoiseParams":
        return cls(lambda_a, lambda_p)

    @classmethod
    def from_lambda(cls, lam: float) -> "NoiseParams":
        """Equal amplitude and phase damping probability."""
        return cls(lam, lam)

    def assuming_drift(self, k: float) -> "NoiseParams":
        """Noise parameters a calibration-time optimizer assumes when the
        system's true coherence times are k times the assumed ones.

        Assumed T = system T / k, equivalently assumed lambda =
        1 - (1 - lambda_sys)^k; k = 1 returns an identical model.
        """
        if not math.isfinite(k) or k <= 0:
            raise ValueError("drift factor k must be positive and finite")
        if self.t1 is not None and self.t2 is not None and self.t_star is not None:
            return NoiseParams.from_times(self.t1 / k, self.t2 / k, self.t_star)
        la = -math.expm1(k * math.log1p(-self.lambda_a)) if self.lambda_a < 1 else 1.0
        lp = -math.expm1(k * math.log1p(-self.lambda_p)) if self.lambda_p < 1 else 1.0
        return NoiseParams.from_lambdas(_clamp(la), _clamp(lp))


def amplitude_damping_kraus(lambda_a: float) -> list[np.ndarray]:
    """Kraus operators {A0, A1} of amplitude damping."""
    return [
        np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - lambda_a)]], dtype=complex),
        np.array([[0.0, math.sqrt(lambda_a)], [0.0, 0.0]], dtype=complex),
    ]


def phase_damping_kraus(lambda_p: float) -> list[np.ndarray]:
    """Kraus operators {P0, P1} of phase damping."""
    return [
        np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - lambda_p)]], dtype=complex),
        np.array([[0.0, 0.0], [0.0, math.sqrt(lambda_p)]], dtype=complex),
    ]


def apply_channel(rho: np.ndarray, params: NoiseParams) -> np.ndarray:
    """Closed-form amplitude-then-phase damping of a density matrix."""
    rho = validate_density_matrix(rho)
    return _channel_unchecked(rho, params.lambda_a, params.lambda_p)


def _channel_unchecked(rho: np.ndarray, la: float, lp: float) -> np.ndarray:
    off = math.sqrt(1.0 - la) * math.sqrt(1.0 - lp)
    return np.array(
        [
            [rho[0, 0] * (1.0 - la) + la, rho[0, 1] * off],
            [rho[1, 0] * off, rho[1, 1] * (1.0 - la)],
        ]
    )


def apply_channel_kraus(rho: np.ndarray, params: NoiseParams) -> np.ndarray:
    """Kraus-sum route: sum_i P_i (sum_j A_j rho A_j^dag) P_i^dag.

    Independent of ``apply_channel``; kept as the oracle implementation.
    """
    rho = validate_density_matrix(rho)
    amp = sum(a @ rho @ a.conj().T for a in amplitude_damping_kraus(params.lambda_a))
    return sum(p @ amp @ p.conj().T for p in phase_damping_kraus(params.lambda_p))


def noisy_gate_stepwise(
    angles: EulerAngles, rho: np.ndarray, params: NoiseParams
) -> np.ndarray:
    """Pulse-by-pulse noisy application of the native decomposition.

    rho1 = N(R_x(pi/2) R_z(delta) rho R_z(delta)^dag R_x(pi/2)^dag)
    rho2 = N(R_x(-pi/2) R_z(gamma) rho1 R_z(gamma)^dag R_x(-pi/2)^dag)
    out  = R_z(beta) rho2 R_z(beta)^dag

    Accepts arbitrary mixed input states.
    """
    rho = validate_density_matrix(rho)
    la, lp = params.lambda_a, params.lambda_p
    u1 = _RX_PLUS @ rz(angles.delta)
    rho = _channel_unchecked(u1 @ rho @ u1.conj().T, la, lp)
    u2 = _RX_MINUS @ rz(angles.gamma)
    rho = _channel_unchecked(u2 @ rho @ u2.conj().T, la, lp)
    u3 = rz(angles.beta)
    return u3 @ rho @ u3.conj().T


_RX_PLUS = rx(0.5 * math.pi)
_RX_MINUS = rx(-0.5 * math.pi)


def _closed_form_entries(
    beta: float,
    gamma: float,
    delta: float,
    theta: float,
    phi: float,
    la: float,
    lp: float,
):
    """(rho00, rho01) of the noisy native gate acting on |psi(theta, phi)>.

    Scalar fast path used inside optimizer loops; the vectorized twin below
    evaluates the same expressions over node arrays.
    """
    ea = math.sqrt(1.0 - la)
    ep = math.sqrt(1.0 - lp)
    sg, cg = math.sin(gamma), math.cos(gamma)
    st, ct = math.sin(theta), math.cos(theta)
    cpd, spd = math.cos(phi + delta), math.sin(phi + delta)
    a = 0.5 * ((-sg * cpd * st + cg * ct) * (1.0 - la) * ea * ep + 1.0 + la)
    b = (cmath.exp(-1j * beta) / 2.0) * (
        (cpd * cg * st + sg * ct) * (1.0 - la) * (1.0 - lp)
        - 1j * (spd * st * (1.0 - la) + la) * ea * ep
    )
    return a, b


def _closed_form_entries_arrays(
    beta: float,
    gamma: float,
    delta: float,
    theta: np.ndarray,
    phi: np.ndarray,
    la: float,
    lp: float,
):
    """Vectorized twin of ``_closed_form_entries`` over node arrays."""
    ea = math.sqrt(1.0 - la)
    ep = math.sqrt(1.0 - lp)
    sg, cg = math.sin(gamma), math.cos(gamma)
    st, ct = np.sin(theta), np.cos(theta)
    cpd, spd = np.cos(phi + delta), np.sin(phi + delta)
    a = 0.5 * ((-sg * cpd * st + cg * ct) * (1.0 - la) * ea * ep + 1.0 + la)
    b = (cmath.exp(-1j * beta) / 2.0) * (
        (cpd * cg * st + sg * ct) * (1.0 - la) * (1.0 - lp)
        - 1j * (spd * st * (1.0 - la) + la) * ea * ep
    )
    return a, b


def noisy_gate_closed_form(
    angles: EulerAngles, state: BlochState, params: NoiseParams
) -> np.ndarray:
    """Closed-form output density matrix of the noisy native gate on a pure
    input state; agrees with ``noisy_gate_stepwise`` to machine precision."""
    a, b = _closed_form_entries(
        angles.beta,
        angles.gamma,
        angles.delta,
        state.theta,
        state.phi,
        params.lambda_a,
        params.lambda_p,
    )
    return np.array([[a, b], [b.conjugate(), 1.0 - a]])


def calibration_fidelity(alpha: float, params: NoiseParams, sign: int = 1) -> float:
    """Survival of |0> through R_x(alpha), one decoherence step, then the
    recovery pulse R_x(sign * pi/2):

        F(alpha) = 1/2 (1 + sign * sqrt(1-la) sqrt(1-lp) sin(alpha))

    maximized at alpha = sign * pi/2.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return 0.5 * (
        1.0
        + sign
        * math.sqrt(1.0 - params.lambda_a)
        * math.sqrt(1.0 - params.lambda_p)
        * math.sin(alpha)
    )
