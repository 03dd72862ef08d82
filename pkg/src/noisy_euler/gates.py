"""Single-qubit rotations, ZYZ Euler decompositions, and Bloch-sphere helpers.

Conventions used throughout the package:

    R_z(phi)   = diag(e^{-i phi/2}, e^{i phi/2})
    R_x(theta) = exp(-i theta X / 2)
    R_y(theta) = exp(-i theta Y / 2)

so a Bloch vector rotates by the right-hand rule about the named axis.  Every
unitary U in U(2) factors as

    U = e^{i alpha} R_z(beta) R_y(gamma) R_z(delta)

and, because R_x(-pi/2) R_z(gamma) R_x(pi/2) = R_y(gamma) exactly in SU(2),
equivalently as the native five-step form

    U = e^{i alpha} R_z(beta) R_x(-pi/2) R_z(gamma) R_x(pi/2) R_z(delta)

where the two R_x(+-pi/2) factors are the only physical pulses and the three
R_z factors are virtual frame changes.

Matrices are plain complex ndarrays of shape (2, 2); pure states on the Bloch
sphere are ``BlochState(theta, phi)`` with ``|psi> = cos(theta/2)|0> +
e^{i phi} sin(theta/2)|1>``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

# Tie-break width for gamma ~ 0 or ~ pi in extract_euler, where the ZYZ
# factorization degenerates and only beta + delta (or beta - delta) is defined.
GAMMA_TIE_TOL = 1e-9

_UNITARY_TOL = 1e-10


def rz(phi: float) -> np.ndarray:
    """Rotation about the z axis: diag(e^{-i phi/2}, e^{i phi/2})."""
    h = 0.5 * phi
    return np.array([[cmath.exp(-1j * h), 0.0], [0.0, cmath.exp(1j * h)]])


def rx(theta: float) -> np.ndarray:
    """Rotation about the x axis: cos(theta/2) I - i sin(theta/2) X."""
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry(theta: float) -> np.ndarray:
    """Rotation about the y axis: cos(theta/2) I - i sin(theta/2) Y."""
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass(frozen=True)
class EulerAngles:
    """ZYZ Euler angles (beta, gamma, delta) plus a carried global phase.

    ``compose_zyz`` evaluates the angles at face value, so any real values are
    meaningful; shifting an angle by 2*pi only flips the (physically
    irrelevant) global phase.  ``extract_euler`` returns the canonical
    representative with beta, delta in [0, 2*pi), gamma in [0, pi] and
    global_phase in [0, 2*pi).
    """

    beta: float
    gamma: float
    delta: float
    global_phase: float = 0.0

    def __post_init__(self) -> None:
        for name in ("beta", "gamma", "delta", "global_phase"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"EulerAngles.{name} must be finite")

    def wrapped(self) -> "EulerAngles":
        """Wrap each angle into [0, 2*pi) without changing the noisy-pulse
        trajectory (2*pi shifts only move the global phase, absorbed here)."""
        flips = 0
        wrapped = []
        for x in (self.beta, self.gamma, self.delta):
            w = x % TWO_PI
            flips += round((x - w) / TWO_PI)
            wrapped.append(w)
        phase = (self.global_phase + math.pi * (flips % 2)) % TWO_PI
        return EulerAngles(*wrapped, global_phase=phase)

    def canonical(self) -> "EulerAngles":
        """Canonical representative of the same unitary (gamma in [0, pi]).

        Note this may select a different native-pulse trajectory for the same
        unitary; use ``wrapped`` when the trajectory must be preserved.
        """
        return extract_euler(compose_zyz(self))


@dataclass(frozen=True)
class BlochState:
    """Point on the Bloch sphere, canonicalized to theta in [0, pi],
    phi in [0, 2*pi)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("BlochState angles must be finite")
        theta = self.theta % TWO_PI
        phi = self.phi
        if theta > math.pi:
            theta = TWO_PI - theta
            phi += math.pi
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi % TWO_PI)

    def state_vector(self) -> np.ndarray:
        """|psi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
        return np.array(
            [
                math.cos(0.5 * self.theta),
                cmath.exp(1j * self.phi) * math.sin(0.5 * self.theta),
            ]
        )


def bloch_from_statevector(psi: np.ndarray) -> BlochState:
    """Bloch angles of a (not necessarily normalized) 2-vector, global phase
    dropped."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (2,):
        raise ValueError("state vector must have shape (2,)")
    norm = np.linalg.norm(psi)
    if norm < 1e-12:
        raise ValueError("state vector is numerically zero")
    a, b = psi / norm
    theta = 2.0 * math.atan2(abs(b), abs(a))
    phi = cmath.phase(b) - cmath.phase(a) if abs(b) > 0 and abs(a) > 0 else 0.0
    return BlochState(theta, phi % TWO_PI)


def compose_zyz(angles: EulerAngles) -> np.ndarray:
    """e^{i alpha} R_z(beta) R_y(gamma) R_z(delta) evaluated at face value."""
    b, g, d = angles.beta, angles.gamma, angles.delta
    c, s = math.cos(0.5 * g), math.sin(0.5 * g)
    phase = cmath.exp(1j * angles.global_phase)
    return phase * np.array(
        [
            [cmath.exp(-0.5j * (b + d)) * c, -cmath.exp(-0.5j * (b - d)) * s],
            [cmath.exp(0.5j * (b - d)) * s, cmath.exp(0.5j * (b + d)) * c],
        ]
    )


def compose_native(angles: EulerAngles) -> np.ndarray:
    """The native five-step form; identical to ``compose_zyz`` because the
    R_x(-pi/2) R_z(gamma) R_x(pi/2) = R_y(gamma) identity is exact."""
    phase = cmath.exp(1j * angles.global_phase)
    return (
        phase
        * rz(angles.beta)
        @ rx(-0.5 * math.pi)
        @ rz(angles.gamma)
        @ rx(0.5 * math.pi)
        @ rz(angles.delta)
    )


def _check_unitary(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    if np.abs(u @ u.conj().T - np.eye(2)).max() > _UNITARY_TOL:
        raise ValueError("matrix is not unitary within 1e-10")
    return u


def extract_euler(u: np.ndarray) -> EulerAngles:
    """Canonical ZYZ Euler angles of a 2x2 unitary, global phase included.

    ``compose_zyz(extract_euler(U))`` reproduces U elementwise (including the
    global phase) to ~1e-10.  At the degenerate points gamma ~ 0 or ~ pi
    (within ``GAMMA_TIE_TOL``) only the sum beta + delta (resp. difference
    beta - delta) is physical; the tie is broken by delta = 0 with the whole
    z rotation folded into beta.
    """
    u = _check_unitary(u)
    # det(e^{i alpha} V) = e^{2 i alpha} for V in SU(2)
    alpha = 0.5 * cmath.phase(np.linalg.det(u))
    v = np.exp(-1j * alpha) * u
    gamma = 2.0 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    if gamma <= GAMMA_TIE_TOL:
        beta, delta = 2.0 * cmath.phase(v[1, 1]), 0.0
    elif gamma >= math.pi - GAMMA_TIE_TOL:
        beta, delta = 2.0 * cmath.phase(v[1, 0]), 0.0
    else:
        half_sum = cmath.phase(v[1, 1])
        half_diff = cmath.phase(v[1, 0])
        beta = half_sum + half_diff
        delta = half_sum - half_diff
    # Wrap beta, delta into [0, 2*pi); each 2*pi shift flips the SU(2) sign.
    flips = 0
    bw = beta % TWO_PI
    flips += round((beta - bw) / TWO_PI)
    dw = delta % TWO_PI
    flips += round((delta - dw) / TWO_PI)
    alpha = (alpha + math.pi * (flips % 2)) % TWO_PI
    return EulerAngles(bw, gamma, dw, global_phase=alpha)


def validate_density_matrix(
    rho: np.ndarray, tol: float = 1e-9, psd_tol: float = 1e-12
) -> np.ndarray:
    """Check Hermiticity, unit trace (within ``tol``) and positivity (within
    ``psd_tol``) of a 2x2 density matrix; returns the array unchanged."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError("density matrix must be 2x2")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(rho[0, 0].real + rho[1, 1].real - 1.0) > tol:
        raise ValueError("density matrix trace differs from 1 beyond tolerance")
    # analytic 2x2 eigenvalues: m +- sqrt(m^2 - det)
    m = 0.5 * (rho[0, 0].real + rho[1, 1].real)
    det = (rho[0, 0].real * rho[1, 1].real) - (rho[0, 1] * rho[1, 0]).real
    disc = max(m * m - det, 0.0)
    if m - math.sqrt(disc) < -psd_tol:
        raise ValueError("density matrix has a negative eigenvalue beyond tolerance")
    return rho


def bloch_to_density(state: BlochState) -> np.ndarray:
    """Rank-1 projector |psi(theta, phi)><psi(theta, phi)|."""
    psi = state.state_vector()
    return np.outer(psi, psi.conj())


def apply_unitary(u: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """U rho U^dag for a validated density matrix."""
    u = _check_unitary(u)
    rho = validate_density_matrix(rho)
    return u @ rho @ u.conj().T


def state_fidelity(state: BlochState, rho: np.ndarray) -> float:
    """<psi| rho |psi> for a pure reference state; real by Hermiticity."""
    rho = validate_density_matrix(rho)
    psi = state.state_vector()
    return float(np.real(psi.conj() @ rho @ psi))


_SQRT_HALF = math.sqrt(0.5)

NAMED_GATES: dict[str, np.ndarray] = {
    "i": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]]),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "h": _SQRT_HALF * np.array([[1, 1], [1, -1]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]]),
    "t": np.array([[1, 0], [0, cmath.exp(0.25j * math.pi)]]),
    "sx": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]),
}


def named_gate(name: str) -> np.ndarray:
    """Look up a common gate by name (i, x, y, z, h, s, t, sx)."""
    try:
        return NAMED_GATES[name.lower()].copy()
    except KeyError:
        raise ValueError(
            f"unknown gate {name!r}; choose from {sorted(NAMED_GATES)}"
        ) from None
