"""Noise-aware single-qubit gate decomposition.

Any single-qubit unitary factors into virtual z-rotations around two fixed
x-axis pulses:

    U = e^{i alpha} Rz(beta) Rx(-pi/2) Rz(gamma) Rx(pi/2) Rz(delta)

With amplitude and phase damping attached to each physical pulse the three
z-angles stop being equivalent bookkeeping: different (beta, gamma, delta)
realizing the same unitary route the state differently through the noise.
This package computes the damping model in closed form, optimizes the angles
for a known initial state (or a distribution of them), and provides
randomized-benchmarking and sweep harnesses plus a CLI on top.
"""

from .gates import (
    BlochState,
    EulerAngles,
    NAMED_GATES,
    apply_unitary,
    bloch_from_statevector,
    bloch_to_density,
    compose_native,
    compose_zyz,
    extract_euler,
    named_gate,
    rx,
    ry,
    rz,
    state_fidelity,
    validate_density_matrix,
)
from .noise import (
    LAMBDA_MAX,
    NoiseParams,
    amplitude_damping_kraus,
    apply_channel,
    apply_channel_kraus,
    calibration_fidelity,
    damping_probabilities,
    noisy_gate_closed_form,
    noisy_gate_stepwise,
    phase_damping_kraus,
)
from .objectives import (
    InitialStateDistribution,
    NumericalAccuracyError,
    expected_fidelity,
    expected_fidelity_gradient,
    fidelity,
    prep_fidelity,
)
from .optimize import (
    OptimizationResult,
    OptimizerConfig,
    optimize_gate,
    optimize_gate_mixed,
    optimize_prep,
)
from .calibration import (
    BUNDLED_DEVICES,
    DeviceSpec,
    DeviceSpecError,
    QubitSpec,
    apply_readout_error,
    bundled_device,
    confusion_matrix,
    load_device_spec,
    mitigate_readout,
    noise_params_for,
    parse_device_spec,
)
from .rb import (
    DecayFit,
    RbArmResult,
    RbConfig,
    RbRunResult,
    build_inverse_gate,
    fit_decay,
    run_drift_sweep,
    run_rb_experiment,
    sample_random_gate,
)
from .experiments import (
    SweepConfig,
    SweepResult,
    SweepRow,
    knowledge_sweep,
    prep_improvement_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BlochState",
    "EulerAngles",
    "NAMED_GATES",
    "apply_unitary",
    "bloch_from_statevector",
    "bloch_to_density",
    "compose_native",
    "compose_zyz",
    "extract_euler",
    "named_gate",
    "rx",
    "ry",
    "rz",
    "state_fidelity",
    "validate_density_matrix",
    "LAMBDA_MAX",
    "NoiseParams",
    "amplitude_damping_kraus",
    "apply_channel",
    "apply_channel_kraus",
    "calibration_fidelity",
    "damping_probabilities",
    "noisy_gate_closed_form",
    "noisy_gate_stepwise",
    "phase_damping_kraus",
    "InitialStateDistribution",
    "NumericalAccuracyError",
    "expected_fidelity",
    "expected_fidelity_gradient",
    "fidelity",
    "prep_fidelity",
    "OptimizationResult",
    "OptimizerConfig",
    "optimize_gate",
    "optimize_gate_mixed",
    "optimize_prep",
    "BUNDLED_DEVICES",
    "DeviceSpec",
    "DeviceSpecError",
    "QubitSpec",
    "apply_readout_error",
    "bundled_device",
    "confusion_matrix",
    "load_device_spec",
    "mitigate_readout",
    "noise_params_for",
    "parse_device_spec",
    "DecayFit",
    "RbArmResult",
    "RbConfig",
    "RbRunResult",
    "build_inverse_gate",
    "fit_decay",
    "run_drift_sweep",
    "run_rb_experiment",
    "sample_random_gate",
    "SweepConfig",
    "SweepResult",
    "SweepRow",
    "knowledge_sweep",
    "prep_improvement_sweep",
    "__version__",
]
