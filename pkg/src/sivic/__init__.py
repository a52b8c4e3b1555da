"""Spin-Hamiltonian simulator and indirect-control gate synthesis for the
SiV- host nuclear spin in diamond."""

from .config import FieldSetPoint, PhysicalConstants, StrainParams, SystemConfig
from .dynamics import (
    NuclearFrame,
    SequenceModel,
    SequenceOracle,
    Trajectory,
    evolve_full,
    nuclear_bloch,
    pi_rotation,
    propagator,
    rotating_frame,
    two_level_propagator,
)
from .errors import (
    AmbiguousPairingError,
    ConfigError,
    DegenerateAxisError,
    DiagonalizationError,
    DoubletError,
    SivicError,
    SynthesisError,
)
from .gates import GateTarget, standard_gate
from .hamiltonian import (
    HamiltonianMatrix,
    HamiltonianTerms,
    OperatorSet,
    build_hamiltonian,
    build_operators,
    hamiltonian_terms,
    strain_transform,
)
from .setpoints import resolve_setpoint_b, setpoint_a, setpoint_config, setpoint_model
from .spectrum import (
    Doublet,
    QuantizationGeometry,
    Spectrum,
    TransitionPair,
    delta_theta,
    diagonalize,
    group_doublets,
    nuclear_quantization_fields,
    select_transition,
)
from .synth import (
    SynthesisOptions,
    SynthesisResult,
    VerificationReport,
    objective,
    pad_tau4,
    synthesize,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousPairingError",
    "ConfigError",
    "DegenerateAxisError",
    "DiagonalizationError",
    "Doublet",
    "DoubletError",
    "FieldSetPoint",
    "GateTarget",
    "HamiltonianMatrix",
    "HamiltonianTerms",
    "NuclearFrame",
    "OperatorSet",
    "PhysicalConstants",
    "QuantizationGeometry",
    "SequenceModel",
    "SequenceOracle",
    "SivicError",
    "Spectrum",
    "StrainParams",
    "SynthesisError",
    "SynthesisOptions",
    "SynthesisResult",
    "SystemConfig",
    "Trajectory",
    "TransitionPair",
    "VerificationReport",
    "build_hamiltonian",
    "build_operators",
    "delta_theta",
    "diagonalize",
    "evolve_full",
    "group_doublets",
    "hamiltonian_terms",
    "nuclear_bloch",
    "nuclear_quantization_fields",
    "objective",
    "pad_tau4",
    "pi_rotation",
    "propagator",
    "resolve_setpoint_b",
    "rotating_frame",
    "select_transition",
    "setpoint_a",
    "setpoint_config",
    "setpoint_model",
    "standard_gate",
    "strain_transform",
    "synthesize",
    "two_level_propagator",
    "verify",
]
