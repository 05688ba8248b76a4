"""Rydberg-blockade STIRAP simulations: entangling adiabatic passage for two
atoms and small ensembles, with dark-state analytics, geometric phases and a
batch CLI."""

from .core import (
    BasisLabel,
    BasisMismatchError,
    NonHermitianError,
    Operator,
    StateVector,
    TWO_ATOM_BASIS,
    collective_basis,
    fidelity,
    hermitian_eigensolve,
    ladder_basis,
    parity_operator,
    register_basis,
)
from .models import (
    CollectiveModel,
    SingleAtomModel,
    TwoAtomModel,
    collective_dark_state,
    collective_hamiltonian,
    collective_hamiltonian_at,
    final_dark_state,
    jx_eigenvalues,
    jx_zero_state,
    single_atom_dark_state,
    single_atom_hamiltonian,
    two_atom_dark_state,
    two_atom_hamiltonian,
    two_atom_hamiltonian_at,
)
from .propagator import (
    AdiabaticityLostError,
    IntegratorConfig,
    PropagationError,
    SpectrumScan,
    Trajectory,
    dark_phase,
    instantaneous_spectrum,
    propagate,
)
from .pulses import (
    DriveSchedule,
    PhaseProfile,
    PulseEnvelope,
    ScheduleError,
    double_stirap,
    mixing_angle,
    stirap_schedule,
)
from .protocols import (
    GateReport,
    GhzResult,
    JxResult,
    ScanResult,
    StirapParams,
    TwoAtomResult,
    entangle_two_atoms,
    fidelity_scan,
    gamma1,
    gamma2,
    ghz_phase_eta,
    ghz_protocol,
    ghz_target,
    phase_gate,
    prepare_jx_zero,
)

__version__ = "0.1.0"
