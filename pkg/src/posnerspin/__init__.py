"""Nuclear-spin dynamics of entangled molecular clusters.

The package models pairs of identical molecules whose spin-1/2 sites start
in a shared singlet, evolves them exactly under Zeeman plus scalar-coupling
Hamiltonians, and reports entanglement and coherence of observed site pairs,
scalar-relaxation lifetimes, and transition spectra.
"""

from ._version import __version__
from .config import ExperimentConfig, config_sha256
from .dynamics import (
    EigenPropagator,
    PairState,
    STPopulations,
    TimeGrid,
    brute_force_pair,
    evolve_state,
    pair_reduced_density,
    pair_series,
    singlet_triplet_populations,
)
from .errors import (
    ConfigError,
    DimensionGuardError,
    PosnerSpinError,
    UnknownPresetError,
)
from .experiments import (
    PRESETS,
    RunResult,
    Table,
    TimeSeries,
    preset_variants,
    run,
    run_to_files,
    sweep,
)
from .hamiltonian import (
    GAMMA_BAR_MHZ_PER_T,
    CouplingMatrix,
    FieldSpec,
    build_hamiltonian,
    coupling_topology,
    pair_coupling,
    phosphate_hydrogen_system,
    posner_system,
)
from .measures import coherence_bi, concurrence, von_neumann_entropy
from .relaxation import (
    IsotopeCase,
    ScalarRelaxationInput,
    ScalarRelaxationResult,
    isotope_comparison,
    larmor,
    scalar_relaxation,
)
from .spincore import (
    EigenDecomposition,
    Operator,
    SpinSite,
    SpinSystem,
    eigh,
    embed,
    identity,
    partial_trace,
    spin_operators,
)
from .transitions import (
    CouplingSpec,
    SpectrumRow,
    TransitionOperator,
    decompose,
    frequency_spectrum,
)

__all__ = [
    "__version__",
    "ConfigError",
    "CouplingMatrix",
    "CouplingSpec",
    "DimensionGuardError",
    "EigenDecomposition",
    "EigenPropagator",
    "ExperimentConfig",
    "FieldSpec",
    "GAMMA_BAR_MHZ_PER_T",
    "IsotopeCase",
    "Operator",
    "PRESETS",
    "PairState",
    "PosnerSpinError",
    "RunResult",
    "STPopulations",
    "ScalarRelaxationInput",
    "ScalarRelaxationResult",
    "SpectrumRow",
    "SpinSite",
    "SpinSystem",
    "Table",
    "TimeGrid",
    "TimeSeries",
    "TransitionOperator",
    "UnknownPresetError",
    "brute_force_pair",
    "build_hamiltonian",
    "coherence_bi",
    "concurrence",
    "config_sha256",
    "coupling_topology",
    "decompose",
    "eigh",
    "embed",
    "evolve_state",
    "frequency_spectrum",
    "identity",
    "isotope_comparison",
    "larmor",
    "pair_coupling",
    "pair_reduced_density",
    "pair_series",
    "partial_trace",
    "phosphate_hydrogen_system",
    "posner_system",
    "preset_variants",
    "run",
    "run_to_files",
    "scalar_relaxation",
    "singlet_triplet_populations",
    "spin_operators",
    "sweep",
    "von_neumann_entropy",
]
