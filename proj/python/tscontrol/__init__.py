"""Linear dynamic systems on arbitrary time scales.

Thin wrapper over the C++ core: grids, transition matrices, Gramians, rank
tests, stability verdicts, and the document-level report generators used by
the tscontrol CLI.
"""

from tscontrol._core import (
    Grid,
    InputError,
    PreconditionError,
    __version__,
    analyze,
    controllability_gramian,
    exp_stable_integral,
    exp_stable_spectrum,
    in_stability_region,
    kalman_controllability,
    kalman_observability,
    min_energy_input,
    observability_gramian,
    pbh_controllability,
    pbh_observability,
    realize,
    reconstruct_initial_state,
    scalar_exp,
    simulate,
    simulate_document,
    stability,
    transition_matrix,
)

__all__ = [
    "Grid",
    "InputError",
    "PreconditionError",
    "__version__",
    "analyze",
    "controllability_gramian",
    "exp_stable_integral",
    "exp_stable_spectrum",
    "in_stability_region",
    "kalman_controllability",
    "kalman_observability",
    "min_energy_input",
    "observability_gramian",
    "pbh_controllability",
    "pbh_observability",
    "realize",
    "reconstruct_initial_state",
    "scalar_exp",
    "simulate",
    "simulate_document",
    "stability",
    "transition_matrix",
]
