"""Maximally multipartite entangled states of qudits.

Purity and the potential of multipartite entanglement, its Haar moments via
Feynman-graph brackets, code-based perfect states and a sphere optimizer.
"""
from .codes import LinearCode, mmes_from_code, reed_solomon, singleton_mds_check
from .core import (
    Bipartition,
    DimensionError,
    PureState,
    QuditString,
    balanced_bipartitions,
    ghz,
    qudit_string,
    read_state,
    write_state,
)
from .entanglement import (
    CouplingQuery,
    GuardExceeded,
    coupling_delta,
    coupling_delta_bruteforce,
    potential_me,
    purity,
)
from .graphs import CensusLimitError, SlotPermutation, census, graph_of_permutation, is_cactus
from .moments import exact_moment, moment_split, square_bracket
from .optimizer import OptimizerConfig, minimize_pime, sigma7_state
from .statmech import EnsembleConfig, estimate_moment, sample_haar

__version__ = "0.1.0"

__all__ = [
    "Bipartition",
    "CensusLimitError",
    "CouplingQuery",
    "DimensionError",
    "EnsembleConfig",
    "GuardExceeded",
    "LinearCode",
    "OptimizerConfig",
    "PureState",
    "QuditString",
    "SlotPermutation",
    "balanced_bipartitions",
    "census",
    "coupling_delta",
    "coupling_delta_bruteforce",
    "estimate_moment",
    "exact_moment",
    "ghz",
    "graph_of_permutation",
    "is_cactus",
    "minimize_pime",
    "mmes_from_code",
    "moment_split",
    "potential_me",
    "purity",
    "qudit_string",
    "read_state",
    "reed_solomon",
    "sample_haar",
    "sigma7_state",
    "singleton_mds_check",
    "square_bracket",
    "write_state",
]
