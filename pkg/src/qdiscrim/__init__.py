"""Ancilla-assisted discrimination of unitary gates: constructions, certificates, search, rank reduction."""

from .certificates import (
    Certificate,
    Conclusion,
    certify_block_family,
    certify_not_r_assisted,
    classify_pauli_products,
)
from .discrimination import (
    AssistedState,
    DensityOperator,
    DiscriminationReport,
    density_to_factor,
    density_to_state,
    gram,
    max_bound,
    reduced_bound,
    state_to_density,
    verify,
)
from .gates import (
    GateSet,
    dedup_phase,
    family_block,
    family_max,
    family_sqrt_d,
    family_sqrt_rd,
    pauli_xz,
)
from .reduction import ReductionTrace, find_annihilator, reduce_step, reduce_to_rank
from .sdc import build_codebook, capacity_bound, decode, encode
from .search import SearchOptions, SearchOutcome, objective_and_gradient, search_density, search_diagonal

__version__ = "0.1.0"
