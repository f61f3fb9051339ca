"""Stoquasticity checks for 2-local qubit Hamiltonians under local basis changes."""

from .pauli import (
    TOLERANCE,
    EdgeData,
    Hamiltonian,
    ModelError,
    Rotation3,
    SearchCapError,
    SignedPermutation,
    all_signed_permutations,
    apply_rotations,
    apply_signed_permutations,
    clifford_rotations,
    extract_edge_data,
    is_real_fixed_basis,
    is_z_matrix_2q,
)
from .two_qubit import (
    SpecialCase,
    StandardForm,
    TripleInvariants,
    TwoQubitDecision,
    decide_stoquastic_2q,
    field_ising_edge,
    is_real_locally,
    region_scan,
    scan_to_csv,
    standard_form,
    triple_invariants,
)
from .decompose import (
    BipartiteVerdict,
    Decomposition,
    Rejection,
    cone_membership,
    uniform_bipartite_stoquastic,
    uniform_edge_data,
)
from .xyz import (
    IsingInstance,
    QuotientGraph,
    RankComponent,
    WeightedInteractionGraph,
    XyzDecision,
    build_graph,
    build_heterogeneous,
    build_quotient,
    decide_xyz,
    ising_exact_sat,
    ising_from_heterogeneous,
    label_check,
    rank_components,
    solve_signs,
    translate_ising,
)
from .oracle import (
    DenseHamiltonian,
    brute_force_clifford,
    dense_hamiltonian,
    dense_z_check,
    pi_reduction,
    random_xyz,
)
from .rxc3 import (
    Rxc3Instance,
    clifford_realness,
    exact_cover,
    exact_cover_exists,
    hamiltonian_from_rxc3,
    parse_rxc3,
)

__all__ = [
    "TOLERANCE",
    "EdgeData",
    "Hamiltonian",
    "ModelError",
    "Rotation3",
    "SearchCapError",
    "SignedPermutation",
    "all_signed_permutations",
    "apply_rotations",
    "apply_signed_permutations",
    "clifford_rotations",
    "extract_edge_data",
    "is_real_fixed_basis",
    "is_z_matrix_2q",
    "SpecialCase",
    "StandardForm",
    "TripleInvariants",
    "TwoQubitDecision",
    "decide_stoquastic_2q",
    "field_ising_edge",
    "is_real_locally",
    "region_scan",
    "scan_to_csv",
    "standard_form",
    "triple_invariants",
    "BipartiteVerdict",
    "Decomposition",
    "Rejection",
    "cone_membership",
    "uniform_bipartite_stoquastic",
    "uniform_edge_data",
    "IsingInstance",
    "QuotientGraph",
    "RankComponent",
    "WeightedInteractionGraph",
    "XyzDecision",
    "build_graph",
    "build_heterogeneous",
    "build_quotient",
    "decide_xyz",
    "ising_exact_sat",
    "ising_from_heterogeneous",
    "label_check",
    "rank_components",
    "solve_signs",
    "translate_ising",
    "DenseHamiltonian",
    "brute_force_clifford",
    "dense_hamiltonian",
    "dense_z_check",
    "pi_reduction",
    "random_xyz",
    "Rxc3Instance",
    "clifford_realness",
    "exact_cover",
    "exact_cover_exists",
    "hamiltonian_from_rxc3",
    "parse_rxc3",
]
