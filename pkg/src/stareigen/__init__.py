"""Exact-arithmetic toolkit for the (n-2)-eigenspace of the Star graph S_n.

The Star graph is the Cayley graph on Sym_n generated by the transpositions
(1 i), i = 2..n.  This package builds the graph, its (n-2)-eigenfunctions and
the matrix encoding M(f) of those eigenfunctions, and checks the minimum
support results for them by direct enumeration.  All arithmetic is exact.
"""

__version__ = "0.1.0"

from stareigen.perm import (
    GraphStats,
    Permutation,
    compose,
    enumerate_perms,
    graph_stats,
    inverse,
    neighbors,
    rank,
    unrank,
)
from stareigen.eigen import (
    CoefficientVector,
    VertexFunction,
    basis_F2,
    elementary,
    elementary_coefficients,
    from_coefficients,
    is_eigenfunction,
    support,
    value_set,
    verify_basis,
)
from stareigen.matrices import (
    ColumnPartition,
    SquareMatrix,
    classify_matrix,
    classify_row,
    diagonal_sum,
    eval_via_matrix,
    find_AB_property,
    g_M,
    g_M_subset,
    has_partition_property,
    is_special,
    matrix_of,
    theta_uniform,
)
from stareigen.extremal import (
    characterize_optimum,
    check_theorem1,
    min_support_exact_dim2,
    min_support_grid,
    partition_dichotomy_check,
    random_special_matrix,
)
from stareigen.codes import (
    VertexSet,
    coset,
    decompose_as_code_difference,
    distance_partition,
    is_completely_regular,
    is_equitable,
)

__all__ = [
    "__version__",
    "GraphStats", "Permutation", "compose", "enumerate_perms", "graph_stats",
    "inverse", "neighbors", "rank", "unrank",
    "CoefficientVector", "VertexFunction", "basis_F2", "elementary",
    "elementary_coefficients", "from_coefficients", "is_eigenfunction",
    "support", "value_set", "verify_basis",
    "ColumnPartition", "SquareMatrix", "classify_matrix", "classify_row",
    "diagonal_sum", "eval_via_matrix", "find_AB_property", "g_M", "g_M_subset",
    "has_partition_property", "is_special", "matrix_of", "theta_uniform",
    "characterize_optimum", "check_theorem1", "min_support_exact_dim2",
    "min_support_grid", "partition_dichotomy_check", "random_special_matrix",
    "VertexSet", "coset", "decompose_as_code_difference", "distance_partition",
    "is_completely_regular", "is_equitable",
]
