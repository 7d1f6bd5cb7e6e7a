"""Exact computations with Koszul modules W(V, K) for K ⊆ ∧²V."""

from .engine import (BudgetExceeded, WqReport, fiber_dimension, hilbert_prefix,
                     is_isotropic, is_separable, is_strongly_isotropic,
                     multiplicity_lower_bound_check, resonance_points_count,
                     resonance_trivial, wq_dimension, wq_dimension_presentation)
from .fields import DEFAULT_PRIME, FieldConfig
from .linalg import (SparseMatrix, certified_rank, contains, intersect,
                     kernel_basis, rank, row_space_basis)
from .subspace import Subspace2

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "DEFAULT_PRIME", "FieldConfig", "SparseMatrix", "Subspace2",
    "WqReport", "certified_rank", "contains", "fiber_dimension", "hilbert_prefix",
    "intersect", "is_isotropic", "is_separable", "is_strongly_isotropic",
    "kernel_basis", "multiplicity_lower_bound_check", "rank", "resonance_points_count",
    "resonance_trivial", "row_space_basis", "wq_dimension", "wq_dimension_presentation",
]
