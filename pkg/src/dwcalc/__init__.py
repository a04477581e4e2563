"""Exact calculator for finite gauge theories on small manifolds."""

from .action import ActionValue, CoefficientEmbedding, Theory, action_value, coboundary_shift
from .cocycles import GroupCocycle, check_cocycle, enumerate_classes_small
from .fields import GaugeField, Presentation, enumerate_homs, flat_fields_on_complex, orbit_decomposition
from .groups import FiniteGroup, build_group
from .scalars import CyclotomicScalar, cyclotomic_polynomial
from .tqft import (
    Bordism, ClosedManifoldJob, StateSpace, bordism_matrix, compose, dim_via_torus, disjoint_union,
    partition_closed, partition_product_formula, state_space,
)

__all__ = [
    "ActionValue", "Bordism", "ClosedManifoldJob", "CoefficientEmbedding", "CyclotomicScalar",
    "FiniteGroup", "GaugeField", "GroupCocycle", "Presentation", "StateSpace", "Theory",
    "action_value", "bordism_matrix", "build_group", "check_cocycle", "coboundary_shift", "compose",
    "cyclotomic_polynomial", "dim_via_torus", "disjoint_union", "enumerate_classes_small",
    "enumerate_homs", "flat_fields_on_complex", "orbit_decomposition", "partition_closed",
    "partition_product_formula", "state_space",
]
