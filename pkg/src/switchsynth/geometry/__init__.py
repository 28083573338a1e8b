"""Exact NNC polyhedra, their finite unions, and flow operators."""

from .lp import EQ, GE, GT, find_point, is_feasible
from .poly import (
    DOTTED, FALSE, PLAIN, PRIMED, TRUE, Constraint, ConvexPoly, DimensionMismatch,
    VarSpace, closure, conjoin, convex_difference, disjoint, eliminate, embed, implies,
    intersect, is_empty, make_constraint, poly_includes, project, rebase,
    remove_redundant, substitute_values, witness,
)
from .region import (
    Region, as_region, coalesce, complement, reduce_region, region_closure,
    region_complement, region_difference, region_equal, region_includes,
    region_intersect, region_is_empty, region_union,
)
from .flow import (
    EmptyFlow, boundary, is_bounded_wrt, is_thin_wrt, pospref, preflow,
    recession_cone, region_pospref, region_preflow,
)
