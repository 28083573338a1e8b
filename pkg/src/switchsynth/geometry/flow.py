"""Time-elapse operators for constant-slope (differential inclusion) flows.

A flow is a convex polyhedron ``F`` over the dotted variables.  Points move
along straight lines ``p + delta * c`` with ``c`` in ``F``.
"""

from functools import lru_cache

from .lp import EQ, GE, GT
from .poly import (
    Constraint, ConvexPoly, DimensionMismatch, VarSpace, closure, eliminate,
    intersect, is_empty, rebase,
)
from .region import Region, as_region, reduce_region, region_closure, region_intersect


class EmptyFlow(ValueError):
    """Raised when a location's flow polyhedron has no slope at all."""


def _check_flow(P, F):
    if P.space.dim != F.space.dim:
        raise DimensionMismatch(f"{P.space.dim}-d set with {F.space.dim}-d flow")
    if is_empty(F):
        raise EmptyFlow("flow polyhedron is empty")


def _homogenised(P, F, delta_rel):
    """Project ``{x | exists d, delta: x + d in P, d in delta*F, delta rel 0}``.

    Coordinates: x (n), d (n), delta.
    """
    n = P.space.dim
    names = tuple(P.space.names) + tuple(f"_d{i}" for i in range(n)) + ("_delta",)
    big = VarSpace(names)
    zeros = (0,) * n
    cs = []
    for c in P.constraints:
        cs.append(Constraint(c.coeffs + c.coeffs + (0,), c.const, c.rel))
    for c in F.constraints:
        cs.append(Constraint(zeros + c.coeffs + (-c.const,), 0, c.rel))
    cs.append(Constraint(zeros + zeros + (1,), 0, delta_rel))
    Q = eliminate(ConvexPoly(big, cs), range(n, 2 * n + 1))
    return rebase(Q, P.space, list(range(n)))


def pospref(P, F):
    """Points that reach ``P`` after a strictly positive delay along some
    slope of ``F``."""
    _check_flow(P, F)
    if is_empty(P):
        return ConvexPoly.empty(P.space)
    return _pospref_cached(P, F)


@lru_cache(maxsize=1 << 16)
def _pospref_cached(P, F):
    return _homogenised(P, F, GT)


@lru_cache(maxsize=4096)
def _flow_is_compact(F):
    if any(c.rel == GT for c in F.constraints):
        return False
    return _only_zero(recession_cone(F))


def _only_zero(C):
    """True iff the polyhedral cone ``C`` is empty or ``{0}``."""
    if is_empty(C):
        return True
    n = C.space.dim
    for i in range(n):
        e = [0] * n
        e[i] = 1
        for sign in (1, -1):
            ray = Constraint(tuple(sign * v for v in e), 0, GT)
            if not is_empty(ConvexPoly(C.space, C.constraints + (ray,))):
                return False
    return True


def preflow(P, F):
    """Points that reach ``P`` after some delay ``delta >= 0`` along a slope
    of ``F``.  Returns a Region (at most two pieces)."""
    _check_flow(P, F)
    if is_empty(P):
        return Region.empty(P.space)
    return _preflow_cached(P, F)


@lru_cache(maxsize=1 << 16)
def _preflow_cached(P, F):
    if _flow_is_compact(F):
        # for a closed bounded F the cone {(delta*c, delta) | delta >= 0}
        # is closed, so delta = 0 needs no separate piece
        return Region(P.space, (_homogenised(P, F, GE),))
    return reduce_region(Region(P.space, (P, pospref(P, F))))


def region_preflow(R, F):
    R = as_region(R)
    pieces = []
    for p in R.pieces:
        pieces.extend(preflow(p, F).pieces)
    return reduce_region(Region(R.space, pieces))


def region_pospref(R, F):
    R = as_region(R)
    return reduce_region(Region(R.space, [pospref(p, F) for p in R.pieces]))


def boundary(G, G2):
    """``(cl(G) & G2) | (G & cl(G2))`` with piecewise closure."""
    G, G2 = as_region(G), as_region(G2)
    left = region_intersect(region_closure(G), G2)
    right = region_intersect(G, region_closure(G2))
    return reduce_region(Region(G.space, left.pieces + right.pieces))


def recession_cone(P):
    """``{c | a.c >= 0 for each inequality, a.c == 0 for each equality}``.

    For a nonempty NNC polyhedron this is exactly the set of directions
    ``c`` such that ``p + delta*c`` stays in ``P`` for every ``p`` in ``P``
    and every ``delta >= 0``.
    """
    if is_empty(P):
        raise ValueError("recession cone of an empty polyhedron")
    cs = []
    for c in P.constraints:
        cs.append(Constraint(c.coeffs, 0, EQ if c.rel == EQ else GE))
    return ConvexPoly(P.space, cs)


def is_bounded_wrt(P, F):
    """True iff every straight line from ``P`` with slope in ``cl(F)``
    eventually leaves ``P``.

    The zero slope is a recession direction of every nonempty polyhedron, so
    this holds iff the recession cone misses ``cl(F)`` entirely.
    """
    if is_empty(P) or is_empty(F):
        raise ValueError("boundedness is only defined for nonempty inputs")
    if P.space.dim != F.space.dim:
        raise DimensionMismatch(f"{P.space.dim}-d set with {F.space.dim}-d flow")
    cone = recession_cone(P)
    return is_empty(intersect(ConvexPoly(F.space, cone.constraints), closure(F)))


def is_thin_wrt(P, F):
    """True iff every straight line with slope in ``F`` leaves ``P``
    immediately."""
    if is_empty(P) or is_empty(F):
        raise ValueError("thinness is only defined for nonempty inputs")
    return is_empty(intersect(P, pospref(P, F)))
