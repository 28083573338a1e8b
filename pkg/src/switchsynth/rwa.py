"""Reach-while-avoiding operators for a single location's flow.

``rwa_may(F, U, V)``: points from which some straight-line chain of flow
activities reaches ``U`` without touching ``V`` strictly before.
``rwa_must(F, U, V)``: points from which every activity reaches ``U`` and
none touches ``V`` up to and including the arrival time.
"""

from dataclasses import dataclass

from .geometry import (
    ConvexPoly, DimensionMismatch, Region, as_region, boundary, closure, convex_difference, disjoint,
    is_bounded_wrt, is_empty, poly_includes, pospref, preflow, reduce_region, region_complement,
    region_difference, region_includes, region_intersect, region_preflow, region_union,
)


class IterationBoundExceeded(AssertionError):
    """The may-fixpoint ran longer than its proven bound: an engine bug."""


@dataclass(frozen=True)
class EntryRegionTrace:
    iteration: int
    source: ConvexPoly  # piece of the complement of V
    target: ConvexPoly  # piece of the current under-approximation
    entry: Region
    added: Region


def _entry_contribution(P, clP, Q, clQ, F):
    """``(entry region, P & preflow(entry))`` for one pair, or None."""
    if disjoint(clP, clQ):
        return None
    bound = boundary(P, Q)
    if bound.is_empty():
        return None
    entry = region_intersect(bound, preflow(Q, F))
    if entry.is_empty():
        return None
    added = region_intersect(P, region_preflow(entry, F))
    return entry, added


def tau(U, V, W, F, vbar=None):
    """One refinement step: ``U`` plus, for every piece ``P`` of the
    complement of ``V`` and every piece ``P'`` of ``W``, the part of ``P``
    that flows into the entry region from ``P`` to ``P'``.

    ``vbar`` fixes the decomposition of the complement of ``V``.
    """
    U, V, W = as_region(U), as_region(V), as_region(W)
    if vbar is None:
        vbar = region_complement(V).pieces
    pieces = list(U.pieces)
    vcl = [closure(P) for P in vbar]
    for Q in W.pieces:
        clQ = closure(Q)
        for P, clP in zip(vbar, vcl):
            got = _entry_contribution(P, clP, Q, clQ, F)
            if got is not None:
                pieces.extend(got[1].pieces)
    return reduce_region(Region(U.space, pieces))


def _merge(W, new):
    """Union of two reduced regions without re-comparing pieces of ``W``
    against each other."""
    extra = [p for p in new.pieces if not any(poly_includes(q, p) for q in W.pieces)]
    if not extra:
        return W
    kept = [q for q in W.pieces if not any(poly_includes(p, q) for p in extra)]
    return Region(W.space, kept + extra)


def rwa_may(F, U, V, trace=None, stats=None):
    """Least fixpoint of :func:`tau` starting from ``U``.

    Contributions are accumulated: each round only pairs with pieces of the
    under-approximation that are new since the previous round, since the
    contribution of a pair only grows with its target piece.  If ``trace``
    is a list, an :class:`EntryRegionTrace` is appended per nonempty entry
    region.  If ``stats`` is a dict, ``iterations`` and ``bound`` are set.
    """
    U, V = as_region(U), as_region(V)
    if U.space != V.space:
        raise DimensionMismatch(f"{U.space} vs {V.space}")
    U = reduce_region(U)
    vbar = region_complement(V).pieces
    vcl = [closure(P) for P in vbar]
    bound = len(vbar) + 1

    W = U
    seen = set()
    fresh = list(W.pieces)
    iterations = 0
    while True:
        iterations += 1
        if iterations > bound:
            raise IterationBoundExceeded(
                f"may-fixpoint not reached after {bound} rounds "
                f"({len(vbar)} pieces in the avoid complement)")
        added = []
        for Q in fresh:
            seen.add(Q.constraints)
            clQ = closure(Q)
            for P, clP in zip(vbar, vcl):
                got = _entry_contribution(P, clP, Q, clQ, F)
                if got is None:
                    continue
                entry, piece = got
                added.extend(piece.pieces)
                if trace is not None and not piece.is_empty():
                    trace.append(EntryRegionTrace(iterations, P, Q, entry, piece))
        new = reduce_region(Region(U.space, added))
        if region_includes(W, new):
            break
        W = _merge(W, new)
        fresh = [Q for Q in W.pieces if Q.constraints not in seen]
    if stats is not None:
        stats["iterations"] = iterations
        stats["bound"] = bound
    return W


def ru(G, F):
    """Trim ``G`` so that every piece is bounded w.r.t. ``cl(F)`` or thin
    w.r.t. ``F``: unbounded pieces lose the points that can stay inside
    for a positive time."""
    G = as_region(G)
    out = []
    for P in G.pieces:
        if is_empty(P):
            continue
        if is_bounded_wrt(P, F):
            out.append(P)
        else:
            out.extend(convex_difference(P, pospref(P, F)))
    return reduce_region(Region(G.space, out))


def rwa_must(F, U, V, literal_target=False):
    """Points from which every activity reaches ``U`` while avoiding ``V``.

    With ``O = ru(~U & ~V)`` the result is ``(U - V) | (O - rwa_may(T, U))``
    where the escape target ``T`` is ``(~O - U) | V``.  ``literal_target``
    uses ``~O | V`` instead; since ``U`` lies inside ``~O`` that variant
    treats arrival in ``U`` as an escape and collapses to ``U - V``.  It is
    kept only to demonstrate the difference.
    """
    U, V = as_region(U), as_region(V)
    O = ru(region_intersect(region_complement(U), region_complement(V)), F)
    Obar = region_complement(O)
    if literal_target:
        target = region_union(Obar, V)
    else:
        target = region_union(region_difference(Obar, U), V)
    escape = rwa_may(F, target, U)
    return region_union(region_difference(U, V), region_difference(O, escape))
