"""Finite unions of convex NNC polyhedra."""

from .poly import (
    ConvexPoly, DimensionMismatch, closure, conjoin, convex_difference,
    implies, intersect, is_empty, poly_includes,
)


class Region:
    """A finite union of ConvexPoly over one VarSpace.

    The decomposition is not canonical: two regions denoting the same set
    may have different pieces, so compare with :func:`region_equal`.
    """

    __slots__ = ("space", "pieces")

    def __init__(self, space, pieces=()):
        pieces = tuple(pieces)
        for p in pieces:
            if p.space != space:
                raise DimensionMismatch(f"piece over {p.space} in region over {space}")
        self.space = space
        self.pieces = pieces

    @classmethod
    def empty(cls, space):
        return cls(space, ())

    @classmethod
    def universe(cls, space):
        return cls(space, (ConvexPoly.universe(space),))

    @classmethod
    def of(cls, *polys):
        if not polys:
            raise ValueError("Region.of needs at least one piece; use Region.empty")
        return cls(polys[0].space, polys)

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)

    def contains_point(self, point):
        return any(p.contains_point(point) for p in self.pieces)

    def is_empty(self):
        return all(is_empty(p) for p in self.pieces)

    def __or__(self, other):
        return region_union(self, other)

    def __and__(self, other):
        return region_intersect(self, other)

    def __sub__(self, other):
        return region_difference(self, other)

    def __invert__(self):
        return region_complement(self)

    def __repr__(self):
        if not self.pieces:
            return "Region(false)"
        return "Region(" + " | ".join(repr(p)[len("ConvexPoly"):] for p in self.pieces) + ")"


def as_region(obj):
    return Region(obj.space, (obj,)) if isinstance(obj, ConvexPoly) else obj


def _check(a, b):
    if a.space != b.space:
        raise DimensionMismatch(f"{a.space} vs {b.space}")


def complement(P):
    """Complement of a convex polyhedron: one piece per negated constraint.

    The pieces may overlap.
    """
    if is_empty(P):
        return Region.universe(P.space)
    pieces = []
    for c in P.constraints:
        for n in c.negation():
            pieces.append(ConvexPoly(P.space, (n,)))
    return Region(P.space, pieces)


def reduce_region(R):
    """Drop empty pieces and pieces contained in another single piece.

    Set semantics are unchanged; the result is not a canonical form.
    """
    pieces = []
    seen = set()
    for p in R.pieces:
        if is_empty(p) or p.constraints in seen:
            continue
        seen.add(p.constraints)
        pieces.append(p)
    if len(pieces) < 2:
        return Region(R.space, pieces)
    kept = []
    for i, p in enumerate(pieces):
        absorbed = False
        for j, q in enumerate(pieces):
            if i == j:
                continue
            # on mutual inclusion keep the earlier piece
            if poly_includes(q, p) and (j < i or not poly_includes(p, q)):
                absorbed = True
                break
        if not absorbed:
            kept.append(p)
    return Region(R.space, kept)


def _envelope_merge(P, Q):
    """The convex union of ``P`` and ``Q`` if their envelope (constraints of
    each that the other also satisfies) is covered by them, else None."""
    if is_empty(conjoin(closure(P), closure(Q).constraints)):
        return None
    env = [c for c in P.constraints if implies(Q, c)]
    env += [c for c in Q.constraints if c not in env and implies(P, c)]
    E = ConvexPoly(P.space, env)
    if _subtract_pieces([E], Region(P.space, [P, Q])):
        return None
    return E


def coalesce(R):
    """Reduce ``R`` and repeatedly replace pairs of pieces by their convex
    union where that union is convex.  Same point set, usually fewer pieces."""
    pieces = list(reduce_region(as_region(R)).pieces)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(pieces):
            j = i + 1
            while j < len(pieces):
                m = _envelope_merge(pieces[i], pieces[j])
                if m is None:
                    j += 1
                    continue
                pieces[i] = m
                del pieces[j]
                # the grown piece may now swallow others
                pieces = pieces[:i + 1] + [q for q in pieces[i + 1:] if not poly_includes(m, q)]
                changed = True
                j = i + 1
            i += 1
    return Region(as_region(R).space, pieces)


def region_union(R, S):
    R, S = as_region(R), as_region(S)
    _check(R, S)
    return reduce_region(Region(R.space, R.pieces + S.pieces))


def region_intersect(R, S):
    R, S = as_region(R), as_region(S)
    _check(R, S)
    out = []
    for p in R.pieces:
        for q in S.pieces:
            pq = intersect(p, q)
            if not is_empty(pq):
                out.append(pq)
    return reduce_region(Region(R.space, out))


def _subtract_pieces(pieces, S):
    for q in S.pieces:
        nxt = []
        for p in pieces:
            nxt.extend(convex_difference(p, q))
        pieces = nxt
        if not pieces:
            break
    return pieces


def region_difference(R, S):
    R, S = as_region(R), as_region(S)
    _check(R, S)
    return reduce_region(Region(R.space, _subtract_pieces(list(R.pieces), S)))


def region_complement(R):
    """Set complement, as pairwise disjoint pieces."""
    R = as_region(R)
    return region_difference(Region.universe(R.space), R)


def region_includes(R, S):
    """True iff ``S`` is a subset of ``R`` (as point sets)."""
    R, S = as_region(R), as_region(S)
    _check(R, S)
    for p in S.pieces:
        if is_empty(p):
            continue
        if any(poly_includes(q, p) for q in R.pieces):
            continue
        rest = [q for q in R.pieces if not is_empty(conjoin(q, p.constraints))]
        if _subtract_pieces([p], Region(R.space, rest)):
            return False
    return True


def region_equal(R, S):
    return region_includes(R, S) and region_includes(S, R)


def region_is_empty(R):
    return as_region(R).is_empty()


def region_closure(R):
    """Union of the closures of the pieces (the topological closure of a
    finite union)."""
    R = as_region(R)
    return reduce_region(Region(R.space, [closure(p) for p in R.pieces if not is_empty(p)]))
