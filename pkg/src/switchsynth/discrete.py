"""Predecessors under discrete transitions."""

from .geometry import (
    DimensionMismatch, Region, as_region, eliminate, embed, intersect, is_empty, rebase,
    reduce_region, region_intersect,
)
from .model import CONTROLLABLE, UNCONTROLLABLE, SymStateSet

_KINDS = {"c": CONTROLLABLE, "u": UNCONTROLLABLE,
          CONTROLLABLE: CONTROLLABLE, UNCONTROLLABLE: UNCONTROLLABLE}


def jump_preimage(mu, Z):
    """Valuations with some ``mu``-successor in ``Z``.

    ``mu`` is over ``X + X'``, ``Z`` over ``X``.
    """
    mu, Z = as_region(mu), as_region(Z)
    n = Z.space.dim
    if mu.space.dim != 2 * n:
        raise DimensionMismatch(f"jump over {mu.space.dim} variables, target over {n}")
    J = mu.space
    primed_pos = list(range(n, 2 * n))
    lifted = [embed(z, J, primed_pos) for z in Z.pieces if not is_empty(z)]
    keep = list(range(n))
    pieces = []
    for m in mu.pieces:
        for z in lifted:
            both = intersect(m, z)
            if is_empty(both):
                continue
            pieces.append(rebase(eliminate(both, primed_pos), Z.space, keep))
    return reduce_region(Region(Z.space, pieces))


def jump_image(mu, R):
    """Valuations reachable from ``R`` by one ``mu`` jump."""
    mu, R = as_region(mu), as_region(R)
    n = R.space.dim
    J = mu.space
    lifted = [embed(r, J, list(range(n))) for r in R.pieces if not is_empty(r)]
    primed = list(range(n, 2 * n))
    pieces = []
    for m in mu.pieces:
        for r in lifted:
            both = intersect(m, r)
            if not is_empty(both):
                pieces.append(rebase(eliminate(both, range(n)), R.space, primed))
    return reduce_region(Region(R.space, pieces))


def pre_may(H, kind, A):
    """States where some ``kind`` transition is enabled that leads into ``A``."""
    kind = _KINDS[kind]
    out = {}
    for loc in H.locations:
        pieces = []
        for e in H.transitions:
            if e.source != loc.name or e.kind != kind:
                continue
            target = A.get(e.target)
            if target.is_empty():
                continue
            pieces.extend(jump_preimage(e.jump, target).pieces)
        if pieces:
            R = region_intersect(loc.invariant, reduce_region(Region(H.space, pieces)))
            if R.pieces:
                out[loc.name] = R
    return SymStateSet(H.space, out)


def full_complement(H, A):
    """Complement of ``A`` in every location, against the whole space."""
    return A.complement(H.location_names())


def pre_must(H, kind, A):
    """States where some ``kind`` transition is enabled and all of them lead
    into ``A``."""
    return pre_may(H, kind, A).difference(pre_may(H, kind, full_complement(H, A)))
