"""Shared constructors and random instance generators for the tests."""

import random
from fractions import Fraction

from switchsynth.geometry import (
    EQ, GE, GT, ConvexPoly, Region, VarSpace, is_empty, make_constraint,
)
from switchsynth.oracle import Interval
from switchsynth.parser import parse_region

X1 = VarSpace.of("x")
X2 = VarSpace.of("x", "y")
D1 = X1.dotted()
D2 = X2.dotted()


def space(dim):
    return VarSpace(tuple("xyzw"[:dim]))


def reg(text, sp=X1):
    return parse_region(text, sp)


def poly(text, sp=X1):
    R = parse_region(text, sp)
    assert len(R.pieces) == 1, f"{text!r} is not convex"
    return R.pieces[0]


def flow(text, sp=D1):
    return poly(text, sp)


def q(v):
    return Fraction(v)


# random instances

def rand_constraint(rng, dim, small=2, const=3):
    while True:
        coeffs = [rng.randint(-small, small) for _ in range(dim)]
        if any(coeffs):
            break
    rel = rng.choice([GE, GE, GT, GT, EQ]) if rng.random() < 0.9 else EQ
    if rel == EQ and rng.random() < 0.7:
        rel = GE
    return make_constraint(coeffs, rng.randint(-const, const), rel)


def rand_poly(rng, dim, k=None, nonempty=True, tries=50):
    for _ in range(tries):
        n = k if k is not None else rng.randint(1, dim + 2)
        P = ConvexPoly(space(dim), [rand_constraint(rng, dim) for _ in range(n)])
        if not nonempty or not is_empty(P):
            return P
    return ConvexPoly.universe(space(dim))


def rand_region(rng, dim, max_pieces=3):
    return Region(space(dim), [rand_poly(rng, dim) for _ in range(rng.randint(0, max_pieces))])


def rand_flow(rng, dim, allow_zero=True):
    """Box or single-direction flow in the dotted space of ``space(dim)``."""
    D = space(dim).dotted()
    if rng.random() < 0.5:
        c = [rng.randint(-2, 2) for _ in range(dim)]
        if not allow_zero and not any(c):
            c[rng.randrange(dim)] = 1
        cs = []
        for i, v in enumerate(c):
            e = [0] * dim
            e[i] = 1
            cs.append(make_constraint(e, v, EQ))
        return ConvexPoly(D, cs)
    cs = []
    for i in range(dim):
        lo = Fraction(rng.randint(-4, 4), 2)
        hi = lo + Fraction(rng.randint(0, 3), 2)
        if not allow_zero and lo <= 0 <= hi:
            lo, hi = (Fraction(1, 2), hi + 1) if hi >= 0 else (lo, hi)
            if lo <= 0 <= hi:
                lo = Fraction(1, 2)
        e = [0] * dim
        e[i] = 1
        cs.append(make_constraint(e, lo, GE))
        cs.append(make_constraint([-v for v in e], -hi, GE))
    return ConvexPoly(D, cs)


def rand_interval(rng):
    a = Fraction(rng.randint(-8, 8), rng.choice([1, 2]))
    b = a + Fraction(rng.randint(0, 6), rng.choice([1, 2]))
    lo = None if rng.random() < 0.1 else a
    hi = None if rng.random() < 0.1 else b
    return Interval(lo, hi, rng.random() < 0.5, rng.random() < 0.5)


def rand_1d_flow(rng):
    a = Fraction(rng.randint(-3, 3), rng.choice([1, 2]))
    b = a + rng.randint(0, 3)
    return a, b


def flow_1d(a, b):
    return ConvexPoly(D1, [((1,), a, GE), ((-1,), -b, GE)])


def seeded(seed):
    return random.Random(seed)


# cross-sections and figure geometry

XY = VarSpace.of("x", "y")


def slice_xy(R, fix):
    """Cross-section of a region over (x, y, ...) at ``fix`` = {index: value}
    for the remaining coordinates, as a region over (x, y)."""
    from switchsynth.geometry import rebase, reduce_region, substitute_values
    out = []
    for p in R.pieces:
        q = substitute_values(p, fix)
        if not is_empty(q):
            out.append(rebase(q, XY, [0, 1]))
    return reduce_region(Region(XY, out))


def convex_polygon(*verts):
    """Closed convex polygon over (x, y) from its vertices in either order."""
    n = len(verts)
    cx = sum(Fraction(v[0]) for v in verts) / n
    cy = sum(Fraction(v[1]) for v in verts) / n
    cs = []
    for i in range(n):
        (x1, y1), (x2, y2) = verts[i], verts[(i + 1) % n]
        a, b = y2 - y1, x1 - x2
        c = a * x1 + b * y1
        if a * cx + b * cy < c:
            a, b, c = -a, -b, -c
        cs.append(make_constraint((a, b), c, GE))
    return ConvexPoly(XY, cs)


def box(x0, x1, y0, y1):
    return convex_polygon((x0, y0), (x1, y0), (x1, y1), (x0, y1))
