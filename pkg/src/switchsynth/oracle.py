"""Brute-force oracles for cross-checking the reach-while-avoiding operators.

The 1-D oracle is exact and shares no geometry code with the engine: it
works on its own intervals of Fractions and only converts to a Region at
the end.  The straight-line oracle samples piecewise-straight paths on a
lattice; it can only ever confirm membership.
"""

import enum
import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

# relation codes of engine constraints (read-only use)
_EQ, _GE, _GT = 0, 1, 2


class Verdict(enum.Enum):
    WITNESS_FOUND = "witness_found"
    NO_WITNESS_IN_SAMPLE = "no_witness_in_sample"
    EXACT_YES = "exact_yes"
    EXACT_NO = "exact_no"


@dataclass(frozen=True)
class OracleVerdict:
    verdict: Verdict
    witness: tuple = None  # corner points of a witness path, ending in U

    def __bool__(self):
        return self.verdict in (Verdict.WITNESS_FOUND, Verdict.EXACT_YES)


@dataclass(frozen=True)
class Interval:
    """Interval of the rational line; ``None`` bounds are infinite."""

    lo: Fraction = None
    hi: Fraction = None
    lo_closed: bool = False
    hi_closed: bool = False

    def __contains__(self, x):
        if self.lo is not None and (x < self.lo or (x == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (x > self.hi or (x == self.hi and not self.hi_closed)):
            return False
        return True

    def is_empty(self):
        if self.lo is None or self.hi is None:
            return False
        return self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed))

    def endpoints(self):
        return [v for v in (self.lo, self.hi) if v is not None]

    @classmethod
    def closed(cls, lo, hi):
        return cls(Fraction(lo), Fraction(hi), True, True)

    @classmethod
    def point(cls, v):
        return cls.closed(v, v)

    def __str__(self):
        lo = "(-inf" if self.lo is None else ("[" if self.lo_closed else "(") + str(self.lo)
        hi = "+inf)" if self.hi is None else str(self.hi) + ("]" if self.hi_closed else ")")
        return f"{lo}, {hi}"


def _in_any(x, intervals):
    return any(x in iv for iv in intervals)


def _cells(endpoints):
    """Elementary cells, left to right: open gaps and the endpoints
    themselves.  Each is ``(Interval, representative point)``."""
    es = sorted(set(endpoints))
    if not es:
        return [(Interval(), Fraction(0))]
    cells = [(Interval(None, es[0]), es[0] - 1)]
    for i, e in enumerate(es):
        cells.append((Interval.point(e), e))
        hi = es[i + 1] if i + 1 < len(es) else None
        rep = (e + hi) / 2 if hi is not None else e + 1
        cells.append((Interval(e, hi), rep))
    return cells


def _merge(cells):
    """Union of adjacent cells as a list of maximal intervals."""
    out = []
    for iv in cells:
        if out and out[-1].hi is not None and out[-1].hi == iv.lo and (out[-1].hi_closed or iv.lo_closed):
            last = out[-1]
            out[-1] = Interval(last.lo, iv.hi, last.lo_closed, iv.hi_closed)
        else:
            out.append(iv)
    return out


def _sweep(good_here, through, order):
    """``good[c] = good_here[c] or (through[c] and good[next c])`` along
    ``order`` (cells visited last to first)."""
    good = {}
    nxt = None
    for i in reversed(order):
        good[i] = good_here[i] or (through[i] and nxt is not None and good[nxt])
        nxt = i
    return good


def _as_intervals(obj):
    """Accept a list of Interval, or an engine Region/ConvexPoly over one
    variable (read constraint by constraint)."""
    if isinstance(obj, (list, tuple)):
        return [iv for iv in obj if not iv.is_empty()]
    pieces = getattr(obj, "pieces", None)
    if pieces is None:
        pieces = (obj,)
    out = []
    for p in pieces:
        lo, hi, lc, hc = None, None, False, False
        empty = False
        for c in p.constraints:
            if not c.coeffs:
                if c.const > 0:  # the constant-false row
                    empty = True
                continue
            if len(c.coeffs) != 1:
                raise ValueError("the interval oracle only handles one variable")
            a, b = c.coeffs[0], Fraction(c.const)
            v = b / a
            strict = c.rel == _GT
            bounds = []
            if c.rel == _EQ:
                bounds = [("lo", v, True), ("hi", v, True)]
            elif a > 0:
                bounds = [("lo", v, not strict)]
            else:
                bounds = [("hi", v, not strict)]
            for side, val, cl in bounds:
                if side == "lo":
                    if lo is None or val > lo or (val == lo and not cl):
                        lo, lc = val, cl
                else:
                    if hi is None or val < hi or (val == hi and not cl):
                        hi, hc = val, cl
        iv = Interval(lo, hi, lc, hc)
        if not empty and not iv.is_empty():
            out.append(iv)
    return out


def interval_1d_oracle(flow, U, V, semantics="may"):
    """Exact reach-while-avoiding set for ``dx in [a, b]`` in one dimension.

    ``flow`` is a pair ``(a, b)`` (rationals, ``a <= b``).  ``U`` and ``V``
    are lists of :class:`Interval` or one-variable engine regions.  Returns
    a list of disjoint intervals, left to right.

    may: some activity reaches U, every earlier point is outside V or in U.
    must: every activity reaches U with every point up to arrival outside V.
    """
    a, b = (Fraction(v) for v in flow)
    if a > b:
        raise ValueError("empty flow interval")
    U, V = _as_intervals(U), _as_intervals(V)
    cells = _cells([e for iv in U + V for e in iv.endpoints()])
    in_u = [_in_any(r, U) for _, r in cells]
    in_v = [_in_any(r, V) for _, r in cells]
    idx = list(range(len(cells)))
    good = [False] * len(cells)
    if semantics == "may":
        here = in_u
        through = [not (v and not u) for u, v in zip(in_u, in_v)]
        if b > 0:
            right = _sweep(here, through, idx)
            good = [g or right[i] for i, g in enumerate(good)]
        if a < 0:
            left = _sweep(here, through, idx[::-1])
            good = [g or left[i] for i, g in enumerate(good)]
        good = [g or u for g, u in zip(good, in_u)]
    elif semantics == "must":
        here = [u and not v for u, v in zip(in_u, in_v)]
        if a <= 0 <= b:
            good = here
        else:
            through = [not v for v in in_v]
            order = idx if a > 0 else idx[::-1]
            res = _sweep(here, through, order)
            good = [res[i] for i in idx]
    else:
        raise ValueError(f"unknown semantics {semantics!r}")
    return _merge([cells[i][0] for i in idx if good[i]])


def intervals_to_region(intervals, space):
    """Convert oracle output to an engine Region over a 1-D space."""
    from .geometry import GE, GT, ConvexPoly, Region
    pieces = []
    for iv in intervals:
        cs = []
        if iv.lo is not None:
            cs.append(((1,), iv.lo, GE if iv.lo_closed else GT))
        if iv.hi is not None:
            cs.append(((-1,), -iv.hi, GE if iv.hi_closed else GT))
        pieces.append(ConvexPoly(space, cs))
    return Region(space, pieces)


def interval_1d_membership(flow, U, V, point, semantics="may"):
    res = interval_1d_oracle(flow, U, V, semantics)
    ok = _in_any(Fraction(point), res)
    return OracleVerdict(Verdict.EXACT_YES if ok else Verdict.EXACT_NO)


# straight-line sampling oracle

def _ray_params(piece, p, c):
    """``{delta >= 0 : p + delta*c in piece}`` as an Interval (maybe empty)."""
    lo, hi, lc, hc = Fraction(0), None, True, False
    for con in piece.constraints:
        if not con.coeffs:
            if con.const > 0:
                return None
            continue
        s = sum(Fraction(a) * x for a, x in zip(con.coeffs, p))
        k = sum(Fraction(a) * x for a, x in zip(con.coeffs, c))
        b = Fraction(con.const)
        # s + k*delta rel b
        if k == 0:
            ok = s == b if con.rel == _EQ else (s >= b if con.rel == _GE else s > b)
            if not ok:
                return None
            continue
        v = (b - s) / k
        if con.rel == _EQ:
            rows = [(">=", v), ("<=", v)]
        elif k > 0:
            rows = [(">" if con.rel == _GT else ">=", v)]
        else:
            rows = [("<" if con.rel == _GT else "<=", v)]
        for op, val in rows:
            if op in (">", ">="):
                cl = op == ">="
                if val > lo or (val == lo and not cl):
                    lo, lc = val, cl
            else:
                cl = op == "<="
                if hi is None or val < hi or (val == hi and not cl):
                    hi, hc = val, cl
    iv = Interval(lo, hi, lc, hc)
    return None if iv.is_empty() else iv


def _first_bad(U_ivs, V_ivs):
    """Infimum of ``V_ivs - U_ivs`` on the ray, or None if that set is empty."""
    ends = sorted({e for iv in U_ivs + V_ivs for e in iv.endpoints()} | {Fraction(0)})
    for cell, rep in _cells(ends):
        if rep < 0:
            continue
        if _in_any(rep, V_ivs) and not _in_any(rep, U_ivs):
            return cell.lo if cell.lo is not None else Fraction(0)
    return None


def _ray_witness(U, V, p, c):
    """Earliest ``delta`` at which the ray reaches U legally, or None."""
    U_ivs = [iv for iv in (_ray_params(q, p, c) for q in U.pieces) if iv is not None]
    if not U_ivs:
        return None
    V_ivs = [iv for iv in (_ray_params(q, p, c) for q in V.pieces) if iv is not None]
    bad = _first_bad(U_ivs, V_ivs)
    best = None
    for iv in U_ivs:
        if iv.lo_closed:
            if bad is not None and iv.lo > bad:
                continue
            cand = iv.lo
        else:
            # open at the left: arrive a little after the start
            if bad is not None and iv.lo >= bad:
                continue
            ends = [v for v in (iv.hi, bad) if v is not None]
            cand = iv.lo + (min(ends) - iv.lo) / 2 if ends else iv.lo + 1
        best = cand if best is None else min(best, cand)
    return best


def _segment_clear(U, V, p, c, delta):
    """True iff no point of ``p + [0, delta]*c`` lies in V outside U."""
    U_ivs = [iv for iv in (_ray_params(q, p, c) for q in U.pieces) if iv is not None]
    V_ivs = [iv for iv in (_ray_params(q, p, c) for q in V.pieces) if iv is not None]
    bad = _first_bad(U_ivs, V_ivs)
    if bad is None:
        return True
    if bad != delta:
        return bad > delta
    # the bad set starts at delta: clear iff delta itself is not bad
    return not _in_any(delta, V_ivs) or _in_any(delta, U_ivs)


def lattice_directions(F, step=Fraction(1, 2), radius=2):
    """Lattice vectors with entries in ``[-radius, radius]`` that lie in F."""
    step, radius = Fraction(step), Fraction(radius)
    k = int(radius / step)
    vals = [i * step for i in range(-k, k + 1)]
    return [c for c in itertools.product(vals, repeat=F.space.dim) if F.contains_point(c)]


def straightline_may_oracle(F, U, V, start, depth=4, grid=None, directions=None,
                            durations=(Fraction(1, 4), Fraction(1, 2), 1, 2, 4)):
    """Search piecewise-straight paths from ``start`` that reach ``U``
    without touching ``V`` outside ``U`` strictly before arrival.

    ``grid`` is ``(box, step)``: ``box`` a list of ``(lo, hi)`` per
    coordinate, ``step`` the lattice spacing for corner points.  Corners are
    ``corner + delta*c`` for ``c`` in ``directions`` (lattice vectors of F by
    default) and ``delta`` in ``durations``, kept if they land on the
    lattice inside the box.  The final segment may have any length.
    """
    n = F.space.dim
    if grid is None:
        box = [(Fraction(-10), Fraction(10))] * n
        step = Fraction(1, 4)
    else:
        box, step = grid
        box = [(Fraction(lo), Fraction(hi)) for lo, hi in box]
        step = Fraction(step)
    if step <= 0 or any(lo > hi for lo, hi in box):
        raise ValueError("empty lattice")
    if directions is None:
        directions = lattice_directions(F)
    directions = [tuple(Fraction(v) for v in c) for c in directions]
    durations = [Fraction(d) for d in durations]
    start = tuple(Fraction(v) for v in start)

    if U.contains_point(start):
        return OracleVerdict(Verdict.WITNESS_FOUND, (start,))

    def on_lattice(q):
        return all(lo <= x <= hi and ((x - lo) / step).denominator == 1
                   for x, (lo, hi) in zip(q, box))

    seen = {start}
    queue = deque([(start, (start,), 1)])
    while queue:
        p, path, level = queue.popleft()
        for c in directions:
            if not any(c):
                continue
            d = _ray_witness(U, V, p, c)
            if d is not None:
                end = tuple(x + d * v for x, v in zip(p, c))
                return OracleVerdict(Verdict.WITNESS_FOUND, path + (end,))
            if level >= depth:
                continue
            for delta in durations:
                q = tuple(x + delta * v for x, v in zip(p, c))
                if q in seen or not on_lattice(q):
                    continue
                if not _segment_clear(U, V, p, c, delta):
                    continue
                seen.add(q)
                queue.append((q, path + (q,), level + 1))
    return OracleVerdict(Verdict.NO_WITNESS_IN_SAMPLE)
