"""Convex NNC polyhedra in constraint form over exact rationals."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import NamedTuple

from .lp import EQ, GE, GT, find_point

PLAIN, PRIMED, DOTTED = "plain", "primed", "dotted"

REL_SYMBOL = {EQ: "==", GE: ">=", GT: ">"}


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class VarSpace:
    """Ordered variable names; the order fixes coordinate indices."""

    names: tuple
    kinds: tuple = None

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        kinds = tuple(self.kinds) if self.kinds is not None else (PLAIN,) * len(names)
        object.__setattr__(self, "kinds", kinds)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if len(kinds) != len(names):
            raise ValueError("one kind per variable expected")

    @classmethod
    def of(cls, *names):
        return cls(tuple(names))

    @property
    def dim(self):
        return len(self.names)

    def index(self, name):
        return self.names.index(name)

    def primed(self):
        return VarSpace(tuple(n + "'" for n in self.names), (PRIMED,) * self.dim)

    def dotted(self):
        return VarSpace(tuple("d" + n for n in self.names), (DOTTED,) * self.dim)

    def joint(self):
        """The space X u X' used by jump relations."""
        p = self.primed()
        return VarSpace(self.names + p.names, self.kinds + p.kinds)

    def __repr__(self):
        return f"VarSpace({', '.join(self.names)})"


def _rational(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        # shortest decimal repr, so 0.1 means 1/10
        return Fraction(repr(v))
    return Fraction(v)


class Constraint(NamedTuple):
    """``coeffs . x  rel  const`` with primitive integer coefficients."""

    coeffs: tuple
    const: int
    rel: int

    @property
    def strict(self):
        return self.rel == GT

    def evaluate(self, point):
        lhs = sum(Fraction(a) * p for a, p in zip(self.coeffs, point) if a)
        if self.rel == EQ:
            return lhs == self.const
        if self.rel == GE:
            return lhs >= self.const
        return lhs > self.const

    def negation(self):
        """Constraints whose union is the complement of this half-space."""
        neg = tuple(-a for a in self.coeffs)
        if self.rel == GE:
            return [Constraint(neg, -self.const, GT)]
        if self.rel == GT:
            return [Constraint(neg, -self.const, GE)]
        return [Constraint(self.coeffs, self.const, GT), Constraint(neg, -self.const, GT)]

    def relaxed(self):
        return Constraint(self.coeffs, self.const, GE) if self.rel == GT else self

    def format(self, names):
        terms = []
        for a, n in zip(self.coeffs, names):
            if not a:
                continue
            mag = abs(a)
            t = n if mag == 1 else f"{mag}*{n}"
            if not terms:
                terms.append(t if a > 0 else "-" + t)
            else:
                terms.append(("+ " if a > 0 else "- ") + t)
        lhs = " ".join(terms) if terms else "0"
        return f"{lhs} {REL_SYMBOL[self.rel]} {self.const}"


def make_constraint(coeffs, const, rel):
    """Normalise ``coeffs . x rel const`` to primitive integers.

    Returns ``TRUE`` or ``FALSE`` (module constants) for constraints with
    all-zero coefficients.
    """
    qs = [_rational(c) for c in coeffs]
    b = _rational(const)
    den = 1
    for q in qs:
        den = den * q.denominator // gcd(den, q.denominator)
    den = den * b.denominator // gcd(den, b.denominator)
    ints = [int(q * den) for q in qs]
    bi = int(b * den)
    return _normalise_int(tuple(ints), bi, rel)


def _normalise_int(ints, bi, rel):
    g = 0
    for v in ints:
        if v:
            g = gcd(g, v)
    if g == 0:
        ok = (bi == 0) if rel == EQ else ((0 >= bi) if rel == GE else (0 > bi))
        return TRUE if ok else FALSE
    g = gcd(g, bi)
    if g != 1:
        ints = tuple(v // g for v in ints)
        bi //= g
    if rel == EQ:
        first = next(v for v in ints if v)
        if first < 0:
            ints = tuple(-v for v in ints)
            bi = -bi
    return Constraint(ints, bi, rel)


TRUE = Constraint((), 0, GE)
FALSE = Constraint((), 1, GE)


@lru_cache(maxsize=1 << 16)
def _direction(coeffs):
    g = gcd(*coeffs)
    return (coeffs if g == 1 else tuple(v // g for v in coeffs)), g


def _simplify(constraints):
    """Syntactic clean-up: drop trivial rows, keep the tightest of parallel rows.

    Returns a sorted tuple, or ``None`` when a trivially false row appears.
    Bounds ``const / g`` are compared by cross-multiplication (``g > 0``).
    """
    ineq = {}  # direction -> (const, g, constraint)
    eqs = {}
    for c in constraints:
        coeffs = c.coeffs
        if not any(coeffs):
            if c.rel == EQ:
                ok = c.const == 0
            elif c.rel == GE:
                ok = 0 >= c.const
            else:
                ok = 0 > c.const
            if not ok:
                return None
            continue
        direction, g = _direction(coeffs)
        k = c.const
        if c.rel == EQ:
            old = eqs.get(direction)
            if old is not None and old[0] * g != k * old[1]:
                return None
            eqs[direction] = (k, g, c)
            continue
        old = ineq.get(direction)
        if old is None:
            ineq[direction] = (k, g, c)
        else:
            lhs, rhs = k * old[1], old[0] * g
            if lhs > rhs or (lhs == rhs and c.rel == GT):
                ineq[direction] = (k, g, c)
    if eqs:
        for direction, (k, g, c) in list(ineq.items()):
            e = eqs.get(direction)
            sign = 1
            if e is None:
                e = eqs.get(tuple(-v for v in direction))
                sign = -1
            if e is None:
                continue
            # equality fixes d.x = sign * ek/eg; inequality needs d.x (>|>=) k/g
            lhs, rhs = sign * e[0] * g, k * e[1]
            if lhs < rhs or (lhs == rhs and c.rel == GT):
                return None
            del ineq[direction]
    for direction in sorted(ineq):
        if direction not in ineq:
            continue
        neg = tuple(-v for v in direction)
        other = ineq.get(neg)
        if other is None:
            continue
        k, g, c = ineq[direction]
        ok_, og, oc = other
        # d.x >= k/g and d.x <= -ok/og
        lhs, rhs = k * og, -ok_ * g
        if lhs > rhs:
            return None
        if lhs == rhs:
            if c.rel == GT or oc.rel == GT:
                return None
            del ineq[direction]
            del ineq[neg]
            eq = c if direction > neg else oc
            eq = _normalise_int(eq.coeffs, eq.const, EQ)
            eqs[direction] = (k, g, eq)
    out = [e[2] for e in eqs.values()] + [e[2] for e in ineq.values()]
    out.sort()
    return tuple(out)


@lru_cache(maxsize=1 << 18)
def _witness_cached(dim, constraints):
    return find_point(constraints, dim)


def _empty_cached(dim, constraints):
    return _witness_cached(dim, constraints) is None


def _satisfies(c, point):
    lhs = 0
    for a, x in zip(c.coeffs, point):
        if a:
            lhs += a * x
    if c.rel == EQ:
        return lhs == c.const
    if c.rel == GE:
        return lhs >= c.const
    return lhs > c.const


class ConvexPoly:
    """Conjunction of affine constraints (``==``, ``>=``, ``>``) over a VarSpace.

    Instances are immutable; constraints are kept sorted so that equal
    syntax gives equal keys.  The canonical empty polyhedron holds the single
    constraint ``FALSE``.
    """

    __slots__ = ("space", "constraints", "_empty")

    def __init__(self, space, constraints=()):
        cs = []
        for c in constraints:
            if not isinstance(c, Constraint):
                c = make_constraint(*c)
            if c is not TRUE and c.coeffs and len(c.coeffs) != space.dim:
                raise DimensionMismatch(
                    f"constraint of length {len(c.coeffs)} in {space.dim}-d space")
            cs.append(c)
        simple = _simplify(cs)
        self.space = space
        if simple is None:
            self.constraints = (FALSE,)
            self._empty = True
        else:
            self.constraints = simple
            self._empty = None

    @classmethod
    def _raw(cls, space, constraints, empty=None):
        obj = cls.__new__(cls)
        obj.space = space
        obj.constraints = constraints
        obj._empty = empty
        return obj

    @classmethod
    def universe(cls, space):
        return cls._raw(space, (), False)

    @classmethod
    def empty(cls, space):
        return cls._raw(space, (FALSE,), True)

    @classmethod
    def from_box(cls, space, bounds):
        """Closed box from a ``{name: (lo, hi)}`` mapping (None = unbounded)."""
        cs = []
        for name, (lo, hi) in bounds.items():
            e = [0] * space.dim
            e[space.index(name)] = 1
            if lo is not None:
                cs.append(make_constraint(e, lo, GE))
            if hi is not None:
                cs.append(make_constraint([-v for v in e], -_rational(hi), GE))
        return cls(space, cs)

    @property
    def dim(self):
        return self.space.dim

    def key(self):
        return self.constraints

    def is_universe(self):
        return not self.constraints

    def contains_point(self, point):
        if self.constraints == (FALSE,):
            return False
        return all(c.evaluate(point) for c in self.constraints)

    def __eq__(self, other):
        return (isinstance(other, ConvexPoly) and self.space == other.space
                and self.constraints == other.constraints)

    def __hash__(self):
        return hash(self.constraints)

    def __repr__(self):
        if self.constraints == (FALSE,):
            return "ConvexPoly(false)"
        if not self.constraints:
            return "ConvexPoly(true)"
        body = " & ".join(c.format(self.space.names) for c in self.constraints)
        return f"ConvexPoly({body})"


def _check_space(a, b):
    if a.space != b.space:
        if a.space.dim != b.space.dim:
            raise DimensionMismatch(f"{a.space} vs {b.space}")
        raise DimensionMismatch(f"variable spaces differ: {a.space} vs {b.space}")


def is_empty(P):
    if P._empty is None:
        P._empty = _empty_cached(P.space.dim, P.constraints)
    return P._empty


def _witness(P):
    # tuple of mpq; callers inside the package compare it against constraints
    if P._empty:
        return None
    pt = _witness_cached(P.space.dim, P.constraints)
    P._empty = pt is None
    return pt


def witness(P):
    """Some point of ``P`` as a tuple of Fractions, or None if empty."""
    pt = _witness(P)
    if pt is None:
        return None
    return tuple(Fraction(int(v.numerator), int(v.denominator)) for v in pt)


def intersect(P, Q):
    _check_space(P, Q)
    if P._empty or Q._empty:
        return ConvexPoly.empty(P.space)
    if not P.constraints:
        return Q
    if not Q.constraints:
        return P
    return ConvexPoly(P.space, P.constraints + Q.constraints)


def conjoin(P, constraints):
    """``P`` with extra constraints."""
    return ConvexPoly(P.space, P.constraints + tuple(constraints))


def closure(P):
    if is_empty(P):
        return ConvexPoly.empty(P.space)
    if not any(c.rel == GT for c in P.constraints):
        return P
    return ConvexPoly._raw(P.space, tuple(sorted(c.relaxed() for c in P.constraints)), False)


def implies(P, c):
    """True iff every point of ``P`` satisfies the constraint ``c``."""
    if c in P.constraints:
        return True
    if is_empty(P):
        return True
    if c.rel != EQ:
        # a parallel row at least as tight settles it without an LP
        for d in P.constraints:
            if d.coeffs == c.coeffs and (d.const > c.const or (
                    d.const == c.const and (d.rel == GT or c.rel == GE))):
                return True
    pt = _witness(P)
    if pt is not None and not _satisfies(c, pt):
        return False
    dim = P.space.dim
    for n in c.negation():
        if not _empty_cached(dim, P.constraints + (n,)):
            return False
    return True


def poly_includes(Q, P):
    """True iff ``P`` is a subset of ``Q``."""
    _check_space(P, Q)
    if is_empty(P):
        return True
    if Q._empty:
        return False
    return _includes_cached(Q, P)


@lru_cache(maxsize=1 << 18)
def _includes_cached(Q, P):
    pt = _witness(P)
    if not all(_satisfies(c, pt) for c in Q.constraints):
        return False
    return all(implies(P, c) for c in Q.constraints)


def disjoint(P, Q):
    """True iff ``P`` and ``Q`` share no point (no intersection is built)."""
    _check_space(P, Q)
    if P._empty or Q._empty:
        return True
    return _empty_cached(P.space.dim, P.constraints + Q.constraints)


def convex_difference(P, Q):
    """Disjoint convex pieces whose union is ``P`` minus ``Q``."""
    _check_space(P, Q)
    if is_empty(P):
        return []
    if disjoint(P, Q):
        return [P]
    pieces = []
    cur = P
    for c in Q.constraints:
        if c in cur.constraints:
            continue
        negs = c.negation()
        if c.rel == EQ:
            # x == b splits into x > b and x < b, both disjoint from the rest
            for n in negs:
                piece = conjoin(cur, (n,))
                if not is_empty(piece):
                    pieces.append(piece)
        else:
            piece = conjoin(cur, negs)
            if not is_empty(piece):
                pieces.append(piece)
            else:
                # c is implied by cur; no need to carry it
                continue
        cur = conjoin(cur, (c,))
    return pieces


def remove_redundant(P):
    """Drop constraints implied by the others (one exact LP per constraint)."""
    if is_empty(P):
        return ConvexPoly.empty(P.space)
    dim = P.space.dim
    kept = list(P.constraints)
    i = 0
    while i < len(kept):
        c = kept[i]
        rest = tuple(kept[:i] + kept[i + 1:])
        if all(_empty_cached(dim, rest + (n,)) for n in c.negation()):
            kept = list(rest)
        else:
            i += 1
    return ConvexPoly._raw(P.space, tuple(kept), False)


def eliminate(P, variables):
    """Existential projection of ``variables`` (names or indices) out of ``P``.

    Fourier-Motzkin with exact strictness: a combination of a lower and an
    upper bound is strict iff one of its parents is.  Equalities are used for
    substitution first.  The result lives in the same space with the
    eliminated coordinates unconstrained.
    """
    idx = {P.space.index(v) if isinstance(v, str) else v for v in variables}
    if P._empty:
        return ConvexPoly.empty(P.space)
    cs = list(P.constraints)
    todo = set(i for i in idx if any(c.coeffs[i] for c in cs))
    dirty = False
    while todo:
        # equality substitution has no blow-up: do it first
        best = None
        for v in sorted(todo):
            if any(c.rel == EQ and c.coeffs[v] for c in cs):
                best = v
                break
        if best is not None:
            cs = _substitute(cs, best)
        else:
            best = min(sorted(todo), key=lambda v: _pair_count(cs, v))
            cs, combined = _fm_step(cs, best)
            if cs is None:
                return ConvexPoly.empty(P.space)
            dirty = dirty or combined
            # LP pruning is the dominant cost: only pay it once rows pile up
            if dirty and len(cs) > _PRUNE_AT:
                cs = _prune(P.space, cs)
                if cs is None:
                    return ConvexPoly.empty(P.space)
                dirty = False
        if cs is None:
            return ConvexPoly.empty(P.space)
        simple = _simplify(cs)
        if simple is None:
            return ConvexPoly.empty(P.space)
        cs = list(simple)
        todo.discard(best)
        todo = set(i for i in todo if any(c.coeffs[i] for c in cs))
    if dirty:
        cs = _prune(P.space, cs)
        if cs is None:
            return ConvexPoly.empty(P.space)
    return ConvexPoly(P.space, cs)


_PRUNE_AT = 16


def _prune(space, cs):
    R = ConvexPoly(space, cs)
    if is_empty(R):
        return None
    return list(remove_redundant(R).constraints)


def _pair_count(cs, v):
    pos = sum(1 for c in cs if c.coeffs[v] > 0)
    neg = sum(1 for c in cs if c.coeffs[v] < 0)
    return pos * neg - pos - neg


def _substitute(cs, v):
    eqs = [c for c in cs if c.rel == EQ and c.coeffs[v]]
    orig = min(eqs, key=lambda c: (abs(c.coeffs[v]), c))
    e = orig
    ev = e.coeffs[v]
    if ev < 0:
        e = Constraint(tuple(-a for a in e.coeffs), -e.const, EQ)
        ev = -ev
    out = []
    for c in cs:
        if c is orig:
            continue
        cv = c.coeffs[v]
        if not cv:
            out.append(c)
            continue
        coeffs = tuple(ev * a - cv * b for a, b in zip(c.coeffs, e.coeffs))
        const = ev * c.const - cv * e.const
        n = _normalise_int(coeffs, const, c.rel)
        if n == FALSE:
            return None
        if n is not TRUE and n != TRUE:
            out.append(n)
    return out


def _fm_step(cs, v):
    pos, neg, out = [], [], []
    for c in cs:
        a = c.coeffs[v]
        if a > 0:
            pos.append(c)
        elif a < 0:
            neg.append(c)
        else:
            out.append(c)
    combined = bool(pos and neg)
    for p in pos:
        ap = p.coeffs[v]
        for n in neg:
            an = -n.coeffs[v]
            coeffs = tuple(an * a + ap * b for a, b in zip(p.coeffs, n.coeffs))
            const = an * p.const + ap * n.const
            rel = GT if (p.rel == GT or n.rel == GT) else GE
            c = _normalise_int(coeffs, const, rel)
            if c == FALSE:
                return None, combined
            if c != TRUE:
                out.append(c)
    return out, combined


def project(P, names):
    """Eliminate every variable not in ``names`` and re-express over them."""
    keep = [P.space.index(n) for n in names]
    drop = [i for i in range(P.space.dim) if i not in keep]
    Q = eliminate(P, drop) if drop else P
    sub = VarSpace(tuple(P.space.names[i] for i in keep),
                   tuple(P.space.kinds[i] for i in keep))
    return rebase(Q, sub, keep)


def rebase(P, space, positions):
    """Re-express ``P`` in ``space``; ``positions[j]`` is the old index of new
    coordinate ``j``.  Old coordinates not listed must be unconstrained."""
    if P._empty:
        return ConvexPoly.empty(space)
    cs = []
    keep = set(positions)
    for c in P.constraints:
        if any(a for i, a in enumerate(c.coeffs) if i not in keep):
            raise ValueError(f"constraint {c} mentions a dropped coordinate")
        cs.append(Constraint(tuple(c.coeffs[i] for i in positions), c.const, c.rel))
    return ConvexPoly(space, cs)


def embed(P, space, positions):
    """Lift ``P`` into a larger ``space``: old coordinate ``i`` goes to
    ``positions[i]``; new coordinates are unconstrained."""
    if P._empty:
        return ConvexPoly.empty(space)
    cs = []
    for c in P.constraints:
        coeffs = [0] * space.dim
        for i, a in enumerate(c.coeffs):
            coeffs[positions[i]] = a
        cs.append(Constraint(tuple(coeffs), c.const, c.rel))
    return ConvexPoly(space, cs)


def substitute_values(P, values):
    """Fold fixed values ``{index: rational}`` into the constants.

    The result lives in the same space; the fixed coordinates become
    unconstrained.
    """
    if P._empty:
        return P
    cs = []
    for c in P.constraints:
        coeffs = list(c.coeffs)
        const = Fraction(c.const)
        for i, val in values.items():
            if coeffs[i]:
                const -= coeffs[i] * Fraction(val)
                coeffs[i] = 0
        cs.append(make_constraint(coeffs, const, c.rel))
    return ConvexPoly(P.space, cs)
