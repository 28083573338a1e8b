"""Linear hybrid automata: locations, transitions, sets of states."""

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .geometry import (
    EQ, GE, ConvexPoly, Region, VarSpace, eliminate, embed, implies, is_empty,
    make_constraint, rebase, region_complement, region_difference, region_includes,
    region_intersect, region_union, reduce_region,
)

CONTROLLABLE = "controllable"
UNCONTROLLABLE = "uncontrollable"


class ModelError(ValueError):
    pass


class SymStateSet:
    """A set of states: location name -> Region over the plain variables.

    Missing locations denote the empty set.  Iteration is in location-name
    order so that results are reproducible.
    """

    __slots__ = ("space", "_regions")

    def __init__(self, space, regions=None):
        self.space = space
        self._regions = {}
        for loc, R in (regions or {}).items():
            if R.space != space:
                raise ModelError(f"region for {loc} is over {R.space}, expected {space}")
            self._regions[loc] = R

    def get(self, loc):
        R = self._regions.get(loc)
        return R if R is not None else Region.empty(self.space)

    def locations(self):
        return sorted(self._regions)

    def items(self):
        return [(loc, self._regions[loc]) for loc in sorted(self._regions)]

    def with_region(self, loc, R):
        regions = dict(self._regions)
        regions[loc] = R
        return SymStateSet(self.space, regions)

    def is_empty(self):
        return all(R.is_empty() for R in self._regions.values())

    def _zip(self, other, op, locs=None):
        if locs is None:
            locs = sorted(set(self._regions) | set(other._regions))
        return SymStateSet(self.space, {l: op(self.get(l), other.get(l)) for l in locs})

    def union(self, other):
        return self._zip(other, region_union)

    def intersect(self, other):
        return self._zip(other, region_intersect)

    def difference(self, other):
        return self._zip(other, region_difference, sorted(self._regions))

    def complement(self, locations):
        """Complement w.r.t. the whole valuation space of every location."""
        return SymStateSet(self.space, {l: region_complement(self.get(l)) for l in locations})

    def includes(self, other):
        return all(region_includes(self.get(l), R) for l, R in other.items())

    def equals(self, other):
        return self.includes(other) and other.includes(self)

    def piece_count(self):
        return sum(len(R) for R in self._regions.values())

    def __repr__(self):
        body = ", ".join(f"{l}: {R!r}" for l, R in self.items())
        return f"SymStateSet({body})"


@dataclass(frozen=True)
class Location:
    name: str
    invariant: Region
    flow: ConvexPoly


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    jump: Region
    kind: str = CONTROLLABLE
    name: str = ""

    @property
    def controllable(self):
        return self.kind == CONTROLLABLE

    def guard(self, space):
        """Projection of the jump relation on the unprimed variables."""
        n = space.dim
        keep = list(range(n))
        pieces = [rebase(eliminate(p, range(n, 2 * n)), space, keep) for p in self.jump.pieces]
        return reduce_region(Region(space, pieces))


@dataclass(frozen=True)
class HybridAutomaton:
    space: VarSpace
    locations: tuple
    transitions: tuple
    init: SymStateSet = None
    _by_name: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "locations", tuple(self.locations))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        object.__setattr__(self, "_by_name", {l.name: l for l in self.locations})
        if len(self._by_name) != len(self.locations):
            raise ModelError("duplicate location names")
        if self.init is None:
            object.__setattr__(self, "init", SymStateSet(self.space))

    @property
    def jump_space(self):
        return self.space.joint()

    @property
    def flow_space(self):
        return self.space.dotted()

    def location(self, name):
        try:
            return self._by_name[name]
        except KeyError:
            raise ModelError(f"unknown location {name!r}") from None

    def location_names(self):
        return [l.name for l in self.locations]

    def invariants(self):
        return SymStateSet(self.space, {l.name: l.invariant for l in self.locations})

    def transitions_of(self, kind):
        return [e for e in self.transitions if e.kind == kind]


@dataclass(frozen=True)
class SpecSet:
    kind: str  # "safe" or "target"
    states: SymStateSet


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" or "warning"
    message: str

    def __str__(self):
        return f"{self.level}: {self.message}"


def validate(H):
    """Check the well-formedness conditions that can be checked.

    Non-blocking is assumed, not checked.
    """
    out = []
    names = set(H.location_names())
    for loc in H.locations:
        if is_empty(loc.flow):
            out.append(Diagnostic("error", f"location {loc.name}: empty flow"))
    for e in H.transitions:
        for end in (e.source, e.target):
            if end not in names:
                out.append(Diagnostic("error", f"transition {e.name or ''} "
                                      f"{e.source}->{e.target}: unknown location {end!r}"))
    for l, R in H.init.items():
        if l not in names:
            out.append(Diagnostic("error", f"initial states in unknown location {l!r}"))
            continue
        if not region_includes(H.location(l).invariant, R):
            out.append(Diagnostic("error", f"location {l}: initial states not contained "
                                  "in the invariant"))
    if H.transitions and find_dwell_clock(H) is None:
        out.append(Diagnostic("warning", "no dwell-time clock found (a variable with rate 1 "
                              "everywhere, reset by every transition and bounded below by "
                              "a positive constant in every guard); Zeno runs are possible"))
    return out


def find_dwell_clock(H):
    """Name of a variable that enforces a positive delay between transitions,
    or None."""
    n = H.space.dim
    for i, name in enumerate(H.space.names):
        e = [0] * n
        e[i] = 1
        rate = make_constraint(e, 1, EQ)
        if not all(_implies_all(Region(H.flow_space, (l.flow,)), rate) for l in H.locations):
            continue
        reset = [0] * (2 * n)
        reset[n + i] = 1
        reset_c = make_constraint(reset, 0, EQ)
        ok = True
        for tr in H.transitions:
            if not _implies_all(tr.jump, reset_c) or not _positive_lower_bound(tr.jump, i):
                ok = False
                break
        if ok:
            return name
    return None


def _implies_all(R, c):
    return all(implies(p, c) for p in R.pieces if not is_empty(p))


def _positive_lower_bound(R, i):
    for p in R.pieces:
        if is_empty(p):
            continue
        q = eliminate(p, [j for j in range(p.space.dim) if j != i])
        lows = [Fraction(c.const, c.coeffs[i]) for c in q.constraints
                if c.coeffs[i] > 0 and c.rel != EQ]
        lows += [Fraction(c.const, c.coeffs[i]) for c in q.constraints if c.rel == EQ]
        if not lows or max(lows) <= 0:
            return False
    return True


def lift_states(S, space, positions):
    return SymStateSet(space, {l: Region(space, [embed(p, space, positions) for p in R.pieces])
                               for l, R in S.items()})


def add_dwell_clock(H, clock, bound):
    """Add a clock with rate 1 that every transition requires to be at least
    ``bound`` and resets to 0.  Initial states get ``clock == 0``."""
    if clock in H.space.names:
        raise ModelError(f"variable {clock!r} already exists")
    n = H.space.dim
    X = VarSpace(H.space.names + (clock,))
    D = X.dotted()
    J = X.joint()
    pos_x = list(range(n))
    pos_j = list(range(n)) + [n + 1 + i for i in range(n)]

    unit = [0] * (n + 1)
    unit[n] = 1
    rate = make_constraint(unit, 1, EQ)
    locations = []
    for l in H.locations:
        inv = Region(X, [embed(p, X, pos_x) for p in l.invariant.pieces])
        flow = embed(l.flow, D, pos_x)
        flow = ConvexPoly(D, flow.constraints + (rate,))
        locations.append(Location(l.name, inv, flow))

    g = [0] * (2 * n + 2)
    g[n] = 1
    r = [0] * (2 * n + 2)
    r[2 * n + 1] = 1
    extra = (make_constraint(g, bound, GE), make_constraint(r, 0, EQ))
    transitions = []
    for e in H.transitions:
        pieces = [ConvexPoly(J, embed(p, J, pos_j).constraints + extra) for p in e.jump.pieces]
        transitions.append(replace(e, jump=Region(J, pieces)))

    zero = (make_constraint(unit, 0, EQ),)
    init = SymStateSet(X, {l: Region(X, [ConvexPoly(X, embed(p, X, pos_x).constraints + zero)
                                         for p in R.pieces])
                           for l, R in H.init.items()})
    return HybridAutomaton(X, locations, transitions, init)
