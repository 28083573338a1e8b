"""Controllable predecessors, safety/reachability fixpoints and strategies."""

import enum
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .discrete import jump_image, jump_preimage, pre_may
from .geometry import (
    Region, region_complement, region_difference, region_includes, region_intersect, region_union,
)
from .model import SymStateSet
from .rwa import rwa_may, rwa_must

log = logging.getLogger(__name__)


class Status(enum.Enum):
    FIXPOINT = "fixpoint"
    BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass
class SynthesisResult:
    winning: SymStateSet
    status: Status
    iterations: int
    realizable: bool
    snapshots: list = field(default_factory=list)  # W_0, W_1, ... if requested
    elapsed: float = 0.0


def _threads():
    try:
        return max(1, int(os.environ.get("SWITCHSYNTH_THREADS", "1")))
    except ValueError:
        return 1


def _per_location(H, fn):
    """Run ``fn(location)`` for every location; merge in name order."""
    locs = sorted(H.locations, key=lambda l: l.name)
    n = min(_threads(), len(locs))
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as ex:
            results = list(ex.map(fn, locs))
    else:
        results = [fn(l) for l in locs]
    return {l.name: R for l, R in zip(locs, results) if R is not None}


def _threats(H, A, comp):
    """``B``: uncontrollable jumps leaving ``A``; ``C``: controllable jumps
    into ``A``.  ``comp(name)`` gives the complement of ``A`` there."""
    need = {e.target for e in H.transitions if not e.controllable}
    Abar = SymStateSet(H.space, {n: comp(n) for n in sorted(need)})
    B = pre_may(H, "u", Abar)
    C = pre_may(H, "c", A)
    return B, C


def _complements(H, A):
    cache = {}

    def comp(name):
        if name not in cache:
            cache[name] = region_complement(A.get(name))
        return cache[name]
    return comp


def cpre(H, A):
    """States from which the controller can keep the system inside ``A``
    across the next time elapse and discrete transition."""
    A = A.intersect(H.invariants())
    comp = _complements(H, A)
    B, C = _threats(H, A, comp)
    for name in H.location_names():
        comp(name)  # fill the cache before any worker threads start

    def one(loc):
        Al = A.get(loc.name)
        if Al.is_empty():
            return None
        inv = loc.invariant
        escape = region_intersect(inv, region_union(comp(loc.name), B.get(loc.name)))
        avoid = region_union(C.get(loc.name), region_complement(inv))
        return region_difference(Al, rwa_may(loc.flow, escape, avoid))

    return SymStateSet(H.space, _per_location(H, one))


def cpre_reach(H, A):
    """States from which the controller can force the system into ``A`` in
    the next time elapse and discrete transition."""
    A = A.intersect(H.invariants())
    B, C = _threats(H, A, _complements(H, A))

    def one(loc):
        target = region_union(A.get(loc.name), C.get(loc.name))
        if target.is_empty():
            return None
        avoid = region_union(B.get(loc.name), region_complement(loc.invariant))
        return rwa_must(loc.flow, target, avoid)

    return SymStateSet(H.space, _per_location(H, one))


def _restrict(H, T):
    return T.intersect(H.invariants())


def safety_region(H, T, max_iter=100, keep_snapshots=False, on_iteration=None):
    """Greatest fixpoint of ``W -> T & cpre(W)``.

    ``iterations`` counts applications of cpre, including the one that
    confirms the fixpoint.  ``on_iteration(k, W)`` is called after each.
    """
    start = time.perf_counter()
    W = _restrict(H, T)
    snaps = [W] if keep_snapshots else []
    status = Status.BUDGET_EXHAUSTED
    k = 0
    while k < max_iter:
        k += 1
        nxt = T.intersect(cpre(H, W))
        if not W.includes(nxt):
            raise AssertionError("safety iterates must decrease")
        if keep_snapshots:
            snaps.append(nxt)
        if on_iteration:
            on_iteration(k, nxt)
        log.info("safety iteration %d: %d pieces", k, nxt.piece_count())
        done = nxt.includes(W)
        W = nxt
        if done:
            status = Status.FIXPOINT
            break
    realizable = status is Status.FIXPOINT and W.includes(H.init)
    return SynthesisResult(W, status, k, realizable, snaps, time.perf_counter() - start)


def reach_region(H, T, max_iter=100, keep_snapshots=False, on_iteration=None):
    """Least fixpoint of ``W -> T | cpre_reach(W)``."""
    start = time.perf_counter()
    T = _restrict(H, T)
    W = T
    snaps = [W] if keep_snapshots else []
    status = Status.BUDGET_EXHAUSTED
    k = 0
    while k < max_iter:
        k += 1
        nxt = T.union(cpre_reach(H, W))
        if not nxt.includes(W):
            raise AssertionError("reachability iterates must increase")
        if keep_snapshots:
            snaps.append(nxt)
        if on_iteration:
            on_iteration(k, nxt)
        log.info("reach iteration %d: %d pieces", k, nxt.piece_count())
        done = W.includes(nxt)
        W = nxt
        if done:
            status = Status.FIXPOINT
            break
    realizable = status is Status.FIXPOINT and W.includes(H.init)
    return SynthesisResult(W, status, k, realizable, snaps, time.perf_counter() - start)


@dataclass
class Strategy:
    """Most permissive memoryless strategy over a safety fixpoint.

    ``permitted[i]`` is the region where controllable transition ``i`` (an
    index into ``H.transitions``) may be taken.  Letting time pass is
    allowed everywhere in ``winning``; where the controller must act is not
    computed.
    """

    winning: SymStateSet
    permitted: dict

    def allowed(self, H, loc, point):
        """Indices of controllable transitions allowed at ``(loc, point)``."""
        return [i for i, R in sorted(self.permitted.items())
                if H.transitions[i].source == loc and R.contains_point(point)]


def extract_strategy(H, W):
    permitted = {}
    for i, e in enumerate(H.transitions):
        if not e.controllable:
            continue
        src, dst = W.get(e.source), W.get(e.target)
        if src.is_empty() or dst.is_empty():
            permitted[i] = Region.empty(H.space)
        else:
            permitted[i] = region_intersect(src, jump_preimage(e.jump, dst))
    return Strategy(W, permitted)


def check_strategy(H, strategy):
    """Closure check: each permitted region lies in the winning set of its
    source and jumps only into the winning set of its target.  Returns a
    list of violations (empty if closed)."""
    problems = []
    W = strategy.winning
    for i, R in sorted(strategy.permitted.items()):
        e = H.transitions[i]
        if not region_includes(W.get(e.source), R):
            problems.append(f"transition {i} permitted outside the winning set of {e.source}")
        if not region_includes(W.get(e.target), jump_image(e.jump, R)):
            problems.append(f"transition {i} may jump outside the winning set of {e.target}")
    return problems
