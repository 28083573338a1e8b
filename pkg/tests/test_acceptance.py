"""Acceptance criteria 1-7.

Each criterion prints one ``PASS``/``FAIL`` line; the lines are repeated in
the pytest terminal summary.  Run directly (``python tests/test_acceptance.py``)
to get just the lines.
"""

import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from helpers import (  # noqa: E402
    X1, X2, XY, box, convex_polygon, flow_1d, rand_1d_flow, rand_flow, rand_interval, rand_poly,
    rand_region, seeded, slice_xy, space,
)
from switchsynth.discrete import jump_image  # noqa: E402
from switchsynth.generators import WATERTANK_CLOSED, gen_tnc, gen_watertank  # noqa: E402
from switchsynth.geometry import (  # noqa: E402
    EQ, GE, GT, ConvexPoly, Region, closure, complement, eliminate, is_bounded_wrt, is_empty,
    is_thin_wrt, pospref, preflow, region_closure, region_complement, region_difference,
    region_equal, region_includes, region_intersect, region_preflow, region_union,
    substitute_values, witness,
)
from switchsynth.oracle import (  # noqa: E402
    Interval, interval_1d_oracle, intervals_to_region, straightline_may_oracle,
)
from switchsynth.parser import parse_model  # noqa: E402
from switchsynth.rwa import ru, rwa_may, rwa_must  # noqa: E402
from switchsynth.synthesis import Status, check_strategy, extract_strategy, safety_region  # noqa: E402

# pinned tolerances
TNC2_ITERATIONS = 3
TNC2_SECONDS = 60
WATERTANK_ITERATIONS = 5
WATERTANK_SECONDS = 120
SCALING_PITS = range(1, 7)
SCALING_TOTAL_SECONDS = 600
SCALING_RATIO = 25
RANDOM_1D = 200
RANDOM_GEOMETRY = 500

RESULTS = {}


def record(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    RESULTS[n] = line
    print(line)
    return ok


def _tnc_unsafe(W, loc):
    return region_closure(region_complement(slice_xy(W.get(loc), {2: 0})))


def _closure_of(pieces):
    return region_closure(Region(XY, pieces))


PITS = [box(0, 2, 0, 1), box(2, 4, -1, 0)]
SW_1 = PITS + [convex_polygon((0, 1), (1, 2), (3, 2), (3, 1)), box(2, 5, 0, 1),
               convex_polygon((4, 0), (5, 0), (4, -1))]
SW_2 = SW_1 + [convex_polygon((3, 1), (3, 2), (4, 1))]
SE_1 = PITS + [convex_polygon((0, 1), (0, 2), (1, 2), (2, 1)), convex_polygon((2, 0), (2, 1), (3, 1), (4, 0)),
               convex_polygon((1, 0), (2, 0), (2, -1)), convex_polygon((-1, 2), (-1, 1), (0, 0), (0, 2))]


def criterion_1():
    H, spec = parse_model(gen_tnc(2))
    res = safety_region(H, spec.states, keep_snapshots=True)
    checks = {
        "fixpoint": res.status is Status.FIXPOINT,
        f"iterations == {TNC2_ITERATIONS}": res.iterations == TNC2_ITERATIONS,
        "SW iter 1": region_equal(_tnc_unsafe(res.snapshots[1], "SW"), _closure_of(SW_1)),
        "SW iter 2": region_equal(_tnc_unsafe(res.snapshots[2], "SW"), _closure_of(SW_2)),
        "SE iter 1": region_equal(_tnc_unsafe(res.snapshots[1], "SE"), _closure_of(SE_1)),
        f"time < {TNC2_SECONDS}s": res.elapsed < TNC2_SECONDS,
    }
    bad = [k for k, v in checks.items() if not v]
    return record(1, not bad, f"TNC 2 pits, {res.iterations} iterations, {res.elapsed:.1f}s"
                  + (f"; failed: {', '.join(bad)}" if bad else "; figure cross-sections match"))


def _watertank_slice(text):
    H, spec = parse_model(text)
    res = safety_region(H, spec.states)
    S = region_closure(slice_xy(res.winning.get(WATERTANK_CLOSED), {2: 0}))
    h = Fraction(1, 2)
    exp = region_closure(Region.of(box(h, 7, h, 7)))
    return res, region_equal(S, exp), S, exp


def criterion_2():
    res, square, S, exp = _watertank_slice(gen_watertank())
    checks = {
        "fixpoint": res.status is Status.FIXPOINT,
        f"iterations == {WATERTANK_ITERATIONS}": res.iterations == WATERTANK_ITERATIONS,
        "closed-valves slice == [1/2,7]^2": square,
        f"time < {WATERTANK_SECONDS}s": res.elapsed < WATERTANK_SECONDS,
    }
    bad = [k for k, v in checks.items() if not v]
    detail = f"water tank, {res.iterations} iterations, {res.elapsed:.1f}s"
    if bad:
        detail += f"; failed: {', '.join(bad)}"
        if not square:
            extra = not region_difference(S, exp).is_empty()
            missing = not region_difference(exp, S).is_empty()
            detail += f" (slice has extra={extra}, missing={missing})"
        # same model with the clock reset only on the first toggle
        vres, vsquare, _, _ = _watertank_slice(gen_watertank().replace("t' == 0", "t' == t"))
        detail += (f"; info: without per-toggle clock reset: {vres.iterations} iterations, "
                   f"slice square={vsquare}")
    return record(2, not bad, detail)


def criterion_3():
    times, statuses = [], []
    for n in SCALING_PITS:
        H, spec = parse_model(gen_tnc(n))
        res = safety_region(H, spec.states)
        times.append(res.elapsed)
        statuses.append(res.status is Status.FIXPOINT)
    total = sum(times)
    ratio = times[-1] / times[0]
    monotone = all(a <= b for a, b in zip(times, times[1:]))
    checks = {
        "all fixpoint": all(statuses),
        "monotone": monotone,
        f"total < {SCALING_TOTAL_SECONDS}s": total < SCALING_TOTAL_SECONDS,
        f"t6/t1 < {SCALING_RATIO}": ratio < SCALING_RATIO,
    }
    bad = [k for k, v in checks.items() if not v]
    shown = ", ".join(f"{t:.2f}" for t in times)
    return record(3, not bad, f"gen-tnc 1..6 times [{shown}]s, total {total:.1f}s, ratio {ratio:.1f}"
                  + (f"; failed: {', '.join(bad)}" if bad else ""))


def _random_1d(rng):
    a, b = rand_1d_flow(rng)
    U = [rand_interval(rng) for _ in range(rng.randint(0, 3))]
    V = [rand_interval(rng) for _ in range(rng.randint(0, 3))]
    return (a, b), U, V


def _wong_toi():
    F = ConvexPoly(X2.dotted(), [((1, 0), -1, GE), ((-1, 0), -1, GE), ((0, 1), 1, EQ)])
    U = Region.of(ConvexPoly.from_box(X2, {"x": (-20, 20), "y": (10, 11)}))
    V = Region.of(ConvexPoly.from_box(X2, {"x": (-10, 5), "y": (5, 6)}),
                  ConvexPoly.from_box(X2, {"x": (5, 20), "y": (5, 6)}))
    return F, U, V


def _open_closed():
    """Half-open obstacle in front of the target, horizontal unit flow.

    Checked line by line against the exact 1-D oracle, and sampled points
    outside the result are checked against the straight-line oracle."""
    F = ConvexPoly(X2.dotted(), [((1, 0), 1, EQ), ((0, 1), 0, EQ)])
    U = Region.of(ConvexPoly.from_box(X2, {"x": (2, 3), "y": (-1, 2)}))
    V = Region.of(ConvexPoly(X2, [((1, 0), 1, GE), ((-1, 0), -2, GT), ((0, 1), 0, GE), ((0, -1), -1, GE)]))
    R = rwa_may(F, U, V)
    bad = 0
    grid = ([(-2, 4), (-2, 3)], Fraction(1, 4))
    for yi in range(-8, 13):
        y = Fraction(yi, 4)
        Us = [Interval.closed(2, 3)] if -1 <= y <= 2 else []
        Vs = [Interval(Fraction(1), Fraction(2), True, False)] if 0 <= y <= 1 else []
        exact = interval_1d_oracle((1, 1), Us, Vs)
        for xi in range(-8, 20):
            x = Fraction(xi, 4)
            inside = R.contains_point((x, y))
            if inside != any(x in iv for iv in exact):
                bad += 1
            elif not inside and straightline_may_oracle(F, U, V, (x, y), depth=1, grid=grid):
                bad += 1
    return bad


def criterion_4():
    rng = seeded(4)
    mismatches = over_bound = 0
    for _ in range(RANDOM_1D):
        (a, b), U, V = _random_1d(rng)
        stats = {}
        got = rwa_may(flow_1d(a, b), intervals_to_region(U, X1), intervals_to_region(V, X1), stats=stats)
        exp = intervals_to_region(interval_1d_oracle((a, b), U, V, "may"), X1)
        mismatches += not region_equal(got, exp)
        over_bound += stats["iterations"] > stats["bound"]
    F, U, V = _wong_toi()
    R = rwa_may(F, U, V)
    trap = not R.contains_point((5, 0)) and R.contains_point((-15, 0))
    oc_bad = _open_closed()
    ok = mismatches == 0 and over_bound == 0 and trap and oc_bad == 0
    return record(4, ok, f"rwa_may: {RANDOM_1D} 1-D instances, {mismatches} oracle mismatches, "
                  f"{over_bound} over the iteration bound; Wong-Toi trap excludes (5,0): {trap}; "
                  f"open/closed instance: {oc_bad} refuted points")


def criterion_5():
    rng = seeded(5)
    mismatches = law = 0
    for _ in range(RANDOM_1D):
        (a, b), U, V = _random_1d(rng)
        RU, RV = intervals_to_region(U, X1), intervals_to_region(V, X1)
        got = rwa_must(flow_1d(a, b), RU, RV)
        exp = intervals_to_region(interval_1d_oracle((a, b), U, V, "must"), X1)
        mismatches += not region_equal(got, exp)
        law += not (region_intersect(got, RV).is_empty() and region_includes(got, region_difference(RU, RV)))
    F = flow_1d(1, 2)
    U23 = intervals_to_region([Interval.closed(2, 3)], X1)
    none = Region.empty(X1)
    literal = rwa_must(F, U23, none, literal_target=True)
    corrected = rwa_must(F, U23, none)
    ray = Region.of(ConvexPoly(X1, [((-1,), -3, GE)]))
    counter = region_equal(literal, U23) and region_equal(corrected, ray)
    ok = mismatches == 0 and law == 0 and counter
    return record(5, ok, f"rwa_must: {RANDOM_1D} 1-D instances, {mismatches} oracle mismatches, "
                  f"{law} violations of result&V=0 / U-V<=result; literal [2,3] vs corrected (-inf,3]: {counter}")


def _fm_sound(P, rng):
    """Projection of a witness lies in the eliminated polyhedron and every
    point of the eliminated polyhedron extends to a point of P."""
    dim = P.space.dim
    k = rng.randrange(dim)
    E = eliminate(P, [k])
    pt = witness(P)
    if pt is None:
        return is_empty(E)
    proj = tuple(0 if i == k else v for i, v in enumerate(pt))
    if not E.contains_point(proj):
        return False
    q = witness(E)
    if q is None:
        return False
    fixed = {i: v for i, v in enumerate(q) if i != k}
    return not is_empty(substitute_values(P, fixed))


def _flow_around_origin(rng, dim):
    """Box flow whose closure contains the origin; some sides strict."""
    cs = []
    for i in range(dim):
        e = [0] * dim
        e[i] = 1
        lo, hi = Fraction(-rng.randint(0, 2), 2), Fraction(rng.randint(0, 2), 2)
        cs.append((tuple(e), lo, GT if lo < 0 and rng.random() < 0.5 else GE))
        cs.append((tuple(-v for v in e), -hi, GT if hi > 0 and rng.random() < 0.5 else GE))
    return ConvexPoly(space(dim).dotted(), cs)


def criterion_6():
    rng = seeded(6)
    counts = dict.fromkeys(["preflow", "complement", "difference", "fm", "ru", "origin"], 0)
    failures = dict.fromkeys(counts, 0)
    for i in range(RANDOM_GEOMETRY):
        dim = 1 + i % 4
        sp = space(dim)
        # preflow monotone and idempotent
        P = rand_poly(rng, dim)
        Pbig = ConvexPoly(P.space, P.constraints[:-1])
        F = rand_flow(rng, dim)
        small = preflow(P, F)
        ok = (region_includes(preflow(Pbig, F), small)
              and region_equal(region_preflow(small, F), small)
              and region_equal(small, region_union(Region.of(P), Region.of(pospref(P, F)))))
        counts["preflow"] += 1
        failures["preflow"] += not ok
        # complement partitions the space
        Q = rand_poly(rng, dim, nonempty=False)
        C = complement(Q)
        ok = (region_intersect(Region.of(Q), C).is_empty()
              and region_equal(region_union(Region.of(Q), C), Region.universe(sp)))
        counts["complement"] += 1
        failures["complement"] += not ok
        # difference algebra
        R, S = rand_region(rng, dim), rand_region(rng, dim)
        D = region_difference(R, S)
        ok = (region_intersect(D, S).is_empty()
              and region_equal(region_union(D, region_intersect(R, S)), R))
        counts["difference"] += 1
        failures["difference"] += not ok
        # Fourier-Motzkin against witness search
        counts["fm"] += 1
        failures["fm"] += not _fm_sound(rand_poly(rng, dim, nonempty=False), rng)
        # ru leaves bounded or thin pieces
        G = rand_region(rng, dim)
        F2 = rand_flow(rng, dim)
        out = ru(G, F2)
        ok = region_includes(G, out) and all(is_bounded_wrt(p, F2) or is_thin_wrt(p, F2) for p in out.pieces)
        counts["ru"] += 1
        failures["ru"] += not ok
        # with the origin in cl(F) nothing is bounded
        counts["origin"] += 1
        failures["origin"] += is_bounded_wrt(rand_poly(rng, dim), _flow_around_origin(rng, dim))
    total = sum(counts.values())
    bad = sum(failures.values())
    shown = ", ".join(f"{k} {failures[k]}/{counts[k]}" for k in counts)
    return record(6, bad == 0 and min(counts.values()) >= RANDOM_GEOMETRY,
                  f"geometry: {total} random instances in dims 1-4 ({RANDOM_GEOMETRY} per property), {bad} failures ({shown})")


def criterion_7():
    H, spec = parse_model(gen_tnc(2))
    W = safety_region(H, spec.states).winning
    strategy = extract_strategy(H, W)
    problems = check_strategy(H, strategy)
    t1 = Region.of(ConvexPoly(H.space, [((0, 0, 1), 1, GE)]))
    outside = [i for i, R in strategy.permitted.items() if not region_includes(t1, R)]
    closed = all(region_includes(W.get(H.transitions[i].source), R)
                 and region_includes(W.get(H.transitions[i].target), jump_image(H.transitions[i].jump, R))
                 for i, R in strategy.permitted.items())
    ok = not problems and not outside and closed
    return record(7, ok, f"strategy on TNC 2 pits: {len(strategy.permitted)} turns, "
                  f"closure violations {len(problems)}, turns outside t >= 1: {len(outside)}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


def test_criterion_1():
    assert criterion_1(), RESULTS[1]


def test_criterion_2():
    assert criterion_2(), RESULTS[2]


def test_criterion_3():
    assert criterion_3(), RESULTS[3]


def test_criterion_4():
    assert criterion_4(), RESULTS[4]


def test_criterion_5():
    assert criterion_5(), RESULTS[5]


def test_criterion_6():
    assert criterion_6(), RESULTS[6]


def test_criterion_7():
    assert criterion_7(), RESULTS[7]


if __name__ == "__main__":
    start = time.perf_counter()
    passed = sum(bool(c()) for c in CRITERIA)
    print(f"{passed}/{len(CRITERIA)} criteria pass ({time.perf_counter() - start:.0f}s)")
    sys.exit(0 if passed == len(CRITERIA) else 1)
