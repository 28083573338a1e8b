from fractions import Fraction

from hypothesis import given, settings, strategies as st

from helpers import X1, XY, box, convex_polygon, rand_region, reg, seeded, slice_xy
from switchsynth.discrete import jump_image
from switchsynth.generators import gen_tnc
from switchsynth.geometry import (
    Region, region_closure, region_complement, region_equal, region_includes,
)
from switchsynth.model import SymStateSet
from switchsynth.parser import parse_model
from switchsynth.synthesis import (
    Status, check_strategy, cpre, cpre_reach, extract_strategy, reach_region, safety_region,
)


def states(H, **regions):
    return SymStateSet(H.space, {k: reg(v, H.space) for k, v in regions.items()})


STILL = "var x; location A { inv: true; flow: dx == 0; }"
DRIFT = "var x; location A { inv: true; flow: 1 <= dx & dx <= 2; }"


def test_cpre_empty():
    H, _ = parse_model(STILL)
    assert cpre(H, SymStateSet(H.space)).is_empty()


def test_cpre_without_threats_is_identity():
    H, _ = parse_model(STILL)
    A = states(H, A="0 <= x & x <= 1")
    assert cpre(H, A).equals(A)


def test_cpre_flow_escape():
    H, _ = parse_model(DRIFT)
    got = cpre(H, states(H, A="0 <= x & x <= 1"))
    assert got.is_empty()


def test_cpre_controllable_exit_saves():
    text = DRIFT + """
        location B { inv: true; flow: dx == 0; }
        trans A -> B { guard: x >= 1/2; update: keep(x); kind: controllable; }"""
    H, _ = parse_model(text)
    got = cpre(H, states(H, A="0 <= x & x <= 1", B="true"))
    # from [0, 1/2) the drift reaches the guard before leaving [0, 1]
    assert region_equal(got.get("A"), reg("0 <= x & x <= 1"))


def test_cpre_uncontrollable_exit_threatens():
    text = STILL + """
        location B { inv: true; flow: dx == 0; }
        trans A -> B { guard: x >= 1/2; update: keep(x); kind: uncontrollable; }"""
    H, _ = parse_model(text)
    got = cpre(H, states(H, A="0 <= x & x <= 1"))
    assert region_equal(got.get("A"), reg("0 <= x & x < 1/2"))


def _tnc_unsafe(W, loc):
    return region_closure(region_complement(slice_xy(W.get(loc), {2: 0})))


PITS = [box(0, 2, 0, 1), box(2, 4, -1, 0)]
SW1 = PITS + [convex_polygon((0, 1), (1, 2), (3, 2), (3, 1)), box(2, 5, 0, 1),
              convex_polygon((4, 0), (5, 0), (4, -1))]
SE1 = PITS + [convex_polygon((0, 1), (0, 2), (1, 2), (2, 1)), convex_polygon((2, 0), (2, 1), (3, 1), (4, 0)),
              convex_polygon((1, 0), (2, 0), (2, -1)), convex_polygon((-1, 2), (-1, 1), (0, 0), (0, 2))]


def test_tnc_cpre_once():
    H, spec = parse_model(gen_tnc(2))
    W1 = spec.states.intersect(cpre(H, spec.states))
    assert region_equal(_tnc_unsafe(W1, "SW"), region_closure(Region(XY, SW1)))
    assert region_equal(_tnc_unsafe(W1, "SE"), region_closure(Region(XY, SE1)))


def test_trivial_safety_one_iteration():
    H, _ = parse_model(STILL)
    T = states(H, A="true")
    res = safety_region(H, T)
    assert res.status is Status.FIXPOINT and res.iterations == 1
    assert res.winning.equals(T)


def test_safety_budget():
    H, spec = parse_model(gen_tnc(2))
    res = safety_region(H, spec.states, max_iter=1)
    assert res.status is Status.BUDGET_EXHAUSTED and not res.realizable


def test_safety_snapshots_decrease_and_fixpoint_holds():
    H, spec = parse_model(gen_tnc(1))
    res = safety_region(H, spec.states, keep_snapshots=True)
    assert res.status is Status.FIXPOINT and res.realizable
    for a, b in zip(res.snapshots, res.snapshots[1:]):
        assert a.includes(b)
    assert res.winning.equals(spec.states.intersect(cpre(H, res.winning)))


def test_cpre_reach_everything():
    H, _ = parse_model("var x; location A { inv: true; flow: dx == 1; }")
    got = cpre_reach(H, states(H, A="true"))
    assert region_equal(got.get("A"), reg("true"))


def test_cpre_reach_interval():
    H, _ = parse_model(DRIFT)
    got = cpre_reach(H, states(H, A="2 <= x & x <= 3"))
    assert region_equal(got.get("A"), reg("x <= 3"))


SINK = """
var x;
location L { inv: true; flow: dx == 1; }
location G { inv: true; flow: dx == 0; }
location S { inv: true; flow: dx == 0; }
trans win: L -> G { guard: x >= 5; update: keep(x); kind: controllable; }
trans lose: L -> S { guard: GUARD; update: keep(x); kind: uncontrollable; }
"""


def test_cpre_reach_sink_blocks():
    H, _ = parse_model(SINK.replace("GUARD", "x >= 4"))
    got = cpre_reach(H, states(H, G="true"))
    L = got.get("L")
    assert not L.contains_point((4,)) and not L.contains_point((Fraction(9, 2),))
    assert L.is_empty()


def test_cpre_reach_sink_window():
    H, _ = parse_model(SINK.replace("GUARD", "4 <= x & x <= 9/2"))
    got = cpre_reach(H, states(H, G="true"))
    assert region_equal(got.get("L"), reg("x > 9/2"))


def test_reach_empty_target():
    H, _ = parse_model(DRIFT)
    res = reach_region(H, SymStateSet(H.space))
    assert res.status is Status.FIXPOINT and res.iterations == 1 and res.winning.is_empty()


def test_reach_chain():
    H, _ = parse_model("var x; location A { inv: true; flow: dx == 1; }")
    res = reach_region(H, states(H, A="x >= 10"), keep_snapshots=True)
    assert res.status is Status.FIXPOINT
    assert region_equal(res.snapshots[1].get("A"), reg("true"))
    for a, b in zip(res.snapshots, res.snapshots[1:]):
        assert b.includes(a)


def test_reach_losing_sink():
    H, _ = parse_model(SINK.replace("GUARD", "true"))
    res = reach_region(H, states(H, G="true"))
    assert res.winning.get("L").is_empty()


def test_reach_budget():
    text = """
    var x;
    location A { inv: true; flow: dx == 0; }
    location B { inv: true; flow: dx == 0; }
    location C { inv: true; flow: dx == 0; }
    trans A -> B { guard: true; update: keep(x); kind: controllable; }
    trans B -> C { guard: true; update: keep(x); kind: controllable; }
    """
    H, _ = parse_model(text)
    res = reach_region(H, states(H, C="true"), max_iter=1)
    assert res.status is Status.BUDGET_EXHAUSTED


def test_extract_strategy_empty():
    H, spec = parse_model(gen_tnc(2))
    s = extract_strategy(H, SymStateSet(H.space))
    assert s.permitted and all(R.is_empty() for R in s.permitted.values())


def test_extract_strategy_tnc():
    H, spec = parse_model(gen_tnc(2))
    W = safety_region(H, spec.states).winning
    s = extract_strategy(H, W)
    t1 = reg("t >= 1", H.space)
    for i, R in s.permitted.items():
        e = H.transitions[i]
        assert region_includes(t1, R)
        assert region_includes(W.get(e.source), R)
        assert region_includes(W.get(e.target), jump_image(e.jump, R))
    assert check_strategy(H, s) == []
    # at (-2, 0) heading SW with t = 1 a turn is allowed
    assert s.allowed(H, "SW", (-2, 0, 1))


def test_extract_strategy_empty_target():
    text = STILL + """
        location B { inv: true; flow: dx == 0; }
        trans A -> B { guard: true; update: keep(x); kind: controllable; }"""
    H, _ = parse_model(text)
    s = extract_strategy(H, states(H, A="true"))
    assert s.permitted[0].is_empty()


TOY = """
var x;
location A { inv: x <= 10; flow: 1 <= dx & dx <= 2; }
location B { inv: x >= -10; flow: -1 <= dx & dx <= 0; }
trans A -> B { guard: x >= 1; update: keep(x); kind: controllable; }
trans B -> A { guard: x <= 0; update: x' == x - 1; kind: uncontrollable; }
"""


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_cpre_shrinks_and_is_monotone(seed):
    H, _ = parse_model(TOY)
    rng = seeded(seed)

    def rand_states():
        return SymStateSet(H.space, {l: Region(X1, rand_region(rng, 1).pieces) for l in ("A", "B")})
    A = rand_states()
    Abig = A.union(rand_states())
    small, big = cpre(H, A), cpre(H, Abig)
    assert A.includes(small)
    assert big.includes(small)
