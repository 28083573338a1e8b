from fractions import Fraction

import pytest

from helpers import X1, X2, flow, reg
from switchsynth.geometry import EQ, GE, ConvexPoly, Region, region_equal
from switchsynth.oracle import (
    Interval, Verdict, interval_1d_membership, interval_1d_oracle, intervals_to_region,
    lattice_directions, straightline_may_oracle,
)

U23 = [Interval.closed(2, 3)]


def as_region(ivs):
    return intervals_to_region(ivs, X1)


def test_1d_may_blocked():
    V = [Interval(Fraction(1), Fraction(3, 2), True, False)]
    got = as_region(interval_1d_oracle((1, 1), U23, V))
    assert region_equal(got, reg("3/2 <= x & x <= 3"))


def test_1d_must_sweeps_left():
    got = as_region(interval_1d_oracle((1, 2), U23, [], "must"))
    assert region_equal(got, reg("x <= 3"))


def test_1d_may_two_way_flow():
    got = interval_1d_oracle((-1, 1), [Interval.point(5)], [], "may")
    assert got == [Interval(None, None)]


def test_1d_must_with_zero_in_flow_stays_put():
    got = as_region(interval_1d_oracle((0, 1), U23, [], "must"))
    assert region_equal(got, reg("2 <= x & x <= 3"))


def test_1d_must_closed_avoidance():
    got = as_region(interval_1d_oracle((1, 2), U23, [Interval.point(1)], "must"))
    assert region_equal(got, reg("1 < x & x <= 3"))


def test_1d_oracle_accepts_regions():
    got = interval_1d_oracle((1, 1), reg("2 <= x & x <= 3"), reg("x == 1"))
    assert region_equal(as_region(got), reg("1 < x & x <= 3"))


def test_1d_errors():
    with pytest.raises(ValueError):
        interval_1d_oracle((2, 1), U23, [])
    with pytest.raises(ValueError):
        interval_1d_oracle((1, 1), U23, [], "sometimes")
    with pytest.raises(ValueError):
        interval_1d_oracle((1, 1), reg("x >= 0 & y >= 0", X2), [])


def test_1d_membership_is_exact():
    v = interval_1d_membership((1, 1), U23, [], 0)
    assert v.verdict is Verdict.EXACT_YES and v
    v = interval_1d_membership((1, 1), U23, [], 4)
    assert v.verdict is Verdict.EXACT_NO and not v


def test_interval_basics():
    iv = Interval(Fraction(0), Fraction(1), False, True)
    assert 1 in iv and 0 not in iv
    assert Interval(Fraction(1), Fraction(1), True, False).is_empty()
    assert str(iv) == "(0, 1]"


def test_straightline_reaches():
    F = flow("dx == 1")
    v = straightline_may_oracle(F, reg("2 <= x & x <= 3"), Region.empty(X1), (0,))
    assert v.verdict is Verdict.WITNESS_FOUND
    assert v.witness[0] == (0,) and v.witness[-1] == (2,)


def test_straightline_blocked():
    F = flow("dx == 1")
    v = straightline_may_oracle(F, reg("2 <= x & x <= 3"), reg("1 <= x & x < 3/2"), (0,))
    assert v.verdict is Verdict.NO_WITNESS_IN_SAMPLE


def test_straightline_wong_toi_start_excluded():
    D = X2.dotted()
    F = ConvexPoly(D, [((1, 0), -1, GE), ((-1, 0), -1, GE), ((0, 1), 1, EQ)])
    box = lambda x0, x1, y0, y1: ConvexPoly.from_box(X2, {"x": (x0, x1), "y": (y0, y1)})
    U = Region.of(box(-20, 20, 10, 11))
    V = Region.of(box(-10, 5, 5, 6), box(5, 20, 5, 6))
    v = straightline_may_oracle(F, U, V, (5, 0), grid=([(-25, 25), (-1, 12)], Fraction(1, 4)))
    assert v.verdict is Verdict.NO_WITNESS_IN_SAMPLE


def test_straightline_never_exact():
    F = flow("dx == 1")
    for start in [(0,), (5,)]:
        v = straightline_may_oracle(F, reg("2 <= x & x <= 3"), Region.empty(X1), start)
        assert v.verdict in (Verdict.WITNESS_FOUND, Verdict.NO_WITNESS_IN_SAMPLE)


def test_straightline_empty_lattice():
    with pytest.raises(ValueError):
        straightline_may_oracle(flow("dx == 1"), reg("x >= 0"), Region.empty(X1), (0,),
                                grid=([(1, 0)], 1))


def test_lattice_directions():
    dirs = lattice_directions(flow("1 <= dx & dx <= 2"), step=1, radius=2)
    assert dirs == [(1,), (2,)]
