# %% [markdown]
# The two continuous-evolution operators on small instances, next to the
# exact 1-D oracle and the straight-line sampler.

# %%
from fractions import Fraction

from switchsynth.geometry import ConvexPoly, Region, VarSpace
from switchsynth.oracle import interval_1d_oracle, straightline_may_oracle
from switchsynth.parser import format_region, parse_region
from switchsynth.rwa import rwa_may, rwa_must

X = VarSpace.of("x")
D = X.dotted()
U = parse_region("2 <= x & x <= 3", X)
V = parse_region("1 <= x & x < 3/2", X)

# %%
F = parse_region("dx == 1", D).pieces[0]
stats, trace = {}, []
print("may:", format_region(rwa_may(F, U, V, trace=trace, stats=stats)))
print(stats, len(trace), "entry regions")
print("oracle:", [str(iv) for iv in interval_1d_oracle((1, 1), U, V)])

# %% [markdown]
# Must-semantics with a drifting rate.  The literal target from the
# appendix collapses to U; the corrected one gives the whole left ray.

# %%
F12 = parse_region("1 <= dx & dx <= 2", D).pieces[0]
none = Region.empty(X)
print("corrected:", format_region(rwa_must(F12, U, none)))
print("literal:  ", format_region(rwa_must(F12, U, none, literal_target=True)))
print("oracle:   ", [str(iv) for iv in interval_1d_oracle((1, 2), U, none, "must")])

# %% [markdown]
# Two barriers meeting at x = 5 block the band -10 <= x <= 20.  Only starts
# that can steer around the left end at a 45 degree slope get through.

# %%
XY = VarSpace.of("x", "y")
F2 = parse_region("-1 <= dx & dx <= 1 & dy == 1", XY.dotted()).pieces[0]
U2 = Region.of(ConvexPoly.from_box(XY, {"x": (-20, 20), "y": (10, 11)}))
V2 = Region.of(ConvexPoly.from_box(XY, {"x": (-10, 5), "y": (5, 6)}),
               ConvexPoly.from_box(XY, {"x": (5, 20), "y": (5, 6)}))
R = rwa_may(F2, U2, V2)
grid = ([(-25, 25), (-1, 12)], Fraction(1, 4))
for p in [(5, 0), (-15, 0), (0, 0)]:
    v = straightline_may_oracle(F2, U2, V2, p, grid=grid)
    print(p, "engine:", R.contains_point(p), "sampler:", v.verdict.value)
