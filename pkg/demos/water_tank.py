# %% [markdown]
# Water tanks: the 8-location reconstruction and its closed-valves slice.
# Takes about a minute.

# %%
from switchsynth.generators import WATERTANK_CLOSED, gen_watertank
from switchsynth.geometry import Region, VarSpace, rebase, reduce_region, region_closure, substitute_values
from switchsynth.parser import format_region, parse_model
from switchsynth.synthesis import safety_region

XY = VarSpace.of("x", "y")


def closed_slice(text):
    H, spec = parse_model(text)
    res = safety_region(H, spec.states)
    R = res.winning.get(WATERTANK_CLOSED)
    pieces = [rebase(substitute_values(p, {2: 0}), XY, [0, 1]) for p in R.pieces]
    return res, region_closure(reduce_region(Region(XY, pieces)))


# %%
res, S = closed_slice(gen_watertank())
print(res.status.value, res.iterations, "iterations", f"{res.elapsed:.1f}s")
print(format_region(S))

# %% [markdown]
# Variant where the clock only delays the first toggle.

# %%
res2, S2 = closed_slice(gen_watertank().replace("t' == 0", "t' == t"))
print(res2.status.value, res2.iterations, "iterations", f"{res2.elapsed:.1f}s")
print(format_region(S2))
