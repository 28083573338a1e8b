# %% [markdown]
# Truck navigation: safety synthesis on the two-pit model, with the unsafe
# cross-sections printed per iteration and an SVG per heading.

# %%
import os
import tempfile

from switchsynth.generators import gen_tnc
from switchsynth.geometry import Region, VarSpace, rebase, reduce_region, region_complement, substitute_values
from switchsynth.parser import format_region, parse_model
from switchsynth.plot import PlotSpec, iterations_svg
from switchsynth.synthesis import extract_strategy, safety_region

text = gen_tnc(2)
print(text)

# %%
H, spec = parse_model(text)
res = safety_region(H, spec.states, keep_snapshots=True)
print(res.status.value, res.iterations, "iterations", f"{res.elapsed:.2f}s")
print("initial state winning:", res.realizable)

# %% [markdown]
# Slice at t = 0 and look at what each iteration removed in heading SW.

# %%
XY = VarSpace.of("x", "y")


def t0(R):
    pieces = [rebase(substitute_values(p, {2: 0}), XY, [0, 1]) for p in R.pieces]
    return reduce_region(Region(XY, pieces))


for k, W in enumerate(res.snapshots):
    print(k, format_region(region_complement(t0(W.get("SW")))))

# %%
strategy = extract_strategy(H, res.winning)
for i, R in sorted(strategy.permitted.items()):
    e = H.transitions[i]
    print(e.name, len(R.pieces), "pieces")
print("turns allowed at (-2, 0, t=1) heading SW:",
      [H.transitions[i].name for i in strategy.allowed(H, "SW", (-2, 0, 1))])

# %%
out = tempfile.mkdtemp(prefix="tnc-")
spec2d = PlotSpec.make(H.space, ("x", "y"), {"t": 0}, box=(-1, 6, -2, 3))
for name in H.location_names():
    path = os.path.join(out, f"tnc2-{name}.svg")
    with open(path, "w") as f:
        f.write(iterations_svg([W.get(name) for W in res.snapshots], spec2d, title=name))
print("plots in", out)
