"""Benchmark model generators."""

from fractions import Fraction
from importlib import resources

# heading -> (dx, dy)
TNC_HEADINGS = {"NE": (1, 1), "NW": (-1, 1), "SE": (1, -1), "SW": (-1, -1)}
# 90-degree turns, both ways
TNC_TURNS = [("NE", "NW"), ("NE", "SE"), ("SW", "NW"), ("SW", "SE")]

WATERTANK_CLOSED = "i0m0o0"


def _q(v):
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def tnc_pits(n):
    """Pit ``k`` (1-based) is ``[2(k-1), 2k] x [1-k, 2-k]``."""
    return [(2 * (k - 1), 2 * k, 1 - k, 2 - k) for k in range(1, n + 1)]


def _rate(var, d, eps):
    if not eps:
        return f"d{var} == {_q(d)}"
    return f"{_q(d - eps)} <= d{var} & d{var} <= {_q(d + eps)}"


def gen_tnc(n, nondet_eps=None):
    """Model text for the truck navigation benchmark with ``n`` pits.

    The truck moves diagonally at unit speed; every 90-degree turn is
    controllable, needs at least one time unit since the last turn and
    resets the clock ``t``.  With ``nondet_eps`` each velocity component may
    deviate from its nominal value by up to that amount.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"number of pits must be a positive integer, got {n!r}")
    eps = Fraction(nondet_eps) if nondet_eps else None
    if eps is not None and eps < 0:
        raise ValueError("nondeterminism width must be nonnegative")
    out = [f"# truck navigation, {n} pit{'s' if n > 1 else ''}"
           + (f", velocity uncertainty {_q(eps)}" if eps else ""), "var x, y, t;", ""]
    for name, (dx, dy) in TNC_HEADINGS.items():
        out.append(f"location {name} {{ inv: true; flow: {_rate('x', dx, eps)} & "
                   f"{_rate('y', dy, eps)} & dt == 1; }}")
    out.append("")
    for a, b in TNC_TURNS:
        for src, dst in ((a, b), (b, a)):
            out.append(f"trans {src}_{dst}: {src} -> {dst} {{ guard: t >= 1; "
                       f"update: t' == 0 & keep(x, y); kind: controllable; }}")
    out.append("")
    out.append("init: SW { x == 0 & y == 2 & t == 0 };")
    out.append("")
    boxes = [f"({x0} <= x & x <= {x1} & {y0} <= y & y <= {y1})"
             for x0, x1, y0, y1 in tnc_pits(n)]
    out.append("spec safe { * : !( " + "\n                 | ".join(boxes) + " ); }")
    return "\n".join(out) + "\n"


def gen_watertank():
    """Model text for the two-tank benchmark.

    Tank levels ``x`` (upper) and ``y`` (lower); three valves: ``in`` fills
    x at rate 1, ``mid`` moves water from x to y at rate 1, ``out`` drains y
    at rate 3.  Both tanks share one weather term in ``[-1/2, 1]``
    (evaporation up to 1/2, rain up to 1), so ``dx - dy`` is fixed in every
    location.  The controller toggles one valve at a time, at least one
    time unit apart.  Levels must stay in ``[0, 8]``.
    """
    out = ["# two water tanks with three valves", "var x, y, t;", ""]
    names = {}
    for i in (0, 1):
        for m in (0, 1):
            for o in (0, 1):
                name = f"i{i}m{m}o{o}"
                names[(i, m, o)] = name
                net = i - m
                diff = i - 2 * m + 3 * o
                out.append(f"location {name} {{ inv: true; flow: dx - dy == {diff} & "
                           f"{_q(net - Fraction(1, 2))} <= dx & dx <= {net + 1} & dt == 1; }}")
    out.append("")
    for (i, m, o), src in names.items():
        for k, valve in enumerate(("in", "mid", "out")):
            flags = [i, m, o]
            flags[k] = 1 - flags[k]
            dst = names[tuple(flags)]
            verb = "open" if flags[k] else "close"
            out.append(f"trans {verb}_{valve}_{src}: {src} -> {dst} {{ guard: t >= 1; "
                       f"update: t' == 0 & keep(x, y); kind: controllable; }}")
    out.append("")
    out.append(f"init: {WATERTANK_CLOSED} {{ x == 4 & y == 4 & t == 0 }};")
    out.append("")
    out.append("spec safe { * : 0 <= x & x <= 8 & 0 <= y & y <= 8; }")
    return "\n".join(out) + "\n"


def bundled_model(name):
    """Text of a model shipped with the package (``tnc2.lha``, ``watertank.lha``)."""
    return resources.files("switchsynth").joinpath("models", name).read_text(encoding="utf-8")


def bundled_model_names():
    return sorted(p.name for p in resources.files("switchsynth").joinpath("models").iterdir()
                  if p.name.endswith(".lha"))
