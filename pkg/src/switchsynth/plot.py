"""2-D cross-sections of regions rendered as SVG.

Every convex piece is clipped to a bounding box, its vertices are found by
intersecting pairs of constraint lines and keeping the feasible ones, and
the polygon is drawn with strict edges dashed.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .geometry import EQ, GE, GT, Region, VarSpace, is_empty, make_constraint, rebase, substitute_values

SIZE = 600
MARGIN = 40


class PlotError(ValueError):
    pass


@dataclass(frozen=True)
class PlotSpec:
    free: tuple  # two variable names, horizontal first
    fix: dict  # name -> Fraction for every other variable
    box: tuple  # xmin, xmax, ymin, ymax as Fractions

    @classmethod
    def make(cls, space, free, fix=None, box=(-1, 6, -2, 3)):
        free = tuple(free)
        fix = {k: Fraction(v) for k, v in (fix or {}).items()}
        if len(free) != 2 or len(set(free)) != 2:
            raise PlotError(f"exactly two free variables needed, got {list(free)}")
        unknown = [v for v in list(free) + list(fix) if v not in space.names]
        if unknown:
            raise PlotError(f"unknown variables {unknown}")
        both = set(free) & set(fix)
        if both:
            raise PlotError(f"variables both free and fixed: {sorted(both)}")
        missing = [v for v in space.names if v not in free and v not in fix]
        if missing:
            raise PlotError(f"variables neither free nor fixed: {missing}")
        box = tuple(Fraction(b) for b in box)
        if len(box) != 4 or box[0] >= box[1] or box[2] >= box[3]:
            raise PlotError(f"bad bounding box {box}")
        return cls(free, fix, box)


def cross_section(R, spec):
    """Pieces of ``R`` on the slice fixed by ``spec``, over the two free
    variables."""
    space = R.space
    values = {space.index(k): v for k, v in spec.fix.items()}
    plane = VarSpace(spec.free)
    pos = [space.index(v) for v in spec.free]
    out = []
    for p in R.pieces:
        q = substitute_values(p, values) if values else p
        q = rebase(q, plane, pos)
        if not is_empty(q):
            out.append(q)
    return Region(plane, out)


def auto_box(regions, spec, pad=1, fallback=10):
    """Bounding box from the axis-parallel constraints of the cross-sections
    of ``regions`` (``spec.box`` is ignored), padded by ``pad``; an axis
    with no such bound gets ``[-fallback, fallback]``."""
    xs, ys = [], []
    for R in regions:
        for p in cross_section(R, spec).pieces:
            for c in p.constraints:
                a, b = c.coeffs
                if a and not b:
                    xs.append(Fraction(c.const, a))
                elif b and not a:
                    ys.append(Fraction(c.const, b))

    def span(vals):
        if not vals:
            return Fraction(-fallback), Fraction(fallback)
        lo, hi = min(vals), max(vals)
        return lo - pad, hi + pad
    return span(xs) + span(ys)


def _box_rows(box):
    x0, x1, y0, y1 = box
    return [make_constraint((1, 0), x0, GE), make_constraint((-1, 0), -x1, GE),
            make_constraint((0, 1), y0, GE), make_constraint((0, -1), -y1, GE)]


def _holds(c, pt):
    # closure test: strict rows are relaxed
    lhs = c.coeffs[0] * pt[0] + c.coeffs[1] * pt[1]
    return lhs == c.const if c.rel == EQ else lhs >= c.const


def polygon(P, box):
    """``(vertices, edges)`` of the closure of the 2-D piece ``P`` clipped to
    ``box``.  Vertices are exact and in counter-clockwise order; ``edges[i]``
    is True when the edge from vertex ``i`` to ``i+1`` lies on a strict
    constraint of ``P``."""
    rows = list(P.constraints)
    frame = _box_rows(box)
    allrows = rows + frame
    pts = set()
    for a, b in combinations(allrows, 2):
        (a1, a2), (b1, b2) = a.coeffs, b.coeffs
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        x = Fraction(a.const * b2 - a2 * b.const, det)
        y = Fraction(a1 * b.const - a.const * b1, det)
        if all(_holds(c, (x, y)) for c in allrows):
            pts.add((x, y))
    if not pts:
        return [], []
    cx = sum(p[0] for p in pts) / len(pts)
    cy = sum(p[1] for p in pts) / len(pts)
    verts = sorted(pts, key=lambda p: (math.atan2(p[1] - cy, p[0] - cx), p))
    edges = []
    n = len(verts)
    for i in range(n):
        u, v = verts[i], verts[(i + 1) % n]
        on = [c for c in rows if _on_line(c, u) and _on_line(c, v)]
        edges.append(bool(on) and all(c.rel == GT for c in on))
    return verts, edges


def _on_line(c, pt):
    return c.coeffs[0] * pt[0] + c.coeffs[1] * pt[1] == c.const


class _Canvas:
    def __init__(self, box, labels, title=""):
        self.box = box
        self.parts = []
        x0, x1, y0, y1 = (float(b) for b in box)
        self.sx = (SIZE - 2 * MARGIN) / (x1 - x0)
        self.sy = (SIZE - 2 * MARGIN) / (y1 - y0)
        self.x0, self.y0 = x0, y0
        self.labels = labels
        self.title = title

    def xy(self, pt):
        px = MARGIN + (float(pt[0]) - self.x0) * self.sx
        py = SIZE - MARGIN - (float(pt[1]) - self.y0) * self.sy
        return f"{px:.2f},{py:.2f}"

    def piece(self, verts, edges, fill):
        if len(verts) >= 3:
            pts = " ".join(self.xy(v) for v in verts)
            self.parts.append(f'<polygon points="{pts}" fill="{fill}" stroke="none"/>')
        n = len(verts)
        if n == 1:
            px, py = self.xy(verts[0]).split(",")
            self.parts.append(f'<circle cx="{px}" cy="{py}" r="1.5" fill="{fill}" stroke="black"/>')
            return
        for i in range(n if n > 2 else 1):
            u, v = verts[i], verts[(i + 1) % n]
            dash = ' stroke-dasharray="4,3"' if edges[i] else ""
            (a, b), (c, d) = self.xy(u).split(","), self.xy(v).split(",")
            self.parts.append(f'<line x1="{a}" y1="{b}" x2="{c}" y2="{d}" stroke="black" '
                              f'stroke-width="1"{dash}/>')

    def render(self):
        x0, x1, y0, y1 = self.box
        head = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
                f'viewBox="0 0 {SIZE} {SIZE}">',
                f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>']
        axes = []
        if x0 <= 0 <= x1:
            a, b = self.xy((0, y0)).split(","), self.xy((0, y1)).split(",")
            axes.append(f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" stroke="#888" stroke-width="0.5"/>')
        if y0 <= 0 <= y1:
            a, b = self.xy((x0, 0)).split(","), self.xy((x1, 0)).split(",")
            axes.append(f'<line x1="{a[0]}" y1="{a[1]}" x2="{b[0]}" y2="{b[1]}" stroke="#888" stroke-width="0.5"/>')
        frame = (f'<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE - 2 * MARGIN}" '
                 f'height="{SIZE - 2 * MARGIN}" fill="none" stroke="black"/>')
        text = [
            f'<text x="{SIZE / 2:.0f}" y="{SIZE - 10}" font-size="14" text-anchor="middle">{self.labels[0]}</text>',
            f'<text x="12" y="{SIZE / 2:.0f}" font-size="14">{self.labels[1]}</text>',
            f'<text x="{MARGIN}" y="{SIZE - MARGIN + 14}" font-size="10">{_num(x0)}</text>',
            f'<text x="{SIZE - MARGIN}" y="{SIZE - MARGIN + 14}" font-size="10" text-anchor="end">{_num(x1)}</text>',
            f'<text x="{MARGIN - 4}" y="{SIZE - MARGIN}" font-size="10" text-anchor="end">{_num(y0)}</text>',
            f'<text x="{MARGIN - 4}" y="{MARGIN + 10}" font-size="10" text-anchor="end">{_num(y1)}</text>',
        ]
        if self.title:
            text.append(f'<text x="{SIZE / 2:.0f}" y="20" font-size="14" text-anchor="middle">{self.title}</text>')
        return "\n".join(head + axes + self.parts + [frame] + text + ["</svg>"]) + "\n"


def _num(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{float(q):g}"


def _sorted_polys(R, box):
    out = []
    for p in R.pieces:
        verts, edges = polygon(p, box)
        if verts:
            out.append((verts, edges))
    out.sort()
    return out


def region_svg(R, spec, fill="#bbbbbb", title=""):
    """SVG of the cross-section of ``R``; an empty slice gives axes only."""
    canvas = _Canvas(spec.box, spec.free, title)
    for verts, edges in _sorted_polys(cross_section(R, spec), spec.box):
        canvas.piece(verts, edges, fill)
    return canvas.render()


def gray(k, n):
    """Shade for states removed at iteration ``k`` of ``n``: later is darker;
    ``k = 0`` (never safe) is black."""
    if k == 0:
        return "#000000"
    level = int(220 - 160 * (k - 1) / max(1, n - 1))
    return f"#{level:02x}{level:02x}{level:02x}"


def iterations_svg(snapshots, spec, title=""):
    """Fixpoint evolution in one location: the box starts black (outside
    the initial safe set), each iterate is painted over in its removal
    shade, and the final set is white."""
    canvas = _Canvas(spec.box, spec.free, title)
    x0, x1, y0, y1 = spec.box
    canvas.piece([(x0, y0), (x1, y0), (x1, y1), (x0, y1)], [False] * 4, gray(0, 1))
    n = len(snapshots) - 1
    for k, R in enumerate(snapshots):
        fill = "#ffffff" if k == n else gray(k + 1, n)
        for verts, edges in _sorted_polys(cross_section(R, spec), spec.box):
            canvas.piece(verts, edges, fill)
    return canvas.render()
