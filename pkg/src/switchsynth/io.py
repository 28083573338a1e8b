"""JSON export/import of symbolic state sets and strategies.

Rationals are written as ``"p/q"`` strings so nothing passes through floats.
Keys and pieces are emitted in a fixed order, so equal inputs give
byte-identical files.
"""

import json
from fractions import Fraction

from .geometry import EQ, GE, GT, ConvexPoly, Region, VarSpace, make_constraint
from .model import SymStateSet

_REL_OUT = {EQ: "==", GE: ">=", GT: ">"}
_REL_IN = {"==": (EQ, 1), ">=": (GE, 1), ">": (GT, 1), "<=": (GE, -1), "<": (GT, -1)}


class RegionFormatError(ValueError):
    pass


def rat(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rat(text):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise RegionFormatError(f"not a rational: {text!r}") from exc


def poly_to_json(P):
    return {"constraints": [
        {"coeffs": [rat(a) for a in c.coeffs], "rel": _REL_OUT[c.rel], "const": rat(c.const)}
        for c in P.constraints]}


def poly_from_json(obj, space):
    cs = []
    try:
        rows = obj["constraints"]
    except (TypeError, KeyError) as exc:
        raise RegionFormatError("piece without a 'constraints' list") from exc
    for row in rows:
        try:
            coeffs = [parse_rat(a) for a in row["coeffs"]]
            rel, sign = _REL_IN[row["rel"]]
            const = parse_rat(row["const"])
        except KeyError as exc:
            raise RegionFormatError(f"bad constraint {row!r}") from exc
        if len(coeffs) != space.dim:
            raise RegionFormatError(f"constraint has {len(coeffs)} coefficients, expected {space.dim}")
        cs.append(make_constraint([sign * a for a in coeffs], sign * const, rel))
    return ConvexPoly(space, cs)


def region_to_json(R):
    # sort pieces so the output does not depend on how they were produced
    pieces = sorted((poly_to_json(p) for p in R.pieces if not p._empty),
                    key=lambda d: json.dumps(d, sort_keys=True))
    return pieces


def states_to_json(S):
    return {
        "vars": list(S.space.names),
        "locations": {name: region_to_json(R) for name, R in S.items()},
    }


def states_from_json(obj):
    try:
        names = obj["vars"]
        locs = obj["locations"]
    except (TypeError, KeyError) as exc:
        raise RegionFormatError("expected an object with 'vars' and 'locations'") from exc
    space = VarSpace(tuple(names))
    regions = {}
    for name, pieces in locs.items():
        regions[name] = Region(space, [poly_from_json(p, space) for p in pieces])
    return SymStateSet(space, regions)


def strategy_to_json(H, strategy):
    out = states_to_json(strategy.winning)
    permitted = []
    for i, R in sorted(strategy.permitted.items()):
        e = H.transitions[i]
        permitted.append({
            "index": i,
            "name": e.name,
            "source": e.source,
            "target": e.target,
            "region": region_to_json(R),
        })
    return {"vars": out["vars"], "winning": out["locations"], "permitted": permitted}


def dumps(obj):
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def read_states(path):
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise RegionFormatError(f"{path}: {exc}") from exc
    return states_from_json(obj)
