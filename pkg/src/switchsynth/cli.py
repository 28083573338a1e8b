"""Command-line front end: ``switchsynth {synth|reach|gen-tnc|plot|check}``.

Exit codes: 0 realizable, 1 not realizable, 2 iteration budget exhausted,
3 bad input (I/O, parse or validation errors).
"""

import argparse
import logging
import os
import sys
from fractions import Fraction

from . import io as sio
from .generators import bundled_model, bundled_model_names, gen_tnc
from .model import ModelError, validate
from .parser import parse_model
from .plot import PlotError, PlotSpec, auto_box, iterations_svg, region_svg
from .synthesis import Status, extract_strategy, reach_region, safety_region

EXIT_OK, EXIT_UNREALIZABLE, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3

log = logging.getLogger("switchsynth")


class InputError(Exception):
    pass


def _rational(text, what):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{what}: not a rational number: {text!r}") from None


def parse_fix(items):
    """``["t=0", "z=1/2,w=3"]`` -> ``{"t": 0, "z": 1/2, "w": 3}``."""
    out = {}
    for item in items or []:
        for part in item.split(","):
            if not part.strip():
                continue
            name, sep, val = part.partition("=")
            if not sep or not name.strip():
                raise InputError(f"--fix expects var=value, got {part!r}")
            out[name.strip()] = _rational(val, "--fix")
    return out


def parse_box(text):
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 4:
        raise InputError(f"--box expects xmin,xmax,ymin,ymax, got {text!r}")
    return tuple(_rational(p, "--box") for p in parts)


def parse_free(text):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise InputError(f"--plot expects two variables vx,vy, got {text!r}")
    return tuple(parts)


def read_model_text(path):
    """Model text from ``path``; a bare bundled name (``tnc2.lha``) falls
    back to the copy shipped with the package."""
    if os.path.exists(path):
        try:
            with open(path, encoding="utf-8") as f:
                return f.read()
        except OSError as exc:
            raise InputError(f"{path}: {exc.strerror}") from None
    name = os.path.basename(path)
    if name in bundled_model_names():
        log.info("using bundled model %s", name)
        return bundled_model(name)
    raise InputError(f"{path}: no such file (bundled models: {', '.join(bundled_model_names())})")


def load(path, kind):
    text = read_model_text(path)
    try:
        H, spec = parse_model(text, kind)
    except ModelError as exc:
        raise InputError(f"{path}: {exc}") from None
    problems = validate(H)
    for d in problems:
        print(f"{path}: {d}", file=sys.stderr)
    if any(d.level == "error" for d in problems):
        raise InputError(f"{path}: model is not well-formed")
    if spec is None:
        raise InputError(f"{path}: no 'spec {kind}' block")
    return H, spec


def _stem(path):
    base = os.path.basename(path)
    return base[:-4] if base.endswith(".lha") else base


def _plot_spec(args, space, regions):
    free = parse_free(args.plot)
    fix = parse_fix(args.fix)
    box = parse_box(args.box)
    if box is None:
        box = auto_box(regions, PlotSpec.make(space, free, fix))
    return PlotSpec.make(space, free, fix, box)


def _solve(args, kind):
    H, spec = load(args.model, kind)
    solver = safety_region if kind == "safe" else reach_region
    keep = bool(args.dump_iterations or args.plot)
    result = solver(H, spec.states, max_iter=args.max_iter, keep_snapshots=keep)
    stem = _stem(args.model)
    out = args.out or f"{stem}-winning.json"
    sio.write_json(out, sio.states_to_json(result.winning))
    written = [out]
    if kind == "safe":
        strategy = extract_strategy(H, result.winning)
        sjson = args.json or f"{stem}-strategy.json"
        sio.write_json(sjson, sio.strategy_to_json(H, strategy))
        written.append(sjson)
    if args.dump_iterations:
        os.makedirs(args.dump_iterations, exist_ok=True)
        for k, W in enumerate(result.snapshots):
            p = os.path.join(args.dump_iterations, f"iter-{k}.json")
            sio.write_json(p, sio.states_to_json(W))
            written.append(p)
    if args.plot:
        pspec = _plot_spec(args, H.space, [spec.states.get(n) for n in H.location_names()])
        folder = args.dump_iterations or os.path.dirname(os.path.abspath(out))
        for name in H.location_names():
            snaps = [W.get(name) for W in result.snapshots]
            svg = iterations_svg(snaps, pspec, title=name)
            p = os.path.join(folder, f"{stem}-{name}.svg")
            with open(p, "w", encoding="utf-8") as f:
                f.write(svg)
            written.append(p)
    print(f"status: {result.status.value}")
    print(f"iterations: {result.iterations}")
    print(f"realizable: {'yes' if result.realizable else 'no'}")
    print(f"time: {result.elapsed:.2f}s")
    for p in written:
        log.info("wrote %s", p)
    if result.status is Status.BUDGET_EXHAUSTED:
        return EXIT_BUDGET
    return EXIT_OK if result.realizable else EXIT_UNREALIZABLE


def cmd_synth(args):
    return _solve(args, "safe")


def cmd_reach(args):
    return _solve(args, "target")


def cmd_gen_tnc(args):
    try:
        n = int(args.n)
    except ValueError:
        raise InputError(f"number of pits must be an integer, got {args.n!r}") from None
    eps = _rational(args.nondet, "--nondet") if args.nondet is not None else None
    try:
        text = gen_tnc(n, eps)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_plot(args):
    if not args.plot:
        raise InputError("plot needs --plot vx,vy")
    try:
        states = sio.read_states(args.model)
    except OSError as exc:
        raise InputError(f"{args.model}: {exc.strerror}") from None
    names = [args.loc] if args.loc else [n for n, _ in states.items()]
    if args.loc and args.loc not in [n for n, _ in states.items()]:
        raise InputError(f"no location {args.loc!r} in {args.model}")
    pspec = _plot_spec(args, states.space, [states.get(n) for n in names])
    stem = args.out or (_stem(args.model).removesuffix(".json") + ".svg")
    for name in names:
        path = stem if len(names) == 1 else f"{stem.removesuffix('.svg')}-{name}.svg"
        with open(path, "w", encoding="utf-8") as f:
            f.write(region_svg(states.get(name), pspec, title=name))
        print(path)
    return EXIT_OK


def cmd_check(args):
    text = read_model_text(args.model)
    try:
        H, spec = parse_model(text)
    except ModelError as exc:
        raise InputError(f"{args.model}: {exc}") from None
    problems = validate(H)
    for d in problems:
        print(f"{args.model}: {d}")
    print(f"{len(H.locations)} locations, {len(H.transitions)} transitions, "
          f"variables {', '.join(H.space.names)}")
    if any(d.level == "error" for d in problems):
        return EXIT_INPUT
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="switchsynth",
                                description="Exact controller synthesis for linear hybrid automata.")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("model", help="model file (.lha) or bundled model name")
        sp.add_argument("--max-iter", type=int, default=100)
        sp.add_argument("--dump-iterations", metavar="DIR")
        sp.add_argument("--plot", metavar="VX,VY")
        sp.add_argument("--fix", action="append", metavar="VAR=RAT")
        sp.add_argument("--box", metavar="XMIN,XMAX,YMIN,YMAX")
        sp.add_argument("--out", metavar="PATH", help="winning-region JSON")
        sp.add_argument("--json", metavar="PATH", help="strategy JSON (synth only)")
        sp.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)

    s = sub.add_parser("synth", help="safety synthesis")
    common(s)
    s.set_defaults(func=cmd_synth)
    r = sub.add_parser("reach", help="reachability synthesis")
    common(r)
    r.set_defaults(func=cmd_reach)

    g = sub.add_parser("gen-tnc", help="print the n-pit truck model")
    g.add_argument("n")
    g.add_argument("--nondet", metavar="EPS")
    g.add_argument("--out", metavar="PATH")
    g.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)
    g.set_defaults(func=cmd_gen_tnc)

    pl = sub.add_parser("plot", help="render a region JSON cross-section as SVG")
    pl.add_argument("model", metavar="REGION_JSON")
    pl.add_argument("--plot", metavar="VX,VY")
    pl.add_argument("--fix", action="append", metavar="VAR=RAT")
    pl.add_argument("--box", metavar="XMIN,XMAX,YMIN,YMAX")
    pl.add_argument("--loc", metavar="NAME", help="only this location")
    pl.add_argument("--out", metavar="PATH")
    pl.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)
    pl.set_defaults(func=cmd_plot)

    c = sub.add_parser("check", help="parse and validate a model")
    c.add_argument("model")
    c.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)
    c.set_defaults(func=cmd_check)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; 2 means "budget exhausted" here
        return EXIT_INPUT if exc.code else EXIT_OK
    level = logging.WARNING - 10 * min(2, args.verbose)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, PlotError, sio.RegionFormatError) as exc:
        print(f"switchsynth: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"switchsynth: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
