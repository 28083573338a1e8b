"""Reader and writer for the textual model format.

Example::

    var x, y, t;
    location SW { inv: true; flow: dx == -1 & dy == -1 & dt == 1; }
    trans turnL: SW -> SE { guard: t >= 1; update: t' == 0 & keep(x, y); kind: controllable; }
    init: SW { x == 0 & y == 2 & t == 0 };
    spec safe { * : !(0 <= x & x <= 2 & 0 <= y & y <= 1); }

Regions may use ``&``, ``|`` and ``!``; flows must be convex.  In flows
``dx`` is the derivative of ``x``; in updates ``x'`` is its new value, and
every primed variable must be constrained.
"""

import re
from fractions import Fraction

from .geometry import (
    EQ, GE, GT, ConvexPoly, Region, VarSpace, is_empty, make_constraint,
    reduce_region, region_complement, region_intersect, region_union,
)
from .model import (
    CONTROLLABLE, UNCONTROLLABLE, HybridAutomaton, Location, ModelError,
    SpecSet, SymStateSet, Transition,
)


class ParseError(ModelError):
    def __init__(self, message, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)


_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>\d+(?:\.\d*)?|\.\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'?)
  | (?P<op><=|>=|==|->|[<>&|!(){}:;,*/+\-])
""", re.VERBOSE)

_KEYWORDS = {"var", "location", "trans", "init", "spec", "true", "false", "keep"}
_RELS = {"<", "<=", "==", ">=", ">"}


class Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"{self.kind}:{self.text!r}@{self.line}:{self.col}"


def tokenize(text):
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), line, pos - line_start + 1))
        nl = m.group().count("\n")
        if nl:
            line += nl
            line_start = m.start() + m.group().rindex("\n") + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class _Linear:
    """A linear expression: coefficient per variable index plus a constant."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs=None, const=Fraction(0)):
        self.coeffs = coeffs or {}
        self.const = Fraction(const)

    def is_const(self):
        return not any(self.coeffs.values())

    def add(self, other, sign=1):
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0) + sign * v
        return _Linear(c, self.const + sign * other.const)

    def scale(self, k):
        return _Linear({i: k * v for i, v in self.coeffs.items()}, self.const * k)


class _Context:
    """Which identifiers are allowed in a formula and where they map."""

    def __init__(self, space, mapping, what):
        self.space = space
        self.mapping = mapping
        self.what = what


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    # token helpers

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def at(self, text):
        return self.tok.text == text and self.tok.kind in ("op", "ident")

    def accept(self, text):
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            got = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, got {got!r}")

    def ident(self, what="identifier"):
        t = self.tok
        if t.kind != "ident" or t.text in _KEYWORDS or t.text.endswith("'"):
            raise self.error(f"expected {what}, got {t.text or 'end of input'!r}")
        self.i += 1
        return t.text

    # formulas

    def formula(self, ctx):
        R = self.conj(ctx)
        while self.accept("|"):
            R = region_union(R, self.conj(ctx))
        return R

    def conj(self, ctx):
        R = self.unary(ctx)
        while self.accept("&"):
            R = region_intersect(R, self.unary(ctx))
        return R

    def unary(self, ctx):
        if self.accept("!"):
            return region_complement(self.unary(ctx))
        if self.accept("true"):
            return Region.universe(ctx.space)
        if self.accept("false"):
            return Region.empty(ctx.space)
        if self.at("keep"):
            return self.keep(ctx)
        if self.at("("):
            save = self.i
            self.i += 1
            first = None
            try:
                R = self.formula(ctx)
                self.expect(")")
                if self.tok.text not in _RELS | {"+", "-", "*", "/"}:
                    return R
            except ParseError as err:
                first = err
            # maybe a parenthesised arithmetic expression opening a comparison
            self.i = save
            try:
                return self.comparison(ctx)
            except ParseError:
                if first is not None:
                    raise first from None
                raise
        return self.comparison(ctx)

    def keep(self, ctx):
        tok = self.tok
        self.expect("keep")
        self.expect("(")
        names = [self.ident("variable")]
        while self.accept(","):
            names.append(self.ident("variable"))
        self.expect(")")
        cs = []
        for name in names:
            a, b = ctx.mapping.get(name), ctx.mapping.get(name + "'")
            if a is None or b is None:
                raise self.error(f"keep({name}) needs {name} and {name}' in {ctx.what}", tok)
            coeffs = [0] * ctx.space.dim
            coeffs[a], coeffs[b] = 1, -1
            cs.append(make_constraint(coeffs, 0, EQ))
        return Region(ctx.space, (ConvexPoly(ctx.space, cs),))

    def comparison(self, ctx):
        start = self.tok
        left = self.expr(ctx)
        if self.tok.text not in _RELS or self.tok.kind != "op":
            raise self.error("expected a comparison operator")
        polys = []
        while self.tok.text in _RELS and self.tok.kind == "op":
            rel = self.tok.text
            self.i += 1
            right = self.expr(ctx)
            polys.append(self._atom(ctx, left, rel, right, start))
            left = right
        cs = [c for p in polys for c in p]
        return Region(ctx.space, (ConvexPoly(ctx.space, cs),))

    def _atom(self, ctx, left, rel, right, tok):
        # normalise to  lhs rel' const
        if rel in ("<", "<="):
            left, right = right, left
            rel = {"<": ">", "<=": ">="}[rel]
        diff = left.add(right, -1)
        coeffs = [diff.coeffs.get(i, 0) for i in range(ctx.space.dim)]
        code = {">": GT, ">=": GE, "==": EQ}[rel]
        return [make_constraint(coeffs, -diff.const, code)]

    def expr(self, ctx):
        e = self.term(ctx)
        while self.tok.kind == "op" and self.tok.text in "+-":
            sign = 1 if self.tok.text == "+" else -1
            self.i += 1
            e = e.add(self.term(ctx), sign)
        return e

    def term(self, ctx):
        e = self.factor(ctx)
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok
            self.i += 1
            f = self.factor(ctx)
            if op.text == "*":
                if e.is_const():
                    e = f.scale(e.const)
                elif f.is_const():
                    e = e.scale(f.const)
                else:
                    raise self.error("non-linear expression", op)
            else:
                if not f.is_const():
                    raise self.error("non-linear expression (division by a variable)", op)
                if f.const == 0:
                    raise self.error("division by zero", op)
                e = e.scale(1 / f.const)
        return e

    def factor(self, ctx):
        t = self.tok
        if self.accept("-"):
            return self.factor(ctx).scale(-1)
        if self.accept("+"):
            return self.factor(ctx)
        if self.accept("("):
            e = self.expr(ctx)
            self.expect(")")
            return e
        if t.kind == "num":
            self.i += 1
            return _Linear(const=Fraction(t.text))
        if t.kind == "ident" and t.text not in _KEYWORDS:
            self.i += 1
            idx = ctx.mapping.get(t.text)
            if idx is None:
                raise self.error(f"unknown variable {t.text!r} in {ctx.what}", t)
            return _Linear({idx: Fraction(1)})
        raise self.error(f"unexpected {t.text or 'end of input'!r}")

    # statements

    def model(self):
        names = []
        locations = []  # (name, inv, flow, tok)
        transitions = []  # (name, src, dst, jump, kind, tok)
        inits = []  # (loc, region, tok)
        specs = []  # (kind, [(loc or "*", region)])
        X = None

        def space():
            nonlocal X
            if X is None:
                if not names:
                    raise self.error("variables must be declared before use")
                X = VarSpace(tuple(names))
            return X

        while self.tok.kind != "eof":
            t = self.tok
            if self.accept("var"):
                if X is not None:
                    raise self.error("var declarations must come first", t)
                while True:
                    tv = self.tok
                    n = self.ident("variable name")
                    if n in names:
                        raise self.error(f"variable {n!r} declared twice", tv)
                    names.append(n)
                    if not self.accept(","):
                        break
                self.expect(";")
            elif self.accept("location"):
                locations.append(self.location(space()))
            elif self.accept("trans"):
                transitions.append(self.transition(space()))
            elif self.accept("init"):
                self.expect(":")
                tl = self.tok
                loc = "*" if self.accept("*") else self.ident("location name")
                self.expect("{")
                R = self.formula(self.plain_ctx(space()))
                self.expect("}")
                self.accept(";")
                inits.append((loc, R, tl))
            elif self.accept("spec"):
                tk = self.tok
                if not (self.accept("safe") or self.accept("target")):
                    raise self.error("expected 'safe' or 'target'", tk)
                entries = []
                self.expect("{")
                while not self.accept("}"):
                    tl = self.tok
                    loc = "*" if self.accept("*") else self.ident("location name")
                    self.expect(":")
                    entries.append((loc, self.formula(self.plain_ctx(space())), tl))
                    self.expect(";")
                self.accept(";")
                specs.append((tk.text, entries))
            else:
                raise self.error(f"unexpected {t.text or 'end of input'!r}")
        return self.assemble(space(), locations, transitions, inits, specs)

    def plain_ctx(self, X):
        return _Context(X, {n: i for i, n in enumerate(X.names)}, "a state formula")

    def location(self, X):
        t = self.tok
        name = self.ident("location name")
        self.expect("{")
        inv, flow = None, None
        while not self.accept("}"):
            tk = self.tok
            if self.accept("inv"):
                self.expect(":")
                inv = self.formula(self.plain_ctx(X))
            elif self.accept("flow"):
                self.expect(":")
                D = X.dotted()
                ctx = _Context(D, {n: i for i, n in enumerate(D.names)}, "a flow")
                R = reduce_region(self.formula(ctx))
                if len(R) > 1:
                    raise self.error(f"flow of {name} is not convex", tk)
                flow = R.pieces[0] if R.pieces else ConvexPoly.empty(D)
                if is_empty(flow):
                    raise self.error(f"empty flow in location {name}", tk)
            else:
                raise self.error("expected 'inv' or 'flow'", tk)
            self.expect(";")
        if flow is None:
            raise self.error(f"location {name} has no flow", t)
        if inv is None:
            inv = Region.universe(X)
        return (name, inv, flow, t)

    def transition(self, X):
        t = self.tok
        label = ""
        first = self.ident("location or transition name")
        if self.accept(":"):
            label, src = first, self.ident("location name")
        else:
            src = first
        self.expect("->")
        dst = self.ident("location name")
        self.expect("{")
        J = X.joint()
        ctx = _Context(J, {n: i for i, n in enumerate(J.names)}, "a jump")
        parts, kind, primed = [], None, set()
        while not self.accept("}"):
            tk = self.tok
            if self.accept("guard") or self.accept("update") or self.accept("jump"):
                self.expect(":")
                s = self.i
                parts.append(self.formula(ctx))
                primed.update(tok.text for tok in self.toks[s:self.i]
                              if tok.kind == "ident" and tok.text.endswith("'"))
                if any(tok.text == "keep" for tok in self.toks[s:self.i]):
                    primed.update(self._kept(s))
            elif self.accept("kind"):
                self.expect(":")
                tv = self.tok
                if self.accept(CONTROLLABLE):
                    kind = CONTROLLABLE
                elif self.accept(UNCONTROLLABLE):
                    kind = UNCONTROLLABLE
                else:
                    raise self.error("expected 'controllable' or 'uncontrollable'", tv)
            else:
                raise self.error("expected 'guard', 'update', 'jump' or 'kind'", tk)
            self.expect(";")
        if kind is None:
            raise self.error(f"transition {src}->{dst} has no kind", t)
        missing = [n for n in X.names if n + "'" not in primed]
        if missing:
            raise self.error(f"transition {src}->{dst} leaves {', '.join(m + chr(39) for m in missing)} "
                             "unconstrained (use keep(...) for unchanged variables)", t)
        jump = Region.universe(J)
        for R in parts:
            jump = region_intersect(jump, R)
        return (label, src, dst, jump, kind, t)

    def _kept(self, start):
        out = set()
        j = start
        while j < self.i:
            if self.toks[j].text == "keep":
                j += 2
                while self.toks[j].text != ")":
                    if self.toks[j].kind == "ident":
                        out.add(self.toks[j].text + "'")
                    j += 1
            j += 1
        return out

    def assemble(self, X, locations, transitions, inits, specs):
        known = {}
        for name, inv, flow, tok in locations:
            if name in known:
                raise ParseError(f"location {name!r} defined twice", tok.line, tok.col)
            known[name] = Location(name, inv, flow)

        def check(loc, tok):
            if loc != "*" and loc not in known:
                raise ParseError(f"unknown location {loc!r}", tok.line, tok.col)

        trans = []
        for label, src, dst, jump, kind, tok in transitions:
            check(src, tok)
            check(dst, tok)
            trans.append(Transition(src, dst, jump, kind, label))

        def states(entries):
            regions = {}
            for loc, R, tok in entries:
                check(loc, tok)
                targets = list(known) if loc == "*" else [loc]
                for l in targets:
                    regions[l] = region_union(regions[l], R) if l in regions else R
            return SymStateSet(X, regions)

        H = HybridAutomaton(X, list(known.values()), trans, states(inits))
        out_specs = []
        for kind, entries in specs:
            S = states(entries)
            S = SymStateSet(X, {l: region_intersect(R, known[l].invariant) for l, R in S.items()})
            out_specs.append(SpecSet(kind, S))
        return H, out_specs


def parse_model_all(text):
    """Parse a model; return the automaton and every spec block in order."""
    return _Parser(text).model()


def parse_model(text, kind=None):
    """Parse a model and return ``(automaton, spec)``.

    ``spec`` is the first spec block (of the requested ``kind`` if given),
    intersected with the invariants, or None if there is none.
    """
    H, specs = parse_model_all(text)
    for s in specs:
        if kind is None or s.kind == kind:
            return H, s
    return H, None


def parse_region(text, space):
    """Parse a single formula over ``space`` (a VarSpace or a list of
    names) into a Region."""
    if not isinstance(space, VarSpace):
        space = VarSpace(tuple(space))
    p = _Parser(text)
    R = p.formula(_Context(space, {n: i for i, n in enumerate(space.names)}, "a formula"))
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r} after the formula")
    return R


def load_model(path, kind=None):
    with open(path, encoding="utf-8") as f:
        return parse_model(f.read(), kind)


# printing

def _fmt_rational(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_poly(P, names):
    if is_empty(P):
        return "false"
    if not P.constraints:
        return "true"
    return " & ".join(c.format(names) for c in P.constraints)


def format_region(R, names=None):
    names = names or R.space.names
    pieces = [p for p in R.pieces if not is_empty(p)]
    if not pieces:
        return "false"
    if len(pieces) == 1:
        return format_poly(pieces[0], names)
    return " | ".join(f"({format_poly(p, names)})" for p in pieces)


def format_model(H, specs=()):
    """Model text that parses back to an equivalent automaton."""
    if isinstance(specs, SpecSet):
        specs = [specs]
    X = H.space
    lines = [f"var {', '.join(X.names)};", ""]
    for l in H.locations:
        lines.append(f"location {l.name} {{ inv: {format_region(l.invariant)}; "
                     f"flow: {format_poly(l.flow, X.dotted().names)}; }}")
    lines.append("")
    J = X.joint()
    for e in H.transitions:
        head = f"{e.name}: " if e.name else ""
        jump = format_region(e.jump, J.names)
        # the reader wants every primed variable named, even if unconstrained
        free = [n for n in X.names if not re.search(rf"\b{re.escape(n)}'", jump)]
        if free:
            jump = f"({jump})" + "".join(f" & {n}' - {n}' == 0" for n in free)
        lines.append(f"trans {head}{e.source} -> {e.target} {{ jump: {jump}; kind: {e.kind}; }}")
    lines.append("")
    for l, R in H.init.items():
        lines.append(f"init: {l} {{ {format_region(R)} }};")
    for s in specs:
        lines.append("")
        lines.append(f"spec {s.kind} {{")
        for l, R in s.states.items():
            lines.append(f"  {l} : {format_region(R)};")
        lines.append("}")
    return "\n".join(lines) + "\n"
