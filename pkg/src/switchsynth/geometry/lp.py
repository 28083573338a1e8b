"""Exact rational feasibility for systems of strict and non-strict inequalities.

The solver works on rows ``a . x  rel  b`` with integer (or rational)
coefficients and free variables ``x``.  Equalities are removed first by
exact Gaussian substitution; the remaining inequalities go through a
dictionary-form simplex with Bland's rule.  Strictness is handled with a
single slack ``eps`` that is maximised subject to ``a . x - b >= eps`` for
every strict row: the system has a real solution iff the optimum is
positive (``eps`` is capped at 1 so the LP stays bounded).
"""

from gmpy2 import mpq

EQ, GE, GT = 0, 1, 2

_ZERO = mpq(0)
_ONE = mpq(1)


def is_feasible(rows, dim):
    """Return True iff some real point satisfies every row.

    ``rows`` is an iterable of ``(coeffs, const, rel)`` meaning
    ``sum(coeffs[i] * x[i]) rel const`` with ``rel`` in ``EQ, GE, GT``.
    """
    return find_point(rows, dim) is not None


def find_point(rows, dim):
    """A satisfying point as a tuple of ``mpq``, or None if infeasible."""
    eqs = []
    ineqs = []
    for coeffs, const, rel in rows:
        row = [mpq(c) for c in coeffs]
        row.append(mpq(const))
        if rel == EQ:
            eqs.append(row)
        else:
            ineqs.append((row, rel == GT))

    # Gaussian substitution of equalities; remember them for back-substitution.
    solved = []
    while eqs:
        eq = eqs.pop()
        piv = next((j for j in range(dim) if eq[j] != 0), None)
        if piv is None:
            if eq[dim] != 0:
                return None
            continue
        p = eq[piv]
        for row in eqs:
            f = row[piv]
            if f:
                f = f / p
                for j in range(dim + 1):
                    if eq[j]:
                        row[j] -= f * eq[j]
        for row, _ in ineqs:
            f = row[piv]
            if f:
                f = f / p
                for j in range(dim + 1):
                    if eq[j]:
                        row[j] -= f * eq[j]
        solved.append((piv, eq))

    # Rows with no variable left are decided on the spot.
    live = []
    for row, strict in ineqs:
        if any(row[j] for j in range(dim)):
            live.append((row, strict))
        elif strict:
            if not (0 > row[dim]):
                return None
        elif not (0 >= row[dim]):
            return None
    x = [_ZERO] * dim
    if live:
        got = _simplex(live, dim)
        if got is None:
            return None
        x = got
    for piv, eq in reversed(solved):
        acc = eq[dim]
        for j in range(dim):
            if j != piv and eq[j]:
                acc -= eq[j] * x[j]
        x[piv] = acc / eq[piv]
    return tuple(x)


def _simplex(ineqs, dim):
    """Values of the ``dim`` free variables at a feasible point, or None."""
    has_strict = any(strict for _, strict in ineqs)
    m = len(ineqs)
    # Dictionary: basic_i = const_i + sum_j tab_i[j] * nonbasic_j.
    # Slack s_i = a_i.x - b_i - e_i*eps.  Variable ids: slacks 0..m-1,
    # eps = m, aux = m+1, free x_j = m+2+j.
    eps_id = m
    aux_id = m + 1
    cols = [m + 2 + j for j in range(dim)]
    if has_strict:
        cols.append(eps_id)
    consts = []
    tab = []
    basis = []
    for i, (row, strict) in enumerate(ineqs):
        r = row[:dim]
        if has_strict:
            r.append(-_ONE if strict else _ZERO)
        tab.append(r)
        consts.append(-row[dim])
        basis.append(i)

    # Pivot every free variable into the basis and move its row aside: it
    # never leaves, but its row is kept up to date to recover its value.
    side = _Side()
    col = 0
    while col < len(cols):
        if cols[col] == eps_id:
            col += 1
            continue
        piv = None
        best = None
        for i in range(len(tab)):
            v = tab[i][col]
            if v:
                size = abs(v)
                if best is None or size < best:
                    piv, best = i, size
        if piv is None:
            # free variable that appears nowhere: value 0
            for r in tab:
                del r[col]
            for r in side.tab:
                del r[col]
            del cols[col]
            continue
        _pivot(tab, consts, basis, cols, piv, col, side)
        side.tab.append(tab.pop(piv))
        side.consts.append(consts.pop(piv))
        side.basis.append(basis.pop(piv))
        # cols[col] now holds the slack that left; keep it (it is >= 0).
        col += 1

    if has_strict:
        # eps <= 1 keeps the objective bounded.
        ecol = cols.index(eps_id)
        r = [_ZERO] * len(cols)
        r[ecol] = -_ONE
        tab.append(r)
        consts.append(_ONE)
        basis.append(aux_id + 1 + dim)

    if tab:
        if any(c < 0 for c in consts):
            if not _phase_one(tab, consts, basis, cols, aux_id, side):
                return None
        if has_strict and not _maximise_eps(tab, consts, basis, cols, eps_id, side):
            return None

    # nonbasic variables are 0; the side rows give the free variables
    x = [_ZERO] * dim
    for b, c in zip(side.basis, side.consts):
        if b >= m + 2 and b < m + 2 + dim:
            x[b - m - 2] = c
    for b, c in zip(basis, consts):
        if b >= m + 2 and b < m + 2 + dim:
            x[b - m - 2] = c
    return x


class _Side:
    """Rows kept out of pivoting decisions but updated by every pivot."""

    __slots__ = ("tab", "consts", "basis")

    def __init__(self):
        self.tab, self.consts, self.basis = [], [], []


def _pivot(tab, consts, basis, cols, r, c, side=None):
    """Exchange basic variable of row ``r`` with nonbasic column ``c``."""
    row = tab[r]
    a = row[c]
    inv = -_ONE / a
    # leaving var: basic = const + a*x_c + rest  =>
    # x_c = (basic - const - rest) / a
    new = [v * inv for v in row]
    new[c] = -inv  # coefficient of the leaving basic variable
    nconst = consts[r] * inv
    tab[r] = new
    consts[r] = nconst
    leaving = basis[r]
    basis[r] = cols[c]
    cols[c] = leaving
    nz = [j for j, v in enumerate(new) if v]
    for i in range(len(tab)):
        if i == r:
            continue
        other = tab[i]
        f = other[c]
        if not f:
            continue
        other[c] = _ZERO
        for j in nz:
            other[j] += f * new[j]
        consts[i] += f * nconst
    if side is not None:
        for i, other in enumerate(side.tab):
            f = other[c]
            if not f:
                continue
            other[c] = _ZERO
            for j in nz:
                other[j] += f * new[j]
            side.consts[i] += f * nconst


def _phase_one(tab, consts, basis, cols, aux_id, side):
    # Chvatal's auxiliary variable: every row gets + aux, minimise aux.
    for r in tab:
        r.append(_ONE)
    for r in side.tab:
        r.append(_ZERO)
    cols.append(aux_id)
    acol = len(cols) - 1
    worst = min(range(len(tab)), key=lambda i: (consts[i], basis[i]))
    _pivot(tab, consts, basis, cols, worst, acol, side)
    # objective: maximise -aux, aux is basic in some row
    while True:
        arow = basis.index(aux_id) if aux_id in basis else None
        if arow is None:
            break
        if consts[arow] == 0:
            # degenerate: pivot aux out on any nonzero entry
            row = tab[arow]
            c = min((j for j, v in enumerate(row) if v), key=lambda j: cols[j], default=None)
            if c is None:
                # aux is identically zero in this row: drop the row
                del tab[arow]
                del consts[arow]
                del basis[arow]
            else:
                _pivot(tab, consts, basis, cols, arow, c, side)
            break
        obj = [-v for v in tab[arow]]
        entering = _bland_entering(obj, cols)
        if entering is None:
            return consts[arow] == 0
        leave = _ratio_test(tab, consts, basis, entering)
        if leave is None:  # cannot happen: aux bounded below by 0
            return False
        _pivot(tab, consts, basis, cols, leave, entering, side)
    acol = cols.index(aux_id)
    for r in tab:
        del r[acol]
    for r in side.tab:
        del r[acol]
    del cols[acol]
    return True


def _maximise_eps(tab, consts, basis, cols, eps_id, side):
    while True:
        if eps_id in basis:
            erow = basis.index(eps_id)
            if consts[erow] > 0:
                return True
            obj = tab[erow]
        else:
            ecol = cols.index(eps_id)
            obj = [_ZERO] * len(cols)
            obj[ecol] = _ONE
        entering = _bland_entering(obj, cols)
        if entering is None:
            return False
        leave = _ratio_test(tab, consts, basis, entering)
        if leave is None:  # unbounded is impossible with eps <= 1
            return True
        _pivot(tab, consts, basis, cols, leave, entering, side)


def _bland_entering(obj, cols):
    best = None
    for j, v in enumerate(obj):
        if v > 0 and (best is None or cols[j] < cols[best]):
            best = j
    return best


def _ratio_test(tab, consts, basis, c):
    best = None
    best_ratio = None
    for i, row in enumerate(tab):
        a = row[c]
        if a < 0:
            ratio = consts[i] / -a
            if (best is None or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[best])):
                best, best_ratio = i, ratio
    return best
