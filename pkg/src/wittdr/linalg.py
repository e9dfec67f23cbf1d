"""Sparse linear algebra over F_p.

Vectors are dicts {row key: residue}.  Columns are eliminated incrementally;
each stored pivot vector only contains pivot keys created after it, so
reduction in creation order terminates.
"""

from .errors import NoSolution


def _axpy(v, c, w, p):
    """v -= c * w in place."""
    for k, x in w.items():
        y = (v.get(k, 0) - c * x) % p
        if y:
            v[k] = y
        else:
            v.pop(k, None)


class Eliminator:
    def __init__(self, p):
        self.p = p
        self.pivots = {}  # row key -> (order, vector, combination)
        self._order = 0

    def reduce(self, vec, combo=None):
        """Reduce vec against stored pivots; returns (residual, combination)."""
        p = self.p
        v = {k: x % p for k, x in vec.items() if x % p}
        c = dict(combo or {})
        while True:
            best = None
            for k in v:
                piv = self.pivots.get(k)
                if piv is not None and (best is None or piv[0] < best[1][0]):
                    best = (k, piv)
            if best is None:
                return v, c
            k, (_, pv, pc) = best
            f = v[k]
            _axpy(v, f, pv, p)
            _axpy(c, f, pc, p)

    def add_column(self, index, vec):
        """Insert column ``index``; returns a nullspace combination if dependent."""
        v, c = self.reduce(vec, {index: 1})
        if not v:
            return c
        k = min(v, key=repr)
        inv = pow(v[k], -1, self.p)
        v = {kk: x * inv % self.p for kk, x in v.items()}
        c = {kk: x * inv % self.p for kk, x in c.items()}
        self.pivots[k] = (self._order, v, c)
        self._order += 1
        return None

    @property
    def rank(self):
        return len(self.pivots)


def nullspace(columns, p):
    """Basis of {lambda : sum lambda_i columns[i] = 0}, as dicts."""
    el = Eliminator(p)
    out = []
    for i, col in enumerate(columns):
        dep = el.add_column(i, col)
        if dep is not None:
            out.append(dep)
    return out


def rank(columns, p):
    el = Eliminator(p)
    for i, col in enumerate(columns):
        el.add_column(i, col)
    return el.rank


def solve(columns, rhs, p):
    """(particular, nullspace) with sum particular_i columns[i] = rhs.

    Raises NoSolution if rhs is outside the column span.
    """
    el = Eliminator(p)
    null = []
    for i, col in enumerate(columns):
        dep = el.add_column(i, col)
        if dep is not None:
            null.append(dep)
    residual, combo = el.reduce(rhs, {})
    if residual:
        raise NoSolution(f"right-hand side not in the span ({len(residual)} residual entries)")
    particular = {k: (-x) % p for k, x in combo.items() if x % p}
    return particular, null


def in_span(columns, vec, p):
    try:
        solve(columns, vec, p)
    except NoSolution:
        return False
    return True
