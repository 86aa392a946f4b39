import numpy as np
import scipy.linalg as sla
from scipy.optimize import linprog
from utils.exceptions import InfeasibleConstraints, UnresolvedDOF

ZERO = 1e-15
# coefficients below this are treated as active positivity bounds
ACTIVE = 1e-7
TIE_BREAKS = ('positivity', 'none')


def row_dict(M, i):
    """Nonzeros of row ``i`` of a CSR matrix as ``{col: value}``."""

    lo, hi = M.indptr[i], M.indptr[i + 1]
    return dict(zip(M.indices[lo:hi].tolist(), M.data[lo:hi].tolist()))

def axpy(acc, x, scale=1.0):

    for k, v in x.items():
        acc[k] = acc.get(k, 0.0) + scale * v
    return acc

def prune(x, tol=ZERO):
    return {k: v for k, v in x.items() if abs(v) > tol}

def put(row, element, unknown, coef=1.0):
    """Add ``coef * unknown`` to the coefficient of ``element``; ``unknown=None`` is the constant."""

    expr = row.setdefault(element, {})
    expr[unknown] = expr.get(unknown, 0.0) + coef
    return row

def put_form(row, form, unknown=None, scale=1.0):
    """Add ``scale * unknown * form`` for a form given as ``{element: value}``."""

    for element, v in form.items():
        put(row, element, unknown, scale * v)
    return row


class LinearSystem:
    """Linear equations ``expr == 0`` over named unknowns.

    An expression maps unknown names to coefficients, ``None`` holding the
    constant term. Leftover degrees of freedom are pinned by the positivity
    of a group of unknowns or reported.
    """

    def __init__(self, relation, tie_break='positivity', tol=1e-12):

        if tie_break not in TIE_BREAKS:
            raise ValueError('Only %s tie-breaks are supported.' % ', '.join(TIE_BREAKS))
        self.relation = relation
        self.tie_break = tie_break
        self.tol = tol
        self.index = {}
        self.rows = []
        self.labels = []

    def unknown(self, name):

        if name not in self.index:
            self.index[name] = len(self.index)
        return self.index[name]

    def add(self, expr, label=None):

        expr = prune(expr)
        if not expr:
            return
        for k in expr:
            if k is not None:
                self.unknown(k)
        self.rows.append(expr)
        self.labels.append(label)

    def add_rows(self, row, label=None, skip=()):
        """One equation per element of a ``{element: expr}`` row."""

        for element, expr in row.items():
            if element not in skip:
                self.add(expr, (label, element))

    def matrix(self):

        A = np.zeros((len(self.rows), len(self.index)))
        b = np.zeros(len(self.rows))
        for i, expr in enumerate(self.rows):
            for k, v in expr.items():
                if k is None:
                    b[i] -= v
                else:
                    A[i, self.index[k]] += v
        return A, b

    def __solve__(self, A, b):

        x, _, _, _ = np.linalg.lstsq(A, b, rcond=None)
        res = float(np.linalg.norm(A @ x - b) / max(1.0, np.linalg.norm(b)))
        if res > self.tol:
            worst = int(np.argmax(np.abs(A @ x - b)))
            label = self.labels[worst] if worst < len(self.labels) else 'positivity'
            raise InfeasibleConstraints('%s %s' % (self.relation, label), res, self.tol)
        return x, res, sla.null_space(A, rcond=1e-10)

    def __pin__(self, x, null, group):
        """Indices of the positivity bounds active at a feasible point."""

        result = linprog(
            np.zeros(null.shape[1]),
            A_ub=-null[group],
            b_ub=x[group],
            bounds=[(None, None)] * null.shape[1],
            method='highs'
        )
        if not result.success:
            raise InfeasibleConstraints(self.relation + ' (positivity)', float('inf'))
        values = x[group] + null[group] @ result.x
        return [i for i, v in zip(group, values) if v <= ACTIVE]

    def solve(self, positive=()):
        """Unique solution as ``{name: value}`` and its relative residual."""

        A, b = self.matrix()
        x, res, null = self.__solve__(A, b)
        group = [self.index[k] for k in positive if k in self.index]
        if null.shape[1] and self.tie_break == 'positivity' and group:
            active = self.__pin__(x, null, group)
            if active:
                pins = np.zeros((len(active), A.shape[1]))
                pins[np.arange(len(active)), active] = 1.0
                x, res, null = self.__solve__(np.vstack([A, pins]), np.concatenate([b, np.zeros(len(active))]))
        if null.shape[1]:
            raise UnresolvedDOF(self.relation, null.shape[1])
        x[np.abs(x) < ZERO] = 0.0
        return {k: float(x[i]) for k, i in self.index.items()}, res
