"""
Exact rational linear programming
Two-phase tableau simplex with Bland's rule; all arithmetic in Fraction
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)

Row = Sequence
Constraint = Tuple[Row, object]


@dataclass
class LPResult:
    """status is 'optimal', 'infeasible' or 'unbounded'"""
    status: str
    x: Optional[List[Fraction]] = None
    value: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.status != 'infeasible'


def _pivot(tableau: List[List[Fraction]], basis: List[int], row: int, col: int):
    pivot_row = tableau[row]
    p = pivot_row[col]
    if p != 1:
        tableau[row] = pivot_row = [v / p for v in pivot_row]
    for i, other in enumerate(tableau):
        if i != row:
            factor = other[col]
            if factor != 0:
                tableau[i] = [a - factor * b for a, b in zip(other, pivot_row)]
    basis[row] = col


def _run_simplex(tableau: List[List[Fraction]], basis: List[int], cost: Sequence[Fraction],
                 allowed: Sequence[bool]) -> str:
    """Maximize cost . z over the current tableau; returns 'optimal' or 'unbounded'"""
    ncols = len(cost)
    while True:
        entering = None
        for j in range(ncols):
            if not allowed[j] or j in basis:
                continue
            reduced = cost[j] - sum((cost[basis[i]] * tableau[i][j] for i in range(len(basis))), Fraction(0))
            if reduced > 0:
                entering = j
                break
        if entering is None:
            return 'optimal'
        leaving = None
        best = None
        for i, row in enumerate(tableau):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:
            return 'unbounded'
        _pivot(tableau, basis, leaving, entering)


def solve_lp(c: Sequence, A_ub: Iterable[Row] = (), b_ub: Iterable = (),
             A_eq: Iterable[Row] = (), b_eq: Iterable = (),
             free_vars: Iterable[int] = ()) -> LPResult:
    """Maximize c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0 except free_vars"""
    nvars = len(c)
    free_vars = sorted(set(free_vars))
    split = {j: nvars + k for k, j in enumerate(free_vars)}
    width = nvars + len(free_vars)

    def expand(row: Row) -> List[Fraction]:
        vals = [Fraction(v) for v in row]
        if len(vals) != nvars:
            raise ValueError(f"constraint row has {len(vals)} entries, expected {nvars}")
        return vals + [-vals[j] for j in free_vars]

    rows = []
    for a, b in zip(A_ub, b_ub):
        rows.append((expand(a), Fraction(b), 'le'))
    for a, b in zip(A_eq, b_eq):
        rows.append((expand(a), Fraction(b), 'eq'))
    for i, (a, b, kind) in enumerate(rows):
        if b < 0:
            rows[i] = ([-v for v in a], -b, 'ge' if kind == 'le' else 'eq')

    n_slack = sum(1 for _, _, k in rows if k in ('le', 'ge'))
    n_art = sum(1 for _, _, k in rows if k in ('ge', 'eq'))
    ncols = width + n_slack + n_art
    tableau: List[List[Fraction]] = []
    basis: List[int] = []
    artificial = [False] * ncols
    slack_col, art_col = width, width + n_slack
    for a, b, kind in rows:
        row = a + [Fraction(0)] * (n_slack + n_art) + [b]
        if kind == 'le':
            row[slack_col] = Fraction(1)
            basis.append(slack_col)
            slack_col += 1
        else:
            if kind == 'ge':
                row[slack_col] = Fraction(-1)
                slack_col += 1
            row[art_col] = Fraction(1)
            artificial[art_col] = True
            basis.append(art_col)
            art_col += 1
        tableau.append(row)

    if n_art:
        phase1 = [Fraction(-1) if artificial[j] else Fraction(0) for j in range(ncols)]
        _run_simplex(tableau, basis, phase1, [True] * ncols)
        if any(artificial[basis[i]] and tableau[i][-1] != 0 for i in range(len(basis))):
            return LPResult('infeasible')
        i = 0
        while i < len(basis):
            if artificial[basis[i]]:
                col = next((j for j in range(ncols) if not artificial[j] and tableau[i][j] != 0), None)
                if col is None:
                    del tableau[i]
                    del basis[i]
                    continue
                _pivot(tableau, basis, i, col)
            i += 1

    cost = [Fraction(v) for v in c] + [-Fraction(c[j]) for j in free_vars]
    cost += [Fraction(0)] * (ncols - width)
    status = _run_simplex(tableau, basis, cost, [not artificial[j] for j in range(ncols)])
    if status == 'unbounded':
        return LPResult('unbounded')
    z = [Fraction(0)] * ncols
    for i, col in enumerate(basis):
        z[col] = tableau[i][-1]
    x = z[:nvars]
    for j, neg in split.items():
        x[j] -= z[neg]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult('optimal', x, value)


def find_feasible_point(nvars: int, strict: Iterable[Constraint] = (), weak: Iterable[Constraint] = (),
                        equal: Iterable[Constraint] = (), free: bool = False,
                        slack_cap: Fraction = Fraction(1)) -> Optional[List[Fraction]]:
    """A point with a.x < b (strict), a.x <= b (weak), a.x = b (equal), or None.

    Strict rows get a common slack t: a.x + t <= b, 0 <= t <= slack_cap, and t is
    maximized; the system is strictly feasible iff the optimum is positive.
    """
    strict, weak, equal = list(strict), list(weak), list(equal)
    width = nvars + (1 if strict else 0)

    def pad(row: Row, t_coef=0) -> List[Fraction]:
        vals = [Fraction(v) for v in row]
        return vals + ([Fraction(t_coef)] if strict else [])

    A_ub = [pad(a, 1) for a, _ in strict] + [pad(a) for a, _ in weak]
    b_ub = [b for _, b in strict] + [b for _, b in weak]
    if strict:
        A_ub.append([Fraction(0)] * nvars + [Fraction(1)])
        b_ub.append(slack_cap)
    A_eq = [pad(a) for a, _ in equal]
    b_eq = [b for _, b in equal]
    c = [Fraction(0)] * nvars + ([Fraction(1)] if strict else [])
    result = solve_lp(c, A_ub, b_ub, A_eq, b_eq, free_vars=range(nvars) if free else ())
    if result.status != 'optimal':
        if result.status == 'unbounded':
            logger.debug("unexpected unbounded feasibility LP")
        return None
    if strict and result.x[nvars] <= 0:
        return None
    return result.x[:nvars] if width else []
