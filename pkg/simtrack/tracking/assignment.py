# -*- coding: utf-8 -*-
from typing import List, NamedTuple, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment


class Assignment(NamedTuple):
    matches: List[Tuple[int, int]]
    unassigned_rows: List[int]
    unassigned_cols: List[int]


def _optimum(work: np.ndarray, rows: List[int], cols: List[int]) -> float:
    if not rows or not cols:
        return 0.0
    sub = work[np.ix_(rows, cols)]
    r, c = linear_sum_assignment(sub)
    return float(sub[r, c].sum())


def _first_optimal(work: np.ndarray, total: float) -> List[Tuple[int, int]]:
    """Among the assignments of ``work`` costing ``total``, return the one
    that is smallest when read row by row, a row's columns in ascending
    order before leaving the row unmatched.

    """
    n, m = work.shape
    size = min(n, m)
    tol = 1e-12 * (n + m) * (abs(total) + 1.0)
    free_cols = list(range(m))
    fixed, pairs = 0.0, []
    for r in range(n):
        rest = list(range(r + 1, n))
        for c in free_cols + [None]:
            cols = [j for j in free_cols if j != c]
            if len(pairs) + (c is not None) + min(len(rest), len(cols)) \
                    < size:
                continue
            here = fixed + (work[r, c] if c is not None else 0.0)
            if here + _optimum(work, rest, cols) <= total + tol:
                break
        if c is not None:
            fixed += work[r, c]
            pairs.append((r, c))
            free_cols.remove(c)
    return pairs


def hungarian_assign(cost, gate: float=np.inf) -> Assignment:
    """Minimum cost assignment of rows to columns among pairs whose cost is
    finite and not above ``gate``.

    Gated pairs get a cost larger than any sum of admissible costs, so the
    solver only uses them when nothing else is left; such pairs are dropped
    from the result.

    Ties are broken lexicographically: of all optimal assignments the one
    giving row 0 its lowest possible column wins, then row 1, and so on.

    :Example:

        >>> hungarian_assign([[1, 10], [10, 1]]).matches
        [(0, 0), (1, 1)]
        >>> hungarian_assign([[1, 1], [1, 1]]).matches
        [(0, 0), (1, 1)]

    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2:
        cost = cost.reshape(len(cost), -1)
    n, m = cost.shape
    if n == 0 or m == 0:
        return Assignment([], list(range(n)), list(range(m)))

    allowed = np.isfinite(cost) & (cost <= gate)
    if not allowed.any():
        return Assignment([], list(range(n)), list(range(m)))
    big = (np.abs(cost[allowed]).sum() + 1.0) * 2.0
    work = np.where(allowed, cost, big)
    rows, cols = linear_sum_assignment(work)
    pairs = _first_optimal(work, float(work[rows, cols].sum()))

    matches = [(r, c) for r, c in pairs if allowed[r, c]]
    used_rows = {r for r, _ in matches}
    used_cols = {c for _, c in matches}
    return Assignment(matches,
                      [r for r in range(n) if r not in used_rows],
                      [c for c in range(m) if c not in used_cols])
