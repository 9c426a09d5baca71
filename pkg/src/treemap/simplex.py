"""Dense primal simplex for LPs in canonical form: max c.x, A x <= b, x >= 0.

Requires b >= 0 so the slack basis is feasible.  Pivoting follows Bland's
anti-cycling rule (smallest-index entering column; ties in the ratio test go
to the row whose basic variable has the smallest index).  Two arithmetic
backends share the algorithm: float64 for speed, and exact rationals
(fractions.Fraction) for inputs too badly scaled for floats -- game matrices
built from near-zero weight floors span twelve orders of magnitude, which is
why callers verify an optimality certificate and retry exactly on failure.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


class SimplexError(RuntimeError):
    """Unbounded LP, iteration cap hit, or malformed input."""


def simplex_max(a: np.ndarray, b: np.ndarray, c: np.ndarray,
                tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray, float]:
    """Float64 solve; returns (x, dual y per constraint, optimal value)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    rows, cols = a.shape
    if (b < 0).any():
        raise SimplexError("canonical form requires b >= 0")
    # tableau: [A | I | b], objective row [-c | 0 | 0]
    tab = np.zeros((rows + 1, cols + rows + 1))
    tab[:rows, :cols] = a
    tab[:rows, cols:cols + rows] = np.eye(rows)
    tab[:rows, -1] = b
    tab[rows, :cols] = -c
    basis = list(range(cols, cols + rows))
    max_iters = 500 + 40 * (rows + cols)
    for _ in range(max_iters):
        obj = tab[rows, :-1]
        entering = -1
        for j in range(cols + rows):
            if obj[j] < -tol:
                entering = j
                break
        if entering < 0:
            break
        col = tab[:rows, entering]
        rhs = tab[:rows, -1]
        leaving = -1
        best_ratio = None
        for i in range(rows):
            if col[i] > 1e-11:
                ratio = rhs[i] / col[i]
                if (best_ratio is None or ratio < best_ratio - 1e-12
                        or (abs(ratio - best_ratio) <= 1e-12
                            and basis[i] < basis[leaving])):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            raise SimplexError("LP is unbounded")
        _pivot(tab, leaving, entering)
        basis[leaving] = entering
    else:
        raise SimplexError("simplex iteration cap exceeded")
    x = np.zeros(cols)
    for i, var in enumerate(basis):
        if var < cols:
            x[var] = tab[i, -1]
    y = tab[rows, cols:cols + rows].copy()
    return np.maximum(x, 0.0), np.maximum(y, 0.0), float(tab[rows, -1])


def _pivot(tab: np.ndarray, row: int, col: int) -> None:
    tab[row] = tab[row] / tab[row, col]
    factors = tab[:, col].copy()
    factors[row] = 0.0
    tab -= np.outer(factors, tab[row])
    tab[:, col] = 0.0
    tab[row, col] = 1.0


def simplex_max_exact(a, b, c) -> tuple[np.ndarray, np.ndarray, float]:
    """Exact-rational solve of the same LP; floats convert losslessly.

    Bland's rule with exact comparisons cannot cycle, so there is no
    iteration cap; returns float arrays of the exact optimum.
    """
    rows = len(a)
    cols = len(a[0])
    zero = Fraction(0)
    tab = [[Fraction(x) for x in row]
           + [Fraction(1) if i == j else zero for j in range(rows)]
           + [Fraction(b[i])]
           for i, row in enumerate(a)]
    obj = [-Fraction(x) for x in c] + [zero] * (rows + 1)
    if any(row[-1] < 0 for row in tab):
        raise SimplexError("canonical form requires b >= 0")
    basis = list(range(cols, cols + rows))
    while True:
        entering = -1
        for j in range(cols + rows):
            if obj[j] < 0:
                entering = j
                break
        if entering < 0:
            break
        leaving = -1
        best_ratio = None
        for i in range(rows):
            if tab[i][entering] > 0:
                ratio = tab[i][-1] / tab[i][entering]
                if (best_ratio is None or ratio < best_ratio
                        or (ratio == best_ratio and basis[i] < basis[leaving])):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            raise SimplexError("LP is unbounded")
        piv = tab[leaving][entering]
        tab[leaving] = [v / piv for v in tab[leaving]]
        for i in range(rows):
            if i != leaving and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [v - f * p for v, p in zip(tab[i], tab[leaving])]
        if obj[entering] != 0:
            f = obj[entering]
            obj = [v - f * p for v, p in zip(obj, tab[leaving])]
        basis[leaving] = entering
    x = [zero] * cols
    for i, var in enumerate(basis):
        if var < cols:
            x[var] = tab[i][-1]
    y = obj[cols:cols + rows]
    value = obj[-1]
    return (np.array([float(v) for v in x]),
            np.array([float(max(v, zero)) for v in y]),
            float(value))
