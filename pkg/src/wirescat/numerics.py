"""Small shared numerical helpers (polynomial extrapolation to zero)."""

from __future__ import annotations

import numpy as np

from .errors import DomainError


def _check_ladder(x):
    x = np.asarray(x, dtype=float)
    if len(x) < 2:
        raise DomainError("need at least two ladder points to extrapolate")
    if np.any(x <= 0) or np.any(np.diff(x) >= 0):
        raise DomainError("ladder abscissae must be positive and strictly decreasing")
    return x


def neville_diagonal(x, y):
    """All Neville extrapolants of y(x) to x = 0, by increasing order.

    Element k uses the first k+1 ladder points; the gap between successive
    elements is the usual self-estimate of the remaining extrapolation error.
    Works for real or complex y.
    """
    x = _check_ladder(x)
    y = list(y)
    n = len(y)
    # column c of the tableau, updated in place order by order
    col = list(y)
    diag = [y[0]]
    for order in range(1, n):
        col = [
            (x[i] * col[i + 1] - x[i + order] * col[i]) / (x[i] - x[i + order])
            for i in range(n - order)
        ]
        diag.append(col[0])
    return diag


def neville_zero(x, y):
    """Extrapolate samples y(x) to x = 0 by Neville's algorithm.

    x must be strictly decreasing positive abscissae (a geometric ladder in
    practice).  Returns ``(limit, stability)``; ``stability`` is the absolute
    difference between the last two extrapolation orders.
    """
    diag = neville_diagonal(x, y)
    return diag[-1], abs(diag[-1] - diag[-2])
