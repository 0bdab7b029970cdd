"""Exact dense linear algebra over a duck-typed field (fraction-based)."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, List, Optional, Tuple

from .scalars import is_zero

Matrix = List[List[Any]]


def _inv(a: Any) -> Any:
    return Fraction(1) / a if isinstance(a, (int, Fraction)) else 1 / a


def rref(mat: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns (exact)."""
    m = [row[:] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if not is_zero(m[i][c])), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = _inv(m[r][c])
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and not is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def nullspace(mat: Matrix) -> List[List[Any]]:
    """Basis of the right nullspace."""
    if not mat:
        return []
    cols = len(mat[0])
    red, pivots = rref(mat)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def solve(mat: Matrix, rhs: List[Any]) -> Optional[List[Any]]:
    """One solution of ``mat @ x = rhs`` or None if inconsistent."""
    if not mat:
        return [] if all(is_zero(v) for v in rhs) else None
    cols = len(mat[0])
    aug = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    red, pivots = rref(aug)
    for row in red:
        if all(is_zero(v) for v in row[:-1]) and not is_zero(row[-1]):
            return None
    x = [Fraction(0)] * cols
    for r, p in enumerate(pivots):
        if p == cols:
            return None
        x[p] = red[r][-1]
    return x


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def mat_inv(a: Matrix) -> Matrix:
    n = len(a)
    aug = [a[i][:] + [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]
