"""Exact linear algebra over the integers and rationals.

Everything here is fraction-free (Bareiss) elimination on integer matrices.
Rational input rows are first scaled by the lcm of their denominators, which
does not change the solution set of a linear system.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Number = int | Fraction


class SingularSystemError(ValueError):
    """Raised when a system has no solution or more than one."""


def _integer_row(row: Sequence[Number]) -> list[int]:
    den = 1
    for x in row:
        if isinstance(x, Fraction):
            den = lcm(den, x.denominator)
    return [int(x * den) for x in row]


def det(matrix: Sequence[Sequence[Number]]) -> Fraction | int:
    """Determinant by Bareiss elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    scale = 1
    rows = []
    for row in matrix:
        if len(row) != n:
            raise ValueError("matrix is not square")
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        scale *= den
        rows.append([int(x * den) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pivot = rows[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = rows[i][j] * pivot - rows[i][k] * rows[k][j]
                rows[i][j] = num // prev
            rows[i][k] = 0
        prev = pivot
    value = Fraction(sign * rows[n - 1][n - 1], scale)
    return int(value) if value.denominator == 1 else value


def _echelon(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int], list[int]]:
    """Fraction-free row echelon form.

    Returns the reduced rows, the pivot column of each nonzero row, and the
    original index of each row in its final position.
    """
    rows = [list(r) for r in rows]
    order = list(range(len(rows)))
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        swap = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if swap is None:
            continue
        rows[r], rows[swap] = rows[swap], rows[r]
        order[r], order[swap] = order[swap], order[r]
        pivot = rows[r][c]
        for i in range(r + 1, len(rows)):
            lead = rows[i][c]
            for j in range(c, len(rows[i])):
                num = rows[i][j] * pivot - lead * rows[r][j]
                q, rem = divmod(num, prev)
                assert rem == 0
                rows[i][j] = q
        prev = pivot
        pivots.append(c)
        r += 1
    return rows, pivots, order


def rank(matrix: Sequence[Sequence[Number]]) -> int:
    if not matrix:
        return 0
    ncols = len(matrix[0])
    _, pivots, _ = _echelon([_integer_row(r) for r in matrix], ncols)
    return len(pivots)


def independent_rows(matrix: Sequence[Sequence[Number]]) -> list[int]:
    """Indices of a maximal linearly independent subset of rows."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    _, pivots, order = _echelon([_integer_row(r) for r in matrix], ncols)
    return sorted(order[: len(pivots)])


def solve(matrix: Sequence[Sequence[Number]], rhs: Sequence[Number]) -> list[Fraction]:
    """Unique solution of a consistent (possibly overdetermined) system."""
    if len(matrix) != len(rhs):
        raise ValueError("row count mismatch")
    ncols = len(matrix[0]) if matrix else 0
    aug = [_integer_row(list(row) + [b]) for row, b in zip(matrix, rhs)]
    rows, pivots, _ = _echelon(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        raise SingularSystemError("inconsistent system")
    if len(pivots) < ncols:
        raise SingularSystemError("solution is not unique")
    x = [Fraction(0)] * ncols
    for i in reversed(range(ncols)):
        row = rows[i]
        acc = Fraction(row[ncols]) - sum((row[j] * x[j] for j in range(i + 1, ncols)), Fraction(0))
        x[i] = acc / row[i]
    return x


def hermite_rows(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of an integer matrix (zero rows dropped)."""
    work = [list(r) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(work[0])
    out: list[list[int]] = []
    for c in range(ncols):
        active = [r for r in work if r[c] != 0]
        rest = [r for r in work if r[c] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[c] // piv[c]
                r = [a - q * b for a, b in zip(r, piv)]
                (nxt if r[c] != 0 else rest).append(r)
            active = nxt
        if active:
            piv = active[0]
            if piv[c] < 0:
                piv = [-a for a in piv]
            out.append(piv)
        work = [r for r in rest if any(r)]
    for i, row in enumerate(out):
        c = next(j for j, a in enumerate(row) if a != 0)
        for k in range(i):
            q = out[k][c] // row[c]
            out[k] = [a - q * b for a, b in zip(out[k], row)]
    return out


def spans_integer_lattice(rows: Sequence[Sequence[int]], dim: int) -> bool:
    """True iff the integer row span of ``rows`` is all of Z^dim."""
    h = hermite_rows(rows)
    if len(h) != dim:
        return False
    return all(h[i][i] == 1 for i in range(dim))

