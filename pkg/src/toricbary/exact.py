"""Exact integer and rational linear algebra.

Vectors are tuples of ``int`` or ``Fraction``; matrices are tuples of row
tuples. Nothing here ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

IntVector = tuple[int, ...]
RatVector = tuple[Fraction, ...]
IntMatrix = tuple[tuple[int, ...], ...]


def primitive(v: Sequence[int]) -> IntVector:
    """Divide an integer vector by the gcd of its entries, keeping its sign."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(int(x) // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g == 1


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b)) if b else []
    return [[dot(row, col) for col in bt] for row in a]


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def det(a: Sequence[Sequence]):
    """Determinant of a square matrix.

    Integer input goes through fraction-free Bareiss elimination so the
    result stays an ``int``; rational input is reduced with ``Fraction``.
    """
    n = len(a)
    if n == 0:
        return 1
    if any(isinstance(x, Fraction) for row in a for x in row):
        m = [[Fraction(x) for x in row] for row in a]
        sign = 1
        result = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if m[r][c] != 0), None)
            if p is None:
                return Fraction(0)
            if p != c:
                m[c], m[p] = m[p], m[c]
                sign = -sign
            result *= m[c][c]
            for r in range(c + 1, n):
                f = m[r][c] / m[c][c]
                if f:
                    m[r] = [x - f * y for x, y in zip(m[r], m[c])]
        return sign * result
    m = [[int(x) for x in row] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rref(a: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals and its pivot columns."""
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def solve(a: Sequence[Sequence], b: Sequence) -> tuple[RatVector | None, int]:
    """Solve ``a x = b`` exactly.

    Returns ``(x, nullity)`` where ``x`` is a particular solution (free
    variables set to zero) or ``None`` when the system is inconsistent.
    """
    cols = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    m, pivots = rref(aug)
    if cols in pivots:
        return None, cols - len(pivots) + 1
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = m[i][cols]
    return tuple(x), cols - len(pivots)


def inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in m]


def affine_dimension(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of a nonempty point set."""
    if len(points) <= 1:
        return 0
    base = points[0]
    return rank([[x - y for x, y in zip(p, base)] for p in points[1:]])


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular; ``D`` is diagonal with nonnegative entries
    ``d_1 | d_2 | ...``. The pivot at each stage is the entry of smallest
    nonzero absolute value in the remaining block.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    d = [[int(x) for x in row] for row in m]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for mat in (d, v):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row_dst -= q * row_src
        for mat in (d, u):
            mat[dst] = [x - q * y for x, y in zip(mat[dst], mat[src])]

    def add_col(src, dst, q):
        for mat in (d, v):
            for row in mat:
                row[dst] -= q * row[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return u, d, v
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = d[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(t, i, d[i][t] // p)
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(t, j, d[t][j] // p)
                    dirty = dirty or d[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            # pull the offending row into row t; next pass lowers the pivot
            add_row(bad, t, -1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return u, d, v


def integer_kernel_basis(m: Sequence[Sequence[int]], ncols: int | None = None) -> list[IntVector]:
    """Basis of the saturated lattice ``{v in Z^n : M v = 0}``.

    ``ncols`` is needed only when ``m`` has no rows.
    """
    if not m:
        if ncols is None:
            raise ValueError("column count required for an empty matrix")
        return [tuple(row) for row in identity(ncols)]
    cols = len(m[0])
    _, d, v = smith_normal_form(m)
    r = sum(1 for i in range(min(len(d), cols)) if d[i][i] != 0)
    return [tuple(v[i][j] for i in range(cols)) for j in range(r, cols)]
