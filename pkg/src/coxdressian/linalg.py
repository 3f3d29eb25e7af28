"""Exact rational and integer linear algebra helpers.

Vectors are plain tuples of :class:`fractions.Fraction` (or ``int``). Nothing
here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = tuple


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and ``"p/q"`` strings into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def vec(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_fraction(x) for x in xs)


def dot(x: Sequence, y: Sequence):
    if len(x) != len(y):
        raise ValueError(f"dimension mismatch: {len(x)} != {len(y)}")
    return sum((a * b for a, b in zip(x, y)), 0)


def add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def sub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def scale(c, x):
    return tuple(c * a for a in x)


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector in its direction."""
    v = [as_fraction(a) for a in v]
    den = 1
    for a in v:
        den = lcm(den, a.denominator)
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, a)
    if g == 0:
        return tuple(ints)
    return tuple(a // g for a in ints)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form over the rationals.

    Returns ``(matrix, pivot_columns)``; zero rows are dropped.
    """
    m = [[as_fraction(a) for a in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [a / p for a in m[r]]
        row_r = m[r]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f != 0:
                    m[i] = [a - f * b for a, b in zip(m[i], row_r)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : A x = 0}`` (one vector per free column)."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    m, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pc in enumerate(piv):
            x[pc] = -m[r][f]
        basis.append(tuple(x))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence):
    """One solution of ``A x = b`` or ``None`` if inconsistent.

    Free variables are set to zero.
    """
    if not rows:
        return None
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    m, piv = rref(aug, n + 1)
    if piv and piv[-1] == n:
        return None
    x = [Fraction(0)] * n
    for r, pc in enumerate(piv):
        x[pc] = m[r][n]
    return tuple(x)


def affine_solution_space(eqs: Sequence[Sequence], rhs: Sequence, n: int):
    """Parametrize ``{x : A x = b}`` as ``x0 + N y``; ``None`` if empty."""
    if not eqs:
        x0 = tuple(Fraction(0) for _ in range(n))
        return x0, nullspace([], n)
    x0 = solve(eqs, rhs)
    if x0 is None:
        return None
    return x0, nullspace(eqs, n)


def common_denominator(values: Iterable) -> int:
    den = 1
    for a in values:
        den = lcm(den, as_fraction(a).denominator)
    return den


# -- integer routines used by the hull ---------------------------------------


def _reduce_row(row: list[int]) -> list[int]:
    g = 0
    for a in row:
        g = gcd(g, a)
        if g == 1:
            return row
    if g > 1:
        return [a // g for a in row]
    return row


def int_echelon(rows: Sequence[Sequence[int]]):
    """Integer row echelon form (rows gcd-reduced). Returns (rows, pivots)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        row_r = m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            if f:
                m[i] = _reduce_row([p * a - f * b for a, b in zip(m[i], row_r)])
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    return len(int_echelon(rows)[1])


def _int_back_substitute(m, piv, ncols: int, free_col: int) -> list[int]:
    """Integer kernel vector of an echelon matrix with ``free_col`` set, other free columns zero."""
    x = [0] * ncols
    x[free_col] = 1
    for r in range(len(piv) - 1, -1, -1):
        pc = piv[r]
        row = m[r]
        s = 0
        for c in range(pc + 1, ncols):
            if row[c] and x[c]:
                s += row[c] * x[c]
        p = row[pc]
        g = gcd(s, p)
        f = p // g
        if f != 1:
            x = [a * f for a in x]
        x[pc] = -s // g
    g = 0
    for a in x:
        g = gcd(g, a)
    return [a // g for a in x] if g > 1 else x


def int_nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Primitive integer kernel basis, one vector per free column.

    The vector for a free column is the unique primitive kernel vector that is
    zero on the other free columns; its sign makes that entry carry the product
    of the echelon pivot signs.
    """
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    m, piv = int_echelon(rows)
    sign = 1
    for row, pc in zip(m, piv):
        if row[pc] < 0:
            sign = -sign
    # clear the entries above each pivot
    for r in range(len(piv) - 1, 0, -1):
        pc, row_r = piv[r], m[r]
        p = row_r[pc]
        for i in range(r):
            f = m[i][pc]
            if f:
                m[i] = _reduce_row([p * a - f * b for a, b in zip(m[i], row_r)])
    pivset = set(piv)
    out = []
    for fc in range(ncols):
        if fc in pivset:
            continue
        scale = 1
        for row, pc in zip(m, piv):
            if row[fc]:
                p = abs(row[pc])
                scale = scale * p // gcd(scale, p)
        x = [0] * ncols
        x[fc] = scale
        for row, pc in zip(m, piv):
            if row[fc]:
                x[pc] = -row[fc] * scale // row[pc]
        g = 0
        for a in x:
            g = gcd(g, a)
        if g > 1:
            x = [a // g for a in x]
        out.append(x if sign > 0 else [-a for a in x])
    return out


def int_kernel_vector(rows: Sequence[Sequence[int]], ncols: int) -> tuple[int, ...]:
    """Primitive integer generator of a one-dimensional kernel."""
    m, piv = int_echelon(rows)
    pivset = set(piv)
    free = [c for c in range(ncols) if c not in pivset]
    if len(free) != 1:
        raise ValueError(f"kernel has dimension {len(free)}, expected 1")
    return tuple(_int_back_substitute(m, piv, ncols, free[0]))
