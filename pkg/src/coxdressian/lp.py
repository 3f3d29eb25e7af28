"""Exact LP feasibility via an integer-preserving simplex with Bland's rule."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .linalg import affine_solution_space, as_fraction, common_denominator, dot, int_nullspace, nullspace, solve


@dataclass(frozen=True)
class HalfspaceSystem:
    """Constraints ``a . x <= b`` (inequalities) and ``a . x = b`` (equalities)."""

    dim: int
    inequalities: tuple = field(default_factory=tuple)
    equalities: tuple = field(default_factory=tuple)

    def __post_init__(self):
        ineq = tuple((tuple(as_fraction(x) for x in a), as_fraction(b)) for a, b in self.inequalities)
        eqs = tuple((tuple(as_fraction(x) for x in a), as_fraction(b)) for a, b in self.equalities)
        for a, _ in ineq + eqs:
            if len(a) != self.dim:
                raise ValueError(f"constraint of dimension {len(a)} in a system of dimension {self.dim}")
        object.__setattr__(self, "inequalities", ineq)
        object.__setattr__(self, "equalities", eqs)

    def satisfied_by(self, x) -> bool:
        return all(dot(a, x) <= b for a, b in self.inequalities) and all(
            dot(a, x) == b for a, b in self.equalities
        )


def _phase_one(rows: list[list[int]], rhs: list[int]):
    """Find ``s >= 0`` with ``rows . s = rhs`` (integer data).

    Returns the basic solution as a list of Fractions, or None if infeasible.
    """
    m = len(rows)
    n = len(rows[0]) if rows else 0
    T = []
    for r, b in zip(rows, rhs):
        if b < 0:
            T.append([-a for a in r] + [-b])
        else:
            T.append(list(r) + [b])
    obj = [-sum(T[i][j] for i in range(m)) for j in range(n + 1)]
    T.append(obj)
    basis = [n + i for i in range(m)]  # artificial indices come after the real columns
    D = 1
    while True:
        z = T[m]
        enter = -1
        for j in range(n):
            if z[j] < 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best_num = best_den = 0
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                num = T[i][n]
                if leave < 0:
                    leave, best_num, best_den = i, num, a
                else:
                    lhs = num * best_den
                    rhs_ = best_num * a
                    if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[leave]):
                        leave, best_num, best_den = i, num, a
        if leave < 0:
            # phase-one objective is bounded below by zero
            raise AssertionError("unbounded phase-one objective")
        p = T[leave][enter]
        prow = T[leave]
        for i in range(m + 1):
            if i == leave:
                continue
            row = T[i]
            f = row[enter]
            if f == 0:
                if p != D:
                    T[i] = [(a * p) // D for a in row]
                continue
            T[i] = [(a * p - f * b) // D for a, b in zip(row, prow)]
        basis[leave] = enter
        D = p
    if T[m][n] != 0:
        return None
    s = [Fraction(0)] * n
    for i, bvar in enumerate(basis):
        if bvar < n:
            s[bvar] = Fraction(T[i][n], D)
    return s


def _integer_rows(rows, rhs):
    out_rows, out_rhs = [], []
    for r, b in zip(rows, rhs):
        den = common_denominator(list(r) + [b])
        out_rows.append([int(a * den) for a in r])
        out_rhs.append(int(b * den))
    return out_rows, out_rhs


def lp_feasible(system: HalfspaceSystem):
    """Return an exact rational point satisfying ``system`` or ``None``.

    Equalities are eliminated first; the remaining inequalities ``G y <= h``
    are rewritten on their slack vector ``s = h - G y >= 0``, which must lie in
    the affine space ``h + range(G)``. That standard-form system is solved by
    phase one of the simplex method.
    """
    n = system.dim
    eq_rows = [a for a, _ in system.equalities]
    eq_rhs = [b for _, b in system.equalities]
    param = affine_solution_space(eq_rows, eq_rhs, n)
    if param is None:
        return None
    x0, N = param
    k = len(N)
    G = [tuple(dot(a, col) for col in N) for a, _ in system.inequalities]
    h = [b - dot(a, x0) for a, b in system.inequalities]
    if not G:
        return x0
    if k == 0:
        return x0 if all(v >= 0 for v in h) else None
    m = len(G)
    # left kernel of G: rows M with M G = 0
    Gt = [[G[i][j] for i in range(m)] for j in range(k)]
    M = nullspace(Gt, m)
    if M:
        c = [dot(row, h) for row in M]
        irows, irhs = _integer_rows(M, c)
        s = _phase_one(irows, irhs)
        if s is None:
            return None
    else:
        s = [Fraction(0)] * m
    target = [hi - si for hi, si in zip(h, s)]
    y = solve(G, target)
    if y is None:
        raise AssertionError("slack vector outside the range of G")
    x = tuple(x0[i] + sum((y[j] * N[j][i] for j in range(k)), Fraction(0)) for i in range(n))
    if not system.satisfied_by(x):
        raise AssertionError("simplex witness fails exact verification")
    return x


def _int_row(a) -> list[int]:
    if all(type(x) is int for x in a):
        return list(a)
    den = common_denominator(a)
    return [int(as_fraction(x) * den) for x in a]


def feasible_strict_cone(dim: int, equalities: Sequence, strict: Sequence, weak: Sequence = ()):
    """Point with ``E x = 0``, ``a . x > 0`` for ``strict`` and ``a . x >= 0`` for ``weak``.

    Homogeneity lets strict inequalities be scaled to ``a . x >= 1`` and every
    row be cleared of denominators, so the whole reduction runs on integers.
    """
    E = [_int_row(a) for a in equalities]
    A = [_int_row(a) for a in strict] + [_int_row(a) for a in weak]
    b = [1] * len(strict) + [0] * len(weak)
    for r in E + A:
        if len(r) != dim:
            raise ValueError(f"constraint of dimension {len(r)} in a system of dimension {dim}")
    N = int_nullspace(E, dim) if E else [[int(i == j) for j in range(dim)] for i in range(dim)]
    zero = tuple(Fraction(0) for _ in range(dim))
    if not A:
        return zero
    if not N:
        return zero if not strict else None
    k, m = len(N), len(A)
    # a . (N y) >= b  <=>  s = G y - b >= 0 with G = A N
    G = [[sum(a[t] * v[t] for t in range(dim) if a[t]) for v in N] for a in A]
    Gt = [[G[i][j] for i in range(m)] for j in range(k)]
    M = int_nullspace(Gt, m)
    if M:
        c = [-sum(row[i] * b[i] for i in range(m)) for row in M]
        s = _phase_one(M, c)
        if s is None:
            return None
    else:
        s = [Fraction(0)] * m
    y = solve(G, [bi + si for bi, si in zip(b, s)])
    if y is None:
        raise AssertionError("slack vector outside the range of G")
    x = tuple(sum((y[j] * N[j][t] for j in range(k) if N[j][t]), Fraction(0)) for t in range(dim))
    if not all(sum(e[t] * x[t] for t in range(dim) if e[t]) == 0 for e in E) or not all(
        sum(a[t] * x[t] for t in range(dim) if a[t]) >= bi for a, bi in zip(A, b)
    ):
        raise AssertionError("simplex witness fails exact verification")
    return x


def implicit_equalities(dim: int, equalities: Sequence, inequalities: Sequence):
    """Split the cone ``E x = 0, a . x >= 0`` into implicit equalities and the rest.

    Returns ``(implicit, interior)``: the indices of inequalities that vanish on
    the whole cone and a point satisfying every other inequality strictly. By
    Gordan's alternative, when no point is strict on all remaining rows ``G``
    (restricted to the kernel of the equalities) there is ``w >= 0``, ``w != 0``
    with ``w G = 0``, and every row in the support of ``w`` is implicit. Each
    round costs two LPs and removes at least one row.
    """
    E = [_int_row(a) for a in equalities]
    rows = [_int_row(a) for a in inequalities]
    implicit: set[int] = set()
    while True:
        live = [i for i in range(len(rows)) if i not in implicit]
        eqs = E + [rows[i] for i in sorted(implicit)]
        N = int_nullspace(eqs, dim) if eqs else [[int(i == j) for j in range(dim)] for i in range(dim)]
        G = {i: tuple(sum(a * v[t] for t, a in enumerate(rows[i]) if a) for v in N) for i in live}
        # rows vanishing on the kernel, and opposite pairs, need no LP
        found = {i for i in live if not any(G[i])}
        prim: dict[tuple, int] = {}
        for i in live:
            if i in found:
                continue
            g = 0
            for a in G[i]:
                g = gcd(g, a)
            p = tuple(a // g for a in G[i])
            neg = tuple(-a for a in p)
            if neg in prim:
                found |= {i, prim[neg]}
            prim.setdefault(p, i)
        if found:
            implicit |= found
            continue
        x = feasible_strict_cone(dim, eqs, [rows[i] for i in live])
        if x is not None:
            return sorted(implicit), x
        k, m = len(N), len(live)
        cols = [[G[i][j] for i in live] for j in range(k)] + [[1] * m]
        w = _phase_one(cols, [0] * k + [1])
        if w is None:
            raise AssertionError("Gordan alternative failed")
        support = {live[t] for t, v in enumerate(w) if v > 0}
        if not support:
            raise AssertionError("empty Gordan certificate")
        implicit |= support
