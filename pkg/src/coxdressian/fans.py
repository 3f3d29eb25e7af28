"""Polyhedral fans: tropical quadric fans, prevariety fans and secondary fans.

Every cone is stored by a canonical key, its dimension, a relative-interior
point and a closed description ``E x = 0, A x >= 0``. Rays are the cones of
dimension one above the lineality space, represented by primitive integer
vectors orthogonal to it; f-vectors count cones per dimension modulo lineality.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

import numpy as np

from .equations import EquationSystem, TropicalQuadric
from .linalg import as_fraction, common_denominator, dot, int_nullspace, int_rank, nullspace, primitive, rank, rref, solve
from .lp import feasible_strict_cone, implicit_equalities
from .subdivision import lower_cells, secondary_cone_constraints


class ScaleGuardError(RuntimeError):
    """Raised when a computation would exceed the configured size limit."""


def _env_limit(name: str, default: int) -> int:
    try:
        return int(os.environ.get(name, default))
    except ValueError:
        return default


DEFAULT_MAX_CONES = _env_limit("COXDRESSIAN_MAX_CONES", 20000)
DEFAULT_MAX_POINTS = _env_limit("COXDRESSIAN_MAX_POINTS", 10)


@dataclass(frozen=True)
class PolyhedralCone:
    """A closed cone ``{x : E x = 0, A x >= 0}`` with a relative-interior point."""

    key: object
    dim: int
    interior: tuple
    equalities: tuple = ()
    inequalities: tuple = ()
    rays: frozenset = frozenset()  # indices into the owning fan's ray list

    def contains(self, x) -> bool:
        return all(dot(e, x) == 0 for e in self.equalities) and all(dot(a, x) >= 0 for a in self.inequalities)


@dataclass
class PolyhedralFan:
    ambient: int
    lineality: list[tuple]
    cones: list[PolyhedralCone] = field(default_factory=list)
    rays: list[tuple[int, ...]] = field(default_factory=list)
    face_of: Callable | None = None  # face_of(key_small, key_big) if known combinatorially
    _maximal: tuple | None = field(default=None, repr=False, compare=False)
    _support: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def lineality_dim(self) -> int:
        return len(self.lineality)

    @property
    def f_vector(self) -> list[int]:
        return f_vector(self)

    def maximal_cones(self) -> list[PolyhedralCone]:
        """Cones that are not a facet of a cone one dimension up.

        Inside a fan, ray containment between cones is the face relation, and
        every proper face is a facet of some face one dimension higher.
        """
        key = (id(self.cones), len(self.cones))
        if self._maximal is not None and self._maximal[0] == key:
            return self._maximal[1]
        by_dim: dict[int, list[PolyhedralCone]] = {}
        for c in self.cones:
            by_dim.setdefault(c.dim, []).append(c)
        out = []
        for c in self.cones:
            up = by_dim.get(c.dim + 1, [])
            if not any(c.rays < d.rays and self._is_face(c, d) for d in up):
                out.append(c)
        self._maximal = (key, out)
        self._support = None
        return out

    def _is_face(self, small: PolyhedralCone, big: PolyhedralCone) -> bool:
        if self.face_of is not None:
            return self.face_of(small.key, big.key)
        return big.contains(small.interior)

    def cones_of_dim(self, d: int) -> list[PolyhedralCone]:
        return [c for c in self.cones if c.dim == d]

    def locate(self, x) -> PolyhedralCone | None:
        """Smallest stored cone whose closure contains ``x`` (None if outside the support)."""
        x = tuple(as_fraction(v) for v in x)
        best = None
        for c in self.cones:
            if c.contains(x) and (best is None or c.dim < best.dim):
                best = c
        return best

    def in_support(self, x) -> bool:
        """Membership in the union of the closed maximal cones.

        Integer points of moderate size go through a stacked int64 matrix
        product; anything that could overflow is decided exactly instead.
        """
        x = tuple(as_fraction(v) for v in x)
        table = self._support_table()
        if table is None:
            return True
        mat, is_eq, starts, bound, cones = table
        den = common_denominator(x)
        xi = [int(v * den) for v in x]
        if not cones or bound * max((abs(v) for v in xi), default=0) * len(xi) >= 2**62:
            return any(c.contains(x) for c in self.maximal_cones())
        vals = mat @ np.array(xi, dtype=np.int64)
        ok = np.where(is_eq, vals == 0, vals >= 0).astype(np.int8)
        return bool(np.minimum.reduceat(ok, starts).any())

    def _support_table(self):
        cones = self.maximal_cones()
        if self._support is not None:
            return self._support
        if any(not c.equalities and not c.inequalities for c in cones):
            return None  # some cone is the whole space
        rows, is_eq, starts = [], [], []
        for c in cones:
            starts.append(len(rows))
            for e in c.equalities:
                rows.append(_int_primitive(e))
                is_eq.append(True)
            for a in c.inequalities:
                rows.append(_int_primitive(a))
                is_eq.append(False)
        bound = max((abs(v) for r in rows for v in r), default=0)
        if bound >= 2**31:
            self._support = ([], None, None, bound, [])
        else:
            self._support = (
                np.array(rows, dtype=np.int64),
                np.array(is_eq, dtype=bool),
                np.array(starts, dtype=np.intp),
                bound,
                cones,
            )
        return self._support


def f_vector(fan: PolyhedralFan) -> list[int]:
    """Number of cones per dimension, starting at the lineality space."""
    if not fan.cones:
        return []
    top = max(c.dim for c in fan.cones)
    counts = [0] * (top - fan.lineality_dim + 1)
    for c in fan.cones:
        counts[c.dim - fan.lineality_dim] += 1
    return counts


# -- helpers ------------------------------------------------------------------------


def _project_off(v, lineality: list[tuple]) -> tuple:
    """Orthogonal projection of ``v`` onto the complement of ``lineality``."""
    v = tuple(as_fraction(a) for a in v)
    if not lineality:
        return v
    k = len(lineality)
    gram = [[dot(lineality[i], lineality[j]) for j in range(k)] for i in range(k)]
    rhs = [dot(lineality[i], v) for i in range(k)]
    coef = solve(gram, rhs)
    return tuple(v[t] - sum(coef[i] * lineality[i][t] for i in range(k)) for t in range(len(v)))


def _lineality_basis(normals: list[tuple], n: int) -> list[tuple]:
    """Integer basis of the common kernel of ``normals``, in reduced echelon form."""
    if not normals:
        basis = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    else:
        basis = nullspace(normals, n)
    if not basis:
        return []
    m, _ = rref(basis, n)
    return [tuple(Fraction(a) for a in primitive(r)) for r in m]


def _attach_rays(fan: PolyhedralFan) -> None:
    """Populate ``fan.rays`` and each cone's ray indices."""
    lin = fan.lineality
    ld = len(lin)
    ray_cones = sorted((c for c in fan.cones if c.dim == ld + 1), key=lambda c: _sort_key(c.key))
    rays = [primitive(_project_off(c.interior, lin)) for c in ray_cones]
    order = sorted(range(len(rays)), key=lambda i: rays[i])
    rays = [rays[i] for i in order]
    ray_cones = [ray_cones[i] for i in order]
    fan.rays = rays
    new = []
    for c in fan.cones:
        idx = frozenset(k for k, rc in enumerate(ray_cones) if c.dim > ld and fan._is_face(rc, c))
        new.append(PolyhedralCone(c.key, c.dim, c.interior, c.equalities, c.inequalities, idx))
    new.sort(key=lambda c: (c.dim, sorted(c.rays), _sort_key(c.key)))
    fan.cones = new


def _sort_key(key) -> str:
    return repr(_canonical(key))


def _canonical(obj):
    if isinstance(obj, (frozenset, set)):
        return tuple(sorted((_canonical(x) for x in obj), key=repr))
    if isinstance(obj, (tuple, list)):
        return tuple(_canonical(x) for x in obj)
    return obj


def _implicit_split(n: int, equalities: list, inequalities: list):
    """Split ``inequalities`` (``a . x >= 0``) into implicit equalities and the rest.

    Returns ``(implicit, proper, interior_point)``; the interior point satisfies
    every proper inequality strictly.
    """
    idx, x = implicit_equalities(n, equalities, inequalities)
    gone = set(idx)
    return [inequalities[k] for k in idx], [a for k, a in enumerate(inequalities) if k not in gone], tuple(x)


def _int_primitive(r) -> tuple[int, ...]:
    if all(type(a) is int for a in r):
        g = 0
        for a in r:
            g = gcd(g, a)
        return tuple(a // g for a in r) if g > 1 else tuple(r)
    return primitive(r)


def _reduced(rows: Iterable[tuple]) -> list[tuple[int, ...]]:
    """Primitive integer representatives, zero rows and duplicates removed."""
    out, seen = [], set()
    for r in rows:
        p = _int_primitive(r)
        if any(p) and p not in seen:
            seen.add(p)
            out.append(p)
    return out


# -- tropical quadric fans ------------------------------------------------------------


def _mon_vec(n: int, mon: tuple[int, int]) -> list[int]:
    v = [0] * n
    v[mon[0]] += 1
    v[mon[1]] += 1
    return v


def _pattern_rows(n: int, f: TropicalQuadric, argmin: Iterable[int]):
    """Equalities and inequalities (``>= 0`` / ``> 0``) for a fixed argmin set of ``f``."""
    argmin = sorted(argmin)
    vecs = [_mon_vec(n, m) for m in f.monomials]
    ref = vecs[argmin[0]]
    eqs = [tuple(a - b for a, b in zip(vecs[k], ref)) for k in argmin[1:]]
    ineqs = [tuple(a - b for a, b in zip(vecs[k], ref)) for k in range(len(vecs)) if k not in argmin]
    return eqs, ineqs


def pattern_of(equations: Sequence[TropicalQuadric], mu) -> tuple[frozenset[int], ...]:
    """Argmin positions of every equation at finite heights ``mu``."""
    den = common_denominator(mu)
    v = [int(as_fraction(x) * den) for x in mu]
    out = []
    for f in equations:
        vals = [v[i] + v[j] for i, j in f.monomials]
        low = min(vals)
        out.append(frozenset(k for k, t in enumerate(vals) if t == low))
    return tuple(out)


def _pattern_face_of(small, big) -> bool:
    return all(a >= b for a, b in zip(small, big))


def _pattern_cone(n: int, equations: Sequence[TropicalQuadric], pattern, interior=None) -> PolyhedralCone:
    eqs, ineqs = [], []
    for f, arg in zip(equations, pattern):
        e, i = _pattern_rows(n, f, arg)
        eqs += e
        ineqs += i
    eqs = _reduced(eqs)
    ineqs = _reduced(ineqs)
    dim = n - (int_rank(eqs) if eqs else 0)
    if interior is None:
        interior = feasible_strict_cone(n, eqs, ineqs)
        if interior is None:
            raise ValueError("pattern is not realized by any height vector")
    return PolyhedralCone(tuple(pattern), dim, tuple(interior), tuple(eqs), tuple(ineqs))


def _fan_from_patterns(n: int, equations: Sequence[TropicalQuadric], found: dict) -> PolyhedralFan:
    cones = [_pattern_cone(n, equations, p, x) for p, x in found.items()]
    full = tuple(frozenset(range(len(f.monomials))) for f in equations)
    lin_rows = []
    for f, arg in zip(equations, full):
        lin_rows += _pattern_rows(n, f, arg)[0]
    lineality = _lineality_basis(_reduced(lin_rows), n)
    fan = PolyhedralFan(n, lineality, cones, face_of=_pattern_face_of)
    _attach_rays(fan)
    return fan


def quadric_fan(f: TropicalQuadric, ambient: int) -> PolyhedralFan:
    """Fan of the tropical hypersurface of ``f`` over finite heights in ``R^ambient``."""
    k = len(f.monomials)
    found = {}
    for size in range(2, k + 1):
        for arg in combinations(range(k), size):
            pattern = (frozenset(arg),)
            eqs, ineqs = _pattern_rows(ambient, f, arg)
            x = feasible_strict_cone(ambient, eqs, ineqs)
            if x is not None:
                found[pattern] = x
    return _fan_from_patterns(ambient, [f], found)


def _candidates(kernel: list[list[int]], vecs) -> list[frozenset[int]]:
    """Argmin sets of size >= 2 compatible with the current equalities.

    Monomials whose difference lies in the equality span (equivalently, is
    orthogonal to its kernel) must be in the argmin together or not at all.
    """
    classes: dict[tuple, list[int]] = {}
    for k, v in enumerate(vecs):
        key = tuple(sum(a * b for a, b in zip(v, col) if a) for col in kernel)
        classes.setdefault(key, []).append(k)
    groups = list(classes.values())
    out = []
    for size in range(1, len(groups) + 1):
        for pick in combinations(groups, size):
            arg = frozenset(k for g in pick for k in g)
            if len(arg) >= 2:
                out.append(arg)
    return out


def _lineality_slice(n: int, equations: Sequence[TropicalQuadric]):
    """Coordinates of a slice transversal to the lineality space, and the zero-padding lift.

    Every cone contains the lineality space, so setting the pivot coordinates of
    a lineality basis to zero loses nothing.
    """
    lin_rows = []
    for f in equations:
        lin_rows += _pattern_rows(n, f, range(len(f.monomials)))[0]
    pivots = {next(k for k, a in enumerate(v) if a) for v in _lineality_basis(_reduced(lin_rows), n)}
    keep = [k for k in range(n) if k not in pivots]

    def lift(x):
        full = [Fraction(0)] * n
        for k, v in zip(keep, x):
            full[k] = v
        return tuple(full)

    return keep, lift


def prevariety_fan(
    system: EquationSystem | Sequence[TropicalQuadric],
    ambient: int | None = None,
    max_cones: int | None = None,
    allow_large: bool = False,
) -> PolyhedralFan:
    """Fan structure on the tropical prevariety (finite heights) by argmin patterns.

    The relatively open cones of the common refinement are the realizable
    tuples of argmin sets; the prevariety keeps those where every argmin has at
    least two monomials. A depth-first search assigns argmin sets equation by
    equation (most constrained first) and prunes with exact LP feasibility,
    working on a slice transversal to the lineality space.
    """
    equations = list(system)
    if ambient is None:
        ambient = len(system.quotient.points)
    n = ambient
    limit = max_cones if max_cones is not None else DEFAULT_MAX_CONES
    if not equations:
        whole = PolyhedralCone((), n, tuple(Fraction(0) for _ in range(n)))
        lineality = _lineality_basis([], n)
        fan = PolyhedralFan(n, lineality, [whole], face_of=_pattern_face_of)
        _attach_rays(fan)
        return fan
    keep, lift = _lineality_slice(n, equations)
    m = len(keep)

    def cut(row):
        return [row[k] for k in keep]

    vecs = [[cut(_mon_vec(n, mon)) for mon in f.monomials] for f in equations]
    found: dict = {}
    visited = [0]

    def dfs(assigned: dict, eqs, strict, witness):
        visited[0] += 1
        if visited[0] > limit and not allow_large:
            raise ScaleGuardError(
                f"prevariety fan search exceeded {limit} nodes; pass allow_large to continue"
            )
        free = [k for k in range(len(equations)) if k not in assigned]
        if not free:
            found[tuple(assigned[k] for k in range(len(equations)))] = lift(witness)
            return
        kernel = int_nullspace(eqs, m) if eqs else [[int(i == j) for j in range(m)] for i in range(m)]
        cands = {k: _candidates(kernel, vecs[k]) for k in free}
        k = min(free, key=lambda t: (len(cands[t]), t))
        f = equations[k]
        wvals = [sum(a * b for a, b in zip(v, witness)) for v in vecs[k]]
        low = min(wvals)
        arg_w = frozenset(t for t, v in enumerate(wvals) if v == low)
        for arg in cands[k]:
            e, s = _pattern_rows(n, f, arg)
            e, s = [cut(r) for r in e], [cut(r) for r in s]
            if arg == arg_w:
                w = witness
            else:
                w = feasible_strict_cone(m, eqs + e, strict + s)
                if w is None:
                    continue
            dfs({**assigned, k: arg}, eqs + e, strict + s, w)

    dfs({}, [], [], tuple(Fraction(0) for _ in range(m)))
    return _fan_from_patterns(n, equations, found)


def prevariety_fan_by_refinement(
    system: EquationSystem | Sequence[TropicalQuadric],
    ambient: int | None = None,
    max_cones: int | None = None,
    allow_large: bool = False,
) -> PolyhedralFan:
    """Same fan, computed by intersecting closed maximal cones one quadric at a time.

    Independent of :func:`prevariety_fan`: maximal closed cones of each
    hypersurface are intersected pairwise, intersections contained in another
    are discarded, and the fan is closed under faces by recursive facet
    descent. Cones are finally keyed by the argmin pattern of their interior.
    """
    equations = list(system)
    if ambient is None:
        ambient = len(system.quotient.points)
    n = ambient
    limit = max_cones if max_cones is not None else DEFAULT_MAX_CONES
    if not equations:
        return prevariety_fan(equations, n)
    keep, lift = _lineality_slice(n, equations)

    def rows(f, pair):
        e, i = _pattern_rows(n, f, pair)
        return [[r[k] for k in keep] for r in e], [[r[k] for k in keep] for r in i]

    m = len(keep)
    # closed cone = (equalities, inequalities, chosen monomial pair per equation)
    current = [([], [], ())]
    for step, f in enumerate(equations):
        k = len(f.monomials)
        done = equations[: step + 1]
        nxt = []
        for eqs, ineqs, pairs in current:
            for a, b in combinations(range(k), 2):
                e, i = rows(f, (a, b))
                e2, i2 = eqs + e, ineqs + i
                imp, proper, x = _implicit_split(m, e2, i2)
                e3 = _reduced(e2 + imp)
                nxt.append((e3, _reduced(proper), pairs + ((a, b),), lift(x), m - int_rank(e3) if e3 else m))
        # drop cones contained in another: the closed cone of a pair choice contains a
        # point iff every chosen pair lies in that point's argmin set
        nxt.sort(key=lambda c: -c[4])
        kept = []
        kept_dim: dict[tuple, int] = {}
        for e, i, pairs, x, d in nxt:
            arg = pattern_of(done, x)
            if _covered(arg, d, kept_dim, kept):
                continue
            kept.append((e, i, pairs))
            kept_dim[pairs] = d
            if len(kept) > limit and not allow_large:
                raise ScaleGuardError(f"refinement exceeded {limit} cones")
        current = kept
    # face closure by recursive facet descent; a face of a kept cone is named by
    # the set of that cone's inequalities made tight
    found: dict = {}
    seen = set()
    stack = [(c, frozenset()) for c in range(len(current))]
    while stack:
        c, tight = stack.pop()
        eqs, ineqs, _ = current[c]
        tight_rows = [ineqs[t] for t in sorted(tight)]
        rest = [t for t in range(len(ineqs)) if t not in tight]
        imp, x = implicit_equalities(m, eqs + tight_rows, [ineqs[t] for t in rest])
        closed = tight | {rest[t] for t in imp}
        x = lift(x)
        key = pattern_of(equations, x)
        if key in found:
            continue
        found[key] = x
        if len(found) > limit and not allow_large:
            raise ScaleGuardError(f"refinement exceeded {limit} cones")
        for t in range(len(ineqs)):
            if t not in closed and (c, closed | {t}) not in seen:
                seen.add((c, closed | {t}))
                stack.append((c, closed | {t}))
    return _fan_from_patterns(n, equations, found)


def _covered(arg, d: int, kept_dim: dict, kept: list, limit: int = 4096) -> bool:
    """Is a point with argmin sets ``arg`` in a kept closed cone of dimension >= ``d``?"""
    sizes = 1
    for a in arg:
        sizes *= len(a) * (len(a) - 1) // 2
    if sizes <= limit:
        for pairs in product(*(combinations(sorted(a), 2) for a in arg)):
            kd = kept_dim.get(pairs)
            if kd is not None and kd >= d:
                return True
        return False
    return any(
        kept_dim[pairs] >= d and all(set(pr) <= a for pr, a in zip(pairs, arg)) for _, _, pairs in kept
    )


# -- secondary fans -----------------------------------------------------------------


def _subdivision_key(cells: Iterable[Iterable[int]]) -> frozenset[frozenset[int]]:
    return frozenset(frozenset(c) for c in cells)


def _coarsens(small_key, big_key) -> bool:
    """True if the subdivision ``big_key`` refines ``small_key`` (face relation of cones)."""
    return all(any(c <= d for d in small_key) for c in big_key)


def _secondary_cone(points, key) -> PolyhedralCone:
    cc = secondary_cone_constraints(points, [sorted(c) for c in key])
    n = len(points)
    eqs = _reduced(cc.equalities)
    ineqs = _reduced(cc.strict)
    interior = feasible_strict_cone(n, eqs, ineqs)
    if interior is None:
        raise AssertionError("secondary cone of a regular subdivision is empty")
    dim = n - (int_rank(eqs) if eqs else 0)
    if dim < n:
        # rows may coincide on a proper span; keep them all
        return PolyhedralCone(key, dim, tuple(interior), tuple(eqs), tuple(ineqs))
    facets = []
    for a in ineqs:
        others = [b for b in ineqs if b != a]
        if feasible_strict_cone(n, [a], others) is not None:
            facets.append(a)
    return PolyhedralCone(key, dim, tuple(interior), tuple(eqs), tuple(facets))


def secondary_cone_of(points: Sequence[Sequence], heights: Sequence) -> PolyhedralCone:
    """Closed secondary cone containing ``heights`` (keyed by the induced subdivision)."""
    pts = [tuple(as_fraction(x) for x in p) for p in points]
    cells, _ = lower_cells(pts, heights)
    return _secondary_cone(pts, _subdivision_key(cells))


def _generic_heights(n: int, seed: int = 0) -> list[int]:
    import numpy as np

    rng = np.random.default_rng(seed)
    return [int(v) for v in rng.integers(0, 10**6, size=n)]


def secondary_fan(
    points: Sequence[Sequence],
    max_points: int | None = None,
    allow_large: bool = False,
    seed: int = 0,
) -> PolyhedralFan:
    """All regular subdivisions of a point configuration in convex position.

    Full-dimensional cones are found by breadth-first facet crossing from a
    generic height vector; lower-dimensional cones by recursive facet descent.
    """
    pts = [tuple(as_fraction(x) for x in p) for p in points]
    n = len(pts)
    limit = max_points if max_points is not None else DEFAULT_MAX_POINTS
    if n > limit and not allow_large:
        raise ScaleGuardError(f"{n} points exceed the secondary fan limit of {limit}")
    start = None
    for s in range(seed, seed + 100):
        h = _generic_heights(n, s)
        cells, d = lower_cells(pts, h)
        if all(len(c) == d + 1 for c in cells):
            start = _subdivision_key(cells)
            break
    if start is None:
        raise AssertionError("no generic height vector found")
    full: dict = {}
    queue = [start]
    while queue:
        key = queue.pop(0)
        if key in full:
            continue
        cone = _secondary_cone(pts, key)
        full[key] = cone
        for a in cone.inequalities:
            nb = _cross_facet(pts, cone, a)
            if nb is not None and nb not in full:
                queue.append(nb)
    # faces
    cones: dict = dict(full)
    stack = [(list(c.equalities), list(c.inequalities)) for c in full.values()]
    seen = set()
    while stack:
        eqs, ineqs = stack.pop()
        for a in ineqs:
            e2 = _reduced(eqs + [a])
            rest = [b for b in ineqs if b != a]
            sig = (frozenset(primitive(r) for r in e2), frozenset(primitive(r) for r in rest))
            if sig in seen:
                continue
            seen.add(sig)
            imp, proper, x = _implicit_split(n, e2, rest)
            cells, _ = lower_cells(pts, x)
            key = _subdivision_key(cells)
            if key not in cones:
                cones[key] = _secondary_cone(pts, key)
            e3 = _reduced(e2 + imp)
            if proper:
                stack.append((e3, proper))
    fan_cones = list(cones.values())
    lineality = _lineality_basis(list(min(fan_cones, key=lambda c: c.dim).equalities), n)
    fan = PolyhedralFan(n, lineality, fan_cones, face_of=_coarsens)
    _attach_rays(fan)
    return fan


def _cross_facet(pts, cone: PolyhedralCone, a) -> frozenset | None:
    """Subdivision on the far side of the facet ``a . x >= 0`` of a full-dimensional cone."""
    n = len(pts)
    others = [b for b in cone.inequalities if b != a]
    x = feasible_strict_cone(n, list(cone.equalities) + [a], others)
    if x is None:
        return None
    eps = Fraction(1)
    for _ in range(60):
        y = tuple(xi - eps * ai for xi, ai in zip(x, a))
        cells, d = lower_cells(pts, y)
        key = _subdivision_key(cells)
        if all(len(c) == d + 1 for c in cells):
            nb = _secondary_cone(pts, key)
            if nb.contains(x):
                return key
        eps /= 2
    raise AssertionError("facet crossing did not reach a neighbouring triangulation")


# -- comparisons ----------------------------------------------------------------------


@dataclass
class SubfanReport:
    walls_contain_dressian: bool
    supports_equal: bool
    cones_match: bool
    full_support: bool
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return (self.cones_match and self.supports_equal) or self.full_support


def _same_lineality(a: PolyhedralFan, b: PolyhedralFan) -> bool:
    if a.lineality_dim != b.lineality_dim:
        return False
    if not a.lineality:
        return True
    return rank(list(a.lineality) + list(b.lineality)) == a.lineality_dim


def _cone_rays(fan: PolyhedralFan, cone: PolyhedralCone) -> frozenset:
    return frozenset(fan.rays[k] for k in cone.rays)


def _closed_in(fan_small: PolyhedralFan, small: PolyhedralCone, big: PolyhedralCone) -> bool:
    if not all(big.contains(tuple(Fraction(v) for v in r)) for r in _cone_rays(fan_small, small)):
        return False
    return all(big.contains(v) and big.contains(tuple(-x for x in v)) for v in fan_small.lineality)


def support_subfan_check(dressian: PolyhedralFan, secondary: PolyhedralFan) -> SubfanReport:
    """Compare a Dressian fan with a secondary fan on the same height space.

    ``walls_contain_dressian``: every maximal Dressian cone lies in a
    lower-dimensional secondary cone. ``supports_equal``: additionally every
    lower-dimensional secondary cone lies in a Dressian cone. ``cones_match``:
    every Dressian cone is a secondary cone (same rays, same lineality).
    ``full_support``: both fans cover the whole space.
    """
    if dressian.ambient != secondary.ambient:
        raise ValueError(f"ambient mismatch: {dressian.ambient} != {secondary.ambient}")
    n = secondary.ambient
    walls = [c for c in secondary.cones if c.dim < n]
    dr_max = dressian.maximal_cones()
    bad_in = [c.key for c in dr_max if not any(_closed_in(dressian, c, w) for w in walls)]
    walls_ok = not bad_in
    bad_back = []
    if walls_ok:
        for w in walls:
            if not any(_closed_in(secondary, w, c) for c in dr_max):
                bad_back.append(w.key)
    supports_equal = walls_ok and not bad_back
    match = _same_lineality(dressian, secondary)
    unmatched = []
    if match:
        sec_rays = {(c.dim, _cone_rays(secondary, c)) for c in secondary.cones}
        for c in dressian.cones:
            if (c.dim, _cone_rays(dressian, c)) not in sec_rays:
                unmatched.append(c.key)
        match = not unmatched
    whole = any(c.dim == n for c in dressian.cones)
    full = whole and _is_complete(secondary)
    return SubfanReport(
        walls_ok,
        supports_equal,
        match and not (whole and not full),
        full,
        {"dressian_not_in_walls": bad_in, "walls_not_in_dressian": bad_back, "unmatched": unmatched},
    )


def _is_complete(fan: PolyhedralFan) -> bool:
    """Every facet of every full-dimensional cone is shared by exactly two of them."""
    n = fan.ambient
    full = [c for c in fan.cones if c.dim == n]
    walls = [c for c in fan.cones if c.dim == n - 1]
    if not full:
        return False
    for w in walls:
        owners = sum(1 for c in full if w.rays <= c.rays and fan._is_face(w, c))
        if owners != 2:
            return False
    return True


# -- audit and export -------------------------------------------------------------------


def audit_fan(fan: PolyhedralFan) -> list[str]:
    """Face-closure and pairwise-intersection audit; returns a list of problems."""
    problems = []
    keys = {c.key for c in fan.cones}
    lin = len(fan.lineality)
    by_rays = {}
    for c in fan.cones:
        by_rays.setdefault(c.rays, []).append(c)
        if c.dim - lin >= 1 and len(c.rays) < c.dim - lin:
            problems.append(f"cone {_sort_key(c.key)} has too few rays")
        vecs = [tuple(Fraction(v) for v in fan.rays[k]) for k in c.rays] + list(fan.lineality)
        if vecs and rank(vecs) != c.dim:
            problems.append(f"rays of cone {_sort_key(c.key)} span the wrong dimension")
    # facets of each cone must be in the fan
    for c in fan.cones:
        if c.dim - lin < 1:
            continue
        faces = [d for d in fan.cones if d.dim == c.dim - 1 and d.rays <= c.rays and fan._is_face(d, c)]
        covered = set()
        for d in faces:
            covered |= d.rays
        if c.dim - lin >= 2 and covered != set(c.rays):
            problems.append(f"facets of cone {_sort_key(c.key)} miss some rays")
    # pairwise intersections are common faces
    n = fan.ambient
    cones = fan.cones
    for i in range(len(cones)):
        for j in range(i + 1, len(cones)):
            a, b = cones[i], cones[j]
            common = a.rays & b.rays
            sys_eqs = list(a.equalities) + list(b.equalities)
            sys_ineqs = list(a.inequalities) + list(b.inequalities)
            imp, _, _ = _implicit_split(n, sys_eqs, sys_ineqs)
            eqs = _reduced(sys_eqs + imp)
            d = n - (int_rank(eqs) if eqs else 0)
            faces = [c for c in cones if c.rays == common and fan._is_face(c, a) and fan._is_face(c, b)]
            if not faces or max(c.dim for c in faces) != d:
                problems.append(f"cones {_sort_key(a.key)} and {_sort_key(b.key)} meet badly")
    if len(keys) != len(fan.cones):
        problems.append("duplicate cone keys")
    return problems


def fan_to_json(fan: PolyhedralFan) -> dict:
    return {
        "ambient": fan.ambient,
        "lineality": [[str(x) for x in v] for v in fan.lineality],
        "rays": [[str(x) for x in r] for r in fan.rays],
        "cones": [{"dim": c.dim - fan.lineality_dim, "rays": sorted(c.rays)} for c in fan.cones],
        "f_vector": fan.f_vector,
    }
