"""Root systems and minuscule quotients W/P with their weight polytopes."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable

from .hull import affine_hull, convex_hull, hull_edges
from .linalg import dot, solve, sub

VALID_PAIRS_DOC = (
    "(A, n, r) for 1 <= r <= n; (B, n, n) for n >= 2; (C, n, 1) for n >= 2; "
    "(D, n, 1) or (D, n, n) for n >= 3; (E6, 6, 1) or (E6, 6, 6); (E7, 7, 7)"
)


class InvalidPairError(ValueError):
    pass


@dataclass(frozen=True)
class MinusculePair:
    lie_type: str
    rank: int
    parabolic: int

    def __post_init__(self):
        t = self.lie_type.upper()
        if t in ("E", "E6", "E7"):
            t = f"E{self.rank}" if t == "E" else t
            if int(t[1]) != self.rank:
                raise InvalidPairError(f"type {t} has rank {t[1]}, got rank {self.rank}")
        object.__setattr__(self, "lie_type", t)
        n, r = self.rank, self.parabolic
        ok = False
        if t == "A":
            ok = n >= 1 and 1 <= r <= n
        elif t == "B":
            ok = n >= 2 and r == n
        elif t == "C":
            ok = n >= 2 and r == 1
        elif t == "D":
            if n >= 3 and r == n - 1 and n > 3:
                raise InvalidPairError(
                    f"(D{n}, P{n - 1}) is isomorphic to (D{n}, P{n}); request parabolic {n} instead"
                )
            ok = n >= 3 and r in (1, n)
        elif t == "E6":
            ok = r in (1, 6)
        elif t == "E7":
            # P1 is accepted as an alias of the minuscule P7 quotient
            ok = r in (1, 7)
        if not ok:
            raise InvalidPairError(f"({t}, {n}, {r}) is not a minuscule pair; valid pairs: {VALID_PAIRS_DOC}")

    @property
    def name(self) -> str:
        t = self.lie_type
        if t.startswith("E"):
            return f"{t}/P{self.parabolic}"
        return f"{t}{self.rank}/P{self.parabolic}"


@dataclass(frozen=True, order=True)
class CosetLabel:
    """Set-theoretic label of a coset: a subset, a signed index or an orbit index."""

    kind: str  # "subset" | "signed" | "orbit"
    value: tuple

    def __str__(self):
        if self.kind == "subset":
            return "{" + ",".join(str(i) for i in self.value) + "}"
        if self.kind == "signed":
            return f"{self.value[0]:+d}"
        return f"v{self.value[0]}"

    @classmethod
    def subset(cls, s: Iterable[int]) -> "CosetLabel":
        return cls("subset", tuple(sorted(s)))

    @classmethod
    def signed(cls, i: int) -> "CosetLabel":
        return cls("signed", (i,))

    @classmethod
    def orbit(cls, k: int) -> "CosetLabel":
        return cls("orbit", (k,))

    @classmethod
    def parse(cls, text: str) -> "CosetLabel":
        text = text.strip()
        if text.startswith("{") and text.endswith("}"):
            inner = text[1:-1].strip()
            return cls.subset(int(x) for x in inner.split(",")) if inner else cls.subset(())
        if text.startswith("v"):
            return cls.orbit(int(text[1:]))
        if text[0] in "+-":
            return cls.signed(int(text))
        raise ValueError(f"unrecognized coset label {text!r}")

    @property
    def as_set(self) -> frozenset:
        if self.kind != "subset":
            raise TypeError(f"{self} is not a subset label")
        return frozenset(self.value)


# -- root systems --------------------------------------------------------------


def _unit(n, i, c=1):
    v = [Fraction(0)] * n
    v[i] = Fraction(c)
    return v


def classical_roots(lie_type: str, n: int) -> list[tuple[Fraction, ...]]:
    """Full root system of type A_{n} (in R^{n+1}), B_n, C_n or D_n (in R^n)."""
    roots = set()
    if lie_type == "A":
        m = n + 1
        for i in range(m):
            for j in range(m):
                if i != j:
                    v = _unit(m, i)
                    v[j] = Fraction(-1)
                    roots.add(tuple(v))
        return sorted(roots)
    for i, j in combinations(range(n), 2):
        for si in (1, -1):
            for sj in (1, -1):
                v = [Fraction(0)] * n
                v[i], v[j] = Fraction(si), Fraction(sj)
                roots.add(tuple(v))
    if lie_type in ("B", "C"):
        c = 1 if lie_type == "B" else 2
        for i in range(n):
            roots.add(tuple(_unit(n, i, c)))
            roots.add(tuple(_unit(n, i, -c)))
    return sorted(roots)


def reflect(alpha, x, center=None):
    """Reflection of ``x`` in the mirror of ``alpha`` through ``center``."""
    if center is not None:
        y = sub(x, center)
    else:
        y = x
    c = 2 * dot(alpha, y) / dot(alpha, alpha)
    if c == 0:
        return tuple(x)
    return tuple(a - c * b for a, b in zip(x, alpha))


_H = Fraction(1, 2)

# Bourbaki simple roots of E8 in the standard coordinates; E6 and E7 are the
# subsystems spanned by the first six and seven of them.
E8_SIMPLE = [
    (_H, -_H, -_H, -_H, -_H, -_H, -_H, _H),
    (1, 1, 0, 0, 0, 0, 0, 0),
    (-1, 1, 0, 0, 0, 0, 0, 0),
    (0, -1, 1, 0, 0, 0, 0, 0),
    (0, 0, -1, 1, 0, 0, 0, 0),
    (0, 0, 0, -1, 1, 0, 0, 0),
    (0, 0, 0, 0, -1, 1, 0, 0),
    (0, 0, 0, 0, 0, -1, 1, 0),
]


def e_simple_roots(rank: int):
    return [tuple(Fraction(x) for x in r) for r in E8_SIMPLE[:rank]]


def root_closure(simple) -> list[tuple[Fraction, ...]]:
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for r in frontier:
            for s in simple:
                img = reflect(s, r)
                if img not in roots:
                    roots.add(img)
                    nxt.append(img)
        frontier = nxt
    return sorted(roots)


def fundamental_weight(simple, r: int) -> tuple[Fraction, ...]:
    """Weight in the span of ``simple`` pairing to 1 with root ``r`` (1-based) and 0 otherwise."""
    gram = [[dot(a, b) for b in simple] for a in simple]
    rhs = [Fraction(int(k == r - 1)) for k in range(len(simple))]
    # simply laced: coroots equal roots
    c = solve(gram, rhs)
    dim = len(simple[0])
    return tuple(sum((c[k] * simple[k][i] for k in range(len(simple))), Fraction(0)) for i in range(dim))


def orbit_bfs(start, simple) -> list[tuple[Fraction, ...]]:
    """Orbit of ``start`` under the group generated by ``simple`` reflections.

    Breadth-first, each new layer sorted lexicographically by coordinates.
    """
    seen = {start}
    out = [start]
    layer = [start]
    while layer:
        new = set()
        for x in layer:
            for s in simple:
                y = reflect(s, x)
                if y not in seen:
                    new.add(y)
        layer = sorted(new)
        seen.update(layer)
        out.extend(layer)
    return out


# -- quotients -----------------------------------------------------------------


@dataclass
class MinusculeQuotient:
    pair: MinusculePair
    labels: list[CosetLabel]
    points: list[tuple[Fraction, ...]]
    roots: list[tuple[Fraction, ...]]
    edges: set[tuple[int, int]] = field(default_factory=set)

    def __post_init__(self):
        self.index = {p: i for i, p in enumerate(self.points)}
        if len(self.index) != len(self.points):
            raise ValueError("vertex coordinates must be pairwise distinct")
        self.label_index = {lab: i for i, lab in enumerate(self.labels)}
        n = len(self.points)
        dim = len(self.points[0])
        self.centroid = tuple(sum((p[k] for p in self.points), Fraction(0)) / n for k in range(dim))
        if not self.edges:
            self.edges = hull_edges(convex_hull(self.points))
        self.neighbors = [set() for _ in range(n)]
        for i, j in self.edges:
            self.neighbors[i].add(j)
            self.neighbors[j].add(i)

    def __len__(self):
        return len(self.points)

    @property
    def n_vertices(self) -> int:
        return len(self.points)

    @property
    def ambient_dim(self) -> int:
        return len(self.points[0])

    @cached_property
    def dimension(self) -> int:
        return affine_hull(self.points)[2]

    def vertex(self, label) -> int:
        if isinstance(label, str):
            label = CosetLabel.parse(label)
        elif isinstance(label, (set, frozenset)):
            label = CosetLabel.subset(label)
        elif isinstance(label, int) and self.labels[0].kind == "signed":
            label = CosetLabel.signed(label)
        return self.label_index[label]

    @cached_property
    def distances(self) -> list[list[int]]:
        n = len(self.points)
        out = []
        for s in range(n):
            d = [-1] * n
            d[s] = 0
            dq = deque([s])
            while dq:
                u = dq.popleft()
                for v in self.neighbors[u]:
                    if d[v] < 0:
                        d[v] = d[u] + 1
                        dq.append(v)
            out.append(d)
        return out

    @cached_property
    def positive_root_indices(self) -> list[int]:
        """One representative index per mirror (``alpha`` and ``-alpha``)."""
        seen = set()
        out = []
        for k, a in enumerate(self.roots):
            neg = tuple(-x for x in a)
            if neg in seen:
                continue
            seen.add(a)
            out.append(k)
        return out

    @cached_property
    def reflection_table(self) -> list[list[int | None]]:
        """``table[a][i]`` is the index of ``s_a(p_i)``, or None if not a vertex."""
        return [[self.index.get(reflect(a, p, self.centroid)) for p in self.points] for a in self.roots]

    @cached_property
    def side_table(self) -> list[list[int]]:
        """Sign of ``<alpha, p_i - c>`` per root and vertex."""
        out = []
        for a in self.roots:
            row = []
            for p in self.points:
                v = dot(a, sub(p, self.centroid))
                row.append((v > 0) - (v < 0))
            out.append(row)
        return out

    def is_root_direction(self, v) -> bool:
        """True iff ``v`` is a nonzero rational multiple of a root."""
        return root_multiple_index(self._root_directions, v) is not None

    @cached_property
    def root_pair_table(self) -> list[list[bool]]:
        """``[i][j]`` is True iff vertex ``i`` minus vertex ``j`` is parallel to a root."""
        n = len(self.points)
        t = [[False] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                t[i][j] = t[j][i] = self.is_root_direction(sub(self.points[i], self.points[j]))
        return t

    @cached_property
    def _root_directions(self):
        return {_direction_key(a): k for k, a in enumerate(self.roots)}


def _direction_key(v):
    """Canonical key of the line spanned by a nonzero vector."""
    v = tuple(Fraction(x) for x in v)
    lead = next(x for x in v if x != 0)
    return tuple(x / lead for x in v)


def root_multiple_index(directions: dict, v):
    if not any(v):
        return None
    return directions.get(_direction_key(v))


def build_quotient(pair: MinusculePair | tuple) -> MinusculeQuotient:
    """Vertices, labels and roots of the minuscule quotient ``pair``."""
    if not isinstance(pair, MinusculePair):
        pair = MinusculePair(*pair)
    t, n, r = pair.lie_type, pair.rank, pair.parabolic
    labels: list[CosetLabel] = []
    points: list[tuple] = []
    if t == "A":
        m = n + 1
        for A in combinations(range(1, m + 1), r):
            labels.append(CosetLabel.subset(A))
            points.append(tuple(Fraction(int(i + 1 in A)) for i in range(m)))
        roots = classical_roots("A", n)
    elif t == "B" or (t == "D" and r == n):
        for size in range(n + 1):
            if t == "D" and size % 2:
                continue
            for A in combinations(range(1, n + 1), size):
                labels.append(CosetLabel.subset(A))
                points.append(tuple(Fraction(int(i + 1 in A)) - _H for i in range(n)))
        roots = classical_roots(t, n)
    elif t in ("C", "D"):
        for sign in (1, -1):
            for i in range(1, n + 1):
                labels.append(CosetLabel.signed(sign * i))
                points.append(tuple(_unit(n, i - 1, sign)))
        roots = classical_roots(t, n)
    else:
        simple = e_simple_roots(n)
        rr = 7 if t == "E7" else r
        omega = fundamental_weight(simple, rr)
        points = orbit_bfs(omega, simple)
        labels = [CosetLabel.orbit(k) for k in range(len(points))]
        roots = root_closure(simple)
    return MinusculeQuotient(pair, labels, points, roots)


def reflect_vertex(q: MinusculeQuotient, root_index: int, vertex_index: int):
    """Index of ``s_alpha`` applied to a vertex (through the centroid), or None."""
    return q.index.get(reflect(q.roots[root_index], q.points[vertex_index], q.centroid))


def separates(q: MinusculeQuotient, root_index: int, i: int, j: int) -> bool:
    """Strict separation: both points off the mirror, on opposite sides."""
    a = q.roots[root_index]
    si = dot(a, sub(q.points[i], q.centroid))
    sj = dot(a, sub(q.points[j], q.centroid))
    return si * sj < 0


def separates_weak(q: MinusculeQuotient, root_index: int, i: int, j: int) -> bool:
    """Separation allowing one point on the mirror (but not both)."""
    a = q.roots[root_index]
    si = dot(a, sub(q.points[i], q.centroid))
    sj = dot(a, sub(q.points[j], q.centroid))
    return si * sj <= 0 and (si != 0 or sj != 0)


def graph_distance(q: MinusculeQuotient, i: int, j: int) -> int:
    return q.distances[i][j]


def antipode(q: MinusculeQuotient, i: int):
    target = tuple(2 * c - x for c, x in zip(q.centroid, q.points[i]))
    return q.index.get(target)


def cross_polytope_faces(q: MinusculeQuotient) -> list[list[tuple[int, int]]]:
    """Cross-polytope faces of 2_21 / 3_21, one per set of distance-2 antipode pairs.

    The face through a distance-2 pair ``(A, B)`` is ``{A, B}`` together with
    their common neighbours, grouped into pairs with ``p_C + p_C' = p_A + p_B``.
    """
    if not q.pair.lie_type.startswith("E"):
        raise ValueError(f"cross_polytope_faces needs an E-type quotient, got {q.pair.name}")
    dist = q.distances
    n = len(q.points)
    faces: dict[frozenset, list[tuple[int, int]]] = {}
    for a in range(n):
        for b in range(a + 1, n):
            if dist[a][b] != 2:
                continue
            common = q.neighbors[a] & q.neighbors[b]
            target = tuple(x + y for x, y in zip(q.points[a], q.points[b]))
            pairs = [(a, b)]
            for c in sorted(common):
                partner = q.index.get(tuple(t - x for t, x in zip(target, q.points[c])))
                if partner is None or partner not in common:
                    raise AssertionError(f"vertex {c} has no antipode in the face of ({a}, {b})")
                if c < partner:
                    pairs.append((c, partner))
            key = frozenset(v for pr in pairs for v in pr)
            if key not in faces:
                faces[key] = sorted(pairs)
    return [faces[k] for k in sorted(faces, key=lambda s: sorted(s))]


def antipodal_pairs(q: MinusculeQuotient) -> list[tuple[int, int]]:
    out = []
    for i in range(len(q.points)):
        j = antipode(q, i)
        if j is not None and i < j:
            out.append((i, j))
    return out


# -- JSON ----------------------------------------------------------------------


def quotient_to_json(q: MinusculeQuotient) -> dict:
    return {
        "type": q.pair.lie_type,
        "rank": q.pair.rank,
        "parabolic": q.pair.parabolic,
        "vertices": [
            {"label": str(lab), "coords": [str(x) for x in p]} for lab, p in zip(q.labels, q.points)
        ],
        "edges": [list(e) for e in sorted(q.edges)],
        "roots": [[str(x) for x in a] for a in q.roots],
    }


def quotient_from_json(data: dict) -> MinusculeQuotient:
    pair = MinusculePair(data["type"], int(data["rank"]), int(data["parabolic"]))
    labels = [CosetLabel.parse(v["label"]) for v in data["vertices"]]
    points = [tuple(Fraction(x) for x in v["coords"]) for v in data["vertices"]]
    roots = [tuple(Fraction(x) for x in a) for a in data["roots"]]
    edges = {tuple(sorted(e)) for e in data["edges"]}
    return MinusculeQuotient(pair, labels, points, roots, edges)
