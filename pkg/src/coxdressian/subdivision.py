"""Regular subdivisions induced by height functions and classification of their cells."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .coxeter import MinusculeQuotient
from .hull import affine_chart, bits, cone_hull, convex_hull, hull_edges
from .linalg import as_fraction, common_denominator, rref, solve, sub
from .tropical import INF, heights


@dataclass(frozen=True)
class Cell:
    vertices: frozenset[int]
    dimension: int

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(sorted(self.vertices))


@dataclass
class Subdivision:
    cells: list[Cell]
    support: list[int]
    dimension: int
    heights: tuple = ()
    quotient: MinusculeQuotient | None = None

    @property
    def is_triangulation(self) -> bool:
        return all(len(c.vertices) == c.dimension + 1 for c in self.cells)

    @property
    def key(self) -> frozenset[frozenset[int]]:
        return frozenset(c.vertices for c in self.cells)

    def __len__(self):
        return len(self.cells)


def lower_cells(points: Sequence[Sequence], hts: Sequence) -> tuple[list[frozenset[int]], int]:
    """Maximal cells (as index sets into ``points``) of the regular subdivision.

    Points with infinite height are dropped. The lifted configuration plus the
    upward ray is hulled in homogeneous coordinates; lower facets are the ones
    not containing the ray. Returns ``(cells, dimension)``.
    """
    support = [i for i, h in enumerate(hts) if h != INF]
    if not support:
        raise ValueError("height function has empty support")
    pts = [points[i] for i in support]
    chart = affine_chart(pts)
    d = chart.dim
    if d == 0:
        return [frozenset(support)], 0
    proj = [chart.project(p) for p in pts]
    hv = [as_fraction(hts[i]) for i in support]
    lo = min(hv)
    den = common_denominator(hv)
    lifts = [int((h - lo) * den) for h in hv]
    if all(t == lifts[0] for t in lifts):
        return [frozenset(support)], d
    gens = [(1,) + p + (t,) for p, t in zip(proj, lifts)]
    gens.append((0,) * (d + 1) + (1,))
    ray = len(gens) - 1
    cells = []
    for f in cone_hull(gens):
        if f.incidence >> ray & 1:
            continue
        cells.append(frozenset(support[j] for j in bits(f.incidence)))
    cells.sort(key=sorted)
    return cells, d


def regular_subdivision(q: MinusculeQuotient, mu) -> Subdivision:
    mu = heights(mu, q)
    cells, d = lower_cells(q.points, mu.values)
    return Subdivision(
        [Cell(c, d) for c in cells],
        mu.support,
        d,
        mu.values,
        q,
    )


def subdivision_of_points(points: Sequence[Sequence], hts: Sequence) -> Subdivision:
    cells, d = lower_cells(points, hts)
    support = [i for i, h in enumerate(hts) if h != INF]
    return Subdivision([Cell(c, d) for c in cells], support, d, tuple(hts))


# -- secondary cone certificates ----------------------------------------------------


@dataclass
class ConeConstraints:
    """Linear description of the heights inducing a fixed subdivision.

    Rows are vectors over ``n_points`` height variables; the open cone is
    ``E mu = 0, S mu > 0``. ``strict`` rows come tagged with ``(cell, point)``.
    """

    n_points: int
    equalities: list[tuple[Fraction, ...]] = field(default_factory=list)
    strict: list[tuple[Fraction, ...]] = field(default_factory=list)
    tags: list[tuple] = field(default_factory=list)


def _affine_basis(points, cell: Sequence[int]) -> list[int]:
    """Affinely independent subset of ``cell`` spanning its affine hull."""
    chosen = [cell[0]]
    rows: list = []
    base = points[cell[0]]
    for i in cell[1:]:
        trial = rows + [sub(points[i], base)]
        if len(rref(trial)[1]) > len(rows):
            rows = trial
            chosen.append(i)
    return chosen


def _affine_coefficients(points, basis: list[int], target) -> tuple[Fraction, ...]:
    """``lambda`` with ``sum lambda_b = 1`` and ``sum lambda_b p_b = target``."""
    dim = len(target)
    rows = [[points[b][k] for b in basis] for k in range(dim)] + [[Fraction(1)] * len(basis)]
    rhs = list(target) + [Fraction(1)]
    lam = solve(rows, rhs)
    if lam is None:
        raise AssertionError("point outside the affine hull of the cell basis")
    return lam


def secondary_cone_constraints(points: Sequence[Sequence], cells: Iterable[Iterable[int]], support=None) -> ConeConstraints:
    """Local lower-hull certificates of a subdivision of ``points[support]``.

    For each cell with affine basis ``B``: every other cell point ``q`` obeys
    ``mu_q = sum lambda_b mu_b`` and every support point outside the cell obeys
    ``mu_q > sum lambda_b mu_b``.
    """
    points = [tuple(as_fraction(x) for x in p) for p in points]
    n = len(points)
    support = list(range(n)) if support is None else list(support)
    cc = ConeConstraints(n)
    seen_eq = set()
    for cell in cells:
        cell = sorted(cell)
        basis = _affine_basis(points, cell)
        cell_set = set(cell)
        for qpt in support:
            if qpt in basis:
                continue
            lam = _affine_coefficients(points, basis, points[qpt])
            row = [Fraction(0)] * n
            row[qpt] += 1
            for b, l in zip(basis, lam):
                row[b] -= l
            row = tuple(row)
            if qpt in cell_set:
                if row not in seen_eq:
                    seen_eq.add(row)
                    cc.equalities.append(row)
            else:
                cc.strict.append(row)
                cc.tags.append((tuple(cell), qpt))
    return cc


def induces(points, cells, hts) -> bool:
    """Check the certificates of ``cells`` directly at the heights ``hts``."""
    support = [i for i, h in enumerate(hts) if h != INF]
    cc = secondary_cone_constraints(points, cells, support)
    vals = [as_fraction(hts[i]) if hts[i] != INF else Fraction(0) for i in range(len(points))]

    def ev(row):
        return sum((a * v for a, v in zip(row, vals) if a), Fraction(0))

    return all(ev(r) == 0 for r in cc.equalities) and all(ev(r) > 0 for r in cc.strict)


# -- cell classification -----------------------------------------------------------


@dataclass
class CellReport:
    cell: Cell
    is_coxeter_matroid: bool
    is_strong_matroid: bool
    witness: dict = field(default_factory=dict)


def cell_edges(q: MinusculeQuotient, cell: Iterable[int], dimension: int = -1) -> set[tuple[int, int]]:
    """Hull edges of a cell; ``dimension`` (if known) lets simplices skip the hull."""
    cell = sorted(cell)
    if len(cell) < 2:
        return set()
    if len(cell) == 2 or len(cell) == dimension + 1:
        return {(a, b) for ai, a in enumerate(cell) for b in cell[ai + 1 :]}
    h = convex_hull([q.points[i] for i in cell])
    return {(cell[a], cell[b]) for a, b in hull_edges(h)}


def is_coxeter_matroid(q: MinusculeQuotient, cell: Iterable[int], dimension: int = -1):
    """``(ok, offending_edge)``: every hull edge must be parallel to a root."""
    table = q.root_pair_table
    for i, j in sorted(cell_edges(q, cell, dimension)):
        if not table[i][j]:
            return False, (i, j)
    return True, None


def _exchange_cover(q: MinusculeQuotient, cell_set: set[int], weak: bool = False) -> dict[int, int]:
    """For each cell vertex, bitmask of partners admitting a strong exchange."""
    cover = {i: 0 for i in cell_set}
    refl = q.reflection_table
    side = q.side_table
    for a in q.positive_root_indices:
        ra, sa = refl[a], side[a]
        good = {1: 0, -1: 0, 0: 0}
        members = {1: [], -1: [], 0: []}
        for i in cell_set:
            if ra[i] in cell_set:
                good[sa[i]] |= 1 << i
                members[sa[i]].append(i)
        if weak:
            partner = {1: good[-1] | good[0], -1: good[1] | good[0], 0: good[1] | good[-1]}
        else:
            partner = {1: good[-1], -1: good[1], 0: 0}
        for s in (1, -1, 0):
            m = partner[s]
            if m:
                for i in members[s]:
                    cover[i] |= m
    return cover


def is_strong_matroid(q: MinusculeQuotient, cell: Iterable[int], weak: bool = False):
    """``(ok, offending_pair)`` for the strong exchange property of ``cell``.

    Each pair ``A != B`` needs a mirror strictly separating them (or, with
    ``weak``, with at most one of them on it) whose reflection keeps both in
    the cell.
    """
    cell_set = set(cell)
    cover = _exchange_cover(q, cell_set, weak)
    full = 0
    for i in cell_set:
        full |= 1 << i
    for i in sorted(cell_set):
        missing = full & ~cover[i] & ~(1 << i)
        if missing:
            j = (missing & -missing).bit_length() - 1
            return False, (min(i, j), max(i, j))
    return True, None


def exchange_witness(q: MinusculeQuotient, cell: Iterable[int], i: int, j: int):
    """First root index (canonical order) realizing the exchange of ``i`` and ``j``."""
    cell_set = set(cell)
    for a in q.positive_root_indices:
        si, sj = q.side_table[a][i], q.side_table[a][j]
        if si * sj < 0 and q.reflection_table[a][i] in cell_set and q.reflection_table[a][j] in cell_set:
            return a
    return None


SUMMARY_LEVELS = ("strong_matroidal", "matroidal", "neither")


def classify_cell(q: MinusculeQuotient, cell: Cell | Iterable[int]) -> CellReport:
    if not isinstance(cell, Cell):
        verts = frozenset(cell)
        cell = Cell(verts, -1)
    cox, edge = is_coxeter_matroid(q, cell.vertices, cell.dimension)
    strong, pair = is_strong_matroid(q, cell.vertices)
    witness = {}
    if edge is not None:
        witness["edge"] = edge
    if pair is not None:
        witness["pair"] = pair
    return CellReport(cell, cox, strong, witness)


def classify(q: MinusculeQuotient, mu, subdivision: Subdivision | None = None):
    """Per-cell reports and the strongest property shared by all cells."""
    sub_ = subdivision or regular_subdivision(q, mu)
    reports = [classify_cell(q, c) for c in sub_.cells]
    if all(r.is_strong_matroid for r in reports):
        summary = "strong_matroidal"
    elif all(r.is_coxeter_matroid for r in reports):
        summary = "matroidal"
    else:
        summary = "neither"
    return reports, summary


def is_strong_matroidal(q: MinusculeQuotient, mu, subdivision: Subdivision | None = None) -> bool:
    """Cheaper check: every maximal cell has the strong exchange property.

    Strong exchange implies the matroid property, so hulls are not needed.
    """
    sub_ = subdivision or regular_subdivision(q, mu)
    return all(is_strong_matroid(q, c.vertices)[0] for c in sub_.cells)


# -- export ----------------------------------------------------------------------------


def subdivision_to_json(q: MinusculeQuotient, reports: list[CellReport], summary: str) -> dict:
    cells = []
    for r in reports:
        w = {}
        if "edge" in r.witness:
            w["edge"] = [str(q.labels[i]) for i in r.witness["edge"]]
        if "pair" in r.witness:
            w["pair"] = [str(q.labels[i]) for i in r.witness["pair"]]
        cells.append(
            {
                "vertices": [str(q.labels[i]) for i in sorted(r.cell.vertices)],
                "dim": r.cell.dimension,
                "coxeter": r.is_coxeter_matroid,
                "strong": r.is_strong_matroid,
                "witness": w or None,
            }
        )
    return {"cells": cells, "summary": summary}


def _fmt(x: Fraction) -> str:
    return str(int(x)) if x.denominator == 1 else repr(float(x))


def subdivision_to_off(q: MinusculeQuotient, subdivision: Subdivision) -> str:
    """OFF mesh of the boundary polygons of every cell, colored per cell.

    Only quotients living in a 3-dimensional affine space are supported.
    """
    if q.dimension != 3 or q.ambient_dim != 3:
        raise ValueError("OFF export is available for 3-dimensional quotients only")
    faces = []
    palette = [(0.9, 0.3, 0.3), (0.3, 0.7, 0.3), (0.3, 0.4, 0.9), (0.9, 0.7, 0.2), (0.6, 0.3, 0.8), (0.2, 0.8, 0.8)]
    for k, cell in enumerate(subdivision.cells):
        verts = sorted(cell.vertices)
        h = convex_hull([q.points[i] for i in verts])
        edges = hull_edges(h)
        for facet in h.facets:
            loc = sorted(facet.incident)
            adj = {v: [] for v in loc}
            for a, b in edges:
                if a in adj and b in adj:
                    adj[a].append(b)
                    adj[b].append(a)
            cycle = [loc[0]]
            prev = None
            while len(cycle) < len(loc):
                nxt = [v for v in adj[cycle[-1]] if v != prev and v not in cycle]
                prev = cycle[-1]
                cycle.append(nxt[0])
            # orient outward: the facet normal must agree with the polygon's winding
            p0, p1, p2 = (q.points[verts[cycle[t]]] for t in range(3))
            u, v = sub(p1, p0), sub(p2, p0)
            cross = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
            if sum(a * b for a, b in zip(cross, facet.normal)) < 0:
                cycle.reverse()
            faces.append(([verts[t] for t in cycle], palette[k % len(palette)]))
    lines = ["OFF", f"{len(q.points)} {len(faces)} 0"]
    for p in q.points:
        lines.append(" ".join(_fmt(x) for x in p))
    for poly, color in faces:
        lines.append(f"{len(poly)} " + " ".join(str(i) for i in poly) + " " + " ".join(f"{c:.2f}" for c in color))
    return "\n".join(lines) + "\n"
