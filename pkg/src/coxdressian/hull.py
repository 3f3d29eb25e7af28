"""Exact convex hulls by incremental beneath-beyond.

Points are first mapped into their affine hull by a coordinate projection
(an affine isomorphism on the hull), scaled to integers and homogenized, so
the hull becomes a pointed polyhedral cone whose facets are linear forms
``h . g >= 0``. Rays (direction generators) are handled by the same code,
which is how lower hulls of lifted configurations are computed.

Incidence sets are Python ints used as bitmasks over generator indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .linalg import (
    as_fraction,
    common_denominator,
    int_echelon,
    int_kernel_vector,
    rref,
    sub,
)


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass
class ConeFacet:
    normal: tuple[int, ...]
    incidence: int  # bitmask over generator indices with normal . g == 0


def cone_hull(gens: Sequence[Sequence[int]]) -> list[ConeFacet]:
    """Facets of the cone spanned by integer generators of full rank.

    Generators must span their ambient space and the cone must be pointed
    (true for homogenized polytopes, with or without extra rays).
    """
    D = len(gens[0])
    n = len(gens)
    gf = np.array(gens, dtype=float)
    # greedy independent set for the initial simplicial cone
    basis: list[int] = []
    ech: list[list[int]] = []
    for i, g in enumerate(gens):
        trial = ech + [list(g)]
        e, piv = int_echelon(trial)
        if len(piv) > len(ech):
            ech = e
            basis.append(i)
            if len(basis) == D:
                break
    if len(basis) < D:
        raise ValueError("generators do not span the ambient space")
    interior = [sum(gens[i][k] for i in basis) for k in range(D)]

    facets: dict[tuple[int, ...], int] = {}

    def oriented(normal):
        s = sum(a * b for a, b in zip(normal, interior))
        if s == 0:
            raise AssertionError("interior point on a facet hyperplane")
        return normal if s > 0 else tuple(-a for a in normal)

    processed = 0  # bitmask of processed generators
    for i in basis:
        processed |= 1 << i
    for i in basis:
        others = [gens[j] for j in basis if j != i]
        h = oriented(int_kernel_vector(others, D))
        facets[h] = _incidence(h, gens, bits(processed), gf)

    order = [i for i in range(n) if i not in set(basis)]
    for gi in order:
        g = gens[gi]
        bit = 1 << gi
        vals = _signed_values(list(facets), g)
        visible = [h for h, v in vals.items() if v < 0]
        if not visible:
            for h, v in vals.items():
                if v == 0:
                    facets[h] |= bit
            processed |= bit
            continue
        hidden = [h for h, v in vals.items() if v > 0]
        new_normals = set()
        if hidden:
            words = (n + 63) // 64
            vis_m = _mask_matrix([facets[h] for h in visible], words)
            hid_m = _mask_matrix([facets[h] for h in hidden], words)
            counts = np.zeros((len(visible), len(hidden)), dtype=np.int64)
            for w in range(words):
                counts += np.bitwise_count(vis_m[:, w, None] & hid_m[None, :, w])
            for a, b in zip(*np.nonzero(counts >= D - 2)):
                ridge = facets[visible[a]] & facets[hidden[b]]
                pts = [gens[j] for j in bits(ridge)]
                if len(pts) == D - 2 and facets[visible[a]].bit_count() == D - 1:
                    e = pts  # subset of a simplicial facet: independent
                else:
                    e, piv = int_echelon(pts)
                    if len(piv) != D - 2:
                        continue
                nh = oriented(int_kernel_vector(list(e) + [list(g)], D))
                new_normals.add(nh)
        for hv in visible:
            del facets[hv]
        processed |= bit
        for h, v in vals.items():
            if v == 0 and h in facets:
                facets[h] |= bit
        done = bits(processed)
        for nh in new_normals:
            if nh not in facets:
                facets[nh] = _incidence(nh, gens, done, gf)
    return [ConeFacet(h, inc) for h, inc in facets.items()]


def _mask_matrix(masks: list[int], words: int) -> np.ndarray:
    out = np.empty((len(masks), words), dtype=np.uint64)
    full = (1 << 64) - 1
    for r, m in enumerate(masks):
        for w in range(words):
            out[r, w] = (m >> (64 * w)) & full
    return out


# Float prefilters: a float dot product is trusted only when it clears a
# conservative rounding bound; anything near zero is recomputed exactly.
_REL = 1e-9


def _signed_values(normals: list[tuple[int, ...]], g: Sequence[int]) -> dict:
    """``h . g`` for each normal; exact near zero, sign-correct elsewhere."""
    if not normals:
        return {}
    H = np.array(normals, dtype=float)
    gv = np.array(g, dtype=float)
    with np.errstate(all="ignore"):
        approx = H @ gv
        bound = np.abs(H) @ np.abs(gv) * _REL
    out = {}
    for h, a, b in zip(normals, approx, bound):
        if not abs(a) > b:  # also catches overflow to inf/nan
            out[h] = sum(x * y for x, y in zip(h, g))
        else:
            out[h] = -1 if a < 0 else 1
    return out


def _incidence(h, gens, idx: list[int], gf: np.ndarray | None = None) -> int:
    if gf is None:
        cand = idx
    else:
        hv = np.array(h, dtype=float)
        sub = gf[idx]
        with np.errstate(all="ignore"):
            near = ~(np.abs(sub @ hv) > np.abs(sub) @ np.abs(hv) * _REL)
        cand = [idx[k] for k in np.nonzero(near)[0]]
    inc = 0
    for j in cand:
        if sum(a * b for a, b in zip(h, gens[j])) == 0:
            inc |= 1 << j
    return inc


# -- polytope layer -----------------------------------------------------------


@dataclass
class AffineChart:
    """Coordinate projection of a point set onto its affine hull."""

    base: tuple[Fraction, ...]
    coords: list[int]  # ambient coordinates kept by the projection
    scale: int  # common denominator used to reach integers
    dim: int

    def project(self, p) -> tuple[int, ...]:
        return tuple(int((as_fraction(p[c]) - self.base[c]) * self.scale) for c in self.coords)


def affine_chart(points: Sequence[Sequence]) -> AffineChart:
    pts = [tuple(as_fraction(x) for x in p) for p in points]
    base = pts[0]
    scale = common_denominator(x for p in pts for x in p)
    diffs = [[int((a - b) * scale) for a, b in zip(p, base)] for p in pts[1:]]
    diffs = [d for d in diffs if any(d)]
    piv = int_echelon(diffs)[1] if diffs else []
    return AffineChart(base, list(piv), scale, len(piv))


def affine_hull(points: Sequence[Sequence]):
    """Return ``(direction_basis, base_point, dimension)`` of the affine hull."""
    if not points:
        raise ValueError("affine hull of an empty set")
    pts = [tuple(as_fraction(x) for x in p) for p in points]
    base = pts[0]
    diffs = [sub(p, base) for p in pts[1:]]
    m, piv = rref(diffs) if diffs else ([], [])
    return [tuple(r) for r in m], base, len(piv)


@dataclass
class HullFacet:
    normal: tuple[Fraction, ...]  # facet is {x : normal . x <= offset} within the affine hull
    offset: Fraction
    incident: frozenset[int]


@dataclass
class HullResult:
    vertex_indices: frozenset[int]
    facets: list[HullFacet]
    dimension: int
    chart: AffineChart
    facet_masks: list[int]  # incidence bitmasks over the original indices

    def edges(self) -> set[tuple[int, int]]:
        return hull_edges(self)


def convex_hull(points: Sequence[Sequence]) -> HullResult:
    """Exact convex hull computed inside the affine hull of ``points``.

    Repeated points are merged; incidence sets refer to all original indices.
    """
    if not points:
        raise ValueError("convex hull of an empty set")
    pts = [tuple(as_fraction(x) for x in p) for p in points]
    first: dict[tuple, int] = {}
    rep = []
    for i, p in enumerate(pts):
        rep.append(first.setdefault(p, i))
    uniq = sorted(first.values())
    chart = affine_chart([pts[i] for i in uniq])
    d = chart.dim
    copies: dict[int, int] = {}
    for i, r in enumerate(rep):
        copies[r] = copies.get(r, 0) | (1 << i)

    def expand(local_mask: int) -> int:
        out = 0
        for j in bits(local_mask):
            out |= copies[uniq[j]]
        return out

    if d == 0:
        return HullResult(frozenset([uniq[0]]), [], 0, chart, [])
    proj = [chart.project(pts[i]) for i in uniq]
    if d == 1:
        lo = min(range(len(proj)), key=lambda j: proj[j][0])
        hi = max(range(len(proj)), key=lambda j: proj[j][0])
        facets, masks = [], []
        for j, sign in ((lo, 1), (hi, -1)):
            # sign * (x - x_j) >= 0 on the chart coordinate
            normal = [Fraction(0)] * len(pts[0])
            normal[chart.coords[0]] = Fraction(-sign)
            offset = -sign * pts[uniq[j]][chart.coords[0]]
            m = expand(1 << j)
            facets.append(HullFacet(tuple(normal), offset, frozenset(bits(m))))
            masks.append(m)
        return HullResult(frozenset([uniq[lo], uniq[hi]]), facets, 1, chart, masks)
    gens = [(1,) + p for p in proj]
    cf = cone_hull(gens)
    facets, masks = [], []
    amb = len(pts[0])
    for f in cf:
        h0, hx = f.normal[0], f.normal[1:]
        # h0 + sum_k hx_k * scale * (x_{c_k} - base_{c_k}) >= 0
        normal = [Fraction(0)] * amb
        for k, c in enumerate(chart.coords):
            normal[c] = Fraction(-hx[k] * chart.scale)
        offset = Fraction(h0) + sum((normal[c] * chart.base[c] for c in chart.coords), Fraction(0))
        normal = tuple(normal)
        m = expand(f.incidence)
        facets.append(HullFacet(normal, offset, frozenset(bits(m))))
        masks.append(m)
    verts = _vertices_from_masks(len(proj), [f.incidence for f in cf])
    return HullResult(frozenset(uniq[j] for j in verts), facets, d, chart, masks)


def _vertices_from_masks(n: int, masks: list[int]) -> list[int]:
    full = (1 << n) - 1
    out = []
    for j in range(n):
        acc = full
        for m in masks:
            if m >> j & 1:
                acc &= m
        if acc == 1 << j:
            out.append(j)
    return out


def hull_edges(hull: HullResult) -> set[tuple[int, int]]:
    """Edges of the hull, read off facet incidences.

    ``[i, j]`` is an edge iff the intersection of all facets containing both
    is exactly ``{i, j}``. Only one representative per repeated point is used.
    """
    verts = sorted(hull.vertex_indices)
    if hull.dimension == 0:
        return set()
    if hull.dimension == 1:
        return {tuple(verts)}
    masks = hull.facet_masks
    vmask = {v: 1 << v for v in verts}
    allv = 0
    for v in verts:
        allv |= 1 << v
    per_vertex = {v: [k for k, m in enumerate(masks) if m >> v & 1] for v in verts}
    edges = set()
    for a_pos, a in enumerate(verts):
        fa = set(per_vertex[a])
        for b in verts[a_pos + 1 :]:
            acc = allv
            common = False
            for k in per_vertex[b]:
                if k in fa:
                    acc &= masks[k]
                    common = True
            if common and (acc & allv) == vmask[a] | vmask[b]:
                edges.add((a, b))
    return edges


def is_edge(points: Sequence[Sequence], i: int, j: int) -> bool:
    """LP test: some linear functional is minimized on ``points`` exactly at ``p_i`` and ``p_j``."""
    if i == j:
        raise ValueError("is_edge needs two distinct indices")
    from .lp import feasible_strict_cone

    pts = [tuple(as_fraction(x) for x in p) for p in points]
    pi, pj = pts[i], pts[j]
    if pi == pj:
        raise ValueError("is_edge needs two distinct points")
    # unknowns (c, c0): c . p_i = c . p_j = c0 and c . p_k > c0 elsewhere
    eqs = [pi + (Fraction(-1),), pj + (Fraction(-1),)]
    strict = [p + (Fraction(-1),) for p in pts if p != pi and p != pj]
    return feasible_strict_cone(len(pi) + 1, eqs, strict) is not None
