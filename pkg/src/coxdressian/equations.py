"""Tropical strong exchange equations of the minuscule quotients."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .coxeter import (
    CosetLabel,
    MinusculePair,
    MinusculeQuotient,
    antipodal_pairs,
    build_quotient,
    cross_polytope_faces,
)


@dataclass(frozen=True)
class TropicalQuadric:
    """Square-free quadric with trivial coefficients: a set of vertex-index pairs.

    ``provenance`` records the data the equation was first generated from,
    e.g. ``("B", I, J)`` or ``("face", k)``.
    """

    monomials: tuple[tuple[int, int], ...]
    provenance: tuple = ()

    def __post_init__(self):
        mons = tuple(sorted({tuple(sorted(m)) for m in self.monomials}))
        if len(mons) < 2:
            raise ValueError("a tropical quadric needs at least two distinct monomials")
        for i, j in mons:
            if i == j:
                raise ValueError("monomials must be square-free")
        object.__setattr__(self, "monomials", mons)

    @property
    def key(self) -> tuple:
        return self.monomials

    @property
    def support(self) -> frozenset[int]:
        return frozenset(v for m in self.monomials for v in m)

    def __len__(self):
        return len(self.monomials)


@dataclass
class EquationSystem:
    quotient: MinusculeQuotient
    equations: list[TropicalQuadric] = field(default_factory=list)
    index: dict = field(default_factory=dict)  # provenance -> position in ``equations``

    def __len__(self):
        return len(self.equations)

    def __iter__(self):
        return iter(self.equations)

    def __getitem__(self, k):
        return self.equations[k]

    def lookup(self, provenance) -> TropicalQuadric:
        return self.equations[self.index[provenance]]

    def subsystem(self, keep) -> "EquationSystem":
        sel = [f for f in self.equations if keep(f)]
        pos = {f.key: k for k, f in enumerate(sel)}
        idx = {p: pos[self.equations[k].key] for p, k in self.index.items() if self.equations[k].key in pos}
        return EquationSystem(self.quotient, sel, idx)


def _collect(q: MinusculeQuotient, raw: Iterable[tuple[tuple, list[tuple[int, int]]]]) -> EquationSystem:
    """Deduplicate by monomial set; canonical order and smallest provenance per equation."""
    groups: dict[tuple, list[tuple]] = {}
    for prov, mons in raw:
        key = TropicalQuadric(tuple(mons)).key
        groups.setdefault(key, []).append(prov)
    system = EquationSystem(q)
    for k, key in enumerate(sorted(groups)):
        provs = groups[key]
        system.equations.append(TropicalQuadric(key, min(provs)))
        for p in provs:
            system.index[p] = k
    return system


def _sub(q: MinusculeQuotient, s: Iterable[int]) -> int:
    return q.label_index[CosetLabel.subset(s)]


def pair_provenance(tag: str, I: Iterable[int], J: Iterable[int]) -> tuple:
    """Order-independent tag ``(tag, I, J)`` with the pair sorted by (size, elements)."""
    a, b = sorted((tuple(sorted(I)), tuple(sorted(J))), key=lambda s: (len(s), s))
    return (tag, a, b)


def _symdiff_raw(q: MinusculeQuotient, I: frozenset, J: frozenset):
    d = I ^ J
    mons = [(_sub(q, I ^ {i}), _sub(q, J ^ {i})) for i in sorted(d)]
    if len(d) % 2:
        mons.append((_sub(q, I), _sub(q, J)))
    return mons


def _all_subsets(n: int, parity: int | None = None):
    out = []
    for size in range(n + 1):
        if parity is not None and size % 2 != parity:
            continue
        out.extend(frozenset(c) for c in combinations(range(1, n + 1), size))
    return out


def _type_b_raw(q: MinusculeQuotient, max_symdiff: int | None = None, order=None):
    n = q.pair.rank
    subsets = _all_subsets(n)
    pairs = [(I, J) for a, I in enumerate(subsets) for J in subsets[a + 1 :]]
    if order is not None:
        pairs = order(pairs)
    for I, J in pairs:
        k = len(I ^ J)
        if k < 3 or (max_symdiff is not None and k > max_symdiff):
            continue
        yield pair_provenance("B", I, J), _symdiff_raw(q, I, J)


def _type_d_half_spin_raw(q: MinusculeQuotient, order=None):
    n = q.pair.rank
    odd = _all_subsets(n, parity=1)
    pairs = [(I, J) for a, I in enumerate(odd) for J in odd[a + 1 :]]
    if order is not None:
        pairs = order(pairs)
    for I, J in pairs:
        if len(I ^ J) < 4:
            continue
        yield pair_provenance("D", I, J), _symdiff_raw(q, I, J)


def _type_a_raw(q: MinusculeQuotient, order=None):
    m = q.pair.rank + 1
    r = q.pair.parabolic
    S_all = [frozenset(c) for c in combinations(range(1, m + 1), r - 1)]
    T_all = [frozenset(c) for c in combinations(range(1, m + 1), r + 1)]
    pairs = [(S, T) for S in S_all for T in T_all]
    if order is not None:
        pairs = order(pairs)
    for S, T in pairs:
        diff = T - S
        if len(diff) < 3:
            continue  # S inside T: the two terms cancel
        mons = [(_sub(q, S | {i}), _sub(q, T - {i})) for i in sorted(diff)]
        yield ("A", tuple(sorted(S)), tuple(sorted(T))), mons


def strong_exchange_system(q: MinusculeQuotient, order=None) -> EquationSystem:
    """Deduplicated strong exchange equations of ``q``.

    ``order`` optionally permutes the enumeration of generating data; the
    resulting canonical system must not depend on it.
    """
    t, n, r = q.pair.lie_type, q.pair.rank, q.pair.parabolic
    if t == "A":
        raw = _type_a_raw(q, order)
    elif t == "B":
        raw = _type_b_raw(q, order=order)
    elif t == "C":
        raw = []
    elif t == "D" and r == 1:
        mons = [(q.vertex(i), q.vertex(-i)) for i in range(1, n + 1)]
        raw = [(("D1",), mons)]
    elif t == "D":
        raw = _type_d_half_spin_raw(q, order)
    else:
        raw = _e_type_raw(q)
    return _collect(q, raw)


def _e_type_raw(q: MinusculeQuotient):
    faces = cross_polytope_faces(q)
    dist = q.distances
    face_of_pair = {}
    for k, pairs in enumerate(faces):
        for a, b in pairs:
            face_of_pair[(a, b)] = k
    n = len(q.points)
    for a in range(n):
        for b in range(a + 1, n):
            if dist[a][b] == 2:
                k = face_of_pair[(a, b)]
                yield ("face", a, b), list(faces[k])
    if q.pair.lie_type == "E7":
        yield ("global",), antipodal_pairs(q)


def symdiff_size(q: MinusculeQuotient, f: TropicalQuadric) -> int:
    """Number of coordinates in which the two halves of each monomial differ (types B and D)."""
    i, j = f.monomials[0]
    return len(q.labels[i].as_set ^ q.labels[j].as_set)


def equations_up_to(q: MinusculeQuotient, k: int) -> EquationSystem:
    """Type-B equations ``f_{I,J}`` with ``|I symdiff J| <= k``."""
    if q.pair.lie_type != "B":
        raise ValueError(f"equations_up_to is defined for type B only, got {q.pair.name}")
    return _collect(q, _type_b_raw(q, max_symdiff=k))


def bar(A: Iterable[int], n: int) -> frozenset[int]:
    """Parity embedding of subsets of [n] into even subsets of [n+1]."""
    A = frozenset(A)
    return A if len(A) % 2 == 0 else A | {n + 1}


def _prime(I: Iterable[int], n: int) -> frozenset[int]:
    """Odd-cardinality lift of a subset of [n] into [n+1]."""
    I = frozenset(I)
    return I | {n + 1} if len(I) % 2 == 0 else I


def bn_dn1_equation_bijection(n: int, qb: MinusculeQuotient | None = None, qd: MinusculeQuotient | None = None):
    """Map each type-B_n equation to its type-D_{n+1}/P_{n+1} partner.

    Returns ``(mapping, system_b, system_d)`` with ``mapping[k_b] = k_d``. Every
    generating pair ``(I, J)`` is sent to ``(I', J')`` and the monomials are
    checked to correspond under :func:`bar`.
    """
    if n < 3:
        raise ValueError("the correspondence is stated for n >= 3")
    qb = qb or build_quotient(MinusculePair("B", n, n))
    qd = qd or build_quotient(MinusculePair("D", n + 1, n + 1))
    sb = strong_exchange_system(qb)
    sd = strong_exchange_system(qd)
    vertex_map = [qd.label_index[CosetLabel.subset(bar(lab.as_set, n))] for lab in qb.labels]
    mapping: dict[int, int] = {}
    for prov, kb in sb.index.items():
        _, I, J = prov
        Ip, Jp = _prime(I, n), _prime(J, n)
        prov_d = pair_provenance("D", Ip, Jp)
        kd = sd.index[prov_d]
        if mapping.setdefault(kb, kd) != kd:
            raise AssertionError(f"B equation {kb} maps to two D equations")
        image = TropicalQuadric(tuple((vertex_map[i], vertex_map[j]) for i, j in sb[kb].monomials))
        if image.key != sd[kd].key:
            raise AssertionError(f"monomials of {prov} do not correspond to those of {prov_d}")
    if len(set(mapping.values())) != len(mapping) or len(mapping) != len(sd):
        raise AssertionError("equation correspondence is not bijective")
    return mapping, sb, sd
