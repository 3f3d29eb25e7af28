"""Tropical (min, +) evaluation, Dressian membership and height functions.

Finite heights are :class:`~fractions.Fraction`; the tropical zero is the
sentinel :data:`INF`, which only ever takes part in comparisons and in
absorbing sums.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .coxeter import CosetLabel, MinusculePair, MinusculeQuotient, build_quotient
from .equations import EquationSystem, TropicalQuadric, bar
from .linalg import as_fraction, dot

INF = float("inf")


def tropical(x):
    """Coerce ``x`` (int, Fraction, ``"p/q"``, ``"inf"``, ``None``) to a tropical value."""
    if x is None or x == INF:
        return INF
    if isinstance(x, str) and x.strip().lower() in ("inf", "infinity", "oo", "∞"):
        return INF
    return as_fraction(x)


def is_finite(x) -> bool:
    return x != INF


def tsum(*xs):
    """Tropical product: ordinary sum with INF absorbing."""
    total = Fraction(0)
    for x in xs:
        if x == INF:
            return INF
        total += x
    return total


@dataclass(frozen=True)
class HeightFunction:
    """A tropical value for every vertex of a quotient (by vertex index)."""

    values: tuple
    quotient: MinusculeQuotient | None = None

    def __post_init__(self):
        vals = tuple(tropical(v) for v in self.values)
        if self.quotient is not None and len(vals) != len(self.quotient.points):
            raise ValueError(f"{len(vals)} heights for {len(self.quotient.points)} vertices")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def support(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v != INF]

    def __eq__(self, other):
        if isinstance(other, HeightFunction):
            return self.values == other.values
        return NotImplemented

    def __hash__(self):
        return hash(self.values)


def heights(values, quotient: MinusculeQuotient | None = None) -> HeightFunction:
    if isinstance(values, HeightFunction):
        return values
    return HeightFunction(tuple(values), quotient)


@dataclass(frozen=True)
class AffineFunctional:
    linear: tuple
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "linear", tuple(as_fraction(x) for x in self.linear))
        object.__setattr__(self, "constant", as_fraction(self.constant))

    def __call__(self, p) -> Fraction:
        return dot(self.linear, p) + self.constant


def evaluate(f: TropicalQuadric, mu) -> tuple:
    """Minimum of ``mu_i + mu_j`` over the monomials and the set attaining it."""
    vals = [tsum(mu[i], mu[j]) for i, j in f.monomials]
    m = min(vals)
    argmin = frozenset(mon for mon, v in zip(f.monomials, vals) if v == m)
    return m, argmin


def satisfies(f: TropicalQuadric, mu) -> bool:
    """Tropical vanishing: minimum infinite or attained at least twice."""
    first = None
    count = 0
    for i, j in f.monomials:
        v = tsum(mu[i], mu[j])
        if first is None or v < first:
            first, count = v, 1
        elif v == first:
            count += 1
    return first == INF or count >= 2


def is_member(mu, system: EquationSystem | Iterable[TropicalQuadric]):
    """``(True, None)`` if ``mu`` satisfies every equation, else ``(False, first_failure)``."""
    for f in system:
        if not satisfies(f, mu):
            return False, f
    return True, None


def add_affine(mu, phi: AffineFunctional, quotient: MinusculeQuotient | None = None) -> HeightFunction:
    q = quotient or getattr(mu, "quotient", None)
    if q is None:
        raise ValueError("add_affine needs the quotient's vertex coordinates")
    return HeightFunction(
        tuple(v if v == INF else v + phi(p) for v, p in zip(mu, q.points)),
        q,
    )


def indicator(q: MinusculeQuotient, cell: Iterable[int]) -> HeightFunction:
    """0 on ``cell`` and INF elsewhere."""
    cell = set(cell)
    if not cell:
        raise ValueError("indicator of an empty cell")
    return HeightFunction(tuple(Fraction(0) if i in cell else INF for i in range(len(q.points))), q)


def embed_bn_to_dn1(mu, qb: MinusculeQuotient, qd: MinusculeQuotient | None = None) -> HeightFunction:
    """Push heights on 2^[n] to even subsets of [n+1] along ``A -> bar(A)``."""
    if qb.pair.lie_type != "B":
        raise ValueError(f"expected a type-B height function, got {qb.pair.name}")
    n = qb.pair.rank
    qd = qd or build_quotient(MinusculePair("D", n + 1, n + 1))
    out = [INF] * len(qd.points)
    for lab, v in zip(qb.labels, mu):
        target = qd.label_index.get(CosetLabel.subset(bar(lab.as_set, n)))
        if target is None:
            raise AssertionError(f"no D-vertex for bar({lab})")
        out[target] = v
    return HeightFunction(tuple(out), qd)


# -- height files -----------------------------------------------------------------


def format_value(v) -> str:
    return "inf" if v == INF else str(v)


def heights_to_json(q: MinusculeQuotient, mu) -> dict:
    return {
        "type": q.pair.lie_type,
        "rank": q.pair.rank,
        "parabolic": q.pair.parabolic,
        "heights": {str(lab): format_value(v) for lab, v in zip(q.labels, mu)},
    }


def heights_from_json(data: dict | str, q: MinusculeQuotient | None = None, missing_inf: bool = False):
    """Read a height file; unlisted labels are an error unless ``missing_inf``."""
    if isinstance(data, str):
        data = json.loads(data)
    if q is None:
        q = build_quotient(MinusculePair(data["type"], int(data["rank"]), int(data["parabolic"])))
    vals = [None] * len(q.points)
    for key, val in data["heights"].items():
        i = q.label_index.get(CosetLabel.parse(key))
        if i is None:
            raise ValueError(f"label {key!r} is not a vertex of {q.pair.name}")
        vals[i] = tropical(val)
    missing = [str(q.labels[i]) for i, v in enumerate(vals) if v is None]
    if missing:
        if not missing_inf:
            raise ValueError(f"heights missing for {', '.join(missing)}")
        vals = [INF if v is None else v for v in vals]
    return q, HeightFunction(tuple(vals), q)
