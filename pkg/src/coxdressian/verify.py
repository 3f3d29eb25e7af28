"""Named, seeded checks tying the library to the statements it implements.

Every check is a function of ``(seed, samples)`` only and returns a
:class:`CheckResult`; failing checks carry a concrete counterexample that can
be written to disk and replayed with the command line ``member`` command.
"""

from __future__ import annotations

import json
import os
import zlib
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable

import numpy as np

from .coxeter import CosetLabel, MinusculePair, MinusculeQuotient, antipodal_pairs, build_quotient, cross_polytope_faces
from .equations import (
    EquationSystem,
    bn_dn1_equation_bijection,
    equations_up_to,
    pair_provenance,
    strong_exchange_system,
)
from .fans import (
    PolyhedralFan,
    _subdivision_key,
    prevariety_fan,
    secondary_fan,
    support_subfan_check,
)
from .linalg import rank
from .lp import feasible_strict_cone
from .subdivision import (
    classify,
    is_coxeter_matroid,
    is_strong_matroid,
    is_strong_matroidal,
    lower_cells,
    regular_subdivision,
    secondary_cone_constraints,
)
from .tropical import INF, AffineFunctional, HeightFunction, add_affine, embed_bn_to_dn1, evaluate, heights_to_json, indicator, is_member

DESK_TYPES = [
    ("A", 3, 2),
    ("B", 3, 3),
    ("B", 4, 4),
    ("D", 3, 1),
    ("D", 4, 1),
    ("D", 5, 1),
    ("D", 6, 1),
    ("D", 4, 4),
    ("C", 3, 1),
    ("C", 4, 1),
    ("C", 5, 1),
]
E_TYPES = [("E6", 6, 1), ("E7", 7, 7)]


@dataclass
class CheckResult:
    name: str
    status: str  # "pass", "fail" or "skipped"
    details: dict = field(default_factory=dict)
    counterexample: dict | None = None
    gating: bool = True

    def __post_init__(self):
        if self.status == "fail" and self.counterexample is None:
            raise ValueError(f"failing check {self.name} has no counterexample")

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "gating": self.gating,
            "details": self.details,
            "counterexample": self.counterexample,
        }


class Sampler:
    """Seeded random heights, functionals and Dressian points.

    The stream depends only on ``(seed, stream)``: numpy's PCG64 generator
    produces the same integers on every platform.
    """

    def __init__(self, seed: int = 0, stream: str = "", low: int = -3, high: int = 3, p_inf: Fraction = Fraction(1, 8)):
        self.seed = seed
        self.low, self.high = low, high
        self.p_inf = Fraction(p_inf)
        self.rng = np.random.default_rng([seed & (2**64 - 1), zlib.crc32(stream.encode())])

    def integer(self, low: int, high: int) -> int:
        """Uniform integer in ``[low, high]``."""
        return int(self.rng.integers(low, high + 1))

    def choice(self, seq):
        return seq[self.integer(0, len(seq) - 1)]

    def coin(self, p) -> bool:
        p = Fraction(p)
        return self.integer(1, p.denominator) <= p.numerator

    def heights(self, q: MinusculeQuotient, finite: bool = False, low: int | None = None, high: int | None = None) -> HeightFunction:
        low = self.low if low is None else low
        high = self.high if high is None else high
        vals = []
        for _ in q.points:
            if not finite and self.coin(self.p_inf):
                vals.append(INF)
            else:
                vals.append(Fraction(self.integer(low, high)))
        if all(v == INF for v in vals):
            vals[self.integer(0, len(vals) - 1)] = Fraction(self.integer(low, high))
        return HeightFunction(tuple(vals), q)

    def rational(self, size: int = 5) -> Fraction:
        return Fraction(self.integer(-size, size), self.integer(1, 3))

    def affine(self, q: MinusculeQuotient) -> AffineFunctional:
        return AffineFunctional(tuple(self.rational() for _ in range(q.ambient_dim)), self.rational())

    def fan_point(self, fan: PolyhedralFan, q: MinusculeQuotient | None = None, spread: int = 4) -> HeightFunction:
        """Integer point in the relative interior of a uniformly chosen maximal cone."""
        cones = fan.maximal_cones()
        cone = cones[self.integer(0, len(cones) - 1)]
        x = [Fraction(0)] * fan.ambient
        for k in sorted(cone.rays):
            c = self.integer(1, spread)
            x = [a + c * b for a, b in zip(x, fan.rays[k])]
        for v in fan.lineality:
            c = self.integer(-spread, spread)
            x = [a + c * b for a, b in zip(x, v)]
        return HeightFunction(tuple(x), q)

    def split_heights(self, q: MinusculeQuotient, splits: int, weighted: bool = False) -> HeightFunction:
        """Sum of random root splits ``max(0, <alpha, p - c> - t)`` with half-integer cuts."""
        total = [Fraction(0)] * len(q.points)
        for _ in range(splits):
            alpha = self.choice(q.roots)
            c = self.choice(q.points)
            t = self.choice([Fraction(-1, 2), Fraction(1, 2)])
            w = self.integer(1, 3) if weighted else 1
            for k, p in enumerate(q.points):
                v = sum((a * (x - y) for a, x, y in zip(alpha, p, c)), Fraction(0)) - t
                if v > 0:
                    total[k] += w * v
        return HeightFunction(tuple(total), q)

    def subset(self, n: int, p) -> list[int]:
        return [i for i in range(n) if self.coin(p)]


# -- cached objects --------------------------------------------------------------------


@lru_cache(maxsize=None)
def quotient(pair: tuple) -> MinusculeQuotient:
    return build_quotient(MinusculePair(*pair))


@lru_cache(maxsize=None)
def system(pair: tuple) -> EquationSystem:
    return strong_exchange_system(quotient(pair))


@lru_cache(maxsize=None)
def dressian_fan(pair: tuple, max_symdiff: int | None = None) -> PolyhedralFan:
    """Prevariety fan of the full system, or of the type-B subsystem ``|I symdiff J| <= max_symdiff``."""
    q = quotient(pair)
    s = system(pair) if max_symdiff is None else equations_up_to(q, max_symdiff)
    return prevariety_fan(s, allow_large=True)


def face_system(pair: tuple) -> EquationSystem:
    """The cross-polytope face equations of an E-type system (global equation dropped)."""
    return system(pair).subsystem(lambda f: f.provenance[0] == "face")


def _counterexample(q: MinusculeQuotient, mu, reason: str, **extra) -> dict:
    out = heights_to_json(q, mu)
    out["reason"] = reason
    out.update(extra)
    return out


def _finish(name: str, failures: list, details: dict, gating: bool = True) -> CheckResult:
    details["failures"] = len(failures)
    if failures:
        return CheckResult(name, "fail", details, failures[0], gating)
    return CheckResult(name, "pass", details, None, gating)


def sample_member(s: Sampler, pair: tuple, allow_inf: bool = True, tries: int = 200) -> HeightFunction:
    """A point of the Coxeter Dressian of ``pair``.

    Fan types: a fan point, or (sometimes) a rejection-sampled height function
    with infinite entries. E types: sums of root splits kept if they are members.
    """
    q, sysm = quotient(pair), system(pair)
    if pair[0] in ("E6", "E7"):
        for _ in range(tries):
            mu = s.split_heights(q, s.integer(1, 3))
            if is_member(mu, sysm)[0]:
                return mu
        raise AssertionError(f"no {pair[0]} member found in {tries} proposals")
    if pair[0] == "C":
        return s.heights(q, finite=not allow_inf)
    if allow_inf and s.coin(Fraction(1, 4)):
        for _ in range(tries):
            mu = s.heights(q, low=0, high=2)
            if any(v == INF for v in mu) and is_member(mu, sysm)[0]:
                return mu
    return s.fan_point(dressian_fan(pair), q)


# -- the checks -------------------------------------------------------------------------

EXAMPLE_42 = {"": 0, "1": 0, "2": 0, "3": -1, "12": 2, "13": 1, "23": 1, "123": 0}


def example_42_heights(q: MinusculeQuotient | None = None) -> HeightFunction:
    q = q or quotient(("B", 3, 3))
    vals = [None] * len(q.points)
    for key, v in EXAMPLE_42.items():
        vals[q.label_index[CosetLabel.subset(int(c) for c in key)]] = Fraction(v)
    return HeightFunction(tuple(vals), q)


def member_with_subdivision(pair: tuple, cells) -> HeightFunction | None:
    """A Dressian point inducing exactly ``cells`` (finite heights), or None.

    Searches the open secondary cone of ``cells`` intersected with each closed
    maximal cone of the Dressian fan.
    """
    q = quotient(pair)
    n = len(q.points)
    cc = secondary_cone_constraints(q.points, cells)
    fan = dressian_fan(pair)
    for cone in fan.maximal_cones():
        x = feasible_strict_cone(n, list(cc.equalities) + list(cone.equalities), cc.strict, cone.inequalities)
        if x is not None:
            return HeightFunction(tuple(x), q)
    return None


def check_example_42(seed: int, samples: int | None) -> CheckResult:
    q = quotient(("B", 3, 3))
    sysm = system(("B", 3, 3))
    mu = example_42_heights(q)
    failures = []
    member, failed = is_member(mu, sysm)
    sub = regular_subdivision(q, mu)
    reports, summary = classify(q, mu, sub)
    anti = antipodal_pairs(q)
    with_antipodes = [sorted(c.vertices) for c in sub.cells if any(a in c.vertices and b in c.vertices for a, b in anti)]
    details = {
        "member": member,
        "failed_equation": list(failed.provenance) if failed is not None else None,
        "cells": len(sub.cells),
        "cell_sizes": sorted(len(c.vertices) for c in sub.cells),
        "cells_with_antipodes": len(with_antipodes),
        "summary": summary,
    }
    if member:
        failures.append(_counterexample(q, mu, "example heights satisfy the B3 equation"))
    if len(sub.cells) != 5 or any(len(c.vertices) != 4 or c.dimension != 3 for c in sub.cells):
        failures.append(_counterexample(q, mu, "subdivision is not 5 tetrahedra"))
    if with_antipodes:
        failures.append(_counterexample(q, mu, "a cell contains an antipodal pair"))
    if summary != "strong_matroidal":
        failures.append(_counterexample(q, mu, f"subdivision classified {summary}"))
    nu = member_with_subdivision(("B", 3, 3), [sorted(c.vertices) for c in sub.cells])
    if nu is None:
        failures.append(_counterexample(q, mu, "no Dressian point induces this subdivision"))
    else:
        same = regular_subdivision(q, nu).key == sub.key
        details["member_inducing_same"] = {str(lab): str(v) for lab, v in zip(q.labels, nu)}
        if not (is_member(nu, sysm)[0] and same):
            failures.append(_counterexample(q, nu, "LP witness is not a member inducing the subdivision"))
    return _finish("example-4.2", failures, details)


def check_cells(seed: int, samples: int | None) -> CheckResult:
    samples = 200 if samples is None else samples
    e_samples = max(1, samples // 4)
    failures = []
    counts = {}
    diverged = 0
    for pair in DESK_TYPES + E_TYPES:
        s = Sampler(seed, f"thm-3.3-cells/{pair}")
        q, sysm = quotient(pair), system(pair)
        k = e_samples if pair in E_TYPES else samples
        checked = 0
        for _ in range(k):
            mu = sample_member(s, pair)
            if not is_member(mu, sysm)[0]:
                failures.append(_counterexample(q, mu, "sampler produced a non-member"))
                continue
            sub = regular_subdivision(q, mu)
            for c in sub.cells:
                ok, f = is_member(indicator(q, c.vertices), sysm)
                if not ok:
                    failures.append(
                        _counterexample(q, mu, "cell indicator fails an equation", cell=[str(q.labels[i]) for i in sorted(c.vertices)])
                    )
                    break
            if not is_strong_matroidal(q, mu, sub):
                failures.append(_counterexample(q, mu, "member induces a subdivision that is not strong matroidal"))
            diverged += sum(is_strong_matroid(q, c.vertices)[0] != is_strong_matroid(q, c.vertices, weak=True)[0] for c in sub.cells)
            checked += 1
        counts[MinusculePair(*pair).name] = checked
    return _finish("thm-3.3-cells", failures, {"members": counts, "weak_separation_divergences": diverged})


def check_affine(seed: int, samples: int | None) -> CheckResult:
    samples = 1000 if samples is None else samples
    failures = []
    counts = {}
    for pair in DESK_TYPES + E_TYPES:
        s = Sampler(seed, f"affine-invariance/{pair}")
        q, sysm = quotient(pair), system(pair)
        members = 0
        for t in range(samples):
            if t % 4 == 0:
                mu = sample_member(s, pair)
            else:
                mu = s.heights(q, low=0, high=2)
            phi = s.affine(q)
            nu = add_affine(mu, phi, q)
            a, b = is_member(mu, sysm)[0], is_member(nu, sysm)[0]
            members += a
            if a != b:
                failures.append(_counterexample(q, mu, "membership changes under an affine functional", functional=[str(x) for x in phi.linear] + [str(phi.constant)]))
                continue
            for f in sysm:
                if evaluate(f, mu)[1] != evaluate(f, nu)[1]:
                    failures.append(_counterexample(q, mu, "argmin set changes under an affine functional", equation=repr(f.provenance)))
                    break
        counts[MinusculePair(*pair).name] = {"pairs": samples, "members": members}
    return _finish("affine-invariance", failures, {"types": counts})


def check_bn_dn1(seed: int, samples: int | None) -> CheckResult:
    samples = 500 if samples is None else samples
    failures = []
    details = {}
    for n in (3, 4):
        pb, pd = ("B", n, n), ("D", n + 1, n + 1)
        qb, qd = quotient(pb), quotient(pd)
        mapping, sb, sd = bn_dn1_equation_bijection(n, qb, qd)
        s = Sampler(seed, f"prop-4.4-iso/{n}")
        agree = members = 0
        for t in range(samples):
            mu = sample_member(s, pb) if t % 3 == 0 else s.heights(qb, low=0, high=2)
            a = is_member(mu, sb)[0]
            b = is_member(embed_bn_to_dn1(mu, qb, qd), sd)[0]
            members += a
            if a != b:
                failures.append(_counterexample(qb, mu, "membership differs after the parity embedding"))
            else:
                agree += 1
        details[f"n={n}"] = {"equations_b": len(sb), "equations_d": len(sd), "bijection": len(mapping), "agree": agree, "members": members}
    return _finish("prop-4.4-iso", failures, details)


def _proper_face_equations(q: MinusculeQuotient, sysm: EquationSystem) -> list:
    """Equations whose support lies in a facet of the cube."""
    out = []
    n = q.pair.rank
    for f in sysm:
        sets = [q.labels[i].as_set for i in f.support]
        if any(len({(k in S) for S in sets}) == 1 for k in range(1, n + 1)):
            out.append(f)
    return out


B4_COUNTEREXAMPLE = {"": 0, "1234": 0, "12": 0, "34": 1}


def b4_counterexample(q: MinusculeQuotient | None = None) -> HeightFunction:
    q = q or quotient(("B", 4, 4))
    vals = [INF] * len(q.points)
    for key, v in B4_COUNTEREXAMPLE.items():
        vals[q.label_index[CosetLabel.subset(int(c) for c in key)]] = Fraction(v)
    return HeightFunction(tuple(vals), q)


def _thm48_sample(s: Sampler, q: MinusculeQuotient, t: int) -> HeightFunction:
    pair = ("B", 4, 4)
    kind = t % 5
    if kind == 0:
        return s.fan_point(dressian_fan(pair, 3), q)
    if kind == 1:
        return s.fan_point(dressian_fan(pair), q)
    if kind == 2:
        return s.heights(q, finite=True, low=0, high=2)
    # infinite entries on a strong matroid support
    for _ in range(200):
        if kind == 3:
            base = s.fan_point(dressian_fan(pair, 3), q)
            cells = regular_subdivision(q, s.heights(q, finite=True, low=0, high=3)).cells
            support = set(s.choice(cells).vertices)
        else:
            base = s.heights(q, finite=True, low=0, high=2)
            support = set(s.subset(len(q.points), Fraction(1, 2)))
        if support and is_strong_matroid(q, support)[0]:
            return HeightFunction(tuple(v if i in support else INF for i, v in enumerate(base)), q)
    return s.fan_point(dressian_fan(pair), q)


def check_thm48(seed: int, samples: int | None) -> CheckResult:
    samples = 500 if samples is None else samples
    pair = ("B", 4, 4)
    q, full = quotient(pair), system(pair)
    up4 = equations_up_to(q, 4)
    up3 = equations_up_to(q, 3)
    s = Sampler(seed, "thm-4.8")
    failures = []
    stats = {"samples": 0, "finite": 0, "members": 0}
    for t in range(samples):
        mu = _thm48_sample(s, q, t)
        if not is_strong_matroid(q, mu.support)[0]:
            continue
        stats["samples"] += 1
        a = is_member(mu, full)[0]
        b = is_member(mu, up4)[0]
        stats["members"] += a
        if a != b:
            failures.append(_counterexample(q, mu, "full membership differs from the |I symdiff J| <= 4 system"))
        if all(v != INF for v in mu):
            stats["finite"] += 1
            c = is_member(mu, up3)[0]
            if a != c:
                failures.append(_counterexample(q, mu, "finite heights: full membership differs from the <= 3 system"))
    # the fixed example with infinite entries
    mu = b4_counterexample(q)
    f = full.lookup(pair_provenance("B", (1,), (2, 3, 4)))
    fails_f = not is_member(mu, [f])[0]
    faces = _proper_face_equations(q, full)
    passes_faces = is_member(mu, faces)[0]
    stats["counterexample"] = {
        "fails_f_1_234": fails_f,
        "passes_proper_face_equations": passes_faces,
        "proper_face_equations": len(faces),
        "member": is_member(mu, full)[0],
        "support_strong": is_strong_matroid(q, mu.support)[0],
    }
    if not fails_f or not passes_faces:
        failures.append(_counterexample(q, mu, "fixed example does not separate face equations from f_{1,234}"))
    return _finish("thm-4.8", failures, stats)


def check_lemma43(seed: int, samples: int | None) -> CheckResult:
    samples = 1000 if samples is None else samples
    pair = ("B", 4, 4)
    q, full = quotient(pair), system(pair)
    up3 = equations_up_to(q, 3)
    fan3 = dressian_fan(pair, 3)
    cones = fan3.maximal_cones()
    s = Sampler(seed, "lemma-4.3-search")
    failures = []
    for t in range(samples):
        if t < len(cones):
            # every maximal cone of the three-face prevariety at least once
            cone = cones[t]
            x = [Fraction(0)] * fan3.ambient
            for k in sorted(cone.rays):
                c = s.integer(1, 4)
                x = [a + c * b for a, b in zip(x, fan3.rays[k])]
            mu = HeightFunction(tuple(x), q)
        else:
            mu = s.fan_point(fan3, q)
        if not is_member(mu, up3)[0]:
            failures.append(_counterexample(q, mu, "sampled point misses a three-face equation"))
        elif not is_member(mu, full)[0]:
            failures.append(_counterexample(q, mu, "satisfies all three-face equations but not the full system"))
    details = {
        "samples": samples,
        "three_face_equations": len(up3),
        "three_face_f_vector": fan3.f_vector,
        "full_f_vector": dressian_fan(pair).f_vector,
    }
    return _finish("lemma-4.3-search", failures, details)


def _iff_check(name: str, pair: tuple, sysm, sampler: Sampler, samples: int, proposal: Callable) -> tuple[list, dict]:
    q = quotient(pair)
    failures = []
    both = neither = 0
    for t in range(samples):
        mu = proposal(sampler, q, t)
        strong = is_strong_matroidal(q, mu)
        member = is_member(mu, sysm)[0]
        if strong != member:
            failures.append(_counterexample(q, mu, f"strong matroidal={strong} but member={member}"))
        elif member:
            both += 1
        else:
            neither += 1
    return failures, {"samples": samples, "members": both, "non_members": neither}


def _d_proposal(pair):
    def prop(s: Sampler, q, t):
        if t % 3 == 0:
            return s.fan_point(dressian_fan(pair), q)
        return s.heights(q, finite=True, low=0, high=2 + t % 3)

    return prop


def check_d_equiv(seed: int, samples: int | None) -> CheckResult:
    samples = 500 if samples is None else samples
    failures, details = [], {}
    for n in range(3, 7):
        pair = ("D", n, 1)
        f, d = _iff_check("d-p1-equiv", pair, system(pair), Sampler(seed, f"d-p1-equiv/{n}"), samples, _d_proposal(pair))
        failures += f
        details[f"n={n}"] = d
    return _finish("d-p1-equiv", failures, details)


def check_d_subfan(seed: int, samples: int | None) -> CheckResult:
    failures, details = [], {}
    for n in (3, 4):
        pair = ("D", n, 1)
        q = quotient(pair)
        dr = dressian_fan(pair)
        sec = secondary_fan(q.points)
        rep = support_subfan_check(dr, sec)
        top = sec.ambient
        codim1 = all(c.dim == top - 1 for c in dr.maximal_cones())
        details[f"n={n}"] = {
            "dressian_f_vector": dr.f_vector,
            "secondary_f_vector": sec.f_vector,
            "walls_contain_dressian": rep.walls_contain_dressian,
            "supports_equal": rep.supports_equal,
            "cones_match": rep.cones_match,
            "maximal_cones_codim_1": codim1,
            "proper": len(dr.cones) < len(sec.cones),
        }
        if not (rep.ok and codim1 and len(dr.cones) < len(sec.cones)):
            mu = HeightFunction(tuple(dr.maximal_cones()[0].interior), q)
            failures.append(_counterexample(q, mu, f"subfan comparison failed at n={n}", report=rep.details and repr(rep.details)))
    return _finish("d-p1-subfan", failures, details)


E6_GOLDEN = {"vertices": 27, "dimension": 6, "edges": 216, "degree": 16, "faces": 27, "pairs_per_face": 5, "antipodal_pairs": 0, "equations": 27}
E7_GOLDEN = {"vertices": 56, "dimension": 7, "edges": 756, "degree": 27, "faces": 126, "pairs_per_face": 6, "antipodal_pairs": 28, "equations": 127}


def structure_counts(pair: tuple) -> dict:
    q = quotient(pair)
    faces = cross_polytope_faces(q)
    degrees = {sum(1 for e in q.edges if v in e) for v in range(len(q.points))}
    return {
        "vertices": len(q.points),
        "dimension": q.dimension,
        "edges": len(q.edges),
        "degree": degrees.pop() if len(degrees) == 1 else sorted(degrees),
        "faces": len(faces),
        "pairs_per_face": sorted({len(f) for f in faces}).pop() if faces else 0,
        "antipodal_pairs": len(antipodal_pairs(q)),
        "equations": len(system(pair)),
    }


def _structure_check(name: str, pair: tuple, golden: dict) -> CheckResult:
    got = structure_counts(pair)
    bad = {k: (got[k], v) for k, v in golden.items() if got[k] != v}
    if bad:
        ce = {"type": pair[0], "rank": pair[1], "parabolic": pair[2], "mismatch": {k: list(v) for k, v in bad.items()}}
        return CheckResult(name, "fail", got, ce)
    return CheckResult(name, "pass", got)


def _e_proposal(s: Sampler, q, t):
    kind = t % 4
    if kind == 0:
        return s.split_heights(q, s.integer(1, 3))
    if kind == 1:
        return s.split_heights(q, s.integer(2, 3), weighted=True)
    if kind == 2:
        return s.heights(q, finite=True, low=0, high=1)
    return s.heights(q, finite=True, low=0, high=4)


def check_e6_equiv(seed: int, samples: int | None) -> CheckResult:
    samples = 100 if samples is None else samples
    pair = E_TYPES[0]
    failures, details = _iff_check("e6-equiv", pair, system(pair), Sampler(seed, "e6-equiv"), samples, _e_proposal)
    return _finish("e6-equiv", failures, details)


def check_thm59(seed: int, samples: int | None) -> CheckResult:
    samples = 50 if samples is None else samples
    pair = E_TYPES[1]
    faces = face_system(pair)
    failures, details = _iff_check("thm-5.9", pair, faces, Sampler(seed, "thm-5.9"), samples, _e_proposal)
    details["face_equations"] = len(faces)
    return _finish("thm-5.9", failures, details)


def _halfspace_subset(s: Sampler, q: MinusculeQuotient) -> list[int]:
    """Vertices on one side of a few random root hyperplanes."""
    keep = list(range(len(q.points)))
    for _ in range(s.integer(1, 4)):
        alpha = s.choice(q.roots)
        c = s.choice(q.points)
        t = s.choice([Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2)])
        keep = [i for i in keep if sum((a * (x - y) for a, x, y in zip(alpha, q.points[i], c)), Fraction(0)) <= t]
    return keep


def candidate_subset(s: Sampler, q: MinusculeQuotient, t: int) -> list[int]:
    kind = t % 3
    if kind == 0:
        return _halfspace_subset(s, q)
    if kind == 1:
        mu = s.split_heights(q, s.integer(1, 4), weighted=s.coin(Fraction(1, 2)))
        return sorted(s.choice(regular_subdivision(q, mu).cells).vertices)
    start = s.integer(0, len(q.points) - 1)
    near = [j for j in range(len(q.points)) if q.distances[start][j] <= 1]
    return sorted({start} | {j for j in near if s.coin(Fraction(1, 3))})


def exhaustive_small_matroids(q: MinusculeQuotient, max_size: int = 4):
    """All Coxeter matroids with at most ``max_size`` vertices (long-running for E7).

    Orbit points lie on a sphere, so no three are collinear: affinely
    independent sets are matroids exactly when every pair is root-parallel.
    Affinely dependent sets are decided with the hull.
    """
    table = q.root_pair_table
    n = len(q.points)
    for size in range(1, max_size + 1):
        for cell in combinations(range(n), size):
            good = sum(table[a][b] for a, b in combinations(cell, 2))
            if size <= 3:
                if good == size * (size - 1) // 2:
                    yield cell
                continue
            if good < size:
                continue  # a polygon or polytope has at least as many edges as vertices
            base = q.points[cell[0]]
            if rank([tuple(a - b for a, b in zip(q.points[i], base)) for i in cell[1:]]) == size - 1:
                if good == size * (size - 1) // 2:
                    yield cell
            elif is_coxeter_matroid(q, cell)[0]:
                yield cell


def check_thm58(seed: int, samples: int | None, exhaustive: bool = False) -> CheckResult:
    samples = 200 if samples is None else samples
    pair = E_TYPES[1]
    q = quotient(pair)
    s = Sampler(seed, "thm-5.8-sampled")
    failures = []
    found: set = set()
    tried = 0
    sizes: dict[int, int] = {}
    diverged = 0
    while len(found) < samples and tried < 50 * samples:
        tried += 1
        cell = tuple(candidate_subset(s, q, tried))
        if not cell or cell in found:
            continue
        if not is_coxeter_matroid(q, cell)[0]:
            continue
        found.add(cell)
        sizes[len(cell)] = sizes.get(len(cell), 0) + 1
        ok, pair_ = is_strong_matroid(q, cell)
        # separation allowing one point on the mirror is reported, never gated
        diverged += ok != is_strong_matroid(q, cell, weak=True)[0]
        if not ok:
            failures.append(_counterexample(q, indicator(q, cell), "Coxeter matroid without strong exchange", pair=[str(q.labels[i]) for i in pair_]))
    details = {
        "matroids": len(found),
        "proposals": tried,
        "sizes": {str(k): v for k, v in sorted(sizes.items())},
        "weak_separation_divergences": diverged,
    }
    if exhaustive:
        count = 0
        for cell in exhaustive_small_matroids(q):
            count += 1
            if not is_strong_matroid(q, cell)[0]:
                failures.append(_counterexample(q, indicator(q, cell), "small Coxeter matroid without strong exchange"))
        details["exhaustive_small"] = count
    if len(found) < samples:
        details["note"] = "fewer matroids discovered than requested"
    return _finish("thm-5.8-sampled", failures, details)


def check_conjecture(seed: int, samples: int | None) -> CheckResult:
    samples = 200 if samples is None else samples
    pair = E_TYPES[1]
    q, full, faces = quotient(pair), system(pair), face_system(pair)
    s = Sampler(seed, "conjecture-search")
    candidates = []
    face_ok = 0
    for t in range(samples):
        mu = s.split_heights(q, s.integer(1, 5), weighted=t % 2 == 1)
        if is_member(mu, faces)[0]:
            face_ok += 1
            if not is_member(mu, full)[0]:
                candidates.append(_counterexample(q, mu, "satisfies every face equation but not the global one"))
    details = {"samples": samples, "face_members": face_ok, "separations": len(candidates)}
    return _finish("conjecture-search", candidates, details, gating=False)


def check_type_c(seed: int, samples: int | None) -> CheckResult:
    samples = 200 if samples is None else samples
    failures, details = [], {}
    for n in (3, 4, 5):
        pair = ("C", n, 1)
        q, sysm = quotient(pair), system(pair)
        s = Sampler(seed, f"type-c-free/{n}")
        if len(sysm):
            failures.append({"type": "C", "rank": n, "parabolic": 1, "reason": f"{len(sysm)} equations"})
        for _ in range(samples):
            mu = s.heights(q)
            if not is_member(mu, sysm)[0]:
                failures.append(_counterexample(q, mu, "non-member in type C"))
            if not is_strong_matroidal(q, mu):
                failures.append(_counterexample(q, mu, "non strong matroidal subdivision in type C"))
        details[f"n={n}"] = {"equations": len(sysm), "samples": samples}
    return _finish("type-c-free", failures, details)


def basis_exchange(sets: list[frozenset]) -> bool:
    """Classical basis exchange axiom on a family of equal-size sets."""
    family = set(sets)
    if not family or len({len(b) for b in family}) != 1:
        return False
    for b1 in family:
        for b2 in family:
            for a in b1 - b2:
                if not any((b1 - {a}) | {b} in family for b in b2 - b1):
                    return False
    return True


def check_type_a(seed: int, samples: int | None) -> CheckResult:
    samples = 300 if samples is None else samples
    failures = []
    fan = dressian_fan(("A", 3, 2))
    maximal = fan.maximal_cones()
    details = {"fan_f_vector": fan.f_vector, "maximal_cones": len(maximal)}
    if len(maximal) != 3 or fan.f_vector != [1, 3]:
        q = quotient(("A", 3, 2))
        failures.append(_counterexample(q, HeightFunction(tuple(maximal[0].interior), q), "Dr(A3,P2) is not three half-planes"))
    for pair in (("A", 3, 2), ("A", 4, 2)):
        q = quotient(pair)
        s = Sampler(seed, f"type-a-sanity/{pair}")
        agree = matroids = 0
        for t in range(samples):
            if t % 2:
                cell = s.subset(len(q.points), Fraction(1, 2)) or [0]
            else:
                cell = sorted(s.choice(regular_subdivision(q, s.heights(q, finite=True, low=0, high=2)).cells).vertices)
            classical = basis_exchange([q.labels[i].as_set for i in cell])
            cox = is_coxeter_matroid(q, cell)[0]
            strong = is_strong_matroid(q, cell)[0]
            matroids += classical
            if classical != cox or classical != strong:
                failures.append(
                    _counterexample(q, indicator(q, cell), f"basis exchange={classical}, edges={cox}, strong={strong}")
                )
            else:
                agree += 1
        details[MinusculePair(*pair).name] = {"agree": agree, "matroids": matroids}
    return _finish("type-a-sanity", failures, details)


FAN_ORACLE_TYPES = [("A", 3, 2), ("B", 3, 3), ("B", 4, 4), ("D", 3, 1), ("D", 4, 1), ("D", 5, 1), ("D", 6, 1), ("D", 4, 4), ("C", 3, 1)]


def check_fan_oracle(seed: int, samples: int | None) -> CheckResult:
    samples = 1000 if samples is None else samples
    failures, details = [], {}
    for pair in FAN_ORACLE_TYPES:
        q, sysm, fan = quotient(pair), system(pair), dressian_fan(pair)
        s = Sampler(seed, f"fan-oracle/{pair}")
        inside = 0
        for t in range(samples):
            kind = t % 3
            if kind == 0:
                mu = s.heights(q, finite=True, low=0, high=2)
            else:
                mu = s.fan_point(fan, q)
                if kind == 2:
                    k = s.integer(0, len(q.points) - 1)
                    mu = HeightFunction(tuple(v + (s.choice([-1, 1]) if i == k else 0) for i, v in enumerate(mu)), q)
            a = is_member(mu, sysm)[0]
            b = fan.in_support(mu.values)
            inside += b
            if a != b:
                failures.append(_counterexample(q, mu, f"pointwise member={a}, fan support={b}"))
        details[MinusculePair(*pair).name] = {"samples": samples, "in_support": inside}
    return _finish("fan-oracle", failures, details)


SECONDARY_CONFIGS = {
    "square": [(0, 0), (1, 0), (0, 1), (1, 1)],
    "octahedron": None,  # the points of the D3/P1 quotient
    "cross-4": None,
    "hypersimplex-2-4": None,
}


def secondary_configurations() -> dict:
    out = {"square": [tuple(Fraction(x) for x in p) for p in SECONDARY_CONFIGS["square"]]}
    out["octahedron"] = quotient(("D", 3, 1)).points
    out["cross-4"] = quotient(("D", 4, 1)).points
    out["hypersimplex-2-4"] = quotient(("A", 3, 2)).points
    return out


@lru_cache(maxsize=None)
def _secondary(name: str) -> PolyhedralFan:
    return secondary_fan(secondary_configurations()[name])


def check_secondary_oracle(seed: int, samples: int | None) -> CheckResult:
    samples = 500 if samples is None else samples
    failures, details = [], {}
    for name, pts in secondary_configurations().items():
        fan = _secondary(name)
        s = Sampler(seed, f"secondary-oracle/{name}")
        for t in range(samples):
            hi = 1 + t % 4
            mu = [Fraction(s.integer(0, hi)) for _ in pts]
            cone = fan.locate(mu)
            cells, _ = lower_cells(pts, mu)
            if cone is None or cone.key != _subdivision_key(cells):
                failures.append({"configuration": name, "heights": [str(v) for v in mu], "reason": "secondary cone lookup disagrees"})
        details[name] = {"samples": samples, "f_vector": fan.f_vector}
    return _finish("secondary-oracle", failures, details)


def check_e6_structure(seed: int, samples: int | None) -> CheckResult:
    return _structure_check("e6-structure", E_TYPES[0], E6_GOLDEN)


def check_e7_structure(seed: int, samples: int | None) -> CheckResult:
    return _structure_check("e7-structure", E_TYPES[1], E7_GOLDEN)


REGISTRY: dict[str, Callable] = {
    "example-4.2": check_example_42,
    "thm-3.3-cells": check_cells,
    "affine-invariance": check_affine,
    "prop-4.4-iso": check_bn_dn1,
    "thm-4.8": check_thm48,
    "lemma-4.3-search": check_lemma43,
    "d-p1-equiv": check_d_equiv,
    "d-p1-subfan": check_d_subfan,
    "e6-structure": check_e6_structure,
    "e7-structure": check_e7_structure,
    "e6-equiv": check_e6_equiv,
    "thm-5.9": check_thm59,
    "thm-5.8-sampled": check_thm58,
    "conjecture-search": check_conjecture,
    "type-c-free": check_type_c,
    "type-a-sanity": check_type_a,
    "fan-oracle": check_fan_oracle,
    "secondary-oracle": check_secondary_oracle,
}


def check(name: str, seed: int = 0, samples: int | None = None, exhaustive: bool = False) -> CheckResult:
    """Run the named check; deterministic in ``(name, seed, samples)``."""
    if name not in REGISTRY:
        raise KeyError(f"unknown check {name!r}; known: {', '.join(REGISTRY)}")
    if name == "thm-5.8-sampled":
        return check_thm58(seed, samples, exhaustive)
    return REGISTRY[name](seed, samples)


def _run_one(args):
    name, seed, samples, exhaustive = args
    return check(name, seed, samples, exhaustive)


def run_checks(names=None, seed: int = 0, samples: int | None = None, workers: int = 1, exhaustive: bool = False) -> list[CheckResult]:
    """Run several checks, in worker processes if ``workers > 1``; results keep the input order."""
    names = list(REGISTRY) if names is None else list(names)
    jobs = [(n, seed, samples, exhaustive) for n in names]
    if workers <= 1 or len(jobs) <= 1:
        return [_run_one(j) for j in jobs]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, jobs))


def write_reproducer(result: CheckResult, directory: str, seed: int) -> str | None:
    """Write the counterexample of a failing check as a height file; returns its path."""
    if result.status != "fail" or result.counterexample is None:
        return None
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"{result.name}-seed{seed}.json")
    data = dict(result.counterexample)
    data["check"] = result.name
    data["seed"] = seed
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
    return path
