import json
from fractions import Fraction
from itertools import product
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxdressian.coxeter import build_quotient
from coxdressian.equations import TropicalQuadric, strong_exchange_system
from coxdressian.fans import (
    ScaleGuardError,
    audit_fan,
    fan_to_json,
    pattern_of,
    prevariety_fan,
    prevariety_fan_by_refinement,
    quadric_fan,
    secondary_cone_of,
    secondary_fan,
    support_subfan_check,
)
from coxdressian.linalg import rank
from coxdressian.subdivision import lower_cells
from coxdressian.tropical import HeightFunction, evaluate, is_member

SMALL = [("B", 3, 3), ("D", 3, 1), ("D", 4, 1), ("A", 3, 2), ("D", 4, 4), ("A", 4, 2)]
_Q = {p: build_quotient(p) for p in SMALL + [("C", 3, 1)]}
_S = {p: strong_exchange_system(_Q[p]) for p in _Q}
_F = {}


def fan(pair):
    if pair not in _F:
        _F[pair] = prevariety_fan(_S[pair])
    return _F[pair]


def _key_set(f):
    return {c.key for c in f.cones}


def test_quadric_fans():
    b3 = _S[("B", 3, 3)][0]
    f = quadric_fan(b3, 8)
    assert len(f.maximal_cones()) == 6
    assert all(c.dim == 7 for c in f.maximal_cones())
    assert f.lineality_dim == 5 and f.f_vector == [1, 4, 6]
    d3 = quadric_fan(_S[("D", 3, 1)][0], 6)
    assert len(d3.maximal_cones()) == 3 and d3.f_vector == [1, 3]
    plane = quadric_fan(TropicalQuadric(((0, 1), (2, 3))), 4)
    assert plane.lineality_dim == 3 and plane.f_vector == [1]
    assert len(plane.maximal_cones()) == 1


@pytest.mark.parametrize(
    "pair, fv",
    [
        (("D", 3, 1), [1, 3]),
        (("A", 3, 2), [1, 3]),
        (("B", 3, 3), [1, 4, 6]),
        (("D", 4, 1), [1, 4, 6]),
    ],
)
def test_golden_f_vectors(pair, fv):
    assert fan(pair).f_vector == fv


@pytest.mark.parametrize("pair", SMALL)
def test_two_methods_agree(pair):
    a = fan(pair)
    b = prevariety_fan_by_refinement(_S[pair])
    assert a.f_vector == b.f_vector
    assert _key_set(a) == _key_set(b)
    assert a.lineality_dim == b.lineality_dim


@pytest.mark.parametrize("pair", SMALL)
def test_fan_audit(pair):
    assert audit_fan(fan(pair)) == []


@pytest.mark.parametrize("pair", SMALL)
def test_lineality_contains_affine_functionals(pair):
    q, f = _Q[pair], fan(pair)
    affine = [tuple(Fraction(1) for _ in q.points)]
    affine += [tuple(p[k] for p in q.points) for k in range(q.ambient_dim)]
    assert rank(affine) == q.dimension + 1
    assert rank(list(f.lineality) + affine) == f.lineality_dim


@pytest.mark.parametrize("pair", SMALL)
def test_support_matches_pointwise_membership(pair):
    q, f = _Q[pair], fan(pair)
    rng = np.random.default_rng(11)
    for _ in range(300):
        mu = HeightFunction(tuple(int(v) for v in rng.integers(-2, 3, size=len(q))), q)
        assert f.in_support(mu.values) == is_member(mu, _S[pair])[0]
        assert (f.locate(mu.values) is not None) == f.in_support(mu.values)


def test_empty_system_is_whole_space():
    f = prevariety_fan(_S[("C", 3, 1)])
    assert f.f_vector == [1] and f.lineality_dim == 6
    assert f.in_support((5, -3, 1, 0, 0, 2))


def test_secondary_fans():
    square = secondary_fan([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert square.f_vector == [1, 2] and square.lineality_dim == 3
    octa = secondary_fan(_Q[("D", 3, 1)].points)
    assert octa.lineality_dim == 4
    assert len([c for c in octa.cones if c.dim == 6]) == 3
    assert octa.f_vector == [1, 3, 3]
    assert audit_fan(octa) == []


def _enumerate_subdivisions(points, values):
    return {frozenset(lower_cells(points, h)[0]) for h in product(values, repeat=len(points))}


def test_cross_4_secondary_fan_two_ways():
    pts = _Q[("D", 4, 1)].points
    f = secondary_fan(pts)
    assert f.f_vector == [1, 4, 6, 4]
    # every cone is a regular subdivision; exhaustive small heights reach all of them
    assert _key_set(f) == _enumerate_subdivisions(pts, (0, 1, 2))


def test_octahedron_secondary_two_ways():
    pts = _Q[("D", 3, 1)].points
    assert _key_set(secondary_fan(pts)) == _enumerate_subdivisions(pts, (0, 1, 2))


def test_secondary_cone_lookup():
    pts = _Q[("D", 4, 1)].points
    f = secondary_fan(pts)
    keys = _key_set(f)
    rng = np.random.default_rng(5)
    for _ in range(200):
        h = [int(v) for v in rng.integers(-3, 4, size=len(pts))]
        cone = secondary_cone_of(pts, h)
        assert cone.contains(tuple(Fraction(v) for v in h))
        assert cone.key == frozenset(lower_cells(pts, h)[0])
        assert cone.key in keys


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_cross_polytope_dressian_is_secondary_walls(n):
    pair = ("D", n, 1)
    q = _Q[pair] if pair in _Q else build_quotient(pair)
    dr = fan(pair) if pair in _S else prevariety_fan(strong_exchange_system(q))
    sec = secondary_fan(q.points, allow_large=True)
    rep = support_subfan_check(dr, sec)
    assert rep.walls_contain_dressian and rep.supports_equal and rep.cones_match and rep.ok
    # the secondary fan of the cross polytope is the face fan of a simplex; the Dressian drops its top cones
    assert sec.f_vector == [comb(n, k) for k in range(n)] and dr.f_vector == sec.f_vector[:-1]


def test_type_c_dressian_is_full_secondary_support():
    q = _Q[("C", 3, 1)]
    rep = support_subfan_check(prevariety_fan(_S[("C", 3, 1)]), secondary_fan(q.points))
    assert rep.full_support and rep.ok


def test_subfan_ambient_mismatch():
    with pytest.raises(ValueError):
        support_subfan_check(fan(("D", 3, 1)), secondary_fan([(0, 0), (1, 0), (0, 1), (1, 1)]))


def test_scale_guards():
    with pytest.raises(ScaleGuardError):
        secondary_fan([(i, i * i) for i in range(12)])
    with pytest.raises(ScaleGuardError):
        prevariety_fan(_S[("B", 3, 3)], max_cones=3)
    assert prevariety_fan(_S[("B", 3, 3)], max_cones=3, allow_large=True).f_vector == [1, 4, 6]


def test_fan_json():
    data = json.loads(json.dumps(fan_to_json(fan(("B", 3, 3)))))
    assert data["f_vector"] == [1, 4, 6]
    assert len(data["rays"]) == 4
    assert len(data["lineality"]) == 5
    assert sorted(c["dim"] for c in data["cones"]) == [0] + [1] * 4 + [2] * 6
    assert fan_to_json(fan(("B", 3, 3))) == fan_to_json(prevariety_fan(_S[("B", 3, 3)]))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=16, max_size=16))
def test_pattern_matches_tropical_argmin(vals):
    s = strong_exchange_system(build_quotient(("B", 4, 4)))
    expected = tuple(frozenset(f.monomials.index(m) for m in evaluate(f, vals)[1]) for f in s)
    assert pattern_of(s, vals) == expected
