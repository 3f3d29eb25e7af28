import random
from itertools import combinations

import pytest

from coxdressian.coxeter import antipodal_pairs, build_quotient, cross_polytope_faces
from coxdressian.equations import (
    TropicalQuadric,
    bar,
    bn_dn1_equation_bijection,
    equations_up_to,
    pair_provenance,
    strong_exchange_system,
    symdiff_size,
)


@pytest.fixture(scope="module")
def b3():
    return build_quotient(("B", 3, 3))


@pytest.fixture(scope="module")
def b4():
    return build_quotient(("B", 4, 4))


def _mon(q, a, b):
    return tuple(sorted((q.vertex(set(a)), q.vertex(set(b)))))


def test_b3_single_equation(b3):
    s = strong_exchange_system(b3)
    assert len(s) == 1
    f = s[0]
    expected = {_mon(b3, (), (1, 2, 3)), _mon(b3, (1,), (2, 3)), _mon(b3, (2,), (1, 3)), _mon(b3, (3,), (1, 2))}
    assert set(f.monomials) == expected
    assert f.provenance == ("B", (), (1, 2, 3))
    # every pair (I, J) with |I symdiff J| = 3 collapses to it
    assert len(s.index) == 4
    assert s.lookup(pair_provenance("B", {1}, {2, 3})) is f


@pytest.mark.parametrize("n", [3, 4, 5])
def test_type_c_is_empty(n):
    assert len(strong_exchange_system(build_quotient(("C", n, 1)))) == 0


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_type_d_p1_single_equation(n):
    q = build_quotient(("D", n, 1))
    s = strong_exchange_system(q)
    assert len(s) == 1
    assert set(s[0].monomials) == {tuple(sorted((q.vertex(i), q.vertex(-i)))) for i in range(1, n + 1)}


def test_e_type_counts():
    e6 = build_quotient(("E6", 6, 1))
    s6 = strong_exchange_system(e6)
    assert len(s6) == 27
    assert all(len(f) == 5 for f in s6)
    e7 = build_quotient(("E7", 7, 7))
    s7 = strong_exchange_system(e7)
    assert len(s7) == 127
    assert sorted(len(f) for f in s7) == [6] * 126 + [28]
    glob = next(f for f in s7 if len(f) == 28)
    assert set(glob.monomials) == set(antipodal_pairs(e7))
    assert {frozenset(f.monomials) for f in s7 if len(f) == 6} == {frozenset(fc) for fc in cross_polytope_faces(e7)}


def _face_antipode_system(q):
    """Independent B_n recipe for n <= 4: on every face of dimension 3 or 4 of the cube, one
    equation per parity class of antipodal pairs of that face (a 3-face has one class, a
    4-face splits by the parity of the distance to a fixed base vertex)."""
    n = q.pair.rank
    out = set()
    assert n <= 4
    for k in range(3, n + 1):
        for free in combinations(range(1, n + 1), k):
            fixed = [i for i in range(1, n + 1) if i not in free]
            for bits in range(2 ** len(fixed)):
                base = frozenset(fixed[t] for t in range(len(fixed)) if bits >> t & 1)
                pairs = []
                for size in range(k + 1):
                    for S in combinations(free, size):
                        A, B = base | set(S), base | (set(free) - set(S))
                        if q.vertex(A) < q.vertex(B):
                            pairs.append((q.vertex(A), q.vertex(B)))
                if k % 2:
                    out.add(tuple(sorted(pairs)))
                else:
                    for par in (0, 1):
                        cls = [p for p in pairs if len(q.labels[p[0]].as_set ^ base) % 2 == par]
                        out.add(tuple(sorted(cls)))
    return out


def test_b4_two_recipes(b4, b3):
    s = strong_exchange_system(b4)
    assert len(s) == 10
    assert {f.key for f in s} == _face_antipode_system(b4)
    assert {f.key for f in strong_exchange_system(b3)} == _face_antipode_system(b3)


def test_odd_even_monomial_counts(b4):
    s = strong_exchange_system(b4)
    for f in s:
        k = symdiff_size(b4, f)
        assert len(f) == (k + 1 if k % 2 else k)


@pytest.mark.parametrize("pair", [("B", 3, 3), ("B", 4, 4), ("D", 4, 1), ("D", 5, 5), ("A", 4, 2), ("E6", 6, 1)])
def test_monomials_are_antipode_pairs_of_a_face(pair):
    q = build_quotient(pair)
    for f in strong_exchange_system(q):
        sums = {tuple(x + y for x, y in zip(q.points[i], q.points[j])) for i, j in f.monomials}
        assert len(sums) == 1


def test_equations_up_to(b3, b4):
    assert [f.key for f in equations_up_to(b3, 3)] == [f.key for f in strong_exchange_system(b3)]
    assert [f.key for f in equations_up_to(b4, 4)] == [f.key for f in strong_exchange_system(b4)]
    k3 = equations_up_to(b4, 3)
    assert len(k3) == 8
    # exactly the equations whose support is a 3-face of the 4-cube
    for f in k3:
        supp = [b4.labels[v].as_set for v in f.support]
        assert len(supp) == 8
        fixed = [i for i in range(1, 5) if len({i in A for A in supp}) == 1]
        assert len(fixed) == 1
    with pytest.raises(ValueError):
        equations_up_to(build_quotient(("D", 4, 1)), 3)


@pytest.mark.parametrize("pair", [("B", 4, 4), ("D", 5, 5), ("A", 4, 2)])
def test_order_independence(pair):
    q = build_quotient(pair)
    base = strong_exchange_system(q)
    rng = random.Random(7)

    def shuffled(pairs):
        pairs = list(pairs)
        rng.shuffle(pairs)
        if q.pair.lie_type == "A":
            return pairs  # (S, T) is ordered in type A
        return [(J, I) if rng.random() < 0.5 else (I, J) for I, J in pairs]

    again = strong_exchange_system(q, order=shuffled)
    assert [f.key for f in again] == [f.key for f in base]
    assert [f.provenance for f in again] == [f.provenance for f in base]


def test_type_a_plucker():
    q = build_quotient(("A", 3, 2))
    s = strong_exchange_system(q)
    assert len(s) == 1
    assert set(s[0].monomials) == {_mon(q, (1, 2), (3, 4)), _mon(q, (1, 3), (2, 4)), _mon(q, (1, 4), (2, 3))}
    assert len(strong_exchange_system(build_quotient(("A", 4, 2)))) == 5


@pytest.mark.parametrize("n, count", [(3, 1), (4, 10)])
def test_bn_dn1_bijection(n, count):
    mapping, sb, sd = bn_dn1_equation_bijection(n)
    assert len(sb) == len(sd) == count
    assert sorted(mapping.values()) == list(range(count))
    if n == 3:
        assert sd.lookup(pair_provenance("D", {4}, {1, 2, 3})) is sd[mapping[0]]


def test_bar_map():
    assert bar({1, 2}, 3) == {1, 2}
    assert bar({1}, 3) == {1, 4}
    assert bar(set(), 3) == set()
    # x_1 x_23 maps to x_14 x_23
    assert (bar({1}, 3), bar({2, 3}, 3)) == ({1, 4}, {2, 3})


def test_quadric_validation():
    with pytest.raises(ValueError):
        TropicalQuadric(((0, 1),))
    with pytest.raises(ValueError):
        TropicalQuadric(((0, 0), (1, 2)))
    f = TropicalQuadric(((3, 1), (0, 2), (1, 3)))
    assert f.monomials == ((0, 2), (1, 3))
