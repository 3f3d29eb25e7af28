from fractions import Fraction
from itertools import combinations

import pytest

from coxdressian.coxeter import (
    CosetLabel,
    InvalidPairError,
    MinusculePair,
    antipodal_pairs,
    antipode,
    build_quotient,
    cross_polytope_faces,
    graph_distance,
    quotient_from_json,
    quotient_to_json,
    reflect,
    reflect_vertex,
    separates,
)
from coxdressian.hull import affine_hull

SMALL_PAIRS = [
    ("A", 3, 2),
    ("A", 4, 2),
    ("B", 3, 3),
    ("B", 4, 4),
    ("C", 3, 1),
    ("C", 4, 1),
    ("D", 3, 1),
    ("D", 4, 1),
    ("D", 4, 4),
    ("D", 5, 5),
]


@pytest.fixture(scope="module")
def e6():
    return build_quotient(("E6", 6, 1))


@pytest.fixture(scope="module")
def e7():
    return build_quotient(("E7", 7, 7))


def _root_index(q, root):
    return q.roots.index(tuple(Fraction(x) for x in root))


@pytest.mark.parametrize(
    "pair, n_vertices, dim",
    [
        (("A", 3, 2), 6, 3),
        (("B", 3, 3), 8, 3),
        (("B", 4, 4), 16, 4),
        (("C", 5, 1), 10, 5),
        (("D", 4, 1), 8, 4),
        (("D", 4, 4), 8, 4),
        (("D", 5, 5), 16, 5),
    ],
)
def test_vertex_counts_and_dimension(pair, n_vertices, dim):
    q = build_quotient(pair)
    assert q.n_vertices == n_vertices
    assert q.dimension == dim


def test_b3_is_the_shifted_cube():
    q = build_quotient(("B", 3, 3))
    h = Fraction(1, 2)
    assert set(q.points) == {(a, b, c) for a in (-h, h) for b in (-h, h) for c in (-h, h)}
    assert q.points[q.vertex({1, 3})] == (h, -h, h)
    assert len(q.edges) == 12
    assert q.centroid == (0, 0, 0)


def test_root_system_sizes():
    assert len(build_quotient(("B", 3, 3)).roots) == 18
    assert len(build_quotient(("C", 3, 1)).roots) == 18
    assert len(build_quotient(("D", 4, 1)).roots) == 24
    assert len(build_quotient(("A", 3, 2)).roots) == 12


def test_e_type_counts(e6, e7):
    assert (e6.n_vertices, e6.dimension, len(e6.edges)) == (27, 6, 216)
    assert (e7.n_vertices, e7.dimension, len(e7.edges)) == (56, 7, 756)
    assert len(e6.roots) == 72 and len(e7.roots) == 126
    assert all(len(nb) == 27 for nb in e7.neighbors)
    assert all(len(nb) == 16 for nb in e6.neighbors)


def test_e_type_distances(e6, e7):
    d6 = [e6.distances[i][j] for i, j in combinations(range(27), 2)]
    assert max(d6) == 2 and d6.count(2) == 135
    d7 = [e7.distances[i][j] for i, j in combinations(range(56), 2)]
    assert max(d7) == 3 and d7.count(2) == 756
    # the unique distance-3 partner of every vertex is its antipode
    for i in range(56):
        far = [j for j in range(56) if e7.distances[i][j] == 3]
        assert far == [antipode(e7, i)]
    assert len(antipodal_pairs(e7)) == 28
    assert antipodal_pairs(e6) == []


def test_e_type_cross_polytope_faces(e6, e7):
    for q, count, size in ((e6, 27, 5), (e7, 126, 6)):
        faces = cross_polytope_faces(q)
        assert len(faces) == count
        assert all(len(f) == size for f in faces)
        for f in faces:
            verts = [q.points[v] for pr in f for v in pr]
            assert affine_hull(verts)[2] == size
            sums = {tuple(x + y for x, y in zip(q.points[a], q.points[b])) for a, b in f}
            assert len(sums) == 1
    # each distance-2 pair of E6 lies in exactly one face
    faces = cross_polytope_faces(e6)
    for a, b in combinations(range(27), 2):
        if e6.distances[a][b] == 2:
            assert sum((a, b) in f or (b, a) in f for f in faces) == 1
    with pytest.raises(ValueError):
        cross_polytope_faces(build_quotient(("B", 3, 3)))


def test_reflections_b3():
    q = build_quotient(("B", 3, 3))
    e3 = _root_index(q, (0, 0, 1))
    assert reflect_vertex(q, e3, q.vertex({1, 2})) == q.vertex({1, 2, 3})
    # the set action is A -> A symdiff {3}
    for lab in q.labels:
        assert q.labels[reflect_vertex(q, e3, q.vertex(lab))].as_set == lab.as_set ^ {3}
    e12 = _root_index(q, (1, 1, 0))
    assert separates(q, e12, q.vertex({1, 2}), q.vertex(set()))
    # {1} lies on the mirror of e1 - e2 and is fixed
    m12 = _root_index(q, (1, -1, 0))
    assert reflect_vertex(q, m12, q.vertex({1, 2})) == q.vertex({1, 2})
    assert not separates(q, m12, q.vertex({1, 2}), q.vertex({1}))


def test_reflections_cross_polytope():
    q = build_quotient(("D", 4, 1))
    a = _root_index(q, (1, -1, 0, 0))
    assert reflect_vertex(q, a, q.vertex(1)) == q.vertex(2)
    assert separates(q, a, q.vertex(1), q.vertex(2))
    assert not separates(q, a, q.vertex(1), q.vertex(3))
    assert antipode(q, q.vertex(1)) == q.vertex(-1)
    assert graph_distance(q, q.vertex(1), q.vertex(-1)) == 2


@pytest.mark.parametrize("pair", SMALL_PAIRS)
def test_orbit_is_stable_and_edges_are_root_parallel(pair):
    q = build_quotient(pair)
    for a in range(len(q.roots)):
        assert reflect(q.roots[a], q.centroid, q.centroid) == q.centroid
        for i in range(q.n_vertices):
            assert reflect_vertex(q, a, i) is not None
    for i, j in q.edges:
        assert q.root_pair_table[i][j]


def test_e_type_orbit_stable(e6):
    for a in range(len(e6.roots)):
        img = [reflect_vertex(e6, a, i) for i in range(27)]
        assert sorted(img) == list(range(27))


def test_invalid_pairs():
    for bad in [("B", 3, 1), ("C", 3, 2), ("D", 4, 2), ("E6", 6, 2), ("E7", 7, 2), ("F", 4, 1), ("A", 3, 4)]:
        with pytest.raises(InvalidPairError):
            MinusculePair(*bad)
    with pytest.raises(InvalidPairError, match="P5"):
        MinusculePair("D", 5, 4)
    # E7/P1 is accepted as the same 56-point quotient
    assert build_quotient(("E7", 7, 1)).n_vertices == 56


def test_labels():
    assert str(CosetLabel.subset((2, 1))) == "{1,2}"
    assert CosetLabel.parse("{}") == CosetLabel.subset(())
    assert CosetLabel.parse("-3") == CosetLabel.signed(-3)
    assert CosetLabel.parse("v12") == CosetLabel.orbit(12)
    q = build_quotient(("D", 4, 4))
    assert all(len(lab.as_set) % 2 == 0 for lab in q.labels)
    a = build_quotient(("A", 4, 2))
    assert all(len(lab.as_set) == 2 for lab in a.labels)


@pytest.mark.parametrize("pair", [("B", 3, 3), ("D", 4, 1), ("A", 3, 2), ("E6", 6, 1)])
def test_json_round_trip(pair):
    q = build_quotient(pair)
    r = quotient_from_json(quotient_to_json(q))
    assert (r.labels, r.points, r.edges, r.roots) == (q.labels, q.points, q.edges, q.roots)
    assert quotient_to_json(r) == quotient_to_json(q)


def test_e6_labels_are_deterministic(e6):
    again = build_quotient(("E6", 6, 1))
    assert again.points == e6.points
