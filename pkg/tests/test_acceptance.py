"""Acceptance criteria, each at its stated sample counts and runtime budget.

Every criterion starts from cold caches so its budget covers everything it
computes. A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import time
from contextlib import contextmanager

import pytest

from coxdressian import verify
from coxdressian.coxeter import MinusculePair, antipodal_pairs, build_quotient, cross_polytope_faces
from coxdressian.equations import bn_dn1_equation_bijection, pair_provenance, strong_exchange_system
from coxdressian.hull import affine_hull
from coxdressian.fans import prevariety_fan, prevariety_fan_by_refinement, secondary_fan
from coxdressian.subdivision import classify
from coxdressian.tropical import satisfies

SEED = 0
DESK = {MinusculePair(*p).name for p in verify.DESK_TYPES}
E_NAMES = {MinusculePair(*p).name for p in verify.E_TYPES}
B4_GOLDEN = [1, 36, 280, 960, 1540, 912]


def _cold():
    for fn in (verify.quotient, verify.system, verify.dressian_fan, verify._secondary):
        fn.cache_clear()


@contextmanager
def budget(seconds):
    _cold()
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    print(f"elapsed {elapsed:.1f}s (budget {seconds}s)")
    assert elapsed < seconds, f"took {elapsed:.1f}s, budget {seconds}s"


def _passed(name, samples=None):
    r = verify.check(name, seed=SEED, samples=samples)
    assert r.status == "pass", r.counterexample
    assert r.details.get("failures", 0) == 0
    return r.details


@pytest.mark.criterion(1, "worked B3 example: non-member, 5 strong tetrahedra, a member induces the same cells")
def test_criterion_1_worked_b3_example():
    with budget(5):
        d = _passed("example-4.2")
        assert d["member"] is False
        assert d["failed_equation"] == list(pair_provenance("B", (), (1, 2, 3)))
        assert d["cells"] == 5 and d["cell_sizes"] == [4] * 5
        assert d["cells_with_antipodes"] == 0
        assert d["summary"] == "strong_matroidal"
        assert "member_inducing_same" in d
        q = verify.quotient(("B", 3, 3))
        reports, summary = classify(q, verify.example_42_heights(q))
        assert all(r.is_strong_matroid and r.cell.dimension == 3 for r in reports)


@pytest.mark.criterion(2, "equation counts for B3, C, D/P1, E6, E7 and the B3 to D4/P4 bijection")
def test_criterion_2_equation_counts():
    with budget(10):
        assert len(strong_exchange_system(build_quotient(("B", 3, 3)))) == 1
        for n in (3, 4, 5, 6):
            assert len(strong_exchange_system(build_quotient(("C", n, 1)))) == 0
            assert len(strong_exchange_system(build_quotient(("D", n, 1)))) == 1
        assert len(strong_exchange_system(build_quotient(("E6", 6, 1)))) == 27
        assert len(strong_exchange_system(build_quotient(("E7", 7, 7)))) == 127
        mapping, sb, sd = bn_dn1_equation_bijection(3)
        assert len(sb) == len(sd) == len(mapping) == 1
        assert len(sd) == len(strong_exchange_system(build_quotient(("D", 4, 4))))


def _face_dims(q, faces):
    return {affine_hull([q.points[v] for pair in f for v in pair])[2] for f in faces}


@pytest.mark.criterion(3, "structure counts of the E6 and E7 minuscule polytopes")
def test_criterion_3_structure_counts():
    with budget(60):
        e6 = build_quotient(("E6", 6, 1))
        assert len(e6) == 27 and e6.dimension == 6
        faces6 = cross_polytope_faces(e6)
        assert len(faces6) == 27 and all(len(f) == 5 for f in faces6)
        assert _face_dims(e6, faces6) == {5}
        e7 = build_quotient(("E7", 7, 7))
        assert len(e7) == 56 and e7.dimension == 7
        degrees = {sum(1 for e in e7.edges if v in e) for v in range(56)}
        assert degrees == {27}
        assert len(antipodal_pairs(e7)) == 28
        faces7 = cross_polytope_faces(e7)
        assert len(faces7) == 126 and all(len(f) == 6 for f in faces7)
        assert _face_dims(e7, faces7) == {6}
        for name, golden in (("e6-structure", verify.E6_GOLDEN), ("e7-structure", verify.E7_GOLDEN)):
            got = _passed(name)
            assert {k: got[k] for k in golden} == golden


@pytest.mark.criterion(4, "sampled members: cell indicators are members and subdivisions are strong matroidal")
def test_criterion_4_cells_of_members():
    with budget(300):
        d = _passed("thm-3.3-cells")
    counts = d["members"]
    required = {"A3/P2", "B3/P3", "B4/P4", "D3/P1", "D4/P1", "D5/P1", "D6/P1", "C3/P1", "C4/P1", "C5/P1"}
    assert required <= DESK
    for name in DESK:
        assert counts[name] >= 200, name
    for name in E_NAMES:
        assert counts[name] >= 50, name
    print(f"weak separation divergences: {d['weak_separation_divergences']}")


@pytest.mark.criterion(5, "affine invariance of membership and of every argmin set")
def test_criterion_5_affine_invariance():
    with budget(120):
        d = _passed("affine-invariance")
    assert set(d["types"]) == DESK | E_NAMES
    assert all(v["pairs"] >= 1000 for v in d["types"].values())
    # both member and non-member starting points occur wherever the system is nonempty
    for name, v in d["types"].items():
        assert v["members"] > 0
        if not name.startswith("C"):
            assert v["members"] < v["pairs"], name


@pytest.mark.criterion(6, "B4: full system vs symdiff <= 4 (and <= 3 when finite), plus the infinite-entry example")
def test_criterion_6_b4_reduction():
    with budget(120):
        d = _passed("thm-4.8")
        q = verify.quotient(("B", 4, 4))
        mu = verify.b4_counterexample(q)
        full = verify.system(("B", 4, 4))
        f = full.lookup(pair_provenance("B", (1,), (2, 3, 4)))
        assert not satisfies(f, mu)
    assert d["samples"] >= 500
    assert d["finite"] > 0 and 0 < d["members"] < d["samples"]
    ce = d["counterexample"]
    assert ce["fails_f_1_234"] and ce["passes_proper_face_equations"]
    assert ce["proper_face_equations"] > 0 and not ce["member"]


@pytest.mark.criterion(7, "strong matroidal iff member: cross polytopes n <= 6, E6, and E7 face equations")
def test_criterion_7_iff_checks():
    with budget(600):
        d = _passed("d-p1-equiv")
        e6 = _passed("e6-equiv")
        e7 = _passed("thm-5.9")
    for n in range(3, 7):
        v = d[f"n={n}"]
        assert v["samples"] >= 500 and v["members"] > 0 and v["non_members"] > 0
    assert e6["samples"] >= 100 and e6["members"] > 0 and e6["non_members"] > 0
    assert e7["samples"] >= 50 and e7["members"] > 0 and e7["non_members"] > 0
    assert e7["face_equations"] == 126


def _mod_lineality_maximal(fan):
    return len(fan.maximal_cones())


@pytest.mark.criterion(8, "fans: D3/P1, cross polytope secondary fans, A3/P2, and B3/B4 by two methods")
def test_criterion_8_fans():
    with budget(600):
        d3 = prevariety_fan(verify.system(("D", 3, 1)))
        assert _mod_lineality_maximal(d3) == 3
        sec3 = secondary_fan(verify.quotient(("D", 3, 1)).points)
        assert len([c for c in sec3.cones if c.dim == sec3.ambient]) == 3
        sub = _passed("d-p1-subfan")
        for n in (3, 4):
            rep = sub[f"n={n}"]
            assert rep["walls_contain_dressian"] and rep["supports_equal"], rep
        a3 = prevariety_fan(verify.system(("A", 3, 2)))
        assert _mod_lineality_maximal(a3) == 3
        for pair, golden in ((("B", 3, 3), [1, 4, 6]), (("B", 4, 4), B4_GOLDEN)):
            s = verify.system(pair)
            one, two = prevariety_fan(s, allow_large=True), prevariety_fan_by_refinement(s, allow_large=True)
            assert one.f_vector == two.f_vector == golden, (pair, one.f_vector, two.f_vector)
            assert {c.key for c in one.cones} == {c.key for c in two.cones}
            assert one.lineality_dim == two.lineality_dim


@pytest.mark.criterion(9, "sampled Coxeter matroids of the E7 quotient satisfy strong exchange")
def test_criterion_9_e7_matroids():
    with budget(600):
        d = _passed("thm-5.8-sampled")
    assert d["matroids"] >= 200
    assert len(d["sizes"]) > 1
    print(f"weak separation divergences: {d['weak_separation_divergences']}")


@pytest.mark.criterion(10, "oracle consistency: fan support vs membership, secondary cone lookup vs subdivision")
def test_criterion_10_oracles():
    with budget(300):
        fans = _passed("fan-oracle")
        sec = _passed("secondary-oracle")
    for pair in verify.FAN_ORACLE_TYPES:
        v = fans[MinusculePair(*pair).name]
        assert v["samples"] >= 1000
        if pair[0] != "C":
            assert 0 < v["in_support"] < v["samples"]
    assert set(sec) >= {"square", "octahedron", "cross-4", "hypersimplex-2-4"}
    assert all(v["samples"] >= 500 for k, v in sec.items() if isinstance(v, dict))


def test_remaining_registry_checks():
    for name in ("prop-4.4-iso", "lemma-4.3-search", "type-c-free", "type-a-sanity"):
        _passed(name)
    r = verify.check("conjecture-search", seed=SEED)
    assert not r.gating and r.details["samples"] >= 200
    print(f"conjecture search: {r.details['separations']} separation candidates")

