from itertools import combinations

import pytest

from famlab.constructors import (
    FANO_LINES,
    build_degree3_family,
    build_mk,
    build_one_factorization,
    example_family,
    fano_plane,
    mk_vertex_pairs,
    round_robin_rounds,
)
from famlab.family import degrees, format_fam, is_intersecting, pairwise_intersections
from famlab.solver import exact_tau

from oracles import perfect_matchings


def test_build_mk2_triangle():
    assert build_mk(2).blocks == ((1, 2), (1, 3), (2, 3))


def test_build_mk4_matches_example_prefix():
    assert build_mk(4).blocks == ((1, 2, 3, 4), (1, 5, 6, 7), (2, 5, 8, 9), (3, 6, 8, 10), (4, 7, 9, 10))
    assert build_mk(4).blocks == example_family().blocks[:5]


def test_build_mk7_vertex_count():
    assert len(build_mk(7).vertices) == 28


@pytest.mark.parametrize("k", range(2, 13))
def test_mk_structure(k):
    mk = build_mk(k)
    assert len(mk) == k + 1
    assert mk.vertices == tuple(range(1, k * (k + 1) // 2 + 1))
    assert set(degrees(mk).values()) == {2}
    m = pairwise_intersections(mk)
    assert {m[i][j] for i, j in combinations(range(k + 1), 2)} == {1}
    assert exact_tau(mk).tau == (k + 2) // 2


@pytest.mark.parametrize("k", [1, 0, -3])
def test_build_mk_rejects_small_k(k):
    with pytest.raises(ValueError):
        build_mk(k)


def test_mk_vertices_are_block_pairs():
    pairs = mk_vertex_pairs(build_mk(5))
    assert sorted(pairs) == list(combinations(range(1, 7), 2))


def test_factorization_k3_is_all_perfect_matchings():
    rounds = round_robin_rounds(4)
    brute = sorted(sorted(m) for m in perfect_matchings([1, 2, 3, 4]))
    assert sorted(rounds) == brute
    ts = build_one_factorization(3)
    assert len(ts) == 3 and all(len(t.vertices) == 2 for t in ts)


def test_factorization_k5_uses_each_pair_once():
    rounds = round_robin_rounds(6)
    used = [p for r in rounds for p in r]
    assert len(used) == 15 and sorted(used) == list(combinations(range(1, 7), 2))
    ts = build_one_factorization(5)
    assert len(ts) == 5 and all(len(t.vertices) == 3 for t in ts)


@pytest.mark.parametrize("k", [3, 5, 7, 9, 11])
def test_factorization_partitions_vertices(k):
    ts = build_one_factorization(k)
    assert len(ts) == k
    assert all(t.covers() for t in ts)
    union = [v for t in ts for v in t.vertices]
    assert sorted(union) == list(build_mk(k).vertices)
    for t in ts:
        # each round is a perfect matching of the k+1 block indices
        hit = [i for i, b in enumerate(t.target.blocks) if set(b) & set(t.vertices)]
        assert len(hit) == k + 1


@pytest.mark.parametrize("k", [2, 4, 1, 0])
def test_factorization_rejects_even_or_small(k):
    with pytest.raises(ValueError):
        build_one_factorization(k)


def test_round_robin_rejects_odd():
    with pytest.raises(ValueError):
        round_robin_rounds(5)


def test_degree3_base_is_fano():
    f = build_degree3_family(2)
    assert f.blocks == FANO_LINES == fano_plane().blocks
    assert set(degrees(f).values()) == {3}


def test_degree3_m3():
    f = build_degree3_family(3)
    assert f.k == 7 and len(f) == 15 and len(f.vertices) == 35
    assert set(degrees(f).values()) == {3}
    assert is_intersecting(f)
    res = exact_tau(f)
    assert res.degree_lower_bound == 5 and res.tau >= 5


def test_degree3_m4_structure():
    f = build_degree3_family(4)
    assert f.k == 15 and len(f) == 31
    assert set(degrees(f).values()) == {3}
    assert is_intersecting(f)


def test_degree3_rejects_small_m():
    with pytest.raises(ValueError):
        build_degree3_family(1)


def test_example_family():
    f = example_family()
    assert f.k == 4 and len(f) == 9 and len(f.vertices) == 11
    assert is_intersecting(f)


@pytest.mark.parametrize(
    "build", [lambda: build_mk(9), lambda: build_degree3_family(3), example_family, fano_plane]
)
def test_builders_are_deterministic(build):
    assert format_fam(build()) == format_fam(build())
