"""Oracle tests: enumeration correctness, identities, and cross counters."""

import pytest

from orbitsampler import (
    GuardExceededError,
    bias_vector,
    BiasUndefinedError,
    enumerate_cises,
    exact_orbit_degrees,
    verify_identities,
)
from orbitsampler.generators import gnp, preferential_attachment
from orbitsampler.graph import Graph
from orbitsampler.oracle import candidate_bound, check_guard
from orbitsampler.samplers import METHOD_ORDER

from conftest import EIGHT_EDGES, naive_cises, star_graph


def test_enumerate_k4_triangles(k4):
    sets = list(enumerate_cises(k4, 0, 3))
    assert len(sets) == 3 and len(set(sets)) == 3


def test_enumerate_path_single_quad(path4):
    assert list(enumerate_cises(path4, 0, 4)) == [(0, 1, 2, 3)]


def test_enumerate_star_leaf(star4):
    sets = set(enumerate_cises(star4, 1, 3))
    assert sets == {(0, 1, 2), (0, 1, 3)}


def test_enumeration_matches_naive_reference():
    for seed in range(6):
        g = gnp(16, 0.3, seed)
        for v in range(g.node_count):
            for k in (3, 4):
                fast = sorted(enumerate_cises(g, v, k))
                assert len(fast) == len(set(fast)), "duplicate emission"
                assert set(fast) == naive_cises(g, v, k)


def test_exact_degrees_paw(paw):
    c = exact_orbit_degrees(paw, 2).undirected
    assert {i: n for i, n in c.items() if n} == {0: 3, 2: 2, 3: 1, 11: 1}


def test_exact_degrees_k4(k4):
    c = exact_orbit_degrees(k4, 0).undirected
    assert {i: n for i, n in c.items() if n} == {0: 3, 3: 3, 14: 1}


def test_identities_paw(paw):
    c2 = exact_orbit_degrees(paw, 2)
    rep = verify_identities(c2, paw.stats(2))
    assert rep.ok and rep.triple_residual == 0
    c0 = exact_orbit_degrees(paw, 0)
    rep0 = verify_identities(c0, paw.stats(0))
    assert rep0.ok and rep0.walk_residual == 0


def test_identities_degree_one_node(paw):
    rep = verify_identities(exact_orbit_degrees(paw, 3), paw.stats(3))
    assert rep.ok
    assert (rep.wedge_residual, rep.walk_residual, rep.triple_residual) == (0, 0, 0)


def _triangle_count(g: Graph) -> int:
    total = 0
    for v in range(g.node_count):
        nb = [int(x) for x in g.neighbors(v)]
        for i, a in enumerate(nb):
            for b in nb[i + 1 :]:
                if g.has_edge(a, b):
                    total += 1
    return total // 3


def _k4_count(g: Graph) -> int:
    # each 4-clique is counted once per edge, six times in total
    total = 0
    for v in range(g.node_count):
        for u in g.neighbors(v):
            u = int(u)
            if u < v:
                continue
            common = [
                int(x) for x in g.neighbors(v) if x != u and g.has_edge(int(x), u)
            ]
            for i, a in enumerate(common):
                for b in common[i + 1 :]:
                    if g.has_edge(a, b):
                        total += 1
    return total // 6


def test_totals_match_independent_counters():
    for seed in (0, 3):
        g = gnp(22, 0.3, seed)
        per_node = [exact_orbit_degrees(g, v).undirected for v in range(g.node_count)]
        assert sum(c[3] for c in per_node) == 3 * _triangle_count(g)
        assert sum(c[14] for c in per_node) == 4 * _k4_count(g)


def test_sampler_normalization_against_oracle():
    graphs = [Graph.from_edges(EIGHT_EDGES)] + [gnp(14, 0.3, s) for s in range(3)]
    for g in graphs:
        for v in range(g.node_count):
            counts = exact_orbit_degrees(g, v).undirected
            st = g.stats(v)
            for method in METHOD_ORDER:
                try:
                    p = bias_vector(method, st)
                except BiasUndefinedError:
                    continue
                total = sum(p[i] * counts[i] for i in p)
                assert total == pytest.approx(1.0, abs=1e-9), (v, method)


def test_guard():
    hub = star_graph(60)
    assert candidate_bound(hub.stats(0)) > 10_000
    with pytest.raises(GuardExceededError):
        check_guard(hub, 0, limit=10_000)
    with pytest.raises(GuardExceededError):
        exact_orbit_degrees(hub, 0, guard=10)
    check_guard(hub, 0, limit=None)  # disabled guard never raises


def test_oracle_counts_match_public_classifier():
    # the oracle's inlined set-based classification must agree with the
    # general classifier, undirected and directed
    from orbitsampler import classify_directed3, classify_undirected
    from orbitsampler.generators import gnp_directed

    for seed in range(3):
        g = gnp_directed(16, 0.3, seed)
        for v in range(g.node_count):
            counts = exact_orbit_degrees(g, v, guard=None)
            und = {i: 0 for i in range(15)}
            und[0] = g.degree(v)
            dir3 = {i: 0 for i in range(1, 31)}
            for k in (3, 4):
                for mem in enumerate_cises(g, v, k):
                    und[classify_undirected(g, v, mem)] += 1
                    if k == 3:
                        dir3[classify_directed3(g, v, mem)] += 1
            assert und == counts.undirected
            assert dir3 == counts.directed3


def test_identity_residuals_on_random_graphs():
    for seed in range(6):
        g = (
            gnp(30, 0.15, seed)
            if seed % 2 == 0
            else preferential_attachment(30, 2, seed)
        )
        for v in range(g.node_count):
            assert verify_identities(exact_orbit_degrees(g, v), g.stats(v)).ok
