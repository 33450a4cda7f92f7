"""Sampler tests: exact outcome-lattice enumeration against stated biases.

Rather than only testing statistically, ``enumerate_outcomes`` drives each
scalar sampler through every value its random draws could take, with exact
probabilities.  The induced distribution over member sets must equal the
per-subgraph bias of the route at the anchor's orbit, subgraph by subgraph.
"""

from collections import defaultdict

import numpy as np
import pytest

from orbitsampler import (
    BiasUndefinedError,
    CannotSampleError,
    METHOD_ORDER,
    SAMPLERS,
    bias_vector,
    classify_undirected,
    random_vertex,
    sample_members,
    tally_orbits,
    weighted_random_vertex,
    weighted_random_vertex_excluding,
)
from orbitsampler.graph import Graph

from conftest import EIGHT_EDGES, ScriptedRng, complete_graph, star_graph


class _NeedMore(Exception):
    pass


class _Probe:
    def __init__(self, prefix):
        self.prefix = prefix
        self.i = 0
        self.need = None

    def integers(self, low, high=None, size=None):
        assert size is None
        lo, hi = (0, int(low)) if high is None else (int(low), int(high))
        if self.i < len(self.prefix):
            v = self.prefix[self.i]
            self.i += 1
            assert lo <= v < hi
            return v
        self.need = (lo, hi)
        raise _NeedMore


def enumerate_outcomes(fn):
    """All (probability, result) pairs of a function of one scalar rng."""
    results = []

    def walk(prefix, prob):
        probe = _Probe(prefix)
        try:
            out = fn(probe)
        except _NeedMore:
            lo, hi = probe.need
            for v in range(lo, hi):
                walk(prefix + [v], prob / (hi - lo))
            return
        results.append((prob, out))

    walk([], 1.0)
    return results


def assert_exact_bias(g: Graph, v: int, method: str):
    """Outcome lattice of one sampler matches its bias vector exactly."""
    sampler = SAMPLERS[method]
    outcomes = enumerate_outcomes(lambda rng: sampler(g, v, rng))
    prob_by_set = defaultdict(float)
    for prob, sample in outcomes:
        assert sample.anchor == v and v in sample.members
        assert len(sample.members) in (3, 4)
        prob_by_set[sample.members] += prob
    assert abs(sum(prob_by_set.values()) - 1.0) < 1e-12
    p = bias_vector(method, g.stats(v))
    for members, prob in prob_by_set.items():
        orbit = classify_undirected(g, v, members)
        assert p[orbit] > 0, f"{method} produced zero-probability orbit {orbit}"
        assert abs(prob - p[orbit]) < 1e-12, (members, orbit, prob, p[orbit])


EIGHT = Graph.from_edges(EIGHT_EDGES)
PAW = Graph.from_edges([(0, 1), (0, 2), (1, 2), (2, 3)])


@pytest.mark.parametrize("method", METHOD_ORDER)
def test_exact_bias_on_small_graphs(method):
    cases = [
        (complete_graph(4), 0),
        (PAW, 2),
        (PAW, 0),
        (EIGHT, 0),
        (EIGHT, 1),
        (EIGHT, 4),
    ]
    checked = 0
    for g, v in cases:
        try:
            assert_exact_bias(g, v, method)
            checked += 1
        except (CannotSampleError, BiasUndefinedError):
            continue
    assert checked >= 2


def test_r31_examples(paw, star4, k3):
    # triangle through the paw hub appears with probability 1/wedges = 1/3
    outcomes = enumerate_outcomes(lambda rng: SAMPLERS["R31"](paw, 2, rng))
    tri = sum(p for p, s in outcomes if s.members == (0, 1, 2))
    assert abs(tri - 1 / 3) < 1e-12
    # star centre: every draw is a path with the centre in the middle
    for p, s in enumerate_outcomes(lambda rng: SAMPLERS["R31"](star4, 0, rng)):
        assert classify_undirected(star4, 0, s.members) == 2
    # triangle graph: always the whole triangle
    for p, s in enumerate_outcomes(lambda rng: SAMPLERS["R31"](k3, 0, rng)):
        assert s.members == (0, 1, 2)


def test_r32_examples(paw, path4, star4):
    # paw hub: only the triangle is reachable (probability one)
    outcomes = enumerate_outcomes(lambda rng: SAMPLERS["R32"](paw, 2, rng))
    assert all(s.members == (0, 1, 2) for _, s in outcomes)
    # path end: forced two-step chain
    outcomes = enumerate_outcomes(lambda rng: SAMPLERS["R32"](path4, 0, rng))
    assert all(s.members == (0, 1, 2) for _, s in outcomes)
    assert classify_undirected(path4, 0, (0, 1, 2)) == 1
    with pytest.raises(CannotSampleError):
        SAMPLERS["R32"](star4, 0, np.random.default_rng(0))


def test_r41_k4_split(k4):
    # half the draws degenerate to triangles, half give the full clique
    outcomes = enumerate_outcomes(lambda rng: SAMPLERS["R41"](k4, 0, rng))
    p3 = sum(p for p, s in outcomes if len(s.members) == 3)
    p14 = sum(p for p, s in outcomes if len(s.members) == 4)
    assert abs(p3 - 0.5) < 1e-12 and abs(p14 - 0.5) < 1e-12
    with pytest.raises(CannotSampleError):
        SAMPLERS["R41"](star_graph(3), 0, np.random.default_rng(0))


def test_r41_path_mid_never_degenerates(path4):
    # a triangle-free anchor can only yield full 4-node draws
    outcomes = enumerate_outcomes(lambda rng: SAMPLERS["R41"](path4, 1, rng))
    assert all(s.members == (0, 1, 2, 3) for _, s in outcomes)


def test_r42_examples(k4, k3):
    # star-of-star: deterministic draw with the anchor at a leaf
    g = Graph.from_edges([(0, 1), (1, 2), (1, 3)])
    outcomes = enumerate_outcomes(lambda rng: SAMPLERS["R42"](g, 0, rng))
    assert all(s.members == (0, 1, 2, 3) for _, s in outcomes)
    assert classify_undirected(g, 0, (0, 1, 2, 3)) == 6
    # 4-clique: always the clique itself
    outcomes = enumerate_outcomes(lambda rng: SAMPLERS["R42"](k4, 0, rng))
    assert all(s.members == (0, 1, 2, 3) for _, s in outcomes)
    with pytest.raises(CannotSampleError):
        SAMPLERS["R42"](k3, 0, np.random.default_rng(0))


def test_r43_examples(k4, path4, star4):
    outcomes = enumerate_outcomes(lambda rng: SAMPLERS["R43"](path4, 0, rng))
    assert all(s.members == (0, 1, 2, 3) for _, s in outcomes)
    outcomes = enumerate_outcomes(lambda rng: SAMPLERS["R43"](k4, 0, rng))
    p3 = sum(p for p, s in outcomes if len(s.members) == 3)
    assert abs(p3 - 0.5) < 1e-12
    with pytest.raises(CannotSampleError):
        SAMPLERS["R43"](star4, 0, np.random.default_rng(0))


def test_r44_examples(k4, star4, path4):
    outcomes = enumerate_outcomes(lambda rng: SAMPLERS["R44"](star4, 0, rng))
    assert all(s.members == (0, 1, 2, 3) for _, s in outcomes)
    assert classify_undirected(star4, 0, (0, 1, 2, 3)) == 7
    outcomes = enumerate_outcomes(lambda rng: SAMPLERS["R44"](k4, 0, rng))
    assert all(s.members == (0, 1, 2, 3) for _, s in outcomes)
    with pytest.raises(CannotSampleError):
        SAMPLERS["R44"](path4, 1, np.random.default_rng(0))


def test_random_vertex_primitives():
    nb = np.array([10, 20, 30])
    # full exclusion mapping, enumerated exactly
    seen = {random_vertex(nb, {20}, ScriptedRng([i])) for i in range(2)}
    assert seen == {10, 30}
    seen = {random_vertex(nb, {10, 30}, ScriptedRng([0]))}
    assert seen == {20}
    assert {random_vertex(nb, (), ScriptedRng([i])) for i in range(3)} == {10, 20, 30}
    with pytest.raises(CannotSampleError):
        random_vertex(np.array([5]), {5}, ScriptedRng([0]))


def test_weighted_random_vertex_mapping():
    nb = np.array([7, 8, 9])
    acc = np.array([2, 2, 6])  # weights 2, 0, 4
    picks = [weighted_random_vertex(acc, nb, ScriptedRng([r])) for r in range(1, 7)]
    assert picks == [7, 7, 9, 9, 9, 9]  # middle node never chosen
    # equal weights split evenly, a single candidate is certain
    picks = [
        weighted_random_vertex(np.array([1, 2]), nb[:2], ScriptedRng([r]))
        for r in (1, 2)
    ]
    assert picks == [7, 8]
    assert weighted_random_vertex(np.array([5]), np.array([3]), ScriptedRng([1])) == 3
    with pytest.raises(CannotSampleError):
        weighted_random_vertex(np.array([0, 0]), nb[:2], ScriptedRng([]))


def test_weighted_random_vertex_excluding_mapping():
    nb = np.array([4, 5, 6])
    acc = np.array([3, 4, 6])  # weights 3, 1, 2; node 4 excluded
    picks = [
        weighted_random_vertex_excluding(acc, nb, 4, ScriptedRng([r]))
        for r in range(1, 4)
    ]
    assert picks == [5, 6, 6]  # residual weights 1 and 2
    # excluding the heavy middle node leaves two equal halves
    acc2 = np.array([1, 6, 7])  # weights 1, 5, 1
    picks = [
        weighted_random_vertex_excluding(acc2, nb, 5, ScriptedRng([r]))
        for r in range(1, 3)
    ]
    assert picks == [4, 6]
    with pytest.raises(CannotSampleError):
        weighted_random_vertex_excluding(np.array([3, 3]), nb[:2], 4, ScriptedRng([]))
    with pytest.raises(CannotSampleError):
        weighted_random_vertex_excluding(acc, nb, 9, ScriptedRng([]))


def test_bias_vector_values(paw, k4):
    p = bias_vector("R31", paw.stats(2))
    assert p[2] == pytest.approx(1 / 3) and p[3] == pytest.approx(1 / 3)
    assert p[1] == 0.0
    p = bias_vector("R42", k4.stats(0))
    assert p[6] == p[9] == p[10] == p[13] == pytest.approx(1 / 3)
    assert p[12] == pytest.approx(2 / 3) and p[14] == pytest.approx(1.0)
    st3 = complete_graph(4).stats(0)
    p = bias_vector("R44", st3)
    assert p[7] == p[11] == p[13] == p[14] == 1.0
    with pytest.raises(BiasUndefinedError):
        bias_vector("R32", star_graph(3).stats(0))


def test_scalar_determinism(eight):
    for method in METHOD_ORDER:
        rng1, rng2 = np.random.default_rng(7), np.random.default_rng(7)
        s1 = [SAMPLERS[method](eight, 0, rng1).members for _ in range(50)]
        s2 = [SAMPLERS[method](eight, 0, rng2).members for _ in range(50)]
        assert s1 == s2


def test_batch_determinism_and_members(eight):
    for method in METHOD_ORDER:
        t1 = tally_orbits(eight, 0, method, 5000, np.random.default_rng(9))
        t2 = tally_orbits(eight, 0, method, 5000, np.random.default_rng(9))
        assert (t1 == t2).all()
        assert t1.sum() == 5000
        mem = sample_members(eight, 0, method, 200, np.random.default_rng(9))
        assert (mem[:, 0] == 0).all()


def test_batch_never_hits_zero_probability_orbits(eight):
    for method in METHOD_ORDER:
        for v in range(eight.node_count):
            try:
                p = bias_vector(method, eight.stats(v))
            except BiasUndefinedError:
                continue
            tally = tally_orbits(eight, v, method, 20_000, np.random.default_rng(v))
            for orbit, prob in p.items():
                if prob == 0.0:
                    assert tally[orbit] == 0, (method, v, orbit)


def test_batch_labels_match_scalar_classifier(eight):
    # the vectorized per-draw labeling must agree with the general
    # classifier on every single draw
    from orbitsampler.orbits import (
        classify_chain_batch,
        classify_quad_batch,
        classify_wedge_batch,
    )
    from orbitsampler.samplers import draw_batch

    for v in (0, 1, 4):
        for method in METHOD_ORDER:
            try:
                cols = draw_batch(eight, v, method, 500, np.random.default_rng(v))
            except CannotSampleError:
                continue
            if method == "R31":
                labels = classify_wedge_batch(eight, v, cols[0], cols[1], False)
            elif method == "R32":
                labels = classify_chain_batch(eight, v, cols[0], cols[1], False)
            else:
                labels = classify_quad_batch(eight, method, v, *cols)
            for row in range(500):
                members = {v, *(int(c[row]) for c in cols)}
                assert classify_undirected(eight, v, members) == labels[row]


def test_batch_directed_labels_match_scalar_classifier():
    from orbitsampler.generators import gnp_directed
    from orbitsampler.orbits import classify_chain_batch, classify_wedge_batch
    from orbitsampler.samplers import draw_batch
    from orbitsampler import classify_directed3

    g = gnp_directed(20, 0.25, seed=6)
    v = int(np.argmax(g.degrees))
    for method, fn in (("R31", classify_wedge_batch), ("R32", classify_chain_batch)):
        cols = draw_batch(g, v, method, 500, np.random.default_rng(1))
        labels = fn(g, v, cols[0], cols[1], True)
        for row in range(500):
            members = {v, int(cols[0][row]), int(cols[1][row])}
            assert classify_directed3(g, v, members) == labels[row]


def test_batch_agrees_with_scalar_distribution(eight):
    # same per-orbit hit rates from the two code paths, loose statistical bound
    rng = np.random.default_rng(123)
    k = 40_000
    for method in ("R32", "R41", "R43"):
        batch = tally_orbits(eight, 0, method, k, np.random.default_rng(5)) / k
        scalar = np.zeros(15)
        for _ in range(8000):
            s = SAMPLERS[method](eight, 0, rng)
            scalar[classify_undirected(eight, 0, s.members)] += 1
        scalar /= 8000
        assert np.abs(batch - scalar).max() < 0.03, method
