"""Randomized selection of 3- and 4-node connected induced subgraphs.

Six sampling routes draw subgraphs around an anchor node ``v``.  Each route
reaches only a subset of the anchor's orbits, but does so with a bias that is
an exact, per-subgraph constant (see :func:`bias_vector`), which is what
makes the counts invertible into unbiased orbit-degree estimates.

=======  ============================================================
R31      u, w: two distinct uniform neighbours of v
R32      u: neighbour weighted by (d_u - 1); w: uniform in N(u) - {v}
R41      u as in R32; w: uniform in N(v) - {u}; r: uniform in N(u) - {v}
R42      u: neighbour weighted by (d_u-1)(d_u-2)/2; w, r: distinct
         uniform in N(u) - {v}
R43      u: neighbour weighted by (two_paths_u - d_v + 1); w: in
         N(u) - {v} weighted by (d_w - 1); r: uniform in N(w) - {u}
R44      u, w, r: three distinct uniform neighbours of v
=======  ============================================================

R41 and R43 may produce a coincidence (w == r, resp. r == v); the draw then
degenerates to a 3-node triangle and is kept as such --- resampling would
bias the estimates.

Scalar functions return one :class:`Sample`; the ``*_batch`` path draws many
at once with vectorized arithmetic and is what the estimation pipelines use.
Both consume a ``numpy.random.Generator``, so identical seeds give identical
draw sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .graph import Graph, NodeStats
from .orbits import (
    classify_chain_batch,
    classify_quad_batch,
    classify_wedge_batch,
)

METHOD_ORDER = ("R31", "R32", "R41", "R42", "R43", "R44")
THREE_NODE_METHODS = ("R31", "R32")
FOUR_NODE_METHODS = ("R41", "R42", "R43", "R44")


class CannotSampleError(ValueError):
    """The route's selection set is empty at this node."""


class BiasUndefinedError(ValueError):
    """The route's bias denominator is zero at this node."""


@dataclass(frozen=True)
class Sample:
    """One sampled connected induced subgraph."""

    anchor: int
    members: tuple[int, ...]  # sorted, includes anchor; 3 or 4 nodes
    method: str


def _members(*nodes: int) -> tuple[int, ...]:
    return tuple(sorted({int(x) for x in nodes}))


# -- selection primitives ----------------------------------------------------


def random_vertex(neighbors, excluded: Iterable[int], rng: np.random.Generator) -> int:
    """Uniform draw from ``neighbors`` minus up to two excluded members.

    Constant time: draws an index from the reduced range and remaps it
    around the excluded positions instead of rejecting.
    """
    nb = np.asarray(neighbors)
    positions = sorted(int(np.searchsorted(nb, x)) for x in excluded)
    pool = len(nb) - len(positions)
    if pool <= 0:
        raise CannotSampleError("no candidates left after exclusions")
    i = int(rng.integers(pool))
    for p in positions:
        if i >= p:
            i += 1
    return int(nb[i])


def weighted_random_vertex(acc, neighbors, rng: np.random.Generator) -> int:
    """Draw ``neighbors[i]`` with probability proportional to its weight.

    ``acc`` is the nondecreasing cumulative weight array; the draw picks a
    uniform integer in [1, acc[-1]] and locates its bucket by binary search.
    """
    total = int(acc[-1]) if len(acc) else 0
    if total <= 0:
        raise CannotSampleError("all candidate weights are zero")
    rnd = int(rng.integers(1, total + 1))
    return int(neighbors[int(np.searchsorted(acc, rnd, side="left"))])


def weighted_random_vertex_excluding(
    acc, neighbors, excluded: int, rng: np.random.Generator
) -> int:
    """Weighted draw from ``neighbors`` minus one excluded member.

    Draws from the cumulative range with the excluded node's weight block
    cut out, then shifts back over the gap, so no rejection is needed.
    """
    nb = np.asarray(neighbors)
    pos = int(np.searchsorted(nb, excluded))
    if pos >= len(nb) or nb[pos] != excluded:
        raise CannotSampleError(f"{excluded} is not a candidate")
    total = int(acc[-1]) if len(acc) else 0
    lo = int(acc[pos - 1]) if pos > 0 else 0
    block = int(acc[pos]) - lo
    residual = total - block
    if residual <= 0:
        raise CannotSampleError("all candidate weights are zero after exclusion")
    rnd = int(rng.integers(1, residual + 1))
    if rnd > lo:
        rnd += block
    return int(nb[int(np.searchsorted(acc, rnd, side="left"))])


def _uniform_excluding_one(n: int, pos: int, rng: np.random.Generator) -> int:
    i = int(rng.integers(n - 1))
    return i + 1 if i >= pos else i


# -- scalar samplers ---------------------------------------------------------


def sample_r31(g: Graph, v: int, rng: np.random.Generator) -> Sample:
    """Two distinct uniform neighbours of v."""
    nb = g.neighbors(v)
    d = len(nb)
    if d < 2:
        raise CannotSampleError(f"node {v} has degree {d} < 2")
    iu = int(rng.integers(d))
    iw = _uniform_excluding_one(d, iu, rng)
    return Sample(v, _members(v, nb[iu], nb[iw]), "R31")


def sample_r32(g: Graph, v: int, rng: np.random.Generator) -> Sample:
    """Degree-weighted neighbour, then a uniform second step away from v."""
    st = g.stats(v)
    if st.two_paths <= 0:
        raise CannotSampleError(f"node {v} has no two-edge walks")
    nb = g.neighbors(v)
    u = weighted_random_vertex(g.acc_degree(v), nb, rng)
    pos_v = g.pos_of(u, v)
    j = _uniform_excluding_one(g.degree(u), pos_v, rng)
    w = int(g.neighbors(u)[j])
    return Sample(v, _members(v, u, w), "R32")


def sample_r41(g: Graph, v: int, rng: np.random.Generator) -> Sample:
    """R32's first step plus an extra neighbour of v and of u."""
    st = g.stats(v)
    if st.forked_paths <= 0:
        raise CannotSampleError(f"node {v} has no forked two-edge walks")
    nb = g.neighbors(v)
    u = weighted_random_vertex(g.acc_degree(v), nb, rng)
    iw = _uniform_excluding_one(len(nb), g.pos_of(v, u), rng)
    w = int(nb[iw])
    j = _uniform_excluding_one(g.degree(u), g.pos_of(u, v), rng)
    r = int(g.neighbors(u)[j])
    return Sample(v, _members(v, u, w, r), "R41")  # degenerates to 3 when w == r


def sample_r42(g: Graph, v: int, rng: np.random.Generator) -> Sample:
    """Wedge-weighted neighbour u, then two distinct of u's other neighbours."""
    st = g.stats(v)
    if st.tail_wedges <= 0:
        raise CannotSampleError(f"node {v} has no neighbour with spare pairs")
    u = weighted_random_vertex(g.acc_wedge(v), g.neighbors(v), rng)
    nu = g.neighbors(u)
    du = len(nu)
    pos_v = g.pos_of(u, v)
    jw = _uniform_excluding_one(du, pos_v, rng)
    e1, e2 = sorted((pos_v, jw))
    jr = int(rng.integers(du - 2))
    if jr >= e1:
        jr += 1
    if jr >= e2:
        jr += 1
    return Sample(v, _members(v, u, nu[jw], nu[jr]), "R42")


def sample_r43(g: Graph, v: int, rng: np.random.Generator) -> Sample:
    """Walk-weighted u, degree-weighted w around u, uniform third step."""
    st = g.stats(v)
    if st.three_walks <= 0:
        raise CannotSampleError(f"node {v} has no three-edge walks")
    u = weighted_random_vertex(g.acc_walk(v), g.neighbors(v), rng)
    w = weighted_random_vertex_excluding(g.acc_degree(u), g.neighbors(u), v, rng)
    j = _uniform_excluding_one(g.degree(w), g.pos_of(w, u), rng)
    r = int(g.neighbors(w)[j])
    return Sample(v, _members(v, u, w, r), "R43")  # degenerates to 3 when r == v


def sample_r44(g: Graph, v: int, rng: np.random.Generator) -> Sample:
    """Three distinct uniform neighbours of v."""
    nb = g.neighbors(v)
    d = len(nb)
    if d < 3:
        raise CannotSampleError(f"node {v} has degree {d} < 3")
    iu = int(rng.integers(d))
    iw = _uniform_excluding_one(d, iu, rng)
    e1, e2 = sorted((iu, iw))
    ir = int(rng.integers(d - 2))
    if ir >= e1:
        ir += 1
    if ir >= e2:
        ir += 1
    return Sample(v, _members(v, nb[iu], nb[iw], nb[ir]), "R44")


SAMPLERS: dict[str, Callable[[Graph, int, np.random.Generator], Sample]] = {
    "R31": sample_r31,
    "R32": sample_r32,
    "R41": sample_r41,
    "R42": sample_r42,
    "R43": sample_r43,
    "R44": sample_r44,
}


# -- bias probabilities ------------------------------------------------------

_BIAS_NUMERATORS = {
    "R31": ({2: 1, 3: 1}, "wedges", 3),
    "R32": ({1: 1, 3: 2}, "two_paths", 3),
    "R41": ({3: 2, 5: 1, 8: 2, 10: 1, 11: 2, 12: 2, 13: 4, 14: 6}, "forked_paths", 14),
    "R42": ({6: 1, 9: 1, 10: 1, 12: 2, 13: 1, 14: 3}, "tail_wedges", 14),
    "R43": ({3: 2, 4: 1, 8: 2, 9: 2, 10: 1, 12: 4, 13: 2, 14: 6}, "three_walks", 14),
    "R44": ({7: 1, 11: 1, 13: 1, 14: 1}, "triples", 14),
}


def bias_vector(method: str, stats: NodeStats) -> dict[int, float]:
    """Per-orbit probability of one draw hitting any fixed subgraph there.

    Orbits the route cannot reach carry an exact 0.  Raises
    :class:`BiasUndefinedError` when the route's denominator vanishes.
    """
    numerators, denom_field, max_orbit = _BIAS_NUMERATORS[method]
    denom = getattr(stats, denom_field)
    if denom <= 0:
        raise BiasUndefinedError(
            f"{method} is undefined at node {stats.node} ({denom_field} = 0)"
        )
    return {i: numerators.get(i, 0) / denom for i in range(1, max_orbit + 1)}


def sampling_probability(method: str, stats: NodeStats, orbit: int) -> float:
    """Single entry of :func:`bias_vector` without building the dict."""
    numerators, denom_field, _ = _BIAS_NUMERATORS[method]
    denom = getattr(stats, denom_field)
    if denom <= 0:
        raise BiasUndefinedError(
            f"{method} is undefined at node {stats.node} ({denom_field} = 0)"
        )
    return numerators.get(orbit, 0) / denom


# -- vectorized batch draws --------------------------------------------------


def _skip_one(idx: np.ndarray, pos: np.ndarray | int) -> np.ndarray:
    return idx + (idx >= pos)


def _skip_two(idx: np.ndarray, p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    e1 = np.minimum(p1, p2)
    e2 = np.maximum(p1, p2)
    idx = idx + (idx >= e1)
    return idx + (idx >= e2)


def _weighted_pick(acc: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    total = int(acc[-1]) if len(acc) else 0
    if total <= 0:
        raise CannotSampleError("all candidate weights are zero")
    rnd = rng.integers(1, total + 1, size=k)
    return np.searchsorted(acc, rnd, side="left")


def _second_step(
    g: Graph, v: int, u: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Uniform element of N(u) - {v} per draw; every d_u is >= 2 here."""
    du = g.degrees[u]
    pos_v = g.pos_of_many(u, v)
    j = _skip_one(rng.integers(0, du - 1), pos_v)
    return g.indices[g.indptr[u] + j]


def _batch_r31(g: Graph, v: int, k: int, rng: np.random.Generator):
    nb = g.neighbors(v)
    d = len(nb)
    if d < 2:
        raise CannotSampleError(f"node {v} has degree {d} < 2")
    iu = rng.integers(0, d, size=k)
    iw = _skip_one(rng.integers(0, d - 1, size=k), iu)
    return nb[iu], nb[iw]


def _batch_r32(g: Graph, v: int, k: int, rng: np.random.Generator):
    if g.stats(v).two_paths <= 0:
        raise CannotSampleError(f"node {v} has no two-edge walks")
    u = g.neighbors(v)[_weighted_pick(g.acc_degree(v), k, rng)]
    return u, _second_step(g, v, u, rng)


def _batch_r41(g: Graph, v: int, k: int, rng: np.random.Generator):
    if g.stats(v).forked_paths <= 0:
        raise CannotSampleError(f"node {v} has no forked two-edge walks")
    nb = g.neighbors(v)
    iu = _weighted_pick(g.acc_degree(v), k, rng)
    u = nb[iu]
    iw = _skip_one(rng.integers(0, len(nb) - 1, size=k), iu)
    r = _second_step(g, v, u, rng)
    return u, nb[iw], r


def _batch_r42(g: Graph, v: int, k: int, rng: np.random.Generator):
    if g.stats(v).tail_wedges <= 0:
        raise CannotSampleError(f"node {v} has no neighbour with spare pairs")
    u = g.neighbors(v)[_weighted_pick(g.acc_wedge(v), k, rng)]
    du = g.degrees[u]
    pos_v = g.pos_of_many(u, v)
    jw = _skip_one(rng.integers(0, du - 1), pos_v)
    jr = _skip_two(rng.integers(0, du - 2), pos_v, jw)
    start = g.indptr[u]
    return u, g.indices[start + jw], g.indices[start + jr]


def _batch_r43(g: Graph, v: int, k: int, rng: np.random.Generator):
    if g.stats(v).three_walks <= 0:
        raise CannotSampleError(f"node {v} has no three-edge walks")
    u = g.neighbors(v)[_weighted_pick(g.acc_walk(v), k, rng)]
    w = np.empty(k, dtype=np.int64)
    # The degree-weighted step around u excludes v's block; draws are grouped
    # by distinct u so each group shares one cumulative array.
    for x in np.unique(u):
        sel = np.nonzero(u == x)[0]
        acc = g.acc_degree(int(x))
        pos = g.pos_of(int(x), v)
        lo = int(acc[pos - 1]) if pos > 0 else 0
        block = int(acc[pos]) - lo
        rnd = rng.integers(1, int(acc[-1]) - block + 1, size=len(sel))
        rnd = np.where(rnd > lo, rnd + block, rnd)
        w[sel] = g.neighbors(int(x))[np.searchsorted(acc, rnd, side="left")]
    dw = g.degrees[w]
    pos_u = np.searchsorted(g._edge_keys, w * g.node_count + u) - g.indptr[w]
    j = _skip_one(rng.integers(0, dw - 1), pos_u)
    r = g.indices[g.indptr[w] + j]
    return u, w, r


def _batch_r44(g: Graph, v: int, k: int, rng: np.random.Generator):
    nb = g.neighbors(v)
    d = len(nb)
    if d < 3:
        raise CannotSampleError(f"node {v} has degree {d} < 3")
    iu = rng.integers(0, d, size=k)
    iw = _skip_one(rng.integers(0, d - 1, size=k), iu)
    ir = _skip_two(rng.integers(0, d - 2, size=k), iu, iw)
    return nb[iu], nb[iw], nb[ir]


_BATCHERS = {
    "R31": _batch_r31,
    "R32": _batch_r32,
    "R41": _batch_r41,
    "R42": _batch_r42,
    "R43": _batch_r43,
    "R44": _batch_r44,
}


def draw_batch(g: Graph, v: int, method: str, k: int, rng: np.random.Generator):
    """Draw ``k`` subgraphs at once; returns the member columns after v."""
    return _BATCHERS[method](g, v, k, rng)


def sample_members(
    g: Graph, v: int, method: str, k: int, rng: np.random.Generator
) -> np.ndarray:
    """Member matrix of ``k`` draws: column 0 is the anchor.

    Degenerate draws repeat a member; callers that need sets should
    deduplicate per row.
    """
    cols = draw_batch(g, v, method, k, rng)
    out = np.empty((k, 1 + len(cols)), dtype=np.int64)
    out[:, 0] = v
    for i, c in enumerate(cols):
        out[:, 1 + i] = c
    return out


def tally_orbits(
    g: Graph, v: int, method: str, k: int, rng: np.random.Generator,
    directed: bool = False,
) -> np.ndarray:
    """Histogram of anchor orbits over ``k`` draws of one route.

    Undirected tallies have length 15 (index = orbit id); directed tallies
    have length 31 and are only defined for the 3-node routes.
    """
    cols = draw_batch(g, v, method, k, rng)
    if method == "R31":
        orbits = classify_wedge_batch(g, v, cols[0], cols[1], directed)
    elif method == "R32":
        orbits = classify_chain_batch(g, v, cols[0], cols[1], directed)
    else:
        if directed:
            raise ValueError(f"{method} tallies are undirected only")
        orbits = classify_quad_batch(g, method, v, *cols)
    return np.bincount(orbits, minlength=31 if directed else 15)
