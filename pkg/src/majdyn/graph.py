"""Immutable undirected simple graphs with exact structural queries.

A Graph is stored twice: as a canonical edge list (u < v, lexicographically
ascending) and as a CSR-style neighbor table with sorted rows.  Both views
are plain numpy arrays; every operation here is a pure function of them.
Node ids are always dense integers 0..n-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

__all__ = [
    "Graph",
    "DegreeStats",
    "build_graph",
    "union",
    "degree_stats",
    "top_degree_nodes",
    "edges_between",
    "spectral_expansion",
    "as_node_ids",
    "is_connected",
]


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph. Construct via build_graph(), not directly."""

    n: int
    edge_u: np.ndarray  # edge_u[k] < edge_v[k], rows lexsorted ascending
    edge_v: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray

    @property
    def m(self) -> int:
        return int(self.edge_u.shape[0])

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, v) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @cached_property
    def _row_of_slot(self) -> np.ndarray:
        # row id for every slot of `indices`; lets set queries vectorize
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)

    def edge_codes(self) -> np.ndarray:
        return self.edge_u * np.int64(self.n) + self.edge_v

    def to_edge_list_text(self) -> str:
        """Canonical serialization: one 'u v' per line, u < v, ascending."""
        lines = [f"{int(u)} {int(v)}\n" for u, v in zip(self.edge_u, self.edge_v)]
        return "".join(lines)

    def equals(self, other: "Graph") -> bool:
        """Exact labeled-graph equality (same n, same edge set)."""
        return (
            self.n == other.n
            and self.m == other.m
            and bool(np.array_equal(self.edge_u, other.edge_u))
            and bool(np.array_equal(self.edge_v, other.edge_v))
        )


@dataclass(frozen=True)
class DegreeStats:
    n: int
    m: int
    avg_degree: Fraction
    min_degree: int
    max_degree: int


def _from_codes(n: int, codes: np.ndarray) -> Graph:
    """Build a Graph from unique-or-not edge codes u*n+v with u < v."""
    codes = np.unique(codes.astype(np.int64, copy=False))
    u = codes // n
    v = codes % n
    src = np.concatenate([u, v])
    dst = np.concatenate([v, u])
    order = np.lexsort((dst, src))
    indices = dst[order]
    deg = np.bincount(src, minlength=n)
    indptr = np.concatenate([np.zeros(1, dtype=np.int64), np.cumsum(deg)])
    return Graph(n=int(n), edge_u=u, edge_v=v, indptr=indptr, indices=indices)


def build_graph(n: int, edges) -> Graph:
    """Build a simple graph on nodes 0..n-1 from an iterable of pairs.

    Self-loops are dropped, duplicate and reversed pairs collapse to one
    undirected edge.  Endpoints outside [0, n) raise ValueError.
    """
    if n < 0:
        raise ValueError(f"node count must be non-negative, got {n}")
    arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                     dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("edges must be pairs")
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise ValueError(f"edge endpoint out of range [0, {n})")
    u = arr.min(axis=1)
    v = arr.max(axis=1)
    keep = u != v
    codes = u[keep] * np.int64(n) + v[keep]
    return _from_codes(n, codes)


def union(g1: Graph, g2: Graph) -> Graph:
    """Edge-set union of two graphs over the same node set."""
    if g1.n != g2.n:
        raise ValueError(f"node counts differ: {g1.n} != {g2.n}")
    return _from_codes(g1.n, np.union1d(g1.edge_codes(), g2.edge_codes()))


def degree_stats(g: Graph) -> DegreeStats:
    if g.n < 1:
        raise ValueError("degree stats need at least one node")
    deg = g.degrees
    return DegreeStats(
        n=g.n,
        m=g.m,
        avg_degree=Fraction(2 * g.m, g.n),
        min_degree=int(deg.min()),
        max_degree=int(deg.max()),
    )


def as_node_ids(n: int, ids) -> np.ndarray:
    """Validate and normalize a node set: sorted distinct ids in [0, n)."""
    arr = np.unique(np.asarray(ids, dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise ValueError(f"node id out of range [0, {n})")
    return arr


def top_degree_nodes(g: Graph, k: int) -> np.ndarray:
    """The k nodes of highest degree (ties by lowest id), sorted by id."""
    if not 0 <= k <= g.n:
        raise ValueError(f"k must be in [0, {g.n}], got {k}")
    order = np.lexsort((np.arange(g.n), -g.degrees))
    return np.sort(order[:k])


def top_degree_order(g: Graph) -> np.ndarray:
    """All nodes ordered by (degree desc, id asc); prefix k = top-k set."""
    return np.lexsort((np.arange(g.n), -g.degrees))


def edges_between(g: Graph, s1, s2) -> int:
    """Number of ordered pairs (v, u) with v in s1, u in s2, {v,u} an edge.

    An edge with both endpoints in the intersection contributes 2.
    """
    s1 = as_node_ids(g.n, s1)
    s2 = as_node_ids(g.n, s2)
    in1 = np.zeros(g.n, dtype=bool)
    in2 = np.zeros(g.n, dtype=bool)
    in1[s1] = True
    in2[s2] = True
    return int(np.count_nonzero(in1[g._row_of_slot] & in2[g.indices]))


def _gather_neighbors(g: Graph, frontier: np.ndarray) -> np.ndarray:
    counts = g.degrees[frontier]
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    starts = g.indptr[frontier]
    ends = np.cumsum(counts)
    pos = np.arange(total) - np.repeat(ends - counts, counts) + np.repeat(starts, counts)
    return g.indices[pos]


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    visited = np.zeros(g.n, dtype=bool)
    visited[0] = True
    frontier = np.array([0], dtype=np.int64)
    seen = 1
    while frontier.size:
        nbrs = _gather_neighbors(g, frontier)
        nbrs = nbrs[~visited[nbrs]]
        if nbrs.size == 0:
            break
        frontier = np.unique(nbrs)
        visited[frontier] = True
        seen += frontier.size
    return seen == g.n


def spectral_expansion(g: Graph, tol: float = 1e-9, max_iter: int = 100_000,
                       seed: int = 0) -> float:
    """Second-largest absolute eigenvalue of the normalized adjacency matrix.

    Uses power iteration on the squared operator after deflating the top
    eigenvector (D^{1/2}1, eigenvalue 1), so eigenvalue pairs +/-s on
    near-bipartite graphs still converge.  Iteration stops when successive
    Rayleigh-quotient estimates differ by less than `tol`.

    Requires a connected graph with minimum degree >= 1.
    """
    if g.n < 2:
        raise ValueError("spectral expansion needs at least two nodes")
    deg = g.degrees.astype(np.float64)
    if deg.min() < 1:
        raise ValueError("graph has an isolated node")
    if not is_connected(g):
        raise ValueError("graph is disconnected")
    sq = np.sqrt(deg)
    eu, ev = g.edge_u, g.edge_v
    n = g.n

    def matvec(x):
        z = x / sq
        y = (np.bincount(eu, weights=z[ev], minlength=n)
             + np.bincount(ev, weights=z[eu], minlength=n))
        return y / sq

    v1 = sq / np.linalg.norm(sq)

    def deflated(x):
        y = matvec(x)
        y -= (v1 @ y) * v1
        return y

    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    x -= (v1 @ x) * v1
    nx = np.linalg.norm(x)
    if nx == 0.0:
        return 0.0
    x /= nx
    prev = np.inf
    est = 0.0
    for _ in range(max_iter):
        y = deflated(x)
        est = float(np.linalg.norm(y))  # Rayleigh sqrt(x.B^2 x) for unit x
        if est == 0.0:
            return 0.0
        w = deflated(y)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return est
        x = w / nw
        x -= (v1 @ x) * v1
        x /= np.linalg.norm(x)
        if abs(est - prev) < tol:
            return est
        prev = est
    import warnings

    warnings.warn(f"spectral_expansion: no convergence after {max_iter} iterations")
    return est
