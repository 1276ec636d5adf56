"""Slow reference implementations used to cross-check the fast engine.

Everything here favors clarity over speed: list adjacency, explicit per-node
loops, Fraction arithmetic for every threshold comparison.  Nothing touches
the engine's vectorized internals, so agreement between the two routes is
meaningful evidence rather than a tautology.
"""

import math
from fractions import Fraction

import numpy as np

from majdyn import ModelConfig, Variant


def edge_pairs(g):
    """Undirected edge list of a Graph as plain python int pairs."""
    return list(zip(g.edge_u.tolist(), g.edge_v.tolist()))


def adjacency(n, edges):
    nbrs = [[] for _ in range(n)]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    return nbrs


def _to_frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(repr(float(x)))


def _rule_table(n, config: ModelConfig):
    """Per-node (threshold fraction, strict?) pairs for black and white nodes.

    Mirrors the documented model semantics from scratch: plain majority is a
    strict one-half test, a stubbornness factor replaces it with a non-strict
    gamma test, and the two-threshold variant uses non-strict psi1 for black
    nodes and psi2 for white nodes.
    """
    if config.variant == Variant.PSI:
        psi1, psi2 = (_to_frac(t) for t in config.thresholds)
        black = [(psi1, False)] * n
        white = [(psi2, False)] * n
        return black, white
    black = [(Fraction(1, 2), True)] * n
    st = config.stubbornness
    if st is not None:
        if isinstance(st, dict):
            items = {int(v): _to_frac(gv) for v, gv in st.items()}
        elif isinstance(st, (Fraction, int, float, str)):
            items = {v: _to_frac(st) for v in range(n)}
        else:
            items = {v: _to_frac(gv) for v, gv in enumerate(st)
                     if gv is not None}
        for v, gamma in items.items():
            black[v] = (gamma, False)
    return black, list(black)


def naive_step(n, edges, coloring, config: ModelConfig):
    """One synchronous round computed node by node with exact fractions."""
    nbrs = adjacency(n, edges)
    r = ([1] * n if config.influence is None
         else [int(x) for x in config.influence])
    rule_black, rule_white = _rule_table(n, config)
    cur = [int(b) for b in coloring]
    nxt = list(cur)
    for v in range(n):
        w_total = sum(r[u] for u in nbrs[v])
        if w_total == 0:
            continue
        w_opp = sum(r[u] for u in nbrs[v] if cur[u] != cur[v])
        threshold, strict = rule_black[v] if cur[v] == 1 else rule_white[v]
        share = Fraction(w_opp, w_total)
        flips = share > threshold if strict else share >= threshold
        if flips:
            nxt[v] = 1 - cur[v]
    return nxt


def naive_run(n, edges, coloring0, config: ModelConfig, max_rounds=10_000):
    """Iterate naive_step until a period-1 or period-2 cycle appears.

    Returns (stabilization_time, period, trajectory) where trajectory holds
    every coloring from round 0 through the first repeated one.
    """
    history = [[int(b) for b in coloring0]]
    for t in range(1, max_rounds + 1):
        history.append(naive_step(n, edges, history[-1], config))
        if history[-1] == history[-2]:
            return t - 1, 1, history
        if t >= 2 and history[-1] == history[-3]:
            return t - 2, 2, history
    raise RuntimeError(f"no cycle within {max_rounds} rounds")


def naive_tally(n, edges, coloring, config: ModelConfig, v):
    nbrs = adjacency(n, edges)
    r = ([1] * n if config.influence is None
         else [int(x) for x in config.influence])
    w_total = sum(r[u] for u in nbrs[v])
    w_opp = sum(r[u] for u in nbrs[v] if int(coloring[u]) != int(coloring[v]))
    return w_opp, w_total


def naive_bichromatic(edges, coloring):
    return sum(1 for u, v in edges if int(coloring[u]) != int(coloring[v]))


def naive_edges_between(edges, s1, s2):
    """Ordered-pair edge count e(S1, S2) by brute force."""
    a, b = set(map(int, s1)), set(map(int, s2))
    total = 0
    for u, v in edges:
        if u in a and v in b:
            total += 1
        if v in a and u in b:
            total += 1
    return total


def naive_sigma(n, edges):
    """Second-largest |eigenvalue| of the normalized adjacency, via eigvalsh.

    D^{-1/2} A D^{-1/2} coincides with A/d on regular graphs, so this serves
    as the dense-solver cross-check for both cases.
    """
    adj = np.zeros((n, n))
    for u, v in edges:
        adj[u, v] = adj[v, u] = 1.0
    d = adj.sum(axis=1)
    if d.min() < 1:
        raise ValueError("naive_sigma expects minimum degree >= 1")
    scale = 1.0 / np.sqrt(d)
    lam = np.linalg.eigvalsh(adj * scale[:, None] * scale[None, :])
    lam = np.sort(np.abs(lam))[::-1]
    return float(lam[1])


def naive_longest_alternating(coloring):
    """Longest alternating node run around the cycle, by doubling the ring."""
    c = [int(b) for b in coloring]
    n = len(c)
    if n == 0:
        return 0, False
    ring = c + c
    best = 1
    length = 1
    for i in range(1, len(ring)):
        length = length + 1 if ring[i] != ring[i - 1] else 1
        best = max(best, length)
    if best >= n:
        # fully alternating even cycle: every adjacent pair differs
        if all(c[i] != c[(i + 1) % n] for i in range(n)):
            return n, True
        best = min(best, n)
    return best, False


def sampled_clustering(g, sample_size=400, seed=0):
    """Mean local clustering coefficient over a random node sample."""
    rng = np.random.default_rng(seed)
    nbr_sets = {}
    nodes = rng.choice(g.n, size=min(sample_size, g.n), replace=False)
    total = 0.0
    counted = 0
    for v in nodes:
        nv = g.neighbors(int(v))
        k = len(nv)
        if k < 2:
            continue
        sv = set(nv.tolist())
        links = 0
        for u in nv:
            u = int(u)
            if u not in nbr_sets:
                nbr_sets[u] = set(g.neighbors(u).tolist())
            links += len(nbr_sets[u] & sv)
        total += links / (k * (k - 1))
        counted += 1
    return total / counted if counted else 0.0


def naive_spine_weight(d, psi, n):
    """Self-loop weight of the lift, recomputed from its defining cases."""
    psi = _to_frac(psi)
    if (psi * d).denominator == 1:
        return 2 * psi * d - d - Fraction(1, 2)
    return 2 * math.floor(psi * d) - d + 1 - Fraction(1, 4 * n)


def naive_lift_potential(g, psi, lift_coloring):
    """Potential of a lift coloring, summed edge by edge with Fractions.

    The lift places x_i on the odd side and y_i on the even side; each G-edge
    {i, j} contributes unit-weight pairs {x_i, y_j} and {x_j, y_i}, and each
    node adds a spine edge {x_i, y_i} with the threshold-dependent weight.
    Returns (phi1, phi2, phi).
    """
    n = g.n
    cx = [int(b) for b in lift_coloring[:n]]
    cy = [int(b) for b in lift_coloring[n:]]
    phi1 = Fraction(0)
    for u, v in edge_pairs(g):
        if cx[u] != cy[v]:
            phi1 += 1
        if cx[v] != cy[u]:
            phi1 += 1
    phi2 = 0
    for i in range(n):
        if cx[i] != cy[i]:
            phi2 += 1
            phi1 += naive_spine_weight(int(g.degree(i)), psi, n)
    return phi1, phi2, phi1 + Fraction(phi2, 2)
