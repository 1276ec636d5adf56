"""Random graph generators with deterministic seeding.

Every generator is a pure function of its parameters including the seed:
the same GenSpec always yields the same canonical edge list.  All RNG goes
through numpy's PCG64.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .graph import Graph, DegreeStats, _from_codes, build_graph

log = logging.getLogger(__name__)

FAMILIES = ("er", "rrg", "pa", "hrg", "cycle")


class CalibrationError(RuntimeError):
    """Raised when hyperbolic radius calibration cannot hit the target degree."""


@dataclass(frozen=True)
class GenSpec:
    """Parameters for one generated graph; unused fields stay None.

    family: one of "er", "rrg", "pa", "hrg", "cycle"
    q: edge probability (er)
    d: degree (rrg)
    m_out: edges per arriving node (pa)
    target_avg_deg, beta, temperature: hyperbolic parameters (hrg)
    """

    family: str
    n: int
    seed: int = 0
    q: Optional[float] = None
    d: Optional[int] = None
    m_out: Optional[int] = None
    target_avg_deg: Optional[float] = None
    beta: Optional[float] = None
    temperature: Optional[float] = None


def generate(spec: GenSpec) -> Graph:
    """Dispatch a GenSpec to the matching generator."""
    if spec.family == "er":
        return gen_er(spec.n, spec.q, spec.seed)
    if spec.family == "rrg":
        return gen_rrg(spec.n, spec.d, spec.seed)
    if spec.family == "pa":
        return gen_pa(spec.n, spec.m_out, spec.seed)
    if spec.family == "hrg":
        beta = 2.5 if spec.beta is None else spec.beta
        temperature = 0.6 if spec.temperature is None else spec.temperature
        return gen_hrg(spec.n, spec.target_avg_deg, beta, temperature, spec.seed)
    if spec.family == "cycle":
        return gen_cycle(spec.n)
    raise ValueError(f"unknown family {spec.family!r}")


def _decode_pair_index(k: np.ndarray, n: int):
    """Map lexicographic pair index k to (i, j), i < j, exactly.

    Pairs are ordered (0,1),(0,2),..,(0,n-1),(1,2),..; row i starts at
    offset i*(2n-i-1)/2.  A float sqrt gives the row up to +-1; two exact
    integer correction passes pin it down.
    """
    k = k.astype(np.int64)
    b = 2 * n - 1
    i = ((b - np.sqrt(b * b - 8.0 * k)) / 2.0).astype(np.int64)
    i = np.clip(i, 0, n - 2)

    def row_start(i):
        return i * (2 * n - i - 1) // 2

    for _ in range(3):
        too_high = row_start(i) > k
        i = np.where(too_high, i - 1, i)
        too_low = (i < n - 2) & (row_start(i + 1) <= k)
        i = np.where(too_low, i + 1, i)
        if not (too_high.any() or too_low.any()):
            break
    j = k - row_start(i) + i + 1
    return i, j


def gen_er(n: int, q: float, seed: int = 0) -> Graph:
    """Erdos-Renyi G(n, q): each of the n(n-1)/2 pairs kept with probability q.

    Sampling skips between kept pairs with geometric jumps, so the cost is
    O(m) rather than O(n^2).
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"edge probability must be in [0, 1], got {q}")
    total = n * (n - 1) // 2
    if total == 0 or q == 0.0:
        return build_graph(n, [])
    if q == 1.0:
        i, j = _decode_pair_index(np.arange(total, dtype=np.int64), n)
        return _from_codes(n, i * np.int64(n) + j)
    rng = np.random.default_rng(seed)
    chunk = max(1024, int(total * q * 1.2))
    chunk = min(chunk, 4_000_000)
    picked = []
    last = -1
    while last < total:
        gaps = rng.geometric(q, size=chunk).astype(np.int64)
        pos = last + np.cumsum(gaps)
        picked.append(pos[pos < total])
        last = int(pos[-1])
    ks = np.concatenate(picked)
    if ks.size == 0:
        return build_graph(n, [])
    i, j = _decode_pair_index(ks, n)
    return _from_codes(n, i * np.int64(n) + j)


def _suitable(leftover_nodes, edges: set, n: int) -> bool:
    """True if some pair of distinct leftover stubs is not yet an edge."""
    uniq = sorted(set(leftover_nodes))
    if len(uniq) < 2:
        return False
    for a in range(len(uniq)):
        for b in range(a + 1, len(uniq)):
            u, v = uniq[a], uniq[b]
            if u * n + v not in edges:
                return True
    return False


def gen_rrg(n: int, d: int, seed: int = 0, strategy: str = "repair") -> Graph:
    """Random d-regular graph via the configuration (pairing) model.

    strategy="repair" (default) keeps successfully matched stubs and
    reshuffles only the colliding ones, restarting when no suitable pair
    remains.  strategy="restart" throws everything away on any collision;
    it is only viable for small d (success probability ~exp((1-d^2)/4)).
    """
    if d < 0 or n < 0:
        raise ValueError("n and d must be non-negative")
    if d >= n and not (d == 0 and n <= 1):
        raise ValueError(f"degree {d} needs at least {d + 1} nodes, got {n}")
    if (n * d) % 2 != 0:
        raise ValueError(f"n*d must be even, got n={n}, d={d}")
    if strategy not in ("repair", "restart"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if d == 0:
        return build_graph(n, [])
    rng = np.random.default_rng(seed)
    base = np.repeat(np.arange(n, dtype=np.int64), d)
    for _restart in range(10_000):
        edges: set = set()
        stubs = base.copy()
        stalls = 0
        while stubs.size:
            rng.shuffle(stubs)
            leftover = []
            progress = 0
            for idx in range(0, stubs.size, 2):
                u = int(stubs[idx])
                v = int(stubs[idx + 1])
                if u > v:
                    u, v = v, u
                code = u * n + v
                if u == v or code in edges:
                    leftover.append(u)
                    leftover.append(v)
                else:
                    edges.add(code)
                    progress += 1
            if strategy == "restart" and leftover:
                break
            if progress == 0:
                stalls += 1
                if stalls > 20 and not _suitable(leftover, edges, n):
                    break
                if stalls > 2000:
                    break
            else:
                stalls = 0
            stubs = np.asarray(leftover, dtype=np.int64)
        if stubs.size == 0:
            return _from_codes(n, np.fromiter(edges, dtype=np.int64, count=len(edges)))
    raise RuntimeError(f"pairing model failed to produce a simple {d}-regular graph")


def gen_pa(n: int, m_out: int, seed: int = 0) -> Graph:
    """Preferential attachment: start from a clique on m_out+1 nodes, then
    each arriving node attaches m_out distinct edges to existing nodes with
    probability proportional to their current degree.

    Total edge count is exactly C(m_out+1, 2) + (n - m_out - 1) * m_out.
    """
    if m_out < 1:
        raise ValueError(f"m_out must be >= 1, got {m_out}")
    if n <= m_out:
        raise ValueError(f"n must exceed m_out, got n={n}, m_out={m_out}")
    rng = np.random.default_rng(seed)
    c = m_out + 1
    m_total = c * (c - 1) // 2 + (n - c) * m_out
    eu = np.empty(m_total, dtype=np.int64)
    ev = np.empty(m_total, dtype=np.int64)
    # repeated-endpoint pool: sampling uniformly from it is degree-proportional
    pool = np.empty(2 * m_total, dtype=np.int64)
    e = 0
    fill = 0
    for a in range(c):
        for b in range(a + 1, c):
            eu[e] = a
            ev[e] = b
            e += 1
            pool[fill] = a
            pool[fill + 1] = b
            fill += 2
    for t in range(c, n):
        picks = set()
        while len(picks) < m_out:
            need = m_out - len(picks)
            cand = pool[rng.integers(0, fill, size=need)]
            picks.update(int(x) for x in cand)
        for u in picks:
            eu[e] = u
            ev[e] = t
            e += 1
            pool[fill] = u
            pool[fill + 1] = t
            fill += 2
    return build_graph(n, np.column_stack([eu, ev]))


def _hyperbolic_radii(u: np.ndarray, alpha: float, radius: float) -> np.ndarray:
    # inverse CDF of density alpha*sinh(alpha*r)/(cosh(alpha*R)-1) on [0, R]
    return np.arccosh(1.0 + u * (np.cosh(alpha * radius) - 1.0)) / alpha


def _pair_connect_prob(cr, sr, theta, i_idx, j_idx, radius, temperature):
    cosd = (cr[i_idx] * cr[j_idx]
            - sr[i_idx] * sr[j_idx] * np.cos(theta[i_idx] - theta[j_idx]))
    dist = np.arccosh(np.maximum(cosd, 1.0))
    return 1.0 / (1.0 + np.exp((dist - radius) / (2.0 * temperature)))


def gen_hrg(n: int, target_avg_deg: float, beta: float = 2.5,
            temperature: float = 0.6, seed: int = 0) -> Graph:
    """Hyperbolic random graph with a calibrated disk radius.

    Nodes get a uniform angle and a radius with density
    alpha*sinh(alpha*r)/(cosh(alpha*R)-1), alpha=(beta-1)/2; pairs connect
    with probability 1/(1+exp((d_H(u,v)-R)/(2T))).  R is found by bisection
    (common random numbers across steps) so the realized average degree
    lands within 10% of target; CalibrationError after 40 steps.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if beta <= 2.0:
        raise ValueError(f"beta must exceed 2, got {beta}")
    if not 0.0 < temperature < 1.0:
        raise ValueError(f"temperature must be in (0, 1), got {temperature}")
    if not 0.0 < target_avg_deg < n:
        raise ValueError(f"target average degree must be in (0, n), got {target_avg_deg}")
    alpha = (beta - 1.0) / 2.0
    rng = np.random.default_rng(seed)
    u_r = rng.random(n)
    theta = rng.random(n) * (2.0 * math.pi)

    total = n * (n - 1) // 2
    n_sample = int(min(total, 2_000_000))
    if n_sample == total:
        ks = np.arange(total, dtype=np.int64)
    else:
        ks = rng.integers(0, total, size=n_sample)
    si, sj = _decode_pair_index(ks, n)

    def est_avg_deg(radius):
        r = _hyperbolic_radii(u_r, alpha, radius)
        p = _pair_connect_prob(np.cosh(r), np.sinh(r), theta, si, sj,
                               radius, temperature)
        return float(p.mean()) * (n - 1)

    lo, hi = 1e-3, 2.0 * math.log(n) + 10.0
    while est_avg_deg(hi) > target_avg_deg:
        hi *= 1.5
        if hi > 1e4:
            raise CalibrationError("target degree unreachable at any radius")
    if est_avg_deg(lo) < target_avg_deg:
        raise CalibrationError("target degree exceeds what a tiny disk gives")
    radius = None
    for _step in range(40):
        mid = 0.5 * (lo + hi)
        est = est_avg_deg(mid)
        if abs(est - target_avg_deg) <= 0.03 * target_avg_deg:
            radius = mid
            break
        if est > target_avg_deg:
            lo = mid
        else:
            hi = mid
    if radius is None:
        raise CalibrationError(
            f"radius calibration missed target {target_avg_deg} after 40 steps")
    log.info("hrg calibrated: n=%d alpha=%.4f R=%.6f est_avg_deg=%.3f",
             n, alpha, radius, est)

    r = _hyperbolic_radii(u_r, alpha, radius)
    cr, sr = np.cosh(r), np.sinh(r)
    rows = []
    cols = []
    for i in range(n - 1):
        j = np.arange(i + 1, n)
        p = _pair_connect_prob(cr, sr, theta, np.full(j.shape, i), j,
                               radius, temperature)
        hit = j[rng.random(j.size) < p]
        if hit.size:
            rows.append(np.full(hit.size, i, dtype=np.int64))
            cols.append(hit.astype(np.int64))
    if rows:
        eu = np.concatenate(rows)
        ev = np.concatenate(cols)
        g = _from_codes(n, eu * np.int64(n) + ev)
    else:
        g = build_graph(n, [])
    realized = 2.0 * g.m / n
    if abs(realized - target_avg_deg) > 0.10 * target_avg_deg:
        raise CalibrationError(
            f"realized avg degree {realized:.3f} misses target {target_avg_deg} by >10%")
    return g


def gen_cycle(n: int) -> Graph:
    """Cycle graph C_n (n >= 3), node i adjacent to (i+1) mod n."""
    if n < 3:
        raise ValueError(f"cycle needs n >= 3, got {n}")
    i = np.arange(n - 1, dtype=np.int64)
    codes = np.concatenate([i * n + (i + 1), np.array([0 * n + (n - 1)], dtype=np.int64)])
    return _from_codes(n, codes)


def match_params(reference: DegreeStats, family: str) -> GenSpec:
    """GenSpec whose family matches the reference graph's size and density.

    er: q = 2m / (n(n-1)); rrg: d = round(avg) adjusted so n*d is even;
    pa: m_out = max(1, round(avg/2)); hrg: target = avg, beta 2.5, T 0.6.
    """
    n = reference.n
    avg = reference.avg_degree
    if family == "er":
        if n < 2:
            raise ValueError("er matching needs n >= 2")
        return GenSpec(family="er", n=n, q=float(Fraction(2 * reference.m, n * (n - 1))))
    if family == "rrg":
        d = round(avg)
        if (n * d) % 2 != 0:
            d += 1
        return GenSpec(family="rrg", n=n, d=d)
    if family == "pa":
        return GenSpec(family="pa", n=n, m_out=max(1, round(avg / 2)))
    if family == "hrg":
        return GenSpec(family="hrg", n=n, target_avg_deg=float(avg),
                       beta=2.5, temperature=0.6)
    if family == "cycle":
        return GenSpec(family="cycle", n=n)
    raise ValueError(f"unknown family {family!r}")
