"""Exact stabilization certificates via a weighted bipartite lift.

For the symmetric two-threshold model (both thresholds equal, no influence
or stubbornness) the dynamics on G embed into a periodic weighted majority
process on a bipartite double cover H: sides X and Y carry one copy of each
node, every edge {v_i, v_j} of G becomes {x_i, y_j} and {x_j, y_i} with
weight 1, and a spine edge {x_i, y_i} gets weight

    2*t*d(v_i) - d(v_i) - 1/2            if t*d(v_i) is an integer,
    2*floor(t*d(v_i)) - d(v_i) + 1 - 1/(4n)   otherwise,

where t is the threshold.  Odd rounds update X from Y, even rounds update Y
from X; the weights are chosen so a weighted tie is impossible.  The
potential

    phi = (weight of bichromatic H-edges) + (bichromatic spine count) / 2

starts at exactly twice the initial bichromatic edge count of G, never goes
below -1/4, and never increases.  The working part is the bichromatic weight
phi1 on its own: the weights are quantized so that every flip clears its
weighted majority by a margin of at least 1/2, hence phi1 drops by at least
(number of flips)/2 in every round.  Together with the fact that one
flip-free round freezes the process for good, that caps the total number of
flips, and with it the fixation time, at 4*m_star, and leaves G in a cycle
of period 1 or 2.  All arithmetic is exact: weights are stored as integers
scaled by 4n and potentials as Fractions.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .dynamics import (
    HALF,
    ModelConfig,
    Variant,
    _bind,
    _step_bound,
    count_bichromatic,
    exact_fraction,
)
from .graph import Graph, build_graph


class PeriodicTieError(RuntimeError):
    """A weighted tie in the lifted process: internal invariant violation."""

    def __init__(self, side, node, black_scaled, white_scaled):
        super().__init__(
            f"tie at {side}-side node {node}: "
            f"scaled tallies black={black_scaled} white={white_scaled}")
        self.side = side
        self.node = node


@dataclass(frozen=True)
class WeightedBipartiteGraph:
    """The lift of G: CSR rows of G are reused for both sides; spine weights
    are stored as integers scaled by 4n (non-spine weight 1 scales to 4n)."""

    g: Graph
    threshold: Fraction
    scale: int                 # 4n
    spine_scaled: np.ndarray   # spine_scaled[i] = 4n * w(x_i, y_i), exact

    @property
    def n(self) -> int:
        return self.g.n

    def spine_weight(self, i: int) -> Fraction:
        return Fraction(int(self.spine_scaled[i]), self.scale)


def build_lifted_graph(g: Graph, threshold) -> WeightedBipartiteGraph:
    """Construct the weighted bipartite lift for threshold in (1/2, 1].

    Every node must have degree >= 1 (strip isolated nodes first)."""
    t = exact_fraction(threshold)
    if not (HALF < t <= 1):
        raise ValueError(f"threshold must lie in (1/2, 1], got {t}")
    if g.n < 1:
        raise ValueError("empty graph")
    deg = g.degrees
    if deg.min() < 1:
        raise ValueError("degree-0 node: strip isolated nodes before lifting")
    n = g.n
    scale = 4 * n
    spine = np.empty(n, dtype=np.int64)
    for i in range(n):
        d = int(deg[i])
        td = t * d
        if td.denominator == 1:
            w = 2 * td - d - HALF
        else:
            w = 2 * (td.numerator // td.denominator) - d + 1 - Fraction(1, scale)
        ws = w * scale
        assert ws.denominator == 1
        spine[i] = int(ws)
    return WeightedBipartiteGraph(g=g, threshold=t, scale=scale, spine_scaled=spine)


def periodic_step(h: WeightedBipartiteGraph, coloring: np.ndarray,
                  round_index: int) -> np.ndarray:
    """One round of the periodic weighted majority on H.

    coloring has 2n entries: X side first, then Y.  Odd rounds update X from
    Y, even rounds update Y from X; the inactive side is copied through.
    Raises PeriodicTieError on a weighted tie (provably impossible)."""
    n = h.n
    c = np.asarray(coloring, dtype=np.uint8)
    if c.shape != (2 * n,):
        raise ValueError(f"lift coloring must have 2n={2 * n} entries")
    g = h.g
    if round_index % 2 == 1:
        active, other, side = c[:n], c[n:], "X"
    else:
        active, other, side = c[n:], c[:n], "Y"
    oth = other.astype(np.int64)
    black_cnt = (np.bincount(g.edge_u, weights=oth[g.edge_v].astype(np.float64),
                             minlength=n)
                 + np.bincount(g.edge_v, weights=oth[g.edge_u].astype(np.float64),
                               minlength=n)).astype(np.int64)
    deg = g.degrees
    black_scaled = h.scale * black_cnt + h.spine_scaled * oth
    white_scaled = h.scale * (deg - black_cnt) + h.spine_scaled * (1 - oth)
    ties = black_scaled == white_scaled
    if ties.any():
        i = int(np.flatnonzero(ties)[0])
        raise PeriodicTieError(side, i, int(black_scaled[i]), int(white_scaled[i]))
    new_active = (black_scaled > white_scaled).astype(np.uint8)
    out = c.copy()
    if round_index % 2 == 1:
        out[:n] = new_active
    else:
        out[n:] = new_active
    return out


@dataclass(frozen=True)
class PotentialValue:
    phi1: Fraction   # weight sum over bichromatic H-edges
    phi2: int        # bichromatic spine count
    phi: Fraction    # phi1 + phi2/2


def potential(h: WeightedBipartiteGraph, coloring: np.ndarray) -> PotentialValue:
    """Exact potential of a lift coloring."""
    n = h.n
    c = np.asarray(coloring, dtype=np.uint8)
    cx, cy = c[:n], c[n:]
    g = h.g
    nonspine = (int(np.count_nonzero(cx[g.edge_u] != cy[g.edge_v]))
                + int(np.count_nonzero(cx[g.edge_v] != cy[g.edge_u])))
    spine_mask = cx != cy
    phi2 = int(np.count_nonzero(spine_mask))
    phi1_scaled = h.scale * nonspine + int(h.spine_scaled[spine_mask].sum())
    phi1 = Fraction(phi1_scaled, h.scale)
    return PotentialValue(phi1=phi1, phi2=phi2, phi=phi1 + Fraction(phi2, 2))


def _strip_isolated(g: Graph):
    deg = g.degrees
    keep = np.flatnonzero(deg > 0)
    if keep.size == g.n:
        return g, None
    relabel = -np.ones(g.n, dtype=np.int64)
    relabel[keep] = np.arange(keep.size)
    edges = np.column_stack([relabel[g.edge_u], relabel[g.edge_v]])
    return build_graph(keep.size, edges), keep


@dataclass
class DescentCertificate:
    """Round-by-round exact record of one certified run.

    ok is True iff every checked fact held: phi starts at 2*m_star, never
    dips below -1/4, never increases, phi1 drops by at least flips/2 in
    every round, no flip ever follows a flip-free round, the process fixes
    within 4*m_star rounds with at most 4*m_star total flips, the projection
    matches the direct two-threshold run on G at every round, and G's final
    period is 1 or 2."""

    m_star: int
    threshold: Fraction
    rounds_to_fixation: Optional[int]
    phi_series: list
    phi2_series: list
    flips_per_round: list
    g_period: Optional[int]
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def certify_descent(g: Graph, threshold, coloring0: np.ndarray,
                    max_rounds: Optional[int] = None) -> DescentCertificate:
    """Run the lifted periodic process and check every descent fact exactly.

    Isolated nodes are stripped first (they never move in either process).
    Raises PeriodicTieError if a weighted tie ever occurs."""
    c_full = np.asarray(coloring0, dtype=np.uint8)
    if c_full.shape != (g.n,):
        raise ValueError(f"coloring must have one entry per node ({g.n})")
    g2, keep = _strip_isolated(g)
    c0 = c_full if keep is None else c_full[keep]
    t = exact_fraction(threshold)
    m_star = count_bichromatic(g2, c0)
    failures = []
    if g2.n == 0:
        return DescentCertificate(m_star, t, 0, [Fraction(0)], [0], [], 1, failures)
    h = build_lifted_graph(g2, t)
    if max_rounds is None:
        max_rounds = 4 * m_star + 6
    config = ModelConfig(variant=Variant.PSI, thresholds=(t, t))
    bound = _bind(g2, config)
    lift = np.concatenate([c0, c0])
    phis = [potential(h, lift)]
    if phis[0].phi != 2 * m_star:
        failures.append(f"phi_0 = {phis[0].phi} != 2*m_star = {2 * m_star}")
    flips = []
    g_side = c0
    last_flip_round = 0
    fixed_at = None
    for rnd in range(1, max_rounds + 1):
        new_lift = periodic_step(h, lift, rnd)
        n_flips = int(np.count_nonzero(new_lift != lift))
        flips.append(n_flips)
        if n_flips > 0:
            last_flip_round = rnd
        lift = new_lift
        phis.append(potential(h, lift))
        g_side = _step_bound(g2, g_side, bound)
        proj = lift[:g2.n] if rnd % 2 == 1 else lift[g2.n:]
        if not np.array_equal(g_side, proj):
            failures.append(f"round {rnd}: projection mismatch with direct run")
            break
        # phi >= -1/4 always (spine edges are the only negative weights,
        # each at least -1/(4n))
        if phis[rnd].phi < Fraction(-1, 4):
            failures.append(f"round {rnd}: phi = {phis[rnd].phi} < -1/4")
        # the blended potential never goes up: a flip costs its margin
        # (>= 1/2) and banks at most +1/2 on its spine
        if phis[rnd].phi > phis[rnd - 1].phi:
            failures.append(
                f"round {rnd}: phi rose {phis[rnd - 1].phi} -> {phis[rnd].phi}")
        # descent engine: every flip strictly clears its weighted majority,
        # and the margin quantization makes each flip cost phi1 at least 1/2
        if phis[rnd].phi1 > phis[rnd - 1].phi1 - Fraction(n_flips, 2):
            failures.append(
                f"round {rnd}: phi1 {phis[rnd - 1].phi1} -> {phis[rnd].phi1} "
                f"dropped less than flips/2 = {Fraction(n_flips, 2)}")
        # a flip-free round freezes the process: the side updated next
        # recomputes from an input identical to its previous one
        if rnd >= 2 and flips[rnd - 2] == 0 and flips[rnd - 1] > 0:
            failures.append(
                f"round {rnd}: flips reappeared after quiet round {rnd - 1}")
        if rnd >= 2 and flips[rnd - 1] == 0 and flips[rnd - 2] == 0:
            fixed_at = last_flip_round
            break
    if fixed_at is None:
        failures.append(f"no fixation within {max_rounds} rounds")
        g_period = None
    else:
        if fixed_at > 4 * m_star:
            failures.append(
                f"fixation took {fixed_at} rounds > 4*m_star = {4 * m_star}")
        if sum(flips) > 4 * m_star:
            failures.append(
                f"{sum(flips)} total flips > 4*m_star = {4 * m_star}")
        nxt = _step_bound(g2, g_side, bound)
        nxt2 = _step_bound(g2, nxt, bound)
        if np.array_equal(nxt, g_side):
            g_period = 1
        elif np.array_equal(nxt2, g_side):
            g_period = 2
        else:
            g_period = None
            failures.append("direct run is not in a period-1/2 cycle at fixation")
    return DescentCertificate(
        m_star=m_star,
        threshold=t,
        rounds_to_fixation=fixed_at,
        phi_series=[p.phi for p in phis],
        phi2_series=[p.phi2 for p in phis],
        flips_per_round=flips,
        g_period=g_period,
        failures=failures,
    )


def write_certificate_csv(cert: DescentCertificate, path) -> None:
    """Dump the round-by-round certificate: t, phi1_num, phi1_den, phi2, flips."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "phi1_num", "phi1_den", "phi2", "flips"])
        for t_idx, phi in enumerate(cert.phi_series):
            phi1 = phi - Fraction(cert.phi2_series[t_idx], 2)
            fl = cert.flips_per_round[t_idx - 1] if t_idx >= 1 else 0
            w.writerow([t_idx, phi1.numerator, phi1.denominator,
                        cert.phi2_series[t_idx], fl])
