"""Synchronous two-color threshold dynamics on graphs.

Colorings are uint8 arrays (1 = black, 0 = white).  Every node updates
simultaneously from its neighbors' colors.  Supported rules:

- plain majority: flip iff the opposite color holds strictly more than half
  of the neighbor weight (ties keep the current color);
- two-threshold variant ("psi"): a black node flips iff at least
  thresholds[0] of the neighbor weight is white, a white node iff at least
  thresholds[1] is black, thresholds in (1/2, 1];
- stubbornness: node v flips iff at least gamma(v) of the neighbor weight
  is opposite, gamma(v) in (0, 1); nodes without a gamma use plain majority.

A neighbor u contributes weight influence[u] (the neighbor's own factor) to
every tally it appears in; a node's factor never enters its own update.
All threshold comparisons are exact integer cross-multiplications, never
floating point.  Degree-0 nodes never change.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .graph import Graph


class Variant(Enum):
    MAJORITY = "majority"
    PSI = "psi"


class OutcomeLabel(Enum):
    BLACK_TAKES_OVER = "black_takes_over"
    WHITE_TAKES_OVER = "white_takes_over"
    ALMOST_MONOCHROMATIC = "almost_monochromatic"
    ALMOST_BALANCED = "almost_balanced"
    BLACK_WINS = "black_wins"
    WHITE_WINS = "white_wins"
    MIXED = "mixed"


class StabilizationTimeout(RuntimeError):
    """Raised when no period-1/2 cycle is found within max_rounds."""

    def __init__(self, rounds, black_counts_tail):
        super().__init__(f"no cycle within {rounds} rounds "
                         f"(black count tail {black_counts_tail})")
        self.rounds = rounds
        self.black_counts_tail = black_counts_tail


def exact_fraction(x) -> Fraction:
    """Exact rational from int/str/Fraction; floats via their shortest decimal.

    Passing 0.7 means 7/10, not the binary double underneath it.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (float, np.floating)):
        f = float(x)
        if not np.isfinite(f):
            raise ValueError(f"threshold must be finite, got {x}")
        return Fraction(repr(f))
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact fraction")


@dataclass
class ModelConfig:
    """Update rule selection plus optional per-node influence/stubbornness.

    thresholds: (black_flip, white_flip) for the psi variant, each in (1/2, 1].
    influence: per-node positive integers (default all 1).
    stubbornness: uniform Fraction, or mapping node->gamma, or a full
    sequence; only valid together with the majority variant.
    """

    variant: Variant = Variant.MAJORITY
    thresholds: Optional[tuple] = None
    influence: Optional[Sequence[int]] = None
    stubbornness: object = None


HALF = Fraction(1, 2)
_INT64_GUARD = 2 ** 62


@dataclass
class _Bound:
    r: np.ndarray
    wtot: np.ndarray
    num_black: np.ndarray       # threshold numerator applied to black nodes
    den_black: np.ndarray
    off_black: np.ndarray       # 1 for strict comparison, 0 for non-strict
    num_white: np.ndarray
    den_white: np.ndarray
    off_white: np.ndarray
    use_object: bool


def _per_node_thresholds(n: int, config: ModelConfig):
    """Resolve (num, den, strict-offset) per node for both own-colors."""
    if config.variant == Variant.PSI:
        if config.stubbornness is not None:
            raise ValueError("stubbornness and the psi variant are mutually exclusive")
        if config.thresholds is None:
            raise ValueError("psi variant needs thresholds=(black_flip, white_flip)")
        tb, tw = (exact_fraction(t) for t in config.thresholds)
        for t in (tb, tw):
            if not (HALF < t <= 1):
                raise ValueError(f"thresholds must lie in (1/2, 1], got {t}")
        nb = np.full(n, tb.numerator, dtype=object)
        db = np.full(n, tb.denominator, dtype=object)
        ob = np.zeros(n, dtype=object)
        nw = np.full(n, tw.numerator, dtype=object)
        dw = np.full(n, tw.denominator, dtype=object)
        ow = np.zeros(n, dtype=object)
        return nb, db, ob, nw, dw, ow
    if config.variant != Variant.MAJORITY:
        raise ValueError(f"unknown variant {config.variant!r}")
    if config.thresholds is not None:
        raise ValueError("thresholds only apply to the psi variant")
    num = np.full(n, 1, dtype=object)
    den = np.full(n, 2, dtype=object)
    off = np.full(n, 1, dtype=object)  # strict: w_opp > wtot/2
    st = config.stubbornness
    if st is not None:
        if isinstance(st, (Fraction, int, float, str)):
            gammas = {v: exact_fraction(st) for v in range(n)}
        elif isinstance(st, dict):
            gammas = {int(v): exact_fraction(gv) for v, gv in st.items()}
        else:
            seq = list(st)
            if len(seq) != n:
                raise ValueError(f"stubbornness sequence must have length {n}")
            gammas = {v: exact_fraction(gv) for v, gv in enumerate(seq)
                      if gv is not None}
        for v, gv in gammas.items():
            if not 0 <= v < n:
                raise ValueError(f"stubbornness node {v} out of range")
            if not (0 < gv < 1):
                raise ValueError(f"stubbornness must lie in (0, 1), got {gv}")
            num[v] = gv.numerator
            den[v] = gv.denominator
            off[v] = 0  # non-strict: w_opp >= gamma * wtot
    return num, den, off, num.copy(), den.copy(), off.copy()


def _bind(g: Graph, config: ModelConfig) -> _Bound:
    n = g.n
    if config.influence is None:
        r = np.ones(n, dtype=np.int64)
    else:
        r = np.asarray(config.influence, dtype=np.int64)
        if r.shape != (n,):
            raise ValueError(f"influence must have one entry per node ({n})")
        if r.size and r.min() < 1:
            raise ValueError("influence factors must be positive integers")
        arr = np.asarray(config.influence)
        if arr.dtype.kind == "f" and not np.all(arr == np.floor(arr)):
            raise ValueError("influence factors must be integers")
    wtot = (np.bincount(g.edge_u, weights=r[g.edge_v].astype(np.float64), minlength=n)
            + np.bincount(g.edge_v, weights=r[g.edge_u].astype(np.float64), minlength=n))
    wtot = wtot.astype(np.int64)
    nb, db, ob, nw, dw, ow = _per_node_thresholds(n, config)
    max_den = max([int(x) for x in np.concatenate([db, dw])] or [1])
    max_num = max([int(x) for x in np.concatenate([nb, nw])] or [1])
    max_w = int(wtot.max()) if n else 0
    use_object = max(max_den, max_num) * max(max_w, 1) >= _INT64_GUARD
    if not use_object:
        nb, db, ob = (a.astype(np.int64) for a in (nb, db, ob))
        nw, dw, ow = (a.astype(np.int64) for a in (nw, dw, ow))
    return _Bound(r, wtot, nb, db, ob, nw, dw, ow, use_object)


def _step_bound(g: Graph, coloring: np.ndarray, bound: _Bound) -> np.ndarray:
    n = g.n
    c = coloring
    rc = (bound.r * c).astype(np.float64)
    blackw = (np.bincount(g.edge_u, weights=rc[g.edge_v], minlength=n)
              + np.bincount(g.edge_v, weights=rc[g.edge_u], minlength=n))
    blackw = blackw.astype(np.int64)
    is_black = c == 1
    w_opp = np.where(is_black, bound.wtot - blackw, blackw)
    num = np.where(is_black, bound.num_black, bound.num_white)
    den = np.where(is_black, bound.den_black, bound.den_white)
    off = np.where(is_black, bound.off_black, bound.off_white)
    if bound.use_object:
        w = w_opp.astype(object)
        t = bound.wtot.astype(object)
        flip = (w * den - num * t) >= off
        flip = flip.astype(bool)
    else:
        flip = (w_opp * den - num * bound.wtot) >= off
    flip &= bound.wtot > 0
    return (c ^ flip.astype(np.uint8)).astype(np.uint8)


def weighted_tally(g: Graph, coloring: np.ndarray, config: ModelConfig, v: int):
    """(w_opp, w_total) for node v: opposite-color and total neighbor weight."""
    r = (np.ones(g.n, dtype=np.int64) if config.influence is None
         else np.asarray(config.influence, dtype=np.int64))
    nbrs = g.neighbors(v)
    w_total = int(r[nbrs].sum())
    opp = coloring[nbrs] != coloring[v]
    w_opp = int(r[nbrs[opp]].sum())
    return w_opp, w_total


def step(g: Graph, coloring: np.ndarray, config: ModelConfig) -> np.ndarray:
    """One synchronous round; returns the next coloring."""
    c = np.asarray(coloring, dtype=np.uint8)
    if c.shape != (g.n,):
        raise ValueError(f"coloring must have one entry per node ({g.n})")
    return _step_bound(g, c, _bind(g, config))


@dataclass
class RunResult:
    stabilization_time: int
    period: int
    final_colorings: list
    black_count_per_round: list
    m_star: int
    bichromatic_count_per_round: Optional[list] = None

    @property
    def final_black_fraction(self) -> float:
        c = self.final_colorings[0]
        return float(int(c.sum()) / c.shape[0])


def count_bichromatic(g: Graph, coloring: np.ndarray) -> int:
    """Edges whose endpoints currently disagree."""
    c = np.asarray(coloring, dtype=np.uint8)
    return int(np.count_nonzero(c[g.edge_u] != c[g.edge_v]))


def run(g: Graph, coloring0: np.ndarray, config: ModelConfig,
        max_rounds: Optional[int] = None,
        track_bichromatic: bool = False) -> RunResult:
    """Iterate until the trajectory enters a period-1 or period-2 cycle.

    stabilization_time is the first round index inside the cycle; m_star is
    the initial bichromatic edge count.  Raises StabilizationTimeout after
    max_rounds (default 4m+10) without cycling.
    """
    c0 = np.asarray(coloring0, dtype=np.uint8)
    if c0.shape != (g.n,):
        raise ValueError(f"coloring must have one entry per node ({g.n})")
    if max_rounds is None:
        max_rounds = 4 * g.m + 10
    bound = _bind(g, config)
    m_star = count_bichromatic(g, c0)
    blacks = [int(c0.sum())]
    bichrom = [m_star] if track_bichromatic else None
    prev2 = None
    prev = c0
    for t in range(1, max_rounds + 1):
        cur = _step_bound(g, prev, bound)
        blacks.append(int(cur.sum()))
        if track_bichromatic:
            bichrom.append(count_bichromatic(g, cur))
        if np.array_equal(cur, prev):
            return RunResult(t - 1, 1, [prev], blacks, m_star, bichrom)
        if prev2 is not None and np.array_equal(cur, prev2):
            return RunResult(t - 2, 2, [prev2, prev], blacks, m_star, bichrom)
        prev2 = prev
        prev = cur
    raise StabilizationTimeout(max_rounds, blacks[-6:])


def random_coloring(n: int, p_black: float, seed: int = 0) -> np.ndarray:
    """Independent Bernoulli(p_black) coloring; p 0/1 are exact."""
    if not 0.0 <= p_black <= 1.0:
        raise ValueError(f"p_black must be in [0, 1], got {p_black}")
    rng = np.random.default_rng(seed)
    return (rng.random(n) < p_black).astype(np.uint8)


def classify_outcome(result: RunResult, n: int, mono_tol: float = 0.05,
                     balance_tol: float = 0.05) -> OutcomeLabel:
    """Label the first coloring of the final cycle.

    Precedence: unanimous take-over, then almost-monochromatic (minority
    fraction <= mono_tol), then almost-balanced (|black fraction - 1/2| <=
    balance_tol), then which color holds more than half, else MIXED.
    """
    if mono_tol < 0 or balance_tol < 0:
        raise ValueError("tolerances must be non-negative")
    if n < 1:
        raise ValueError("classification needs n >= 1")
    black = int(result.final_colorings[0].sum())
    if black == n:
        return OutcomeLabel.BLACK_TAKES_OVER
    if black == 0:
        return OutcomeLabel.WHITE_TAKES_OVER
    frac = black / n
    if min(frac, 1.0 - frac) <= mono_tol:
        return OutcomeLabel.ALMOST_MONOCHROMATIC
    if abs(frac - 0.5) <= balance_tol:
        return OutcomeLabel.ALMOST_BALANCED
    if 2 * black > n:
        return OutcomeLabel.BLACK_WINS
    if 2 * black < n:
        return OutcomeLabel.WHITE_WINS
    return OutcomeLabel.MIXED


def write_trajectory(result: RunResult, path) -> None:
    """Opt-in trajectory dump: round, black_count, bichromatic_count."""
    if result.bichromatic_count_per_round is None:
        raise ValueError("run() must be called with track_bichromatic=True")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["round", "black_count", "bichromatic_count"])
        for t, (b, bc) in enumerate(zip(result.black_count_per_round,
                                        result.bichromatic_count_per_round)):
            w.writerow([t, b, bc])
