"""Experiments and certified checks built on the dynamics engine.

Covers the elite-influence scan (how small a high-degree coalition with
boosted influence can force its color through), the two countermeasures
(random-overlay densification and uniform stubbornness), the exact
stubbornness threshold that provably protects the majority, density /
initial-fraction sweeps with outcome classification, and the spectral
mixing check behind the countermeasure theory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .dynamics import (
    ModelConfig,
    OutcomeLabel,
    RunResult,
    StabilizationTimeout,
    Variant,
    classify_outcome,
    random_coloring,
    run,
)
from .generators import gen_er, gen_rrg
from .graph import (
    Graph,
    as_node_ids,
    degree_stats,
    edges_between,
    spectral_expansion,
    top_degree_order,
    union,
)

WIN_CRITERIA = ("wins", "takes_over")


@dataclass
class EliteQuery:
    """Scan setup: elites are top-degree nodes colored black with boosted
    influence against an all-white background.

    win_criterion "wins" means more than half the nodes end black (first
    coloring of the final cycle); "takes_over" means unanimity.
    stubbornness, if set, applies to every node (countermeasure 2).
    """

    graph: Graph
    influence: int
    win_criterion: str = "wins"
    stubbornness: object = None

    def __post_init__(self):
        if self.influence < 1:
            raise ValueError(f"influence must be >= 1, got {self.influence}")
        if self.win_criterion not in WIN_CRITERIA:
            raise ValueError(f"win_criterion must be one of {WIN_CRITERIA}")


def _elite_wins(query: EliteQuery, elite: np.ndarray,
                max_rounds: Optional[int]) -> bool:
    g = query.graph
    coloring = np.zeros(g.n, dtype=np.uint8)
    coloring[elite] = 1
    influence = np.ones(g.n, dtype=np.int64)
    influence[elite] = query.influence
    config = ModelConfig(variant=Variant.MAJORITY, influence=influence,
                         stubbornness=query.stubbornness)
    result = run(g, coloring, config, max_rounds=max_rounds)
    final = result.final_colorings[0]
    black = int(final.sum())
    if query.win_criterion == "takes_over":
        return black == g.n
    return 2 * black > g.n


def min_winning_elite_fraction(query: EliteQuery, resolution: float = 0.001,
                               max_fraction: float = 1.0,
                               refine: bool = False,
                               max_rounds: Optional[int] = None) -> float:
    """Smallest tested elite fraction k/n that satisfies the win criterion.

    The grid ascends in steps of max(1, round(resolution*n)) nodes.  Returns
    1.0 + resolution if no tested size wins (monotonicity is unproven, so
    the default is a full ascending scan).  With refine=True the scan
    doubles k until a win, then bisects; both bracket endpoints are
    re-verified by direct simulation.
    """
    g = query.graph
    n = g.n
    if n < 1:
        raise ValueError("elite scan needs a non-empty graph")
    if not 0.0 < resolution <= 1.0:
        raise ValueError(f"resolution must be in (0, 1], got {resolution}")
    step_nodes = max(1, round(resolution * n))
    k_max = min(n, int(math.ceil(max_fraction * n)))
    order = top_degree_order(g)

    def wins(k):
        return _elite_wins(query, order[:k], max_rounds)

    if not refine:
        k = step_nodes
        while k <= k_max:
            if wins(k):
                return k / n
            k += step_nodes
        return 1.0 + resolution
    lo = 0  # known losing (empty elite never wins)
    k = step_nodes
    while k <= k_max and not wins(k):
        lo = k
        k = min(2 * k, k_max) if k < k_max else k_max + step_nodes
    if k > k_max:
        return 1.0 + resolution
    hi = k
    while hi - lo > step_nodes:
        mid = lo + ((hi - lo) // (2 * step_nodes)) * step_nodes
        mid = max(lo + step_nodes, min(mid, hi - step_nodes))
        if wins(mid):
            hi = mid
        else:
            lo = mid
    if not wins(hi) or (lo > 0 and wins(lo)):
        raise RuntimeError("refined scan bracket failed re-verification")
    return hi / n


def apply_cm1(g: Graph, influence: int, seed: int = 0) -> Graph:
    """Countermeasure 1: union the graph with a random regular overlay of
    degree round(2 * influence * avg_degree), bumped by one if n*d is odd."""
    if influence < 1:
        raise ValueError(f"influence must be >= 1, got {influence}")
    stats = degree_stats(g)
    d = round(2 * influence * stats.avg_degree)
    if (g.n * d) % 2 != 0:
        d += 1
    if d >= g.n:
        raise ValueError(
            f"overlay degree {d} does not fit a simple graph on {g.n} nodes")
    return union(g, gen_rrg(g.n, d, seed))


def apply_cm2(g: Graph, influence: int) -> ModelConfig:
    """Countermeasure 2: uniform stubbornness gamma = 1 - 1/(2*influence)."""
    if influence < 1:
        raise ValueError(f"influence must be >= 1, got {influence}")
    gamma = Fraction(2 * influence - 1, 2 * influence)
    return ModelConfig(variant=Variant.MAJORITY, stubbornness=gamma)


@dataclass(frozen=True)
class StubbornnessBound:
    """Exact protection threshold for a suspected influential set Z.

    max_boundary_fraction is f = max over v outside Z of d_Z(v)/d(v); any
    uniform stubbornness strictly above gamma_min keeps every node outside Z
    white forever when only Z starts black.  feasible is False when f = 1
    (some outside node has all its neighbors in Z)."""

    max_boundary_fraction: Fraction
    gamma_min: Fraction
    feasible: bool


def stubbornness_bound(g: Graph, z, influence: int) -> StubbornnessBound:
    z = as_node_ids(g.n, z)
    if influence < 1:
        raise ValueError(f"influence must be >= 1, got {influence}")
    if 2 * z.size >= g.n:
        raise ValueError(f"|Z|={z.size} must be below n/2={g.n / 2}")
    in_z = np.zeros(g.n, dtype=bool)
    in_z[z] = True
    dz = (np.bincount(g.edge_u, weights=in_z[g.edge_v].astype(np.float64),
                      minlength=g.n)
          + np.bincount(g.edge_v, weights=in_z[g.edge_u].astype(np.float64),
                        minlength=g.n)).astype(np.int64)
    deg = g.degrees
    outside = ~in_z & (deg > 0)
    if not outside.any():
        f = Fraction(0)
    else:
        ratio = dz[outside] / deg[outside]
        near = np.flatnonzero(outside)[ratio >= ratio.max() - 1e-12]
        f = max(Fraction(int(dz[v]), int(deg[v])) for v in near)
    if f == 0:
        return StubbornnessBound(f, Fraction(0), True)
    if f == 1:
        return StubbornnessBound(f, Fraction(1), False)
    a, b = f.numerator, f.denominator
    gamma_min = Fraction(influence * a, influence * a + (b - a))
    return StubbornnessBound(f, gamma_min, True)


@dataclass
class SweepSpec:
    """Initial-black-fraction sweep of one model on one graph."""

    graph: Graph
    config: ModelConfig
    p_grid: Sequence[float]
    trials: int = 8
    base_seed: int = 0
    mono_tol: float = 0.05
    balance_tol: float = 0.05
    max_rounds: Optional[int] = None


@dataclass
class PhaseRow:
    key: float
    mean_black_frac: float
    mean_stab_time: float
    n_trials: int
    label_counts: dict
    timeouts: int = 0


@dataclass
class PhaseReport:
    key_name: str
    rows: list

    def argmax_stab_key(self) -> float:
        best = max(self.rows, key=lambda r: r.mean_stab_time)
        return best.key


def _classify_trials(results, n, mono_tol, balance_tol):
    fracs = []
    stabs = []
    labels = {}
    timeouts = 0
    for res in results:
        if res is None:
            timeouts += 1
            continue
        fracs.append(res.final_black_fraction)
        stabs.append(res.stabilization_time)
        lab = classify_outcome(res, n, mono_tol, balance_tol).value
        labels[lab] = labels.get(lab, 0) + 1
    mean_frac = float(np.mean(fracs)) if fracs else float("nan")
    mean_stab = float(np.mean(stabs)) if stabs else float("nan")
    return mean_frac, mean_stab, len(fracs), labels, timeouts


def _run_or_none(g, coloring, config, max_rounds):
    try:
        return run(g, coloring, config, max_rounds=max_rounds)
    except StabilizationTimeout:
        return None


def density_sweep(spec: SweepSpec) -> PhaseReport:
    """Run the configured model across the p_black grid; trial i uses seed
    base_seed + i for its initial coloring."""
    g = spec.graph
    rows = []
    for p in spec.p_grid:
        results = []
        for i in range(spec.trials):
            coloring = random_coloring(g.n, p, spec.base_seed + i)
            results.append(_run_or_none(g, coloring, spec.config, spec.max_rounds))
        mean_frac, mean_stab, ok, labels, timeouts = _classify_trials(
            results, g.n, spec.mono_tol, spec.balance_tol)
        rows.append(PhaseRow(float(p), mean_frac, mean_stab, ok, labels, timeouts))
    return PhaseReport("p_b", rows)


def conjecture_experiment(n: int, c_values: Sequence[float], trials: int = 8,
                          seed: int = 0, mono_tol: float = 0.05,
                          balance_tol: float = 0.05,
                          max_rounds: Optional[int] = None) -> PhaseReport:
    """Majority dynamics from a fair coin flip on fresh ER(n, c/n) graphs.

    Distinguishes the almost-monochromatic regime (c above the transition)
    from the almost-balanced one (c below it)."""
    if n < 1:
        raise ValueError("n must be positive")
    rows = []
    config = ModelConfig(variant=Variant.MAJORITY)
    for ci, c in enumerate(c_values):
        q = c / n
        results = []
        for i in range(trials):
            gseed = seed + 100_003 * (ci * trials + i)
            g = gen_er(n, q, gseed)
            coloring = random_coloring(n, 0.5, gseed + 50_021)
            results.append(_run_or_none(g, coloring, config, max_rounds))
        mean_frac, mean_stab, ok, labels, timeouts = _classify_trials(
            results, n, mono_tol, balance_tol)
        rows.append(PhaseRow(float(c), mean_frac, mean_stab, ok, labels, timeouts))
    return PhaseReport("c", rows)


@dataclass
class MixingReport:
    sigma: float
    degree: int
    samples: int
    max_slack_ratio: float
    violations: list
    ok: bool


def verify_mixing(g: Graph, samples: int = 100, seed: int = 0) -> MixingReport:
    """Check |e(S,S') - |S||S'|d/n| <= sigma*d*sqrt(|S||S'|) on random pairs.

    Requires a d-regular graph.  e(S,S') counts ordered pairs, so the bound
    is checked in exactly the form it is stated; a violation means sigma was
    underestimated, so it is recomputed at tighter tolerance once before
    reporting."""
    deg = g.degrees
    if g.n < 2 or deg.min() != deg.max() or deg.min() < 1:
        raise ValueError("mixing check needs a d-regular graph with d >= 1")
    d = int(deg[0])
    sigma = spectral_expansion(g)
    rng = np.random.default_rng(seed)
    checks = []
    for _ in range(samples):
        s1 = rng.choice(g.n, size=int(rng.integers(1, g.n + 1)), replace=False)
        s2 = rng.choice(g.n, size=int(rng.integers(1, g.n + 1)), replace=False)
        checks.append((s1, s2))

    def evaluate(sig):
        max_ratio = 0.0
        violations = []
        for s1, s2 in checks:
            e = edges_between(g, s1, s2)
            expected = Fraction(len(s1) * len(s2) * d, g.n)
            dev = abs(Fraction(e) - expected)
            bound = sig * d * math.sqrt(len(s1) * len(s2))
            ratio = float(dev) / bound if bound > 0 else math.inf
            max_ratio = max(max_ratio, ratio)
            if float(dev) > bound * (1 + 1e-12):
                violations.append((np.sort(s1), np.sort(s2), e, float(dev), bound))
        return max_ratio, violations

    max_ratio, violations = evaluate(sigma)
    if violations:
        sigma = spectral_expansion(g, tol=1e-13)
        max_ratio, violations = evaluate(sigma)
    return MixingReport(sigma, d, samples, max_ratio, violations,
                        ok=not violations)


@dataclass(frozen=True)
class AlternatingPathBound:
    """Longest alternating path on a cycle graph's coloring and the implied
    stabilization bound floor(L/2); periodic marks the fully alternating
    even cycle, which never stabilizes (period-2 blinker)."""

    longest: int
    bound: int
    periodic: bool


def alternating_path_bound(coloring: np.ndarray) -> AlternatingPathBound:
    """Longest run of consecutive alternating nodes around C_n.

    L counts nodes: a monochromatic coloring has only trivial 1-node paths
    (bound 0); a fully alternating even cycle returns L=n flagged periodic."""
    c = np.asarray(coloring, dtype=np.uint8)
    n = c.shape[0]
    if n < 3:
        raise ValueError("cycle coloring needs n >= 3")
    alt = c != np.roll(c, -1)  # alt[i]: edge (i, i+1 mod n) is bichromatic
    if not alt.any():
        return AlternatingPathBound(1, 0, False)
    if alt.all():
        return AlternatingPathBound(n, 0, True)
    # rotate so position 0 is a non-alternating edge, then measure runs
    start = int(np.flatnonzero(~alt)[0])
    rolled = np.roll(alt, -start)
    changes = np.flatnonzero(np.diff(rolled.astype(np.int8)))
    runs = []
    open_at = None
    for idx in changes:
        if rolled[idx + 1]:
            open_at = idx + 1
        elif open_at is not None:
            runs.append(idx + 1 - open_at)
            open_at = None
    if open_at is not None:
        runs.append(n - open_at)
    longest = max(runs) + 1
    return AlternatingPathBound(int(longest), int(longest) // 2, False)
