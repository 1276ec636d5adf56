"""Command line front end for graph generation, elite-influence scans,
initial-fraction sweeps, the sparse/dense classification experiment, and the
verification suites.

Every CSV starts with '#'-prefixed lines echoing the fully resolved
configuration, so a result file is self-describing and a rerun with the same
configuration and seed is byte-identical.  Exit codes: 0 on success, 1 when a
verification suite finds a violation (or every trial of a sweep times out),
2 on usage or parameter errors.

Options can also come from a key=value config file (--config); explicit
command line flags win over the file.  The environment variable MAJ_SEED, when
set, overrides the base seed from both sources.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from .analysis import (
    EliteQuery,
    alternating_path_bound,
    apply_cm1,
    apply_cm2,
    min_winning_elite_fraction,
    stubbornness_bound,
    verify_mixing,
)
from .datasets import DatasetManifest, ParseError, ValidationError, load_edge_list
from .dynamics import (
    ModelConfig,
    StabilizationTimeout,
    Variant,
    classify_outcome,
    count_bichromatic,
    exact_fraction,
    random_coloring,
    run,
    step,
)
from .generators import CalibrationError, GenSpec, gen_cycle, gen_er, generate
from .graph import degree_stats
from .potential import PeriodicTieError, certify_descent

log = logging.getLogger(__name__)

FAMILIES = ("er", "rrg", "pa", "hrg", "cycle")
SUITES = ("period", "potential", "mixing", "cycle", "stubbornness")
DEFAULT_R_GRID = "1,2,4,8,16,32,64,128"
DEFAULT_P_GRID = ",".join(f"{5 * k / 100:.2f}" for k in range(21))


# ---------------------------------------------------------------------------
# option plumbing: config file merge, seed override, output formatting


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _load_config_file(path: str) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _apply_config_file(args, subparser, argv_tail):
    """Fill defaults from the config file; flags given on the command line win."""
    if not getattr(args, "config", None):
        return
    cfg = _load_config_file(args.config)
    actions = {}
    explicit = set()
    for action in subparser._actions:
        if not action.option_strings:
            continue
        actions[action.dest] = action
        for opt in action.option_strings:
            if any(tok == opt or tok.startswith(opt + "=") for tok in argv_tail):
                explicit.add(action.dest)
    for key, text in cfg.items():
        if key == "config":
            continue
        if key not in actions:
            raise ValueError(f"unknown config key {key!r} for this command")
        if key in explicit:
            continue
        action = actions[key]
        if action.const is True or action.const is False:
            value = _parse_bool(text)
        elif action.type is not None:
            value = action.type(text)
        else:
            value = text
        setattr(args, key, value)


def _apply_env_seed(args) -> None:
    raw = os.environ.get("MAJ_SEED")
    if raw is None or raw == "":
        return
    try:
        args.seed = int(raw)
    except ValueError:
        raise ValueError(f"MAJ_SEED must be an integer, got {raw!r}") from None


def _fmt_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _header_lines(args) -> list:
    lines = [f"# command={args.command}"]
    for key in sorted(vars(args)):
        if key in ("command", "func", "config"):
            continue
        lines.append(f"# {key}={_fmt_value(getattr(args, key))}")
    return lines


def _emit(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_int_list(text: str) -> list:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise ValueError(f"expected comma-separated integers, got {text!r}") from None


def _map_tasks(worker, tasks, jobs, initializer=None, initargs=()):
    """Run worker over tasks; results keep task order regardless of jobs."""
    if jobs <= 1:
        if initializer is not None:
            initializer(*initargs)
        return [worker(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs, initializer=initializer,
                             initargs=initargs) as pool:
        return list(pool.map(worker, tasks))


# ---------------------------------------------------------------------------
# graph sources


def _source_payload(args) -> dict:
    dataset = getattr(args, "dataset", None)
    family = getattr(args, "family", None)
    if (dataset is None) == (family is None):
        raise ValueError("exactly one graph source is required: "
                         "--dataset PATH or --family NAME")
    graph_seed = getattr(args, "graph_seed", None)
    if graph_seed is None:
        graph_seed = args.seed
    return {
        "dataset": dataset,
        "expected_n": getattr(args, "expected_n", None),
        "expected_m": getattr(args, "expected_m", None),
        "idmap": getattr(args, "idmap", None),
        "family": family,
        "n": getattr(args, "n", None),
        "q": getattr(args, "q", None),
        "d": getattr(args, "d", None),
        "m_out": getattr(args, "m_out", None),
        "avg_deg": getattr(args, "avg_deg", None),
        "beta": getattr(args, "beta", 2.5),
        "temperature": getattr(args, "temperature", 0.6),
        "graph_seed": graph_seed,
    }


def _build_source_graph(payload: dict, trial: int):
    if payload["dataset"] is not None:
        manifest = DatasetManifest(
            name=os.path.basename(payload["dataset"]),
            expected_n=payload["expected_n"],
            expected_m=payload["expected_m"])
        return load_edge_list(payload["dataset"], manifest=manifest,
                              idmap_path=payload["idmap"])
    if payload["n"] is None:
        raise ValueError("--n is required with --family")
    spec = GenSpec(family=payload["family"], n=payload["n"],
                   seed=payload["graph_seed"] + trial,
                   q=payload["q"], d=payload["d"], m_out=payload["m_out"],
                   target_avg_deg=payload["avg_deg"], beta=payload["beta"],
                   temperature=payload["temperature"])
    return generate(spec)


# ---------------------------------------------------------------------------
# trial aggregation shared by sweep and conjecture


def _aggregate_trials(outcomes):
    fracs = [o[0] for o in outcomes if o is not None]
    stabs = [o[1] for o in outcomes if o is not None]
    labels = {}
    for o in outcomes:
        if o is not None:
            labels[o[2]] = labels.get(o[2], 0) + 1
    timeouts = sum(1 for o in outcomes if o is None)
    mean_frac = float(np.mean(fracs)) if fracs else float("nan")
    mean_stab = float(np.mean(stabs)) if stabs else float("nan")
    return mean_frac, mean_stab, len(fracs), labels, timeouts


def _label_field(labels: dict, timeouts: int) -> str:
    merged = dict(labels)
    if timeouts:
        merged["timeout"] = merged.get("timeout", 0) + timeouts
    return ";".join(f"{k}:{v}" for k, v in sorted(merged.items()))


def _phase_csv(args, key_name, keys, aggregates) -> str:
    lines = _header_lines(args)
    lines.append(f"{key_name},mean_black_frac,mean_stab_time,n_trials,labels")
    for key, agg in zip(keys, aggregates):
        mean_frac, mean_stab, ok, labels, timeouts = agg
        lines.append(f"{key},{mean_frac!r},{mean_stab!r},{ok},"
                     f"{_label_field(labels, timeouts)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# generate


def cmd_generate(args) -> int:
    if args.family is None:
        raise ValueError("--family is required")
    payload = _source_payload(args)
    g = _build_source_graph(payload, 0)
    stats = degree_stats(g)
    lines = _header_lines(args)
    lines.append(f"# realized_n={stats.n}")
    lines.append(f"# realized_m={stats.m}")
    lines.append(f"# realized_avg_degree={stats.avg_degree} "
                 f"({float(stats.avg_degree)!r})")
    lines.append(f"# realized_min_degree={stats.min_degree}")
    lines.append(f"# realized_max_degree={stats.max_degree}")
    body = g.to_edge_list_text()
    text = "\n".join(lines) + "\n" + body
    _emit(args, text)
    return 0


# ---------------------------------------------------------------------------
# elites

_ELITE_STATE: dict = {}


def _init_elite_worker(payload, options):
    _ELITE_STATE.clear()
    _ELITE_STATE["payload"] = payload
    _ELITE_STATE["options"] = options
    _ELITE_STATE["graphs"] = {}


def _elite_task(task):
    r, trial = task
    payload = _ELITE_STATE["payload"]
    opts = _ELITE_STATE["options"]
    g = _ELITE_STATE["graphs"].get(trial)
    if g is None:
        g = _build_source_graph(payload, trial)
        _ELITE_STATE["graphs"][trial] = g
    if opts["cm1"]:
        g = apply_cm1(g, r, seed=opts["seed"] + 7919 * trial + r)
    stub = apply_cm2(g, r).stubbornness if opts["cm2"] else None
    query = EliteQuery(g, r, win_criterion=opts["criterion"], stubbornness=stub)
    return min_winning_elite_fraction(
        query, resolution=opts["resolution"], max_fraction=opts["max_fraction"],
        refine=opts["refine"], max_rounds=opts["max_rounds"])


def cmd_elites(args) -> int:
    payload = _source_payload(args)
    r_values = _csv_int_list(args.r)
    if not r_values:
        raise ValueError("--r must list at least one influence factor")
    randomized = payload["family"] is not None or args.cm1
    trials = args.trials if randomized else 1
    options = {"cm1": args.cm1, "cm2": args.cm2, "criterion": args.criterion,
               "resolution": args.resolution, "max_fraction": args.max_fraction,
               "refine": args.refine, "max_rounds": args.max_rounds,
               "seed": args.seed}
    tasks = [(r, t) for r in r_values for t in range(trials)]
    results = _map_tasks(_elite_task, tasks, args.jobs,
                         initializer=_init_elite_worker,
                         initargs=(payload, options))
    lines = _header_lines(args)
    lines.append(f"# effective_trials={trials}")
    lines.append("r,min_fraction,criterion")
    for i, r in enumerate(r_values):
        block = results[i * trials:(i + 1) * trials]
        lines.append(f"{r},{float(np.mean(block))!r},{args.criterion}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# sweep

_SWEEP_STATE: dict = {}


def _init_sweep_worker(graph, config, max_rounds, mono_tol, balance_tol):
    _SWEEP_STATE.clear()
    _SWEEP_STATE.update(graph=graph, config=config, max_rounds=max_rounds,
                        mono_tol=mono_tol, balance_tol=balance_tol)


def _sweep_task(task):
    p, seed = task
    g = _SWEEP_STATE["graph"]
    coloring = random_coloring(g.n, p, seed)
    try:
        res = run(g, coloring, _SWEEP_STATE["config"],
                  max_rounds=_SWEEP_STATE["max_rounds"])
    except StabilizationTimeout:
        return None
    label = classify_outcome(res, g.n, _SWEEP_STATE["mono_tol"],
                             _SWEEP_STATE["balance_tol"]).value
    return (res.final_black_fraction, res.stabilization_time, label)


def _model_config(args) -> ModelConfig:
    if args.model == "majority":
        return ModelConfig(variant=Variant.MAJORITY)
    if args.psi1 is None or args.psi2 is None:
        raise ValueError("--model psi requires --psi1 and --psi2")
    return ModelConfig(variant=Variant.PSI,
                       thresholds=(exact_fraction(args.psi1),
                                   exact_fraction(args.psi2)))


def cmd_sweep(args) -> int:
    payload = _source_payload(args)
    config = _model_config(args)
    p_tokens = [tok.strip() for tok in args.p_b.split(",") if tok.strip() != ""]
    if not p_tokens:
        raise ValueError("--p-b must list at least one initial fraction")
    p_values = [float(tok) for tok in p_tokens]
    for p in p_values:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"initial black fraction {p} outside [0, 1]")
    g = _build_source_graph(payload, 0)
    tasks = [(p, args.seed + i) for p in p_values for i in range(args.trials)]
    results = _map_tasks(_sweep_task, tasks, args.jobs,
                         initializer=_init_sweep_worker,
                         initargs=(g, config, args.max_rounds,
                                   args.mono_tol, args.balance_tol))
    aggregates = [
        _aggregate_trials(results[i * args.trials:(i + 1) * args.trials])
        for i in range(len(p_values))
    ]
    _emit(args, _phase_csv(args, "p_b", p_tokens, aggregates))
    if all(agg[2] == 0 for agg in aggregates):
        print("sweep: every trial timed out", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# conjecture

_CONJ_STATE: dict = {}


def _init_conjecture_worker(n, max_rounds, mono_tol, balance_tol):
    _CONJ_STATE.clear()
    _CONJ_STATE.update(n=n, max_rounds=max_rounds, mono_tol=mono_tol,
                       balance_tol=balance_tol)


def _conjecture_task(task):
    c, gseed = task
    n = _CONJ_STATE["n"]
    g = gen_er(n, c / n, gseed)
    coloring = random_coloring(n, 0.5, gseed + 50_021)
    try:
        res = run(g, coloring, ModelConfig(variant=Variant.MAJORITY),
                  max_rounds=_CONJ_STATE["max_rounds"])
    except StabilizationTimeout:
        return None
    label = classify_outcome(res, n, _CONJ_STATE["mono_tol"],
                             _CONJ_STATE["balance_tol"]).value
    return (res.final_black_fraction, res.stabilization_time, label)


def cmd_conjecture(args) -> int:
    c_tokens = [tok.strip() for tok in args.c.split(",") if tok.strip() != ""]
    if not c_tokens:
        raise ValueError("--c must list at least one average degree")
    c_values = [float(tok) for tok in c_tokens]
    if args.n < 1:
        raise ValueError("--n must be positive")
    tasks = []
    for ci, c in enumerate(c_values):
        for i in range(args.trials):
            gseed = args.seed + 100_003 * (ci * args.trials + i)
            tasks.append((c, gseed))
    results = _map_tasks(_conjecture_task, tasks, args.jobs,
                         initializer=_init_conjecture_worker,
                         initargs=(args.n, args.max_rounds, args.mono_tol,
                                   args.balance_tol))
    aggregates = [
        _aggregate_trials(results[i * args.trials:(i + 1) * args.trials])
        for i in range(len(c_values))
    ]
    _emit(args, _phase_csv(args, "c", c_tokens, aggregates))
    return 0


# ---------------------------------------------------------------------------
# verify suites


def _suite_period(args) -> int:
    rng = np.random.default_rng(args.seed)
    period_counts = {1: 0, 2: 0}
    failures = 0
    for i in range(args.instances):
        n = int(rng.integers(2, args.max_n + 1))
        if rng.random() < 0.8:
            q = float(rng.uniform(0, 8)) / n
        else:
            q = float(rng.uniform(0, 1))
        g = gen_er(n, min(q, 1.0), int(rng.integers(0, 2**31)))
        kind = i % 5
        influence = None
        stub = None
        variant = Variant.MAJORITY
        thresholds = None
        if kind == 1 or kind == 4:
            influence = rng.integers(1, 6, size=n)
        if kind == 2:
            den = int(rng.integers(2, 10))
            stub = Fraction(int(rng.integers(1, den)), den)
        if kind == 3 or kind == 4:
            variant = Variant.PSI
            den = 20
            thresholds = (Fraction(int(rng.integers(11, 21)), den),
                          Fraction(int(rng.integers(11, 21)), den))
        config = ModelConfig(variant=variant, thresholds=thresholds,
                             influence=influence, stubbornness=stub)
        coloring = random_coloring(n, 0.5, int(rng.integers(0, 2**31)))
        weight = 10 * g.edge_u.size + 4 * n + 60
        try:
            res = run(g, coloring, config, max_rounds=int(weight))
        except StabilizationTimeout:
            failures += 1
            print(f"FAIL period: instance {i} (n={n}, kind={kind}) did not "
                  f"reach a short cycle within {weight} rounds")
            continue
        period_counts[res.period] += 1
    if failures:
        print(f"FAIL period: {failures}/{args.instances} instances violated "
              f"the period bound")
        return 1
    print(f"PASS period: {args.instances} random instances all reached period "
          f"1 or 2 (period 1: {period_counts[1]}, period 2: {period_counts[2]})")
    return 0


def _suite_potential(args) -> int:
    rng = np.random.default_rng(args.seed)
    thresholds = [exact_fraction(tok) for tok in args.psi.split(",") if tok]
    n = args.n
    checked = 0
    failures = 0
    detail_budget = 10
    for gi in range(args.graphs):
        q = float(rng.uniform(0.25, 0.75))
        g = gen_er(n, q, int(rng.integers(0, 2**31)))
        if args.exhaustive:
            codes = range(2 ** n)
        else:
            codes = [int(rng.integers(0, 2 ** n)) for _ in range(args.colorings)]
        for psi in thresholds:
            for code in codes:
                coloring = ((code >> np.arange(n)) & 1).astype(np.uint8)
                checked += 1
                try:
                    cert = certify_descent(g, psi, coloring)
                except PeriodicTieError as exc:
                    failures += 1
                    if detail_budget > 0:
                        detail_budget -= 1
                        print(f"FAIL potential: graph={gi} psi={psi} "
                              f"coloring={code}: unexpected tie ({exc})")
                    continue
                if cert.failures:
                    failures += 1
                    if detail_budget > 0:
                        detail_budget -= 1
                        print(f"FAIL potential: graph={gi} psi={psi} "
                              f"coloring={code}: {cert.failures[0]}")
    if failures:
        print(f"FAIL potential: {failures}/{checked} certificates reported "
              f"violations")
        return 1
    print(f"PASS potential: {checked} descent certificates clean "
          f"({args.graphs} graphs, {len(thresholds)} thresholds)")
    return 0


def _suite_mixing(args) -> int:
    from .generators import gen_rrg

    g = gen_rrg(args.n, args.d, args.seed)
    report = verify_mixing(g, samples=args.samples, seed=args.seed + 1)
    print(f"mixing: sigma={report.sigma!r} max_slack_ratio="
          f"{report.max_slack_ratio!r} over {report.samples} set pairs")
    ok = report.ok
    if args.sigma_slack is not None:
        limit = 2 / math.sqrt(args.d) + args.sigma_slack
        if report.sigma > limit:
            print(f"FAIL mixing: sigma {report.sigma!r} exceeds "
                  f"2/sqrt(d) + {args.sigma_slack} = {limit!r}")
            ok = False
        else:
            print(f"PASS mixing: sigma {report.sigma!r} <= {limit!r}")
    if not report.ok:
        print(f"FAIL mixing: {len(report.violations)} set pairs violated the "
              f"expander mixing bound")
    if ok:
        print(f"PASS mixing: all {report.samples} sampled set pairs satisfy "
              f"the mixing bound")
        return 0
    return 1


def _suite_cycle(args) -> int:
    g = gen_cycle(args.n)
    config = ModelConfig(variant=Variant.MAJORITY)
    log2_limit = math.log2(args.n)
    within = 0
    bound_ok = True
    for i in range(args.trials):
        coloring = random_coloring(args.n, 0.5, args.seed + i)
        apb = alternating_path_bound(coloring)
        res = run(g, coloring, config)
        stab = res.stabilization_time
        if stab <= log2_limit:
            within += 1
        if stab > apb.bound:
            bound_ok = False
            print(f"FAIL cycle: trial {i} stabilized at {stab} above the "
                  f"alternating-path bound {apb.bound} (L={apb.longest})")
        else:
            print(f"cycle trial {i}: stabilization {stab}, longest "
                  f"alternating path {apb.longest}, bound {apb.bound}")
    needed = math.ceil(args.trials * 7 / 8)
    ok = bound_ok and within >= needed
    if within < needed:
        print(f"FAIL cycle: only {within}/{args.trials} trials stabilized "
              f"within log2(n) = {log2_limit!r} (needed {needed})")
    if ok:
        print(f"PASS cycle: {within}/{args.trials} trials within log2(n), "
              f"path bound held in all trials")
        return 0
    return 1


def _suite_stubbornness(args) -> int:
    rng = np.random.default_rng(args.seed)
    done = 0
    attempts = 0
    failures = 0
    while done < args.instances:
        attempts += 1
        if attempts > 100 * args.instances:
            raise RuntimeError("could not sample enough feasible instances")
        n = int(rng.integers(8, args.max_n + 1))
        q = float(rng.uniform(0.05, 0.5))
        g = gen_er(n, q, int(rng.integers(0, 2**31)))
        z_size = int(rng.integers(1, (n - 1) // 2 + 1))
        z = np.sort(rng.choice(n, size=z_size, replace=False))
        r = int(rng.integers(1, args.max_r + 1))
        bound = stubbornness_bound(g, z, r)
        if not bound.feasible:
            continue
        gamma = bound.gamma_min + min(Fraction(1, 10**6),
                                      (1 - bound.gamma_min) / 2)
        influence = np.ones(n, dtype=np.int64)
        influence[z] = r
        config = ModelConfig(variant=Variant.MAJORITY, influence=influence,
                             stubbornness=gamma)
        coloring = np.zeros(n, dtype=np.uint8)
        coloring[z] = 1
        outside = np.ones(n, dtype=bool)
        outside[z] = False
        prev = coloring.copy()
        prev2 = None
        contained = True
        for _ in range(40 * g.edge_u.size + 4 * n + 60):
            coloring = step(g, coloring, config)
            if coloring[outside].any():
                contained = False
                break
            if np.array_equal(coloring, prev):
                break
            if prev2 is not None and np.array_equal(coloring, prev2):
                break
            prev2, prev = prev, coloring
        if not contained:
            failures += 1
            print(f"FAIL stubbornness: instance {done} (n={n}, |Z|={z_size}, "
                  f"r={r}, gamma={gamma}) leaked outside Z")
        done += 1
    if failures:
        print(f"FAIL stubbornness: {failures}/{args.instances} instances "
              f"leaked outside Z")
        return 1
    print(f"PASS stubbornness: {args.instances} instances stayed inside Z "
          f"with gamma just above the threshold")
    return 0


def cmd_verify(args) -> int:
    suite = {
        "period": _suite_period,
        "potential": _suite_potential,
        "mixing": _suite_mixing,
        "cycle": _suite_cycle,
        "stubbornness": _suite_stubbornness,
    }[args.suite]
    return suite(args)


# ---------------------------------------------------------------------------
# parser


def _add_source_flags(sub):
    sub.add_argument("--dataset", help="edge list file (optionally .gz)")
    sub.add_argument("--expected-n", type=int,
                     help="validate node count after ingest")
    sub.add_argument("--expected-m", type=int,
                     help="validate edge count after ingest")
    sub.add_argument("--idmap", help="write original->internal id map here")
    sub.add_argument("--family", choices=FAMILIES, help="generator family")
    sub.add_argument("--n", type=int, help="number of nodes")
    sub.add_argument("--q", type=float, help="edge probability (er)")
    sub.add_argument("--d", type=int, help="degree (rrg)")
    sub.add_argument("--m-out", type=int, help="edges per new node (pa)")
    sub.add_argument("--avg-deg", type=float, help="target average degree (hrg)")
    sub.add_argument("--beta", type=float, default=2.5,
                     help="power-law exponent (hrg)")
    sub.add_argument("--temperature", type=float, default=0.6,
                     help="temperature (hrg)")
    sub.add_argument("--graph-seed", type=int,
                     help="generator seed (defaults to --seed)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="majdyn",
        description="Deterministic threshold opinion dynamics: generation, "
                    "elite scans, sweeps, and verification suites.")
    parser.add_argument("--verbose", action="store_true",
                        help="log progress details to stderr")
    subs = parser.add_subparsers(dest="command")
    built = {}

    gen = subs.add_parser("generate", help="emit a canonical edge list")
    _add_source_flags(gen)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--config", help="key=value defaults file")
    gen.add_argument("--out", help="output path (default stdout)")
    gen.set_defaults(func=cmd_generate)
    built["generate"] = gen

    eli = subs.add_parser("elites", help="minimum winning elite fraction per r")
    _add_source_flags(eli)
    eli.add_argument("--r", default=DEFAULT_R_GRID,
                     help="comma list of influence factors")
    eli.add_argument("--criterion", choices=("wins", "takes_over"),
                     default="wins")
    eli.add_argument("--resolution", type=float, default=0.001,
                     help="elite fraction grid step")
    eli.add_argument("--max-fraction", type=float, default=1.0,
                     help="stop scanning above this fraction")
    eli.add_argument("--refine", action="store_true",
                     help="doubling + bisection instead of a linear scan")
    eli.add_argument("--cm1", action="store_true",
                     help="apply the random-overlay countermeasure")
    eli.add_argument("--cm2", action="store_true",
                     help="apply the uniform-stubbornness countermeasure")
    eli.add_argument("--trials", type=int, default=8)
    eli.add_argument("--max-rounds", type=int)
    eli.add_argument("--seed", type=int, default=0)
    eli.add_argument("--jobs", type=int, default=1)
    eli.add_argument("--config", help="key=value defaults file")
    eli.add_argument("--out", help="output path (default stdout)")
    eli.set_defaults(func=cmd_elites)
    built["elites"] = eli

    swp = subs.add_parser("sweep", help="initial black fraction sweep")
    _add_source_flags(swp)
    swp.add_argument("--model", choices=("majority", "psi"), default="majority")
    swp.add_argument("--psi1", help="black->white threshold (psi model)")
    swp.add_argument("--psi2", help="white->black threshold (psi model)")
    swp.add_argument("--p-b", default=DEFAULT_P_GRID,
                     help="comma list of initial black fractions")
    swp.add_argument("--trials", type=int, default=8)
    swp.add_argument("--mono-tol", type=float, default=0.05)
    swp.add_argument("--balance-tol", type=float, default=0.05)
    swp.add_argument("--max-rounds", type=int)
    swp.add_argument("--seed", type=int, default=0)
    swp.add_argument("--jobs", type=int, default=1)
    swp.add_argument("--config", help="key=value defaults file")
    swp.add_argument("--out", help="output path (default stdout)")
    swp.set_defaults(func=cmd_sweep)
    built["sweep"] = swp

    con = subs.add_parser("conjecture",
                          help="sparse/dense classification on fresh ER graphs")
    con.add_argument("--n", type=int, default=100_000)
    con.add_argument("--c", default="8,12",
                     help="comma list of average degrees (q = c/n)")
    con.add_argument("--trials", type=int, default=8)
    con.add_argument("--mono-tol", type=float, default=0.05)
    con.add_argument("--balance-tol", type=float, default=0.05)
    con.add_argument("--max-rounds", type=int)
    con.add_argument("--seed", type=int, default=0)
    con.add_argument("--jobs", type=int, default=1)
    con.add_argument("--config", help="key=value defaults file")
    con.add_argument("--out", help="output path (default stdout)")
    con.set_defaults(func=cmd_conjecture)
    built["conjecture"] = con

    ver = subs.add_parser("verify", help="run a verification suite")
    ver.add_argument("suite", choices=SUITES)
    ver.add_argument("--instances", type=int, default=10_000,
                     help="random instances (period, stubbornness)")
    ver.add_argument("--max-n", type=int, default=200,
                     help="largest random graph (period, stubbornness)")
    ver.add_argument("--max-r", type=int, default=10,
                     help="largest influence factor (stubbornness)")
    ver.add_argument("--graphs", type=int, default=20,
                     help="random graphs to certify (potential)")
    ver.add_argument("--n", type=int, default=8,
                     help="nodes per instance (potential, mixing, cycle)")
    ver.add_argument("--psi", default="0.51,0.6,0.75,1.0",
                     help="comma list of thresholds (potential)")
    ver.add_argument("--exhaustive", action="store_true",
                     help="certify all 2^n colorings (potential)")
    ver.add_argument("--colorings", type=int, default=64,
                     help="random colorings per graph when not exhaustive")
    ver.add_argument("--d", type=int, default=16, help="degree (mixing)")
    ver.add_argument("--samples", type=int, default=100,
                     help="random set pairs (mixing)")
    ver.add_argument("--sigma-slack", type=float,
                     help="also require sigma <= 2/sqrt(d) + slack (mixing)")
    ver.add_argument("--trials", type=int, default=8, help="trials (cycle)")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--config", help="key=value defaults file")
    ver.set_defaults(func=cmd_verify)
    built["verify"] = ver

    return parser, built


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser, built = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")
    if args.command is None:
        parser.print_help(sys.stderr)
        return 2
    try:
        _apply_config_file(args, built[args.command], list(argv))
        _apply_env_seed(args)
        return args.func(args)
    except (ValueError, ParseError, ValidationError, CalibrationError,
            RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
