"""Weighted bipartite lift and the exact potential-descent certificates.

Spine weights and potentials are recomputed from their defining formulas in
oracles.py; two fully hand-traced instances (a single edge at threshold 1
and the C4 blinker) pin the series values, including the subtle case where
phi stays flat across a flipping round while phi1 still pays 1/2 per flip.
"""

from fractions import Fraction

import numpy as np
import pytest

from majdyn import (
    ModelConfig,
    PeriodicTieError,
    Variant,
    WeightedBipartiteGraph,
    build_graph,
    build_lifted_graph,
    certify_descent,
    count_bichromatic,
    gen_er,
    gen_pa,
    gen_rrg,
    periodic_step,
    potential,
    run,
    write_certificate_csv,
)
from oracles import naive_lift_potential, naive_spine_weight


def complete_edges(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


PSIS = (Fraction(51, 100), Fraction(3, 5), Fraction(3, 4), Fraction(1))


def test_spine_weights_frozen_cases():
    # K5: d=4, psi=3/4 makes psi*d integral: w = 2*3 - 4 - 1/2 = 3/2
    k5 = build_graph(5, complete_edges(5))
    h = build_lifted_graph(k5, Fraction(3, 4))
    assert h.scale == 20
    assert all(h.spine_weight(i) == Fraction(3, 2) for i in range(5))
    # 3-regular, psi=3/5: psi*d = 9/5 is fractional: w = 2 - 3 + 1 - 1/40
    g = gen_rrg(10, 3, seed=1)
    h2 = build_lifted_graph(g, Fraction(3, 5))
    assert all(h2.spine_weight(i) == Fraction(-1, 40) for i in range(10))


def test_spine_weights_match_formula_oracle():
    g = gen_pa(30, 2, seed=4)  # degree spread from 2 up to a hub
    for psi in PSIS:
        h = build_lifted_graph(g, psi)
        for i in range(g.n):
            assert h.spine_weight(i) == naive_spine_weight(int(g.degree(i)),
                                                           psi, g.n)


def test_build_lifted_graph_validation():
    g = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ValueError):
        build_lifted_graph(g, Fraction(1, 2))
    with pytest.raises(ValueError):
        build_lifted_graph(g, Fraction(6, 5))
    with pytest.raises(ValueError):
        build_lifted_graph(build_graph(3, [(0, 1)]), Fraction(3, 4))


def test_potential_matches_edge_by_edge_oracle():
    rng = np.random.default_rng(42)
    for _ in range(40):
        n = int(rng.integers(3, 9))
        g = gen_er(n, 0.6, seed=int(rng.integers(1 << 30)))
        if g.m == 0 or g.degrees.min() < 1:
            continue
        psi = PSIS[int(rng.integers(len(PSIS)))]
        h = build_lifted_graph(g, psi)
        lift = rng.integers(0, 2, size=2 * n).astype(np.uint8)
        val = potential(h, lift)
        phi1, phi2, phi = naive_lift_potential(g, psi, lift)
        assert val.phi1 == phi1
        assert val.phi2 == phi2
        assert val.phi == phi
        # doubling the G coloring: phi2 = 0 and phi = twice the bichromatic count
        c = rng.integers(0, 2, size=n).astype(np.uint8)
        doubled = potential(h, np.concatenate([c, c]))
        assert doubled.phi2 == 0
        assert doubled.phi == 2 * count_bichromatic(g, c)


def test_periodic_step_alternates_sides():
    """One edge at threshold 1: each x_i weighs its G-neighbor (1) against
    its own spine (1/2), so round 1 swaps the X side and the result is a
    fixed point of H encoding the two-cycle of G."""
    g = build_graph(2, [(0, 1)])
    h = build_lifted_graph(g, Fraction(1))
    lift = np.array([1, 0, 1, 0], dtype=np.uint8)
    after1 = periodic_step(h, lift, 1)
    assert after1.tolist() == [0, 1, 1, 0]   # only X moved
    after2 = periodic_step(h, after1, 2)
    assert after2.tolist() == [0, 1, 1, 0]   # Y saw no reason to move
    assert periodic_step(h, after2, 3).tolist() == [0, 1, 1, 0]
    with pytest.raises(ValueError):
        periodic_step(h, np.zeros(3, dtype=np.uint8), 1)


def test_periodic_step_reports_weighted_ties():
    """A zero spine weight (never produced by the builder) forces an exact
    tie on the middle node of a path, which must be loudly rejected."""
    p3 = build_graph(3, [(0, 1), (1, 2)])
    h = WeightedBipartiteGraph(g=p3, threshold=Fraction(3, 4), scale=12,
                               spine_scaled=np.zeros(3, dtype=np.int64))
    lift = np.array([0, 0, 0, 1, 0, 0], dtype=np.uint8)  # y_0 black
    with pytest.raises(PeriodicTieError):
        periodic_step(h, lift, 1)


def test_certificate_single_edge_flat_phi():
    """Threshold 1 on one edge is a two-node blinker: both X nodes flip in
    round 1, each paying its 1/2 margin into a newly bichromatic spine, so
    phi stays flat at 2*m_star forever while phi1 drops by flips/2."""
    g = build_graph(2, [(0, 1)])
    cert = certify_descent(g, Fraction(1), np.array([1, 0], dtype=np.uint8))
    assert cert.ok
    assert cert.m_star == 1
    assert cert.rounds_to_fixation == 1
    assert cert.g_period == 2
    assert cert.flips_per_round == [2, 0, 0]
    assert cert.phi_series == [Fraction(2)] * 4
    assert cert.phi2_series == [0, 2, 2, 2]


def test_certificate_blinker_fixes_in_the_lift():
    """The C4 blinker has G-period 2, but its lift reaches a fixed point
    after one round, encoding the two-cycle as (next, current)."""
    c4 = build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    c0 = np.array([1, 0, 1, 0], dtype=np.uint8)
    cert = certify_descent(c4, Fraction(3, 4), c0)
    assert cert.ok
    assert cert.m_star == 4
    assert cert.rounds_to_fixation == 1
    assert cert.g_period == 2
    assert cert.flips_per_round == [4, 0, 0]
    assert cert.phi_series[0] == Fraction(8)
    assert cert.phi_series[1] == Fraction(23, 4)
    assert cert.phi2_series[1] == 4


def test_certificate_monochromatic_start():
    g = gen_rrg(20, 4, seed=2)
    cert = certify_descent(g, Fraction(3, 5), np.ones(20, dtype=np.uint8))
    assert cert.ok
    assert cert.m_star == 0
    assert cert.rounds_to_fixation == 0
    assert cert.g_period == 1
    assert cert.phi_series[0] == 0


def test_certificates_on_random_instances():
    """Random small instances at the four thresholds: every internal check
    passes and the externally recomputed facts agree with the fields."""
    rng = np.random.default_rng(314)
    done = 0
    while done < 50:
        n = int(rng.integers(3, 11))
        g = gen_er(n, float(rng.uniform(0.3, 0.8)), seed=int(rng.integers(1 << 30)))
        if g.m == 0:
            continue
        psi = PSIS[int(rng.integers(len(PSIS)))]
        c0 = rng.integers(0, 2, size=n).astype(np.uint8)
        cert = certify_descent(g, psi, c0)
        assert cert.ok, cert.failures
        assert cert.phi_series[0] == 2 * cert.m_star
        assert cert.rounds_to_fixation <= 4 * cert.m_star
        assert sum(cert.flips_per_round) <= 4 * cert.m_star
        for a, b in zip(cert.phi_series, cert.phi_series[1:]):
            assert b <= a
        assert all(p >= Fraction(-1, 4) for p in cert.phi_series)
        # the direct two-threshold run must land in the same cycle class
        cfg = ModelConfig(variant=Variant.PSI, thresholds=(psi, psi))
        res = run(g, c0, cfg)
        assert res.period == cert.g_period
        assert res.stabilization_time <= cert.rounds_to_fixation
        done += 1


def test_certify_strips_isolated_nodes():
    g = build_graph(5, [(0, 1), (1, 2), (0, 2)])  # nodes 3, 4 isolated
    c0 = np.array([1, 0, 1, 1, 0], dtype=np.uint8)
    cert = certify_descent(g, Fraction(3, 4), c0)
    assert cert.ok
    assert cert.m_star == 2
    assert cert.phi_series[0] == 4


def test_certificates_on_regular_graphs_at_scale():
    g = gen_rrg(500, 8, seed=0)
    for seed in range(3):
        rng = np.random.default_rng(seed)
        c0 = rng.integers(0, 2, size=500).astype(np.uint8)
        cert = certify_descent(g, Fraction(3, 5), c0)
        assert cert.ok, cert.failures
        assert cert.rounds_to_fixation <= 4 * cert.m_star


def test_write_certificate_csv(tmp_path):
    g = build_graph(2, [(0, 1)])
    cert = certify_descent(g, Fraction(1), np.array([1, 0], dtype=np.uint8))
    out = tmp_path / "cert.csv"
    write_certificate_csv(cert, out)
    assert out.read_bytes() == (
        b"t,phi1_num,phi1_den,phi2,flips\r\n"
        b"0,2,1,0,0\r\n"
        b"1,1,1,2,2\r\n"
        b"2,1,1,2,0\r\n"
        b"3,1,1,2,0\r\n"
    )
