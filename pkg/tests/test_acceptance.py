"""Acceptance suite.

Each test prints one [ACCEPTANCE] line with its verdict (visible even
under captured output), so the full run reads as a checklist of the
claims this package is supposed to reproduce quantitatively.  Expensive
16-mode scenario analyses are computed once per session and shared.
"""

import json
import time
from contextlib import contextmanager

import numpy as np
import pytest

from cvcluster import (
    ALT_LATTICE_STAGE_ORDER,
    CovarianceMatrix,
    HGraph,
    apply_symplectic,
    build_report,
    classify_edges,
    closest_cvcs,
    connected_components,
    covariance_from_graph,
    compare_to_target,
    export_graph,
    export_to_json,
    graph_from_covariance,
    graph_from_export,
    hgraph_state,
    import_graph,
    is_bipartite_self_inverse,
    ladder_schedule,
    lattice_schedule,
    phase_shift_symplectic,
    run_schedule,
    schedule_symplectic,
    schedule_union_adjacency,
    squeezing_db,
    tms_symplectic,
    vacuum_state,
    Schedule,
    Stage,
)
from conftest import random_schedule


@pytest.fixture
def announce(capsys):
    @contextmanager
    def _announce(name):
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"[ACCEPTANCE] {name}: FAIL")
            raise
        with capsys.disabled():
            print(f"[ACCEPTANCE] {name}: PASS")
    return _announce


def analyzed(schedule):
    return build_report(
        run_schedule(schedule),
        symplectic=schedule_symplectic(schedule),
        target=schedule_union_adjacency(schedule),
    )


@pytest.fixture(scope="session")
def ladder_high():
    schedule = ladder_schedule(17, 4.15)
    start = time.perf_counter()
    report = analyzed(schedule)
    elapsed = time.perf_counter() - start
    return schedule, report, elapsed


@pytest.fixture(scope="session")
def ladder_low():
    schedule = ladder_schedule(17, 0.15)
    return schedule, analyzed(schedule)


@pytest.fixture(scope="session")
def lattice_low_default():
    schedule = lattice_schedule(4, 4, 0.15)
    return schedule, analyzed(schedule)


@pytest.fixture(scope="session")
def lattice_high_default():
    schedule = lattice_schedule(4, 4, 4.15)
    return schedule, analyzed(schedule)


@pytest.fixture(scope="session")
def lattice_high_alt():
    schedule = lattice_schedule(4, 4, 4.15, stage_order=ALT_LATTICE_STAGE_ORDER)
    return schedule, analyzed(schedule)


def pair_support(components, n):
    mask = np.zeros((n, n), dtype=bool)
    for comp in components:
        i, j = comp[0] - 1, comp[1] - 1
        mask[i, j] = mask[j, i] = True
    return mask


def test_oracle_equivalence(announce):
    with announce("oracle equivalence: Z evolution vs covariance evolution, "
                  "100 random schedules, 1e-10"):
        rng = np.random.default_rng(20260815)
        start = time.perf_counter()
        for _ in range(100):
            schedule = random_schedule(rng, max_modes=8, max_gates=12,
                                       r_high=2.0)
            n = schedule.n
            z = vacuum_state(n)
            sigma = 0.5 * np.eye(2 * n)
            for stage in schedule.stages:
                for i, j in stage.pairs:
                    s = tms_symplectic(n, i, j, stage.r)
                    z = apply_symplectic(s, z)
                    sigma = s.matrix @ sigma @ s.matrix.T
            z_oracle = graph_from_covariance(
                CovarianceMatrix((sigma + sigma.T) / 2))
            assert np.abs(z.z - z_oracle.z).max() <= 1e-10
        assert time.perf_counter() - start < 10.0


def test_closed_form_two_mode(announce):
    with announce("closed-form two-mode: Z' = [[i sech 2r, tanh 2r], "
                  "[tanh 2r, i sech 2r]], 1e-12"):
        for r in (0.15, 1.0, 4.15):
            z = apply_symplectic(tms_symplectic(2, 1, 2, r), vacuum_state(2))
            result = closest_cvcs(z)
            sech, th = 1 / np.cosh(2 * r), np.tanh(2 * r)
            expected = np.array([[1j * sech, th], [th, 1j * sech]])
            assert result.subset == (1,)
            assert result.ties == 2
            assert np.abs(result.z_prime.z - expected).max() <= 1e-12
            shifted = apply_symplectic(
                phase_shift_symplectic(2, [-np.pi / 2, 0.0]), z)
            assert np.abs(shifted.z - expected).max() <= 1e-12


def test_ladder_low_squeezing(announce, ladder_low):
    with announce("ladder low squeezing (p=17, r=0.15): ladder weights "
                  "0.27 +- 0.03, self loops 0.92i +- 0.03 (mean), "
                  "other edges <= 5e-2"):
        schedule, report = ladder_low
        re = report.phased.z_prime.z.real
        union = schedule_union_adjacency(schedule).astype(bool)
        ladder_weights = re[union]
        assert ladder_weights.min() >= 0.27 - 0.03
        assert ladder_weights.max() <= 0.27 + 0.03
        loops = report.phased.z_prime.z.imag.diagonal()
        assert abs(loops.mean() - 0.92) <= 0.03
        off = np.abs(re.copy())
        off[union] = 0.0
        np.fill_diagonal(off, 0.0)
        assert off.max() <= 5e-2
        assert report.connected and not report.useful


def test_ladder_high_squeezing(announce, ladder_high):
    with announce("ladder high squeezing (p=17, r=4.15): Im eigenvalues "
                  "<= 1e-5, 8 two-mode components, |weights| = 1 +- 0.02, "
                  "residual edges <= 5e-2"):
        _, report, _ = ladder_high
        assert max(abs(v) for v in report.im_spectrum) <= 1e-5
        assert len(report.components) == 8
        assert all(len(c) == 2 for c in report.components)
        re = report.phased.z_prime.z.real
        support = pair_support(report.components, 16)
        pair_weights = np.abs(re[support])
        assert pair_weights.min() >= 0.98
        assert pair_weights.max() <= 1.02
        off = np.abs(re.copy())
        off[support] = 0.0
        np.fill_diagonal(off, 0.0)
        assert off.max() <= 5e-2
        assert not report.useful


def test_lattice_low_squeezing(announce, lattice_low_default):
    with announce("lattice low squeezing (4x4, r=0.15, default stage "
                  "order): grid weights 0.26 +- 0.04, self loops "
                  "0.92i +- 0.03 (mean)"):
        schedule, report = lattice_low_default
        re = report.phased.z_prime.z.real
        union = schedule_union_adjacency(schedule).astype(bool)
        grid_weights = re[union]
        assert grid_weights.min() >= 0.26 - 0.04
        assert grid_weights.max() <= 0.26 + 0.04
        loops = report.phased.z_prime.z.imag.diagonal()
        assert abs(loops.mean() - 0.92) <= 0.03
        assert report.connected and not report.useful


def test_lattice_high_squeezing(announce, lattice_high_default,
                                lattice_high_alt):
    with announce("lattice high squeezing (4x4, r=4.15): stage order "
                  "0,1,3,2 passes Im <= 1e-2 with 8 two-mode components; "
                  "default color order fails the structure (recorded)"):
        _, alt = lattice_high_alt
        assert max(abs(v) for v in alt.im_spectrum) <= 1e-2
        assert len(alt.components) == 8
        assert all(len(c) == 2 for c in alt.components)
        assert not alt.useful

        # The published gate order for the lattice is unknown; under the
        # default greedy color order the state does not disconnect into
        # two-mode pairs.  Both outcomes are part of the record.
        _, default = lattice_high_default
        default_sizes = sorted(len(c) for c in default.components)
        assert default_sizes != [2] * 8
        assert default_sizes == [2, 2, 2, 2, 4, 4]
        assert default.phased.error > 1e-2


def test_negative_control(announce, ladder_high, lattice_high_alt):
    with announce("negative control: intended targets mismatch "
                  "(rel residual > 0.5) while the disconnected-pairs "
                  "structure matches"):
        for _, report, *_ in (ladder_high, lattice_high_alt):
            assert report.comparison.relative_residual > 0.5
            assert not report.comparison.matches

            n = report.phased.z_prime.n
            re = report.phased.z_prime.z.real
            signed_pairs = np.zeros((n, n))
            for comp in report.components:
                i, j = comp[0] - 1, comp[1] - 1
                sign = np.sign(re[i, j])
                signed_pairs[i, j] = signed_pairs[j, i] = sign
            pairs_cmp = compare_to_target(report.phased.z_prime, signed_pairs)
            assert pairs_cmp.matches
            assert abs(pairs_cmp.scale - 1.0) <= 0.02


def test_matching_correspondence(announce):
    with announce("matching correspondence: weights tanh(2r), error "
                  "sech(2r) within 1e-10, target bipartite self-inverse"):
        r = 0.7
        schedule = Schedule(4, (Stage(((1, 2), (3, 4)), r),))
        adjacency = schedule_union_adjacency(schedule)
        assert is_bipartite_self_inverse(adjacency)

        z = run_schedule(schedule)
        z_h = hgraph_state(HGraph(-r * adjacency))
        assert np.abs(z.z - z_h.z).max() <= 1e-12

        result = closest_cvcs(z, symplectic=schedule_symplectic(schedule))
        th, sech = np.tanh(2 * r), 1 / np.cosh(2 * r)
        assert abs(result.error - sech) <= 1e-10
        re = result.z_prime.z.real
        assert abs(re[0, 1] - th) <= 1e-10
        assert abs(re[2, 3] - th) <= 1e-10
        off = re.copy()
        off[0, 1] = off[1, 0] = off[2, 3] = off[3, 2] = 0.0
        assert np.abs(off).max() <= 1e-10


def test_invariant_suites(announce, rng, ladder_low, ladder_high):
    with announce("invariant suites: symplectic residuals, purity, "
                  "composition, stage permutation, threshold "
                  "monotonicity, export round trip, dB convention"):
        omega = np.block([[np.zeros((4, 4)), np.eye(4)],
                          [-np.eye(4), np.zeros((4, 4))]])
        total = schedule_symplectic(ladder_schedule(5, 1.0)).matrix
        assert np.abs(total @ omega @ total.T - omega).max() <= 1e-10

        for _ in range(5):
            schedule = random_schedule(rng, max_modes=6, max_gates=8)
            sigma = covariance_from_graph(run_schedule(schedule)).sigma
            _, logdet = np.linalg.slogdet(2.0 * sigma)
            assert abs(np.expm1(logdet)) <= 1e-8

        schedule = ladder_schedule(5, 0.9)
        z_stagewise = run_schedule(schedule)
        z_total = apply_symplectic(schedule_symplectic(schedule),
                                   vacuum_state(4))
        assert np.abs(z_stagewise.z - z_total.z).max() <= 1e-12

        flipped = Schedule(schedule.n, tuple(
            Stage(tuple(reversed(stage.pairs)), stage.r)
            for stage in schedule.stages))
        assert np.abs(run_schedule(flipped).z - z_stagewise.z).max() <= 1e-13

        z_low = ladder_low[1].phased.z_prime
        thresholds = (0.02, 0.1, 0.3, 0.9)
        counts = [len(connected_components(z_low.z.real, t))
                  for t in thresholds]
        assert counts == sorted(counts)
        edge_sets = [{(e.i, e.j) for e in classify_edges(z_low, t).edges}
                     for t in thresholds]
        assert all(b <= a for a, b in zip(edge_sets, edge_sets[1:]))

        z_high = ladder_high[1].phased.z_prime
        text = export_to_json(export_graph(z_high, {"case": "round trip"}))
        assert np.array_equal(graph_from_export(import_graph(text)).z,
                              z_high.z)
        assert json.loads(text)["metadata"]["case"] == "round trip"

        assert squeezing_db(0.0) == 0.0
        assert abs(squeezing_db(0.15) - 1.3) <= 5e-3
        assert abs(squeezing_db(4.15) - 36.0) <= 5e-2


def test_performance(announce, ladder_high):
    with announce("performance: exhaustive 2^16 subset search (n=16) "
                  "within 60 s"):
        _, report, elapsed = ladder_high
        assert report.phased.search == "exhaustive"
        assert report.phased.z_prime.n == 16
        assert elapsed <= 60.0
