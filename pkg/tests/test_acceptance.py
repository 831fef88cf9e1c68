"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the summary lines.
"""

from fractions import Fraction
import itertools
import math
import time

import numpy as np

import oracles
from starry.cli import main
from starry.dimension import (CounterexampleSpace, QSProfile, assouad_estimate,
                              counterexample_distance, covering_number, qs_obstruction)
from starry.excursion import (brownian_excursion, example51_grid, planted_zigzag,
                              zigzag_grid)
from starry.snake import map_metric, simulate_labels, simulate_labels_batch
from starry.spaces import EuclideanPoints
from starry.stars import (StarCertificate, generic_star_search, scan_windows,
                          star_from_window, star_parameters)
from starry.treemetric import SparseTableMin, TreeMetric

# Frozen reference from a 500-seed pilot (seeds 0..499) of the window-detection
# run below: fraction of seeds with at least one match, and the smallest
# deviation seen over all seeds and windows (the bound is 0.25).
WINDOW_PILOT = {"seeds": 500, "frequency": 0.0, "best_tol": 0.2996}
WINDOW_FLOOR = 0.60


def report(name, ok, detail):
    print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def full_distance_matrix(g):
    idx = np.arange(g.n_cells + 1)
    return TreeMetric(g).distances(idx, idx)


def ulp_slack(g):
    return 8 * np.finfo(float).eps * max(1.0, float(g.values.max()))


# ---------------------------------------------------------------------------------


def test_pseudometric_suites():
    with Timer() as t:
        bad = 0
        small = [zigzag_grid(4, 64), zigzag_grid(7, 32), example51_grid(64), zigzag_grid(3, 16)]
        small += [brownian_excursion(n, s) for n in (16, 32, 64) for s in range(4)]
        for g in small:
            d = full_distance_matrix(g)
            dyadic = g.provenance.startswith("zigzag")
            slack = 0.0 if dyadic else ulp_slack(g)
            bad += int(np.sum(d != d.T)) + int(np.sum(np.diag(d) != 0))
            bad += int(np.sum(d[:, None, :] > d[:, :, None] + d[None, :, :] + slack))

        g = brownian_excursion(2**12, 99)
        tm = TreeMetric(g)
        ijk = np.random.default_rng(12).integers(0, 2**12 + 1, size=(100_000, 3))
        i, j, k = ijk.T
        dij = tm.values[i] + tm.values[j] - 2 * tm.rmq.min(i, j)
        dik = tm.values[i] + tm.values[k] - 2 * tm.rmq.min(i, k)
        dkj = tm.values[k] + tm.values[j] - 2 * tm.rmq.min(k, j)
        dji = tm.values[j] + tm.values[i] - 2 * tm.rmq.min(j, i)
        bad += int(np.sum(dij != dji)) + int(np.sum(dij > dik + dkj + ulp_slack(g)))

        four = 0
        for g in [zigzag_grid(4, 32), zigzag_grid(5, 20)] + [brownian_excursion(32, s) for s in range(3)]:
            d = full_distance_matrix(g)
            n = d.shape[0]
            a, b, c, e = np.ix_(*[np.arange(n)] * 4)
            lhs = d[a, b] + d[c, e]
            rhs = np.maximum(d[a, c] + d[b, e], d[a, e] + d[b, c])
            slack = 0.0 if g.provenance.startswith("zigzag") else 2 * ulp_slack(g)
            four += int(np.sum(lhs > rhs + slack))
    ok = bad == 0 and four == 0 and t.elapsed < 30
    assert report("pseudometric suites", ok,
                  f"{bad} axiom and {four} four-point violations in {t.elapsed:.1f}s")


def test_rmq_oracle_equivalence():
    with Timer() as t:
        mismatches = 0
        for seed in range(20):
            n_cells = [32, 64, 128, 255, 256][seed % 5]
            g = brownian_excursion(n_cells, seed)
            v = g.values
            st = SparseTableMin(v)
            ii, jj = np.meshgrid(np.arange(v.size), np.arange(v.size), indexing="ij")
            got = st.min(ii, jj)
            brute = oracles.interval_min_table(v)
            mismatches += int(np.sum(got != brute))
    ok = mismatches == 0 and t.elapsed < 5
    assert report("RMQ oracle equivalence", ok, f"{mismatches} mismatches in {t.elapsed:.1f}s")


def test_snake_covariance():
    with Timer() as t:
        g = zigzag_grid(4, 64)
        tm = TreeMetric(g)
        z = simulate_labels_batch(tm, range(20_000))
        rng = np.random.default_rng(2024)
        pairs = [tuple(sorted(p)) for p in rng.integers(1, 64, size=(10, 2))]
        worst = 0.0
        for i, j in pairs:
            prod = z[:, i] * z[:, j] - z[:, i].mean() * z[:, j].mean()
            cov = np.cov(z[:, i], z[:, j])[0, 1]
            se = prod.std(ddof=1) / math.sqrt(prod.size)
            worst = max(worst, abs(cov - tm.interval_min(i, j)) / se)
            sq = (z[:, i] - z[:, j]) ** 2
            se_sq = sq.std(ddof=1) / math.sqrt(sq.size)
            if se_sq == 0:
                worst = max(worst, 0.0 if sq.mean() == tm.dist(i, j) else math.inf)
            else:
                worst = max(worst, abs(sq.mean() - tm.dist(i, j)) / se_sq)
    ok = worst <= 4 and t.elapsed < 120
    assert report("snake covariance", ok,
                  f"largest deviation {worst:.2f} standard errors over {len(pairs)} pairs "
                  f"in {t.elapsed:.1f}s")


def test_exact_star_extraction():
    with Timer() as t:
        worst = 0.0
        params_ok = star_parameters(6, exact=True) == (3, Fraction(2, 3))
        for n in (6, 8, 10):
            cells = 64 * n
            g = planted_zigzag(n, 4096, cells, cells)
            wm = scan_windows(g, n, [cells])[0]
            cert = star_from_window(g, wm)
            root = math.sqrt(wm.delta)
            params_ok &= cert is not None and (cert.a, cert.eta) == star_parameters(n, exact=True)
            worst = max(worst, np.max(np.abs(cert.center_distances / (0.5 * root) - 1)))
            off = cert.pair_distances[~np.eye(cert.n, dtype=bool)]
            worst = max(worst, np.max(np.abs(off / root - 1)))
    ok = params_ok and worst < 1e-12 and t.elapsed < 5
    assert report("exact star extraction", ok,
                  f"max relative error {worst:.1e}, parameters ok={params_ok}, {t.elapsed:.2f}s")


def test_counterexample_fidelity():
    with Timer() as t:
        pts = list(itertools.product(range(1, 9), repeat=2))
        d = {(p, q): counterexample_distance(p, q, exact=True) for p in pts for q in pts}
        axiom_bad = sum(d[p, q] != d[q, p] or d[p, q] < 0 for p in pts for q in pts)
        axiom_bad += sum(d[p, p] != 0 for p in pts)
        axiom_bad += sum(d[p, r] > d[p, q] + d[q, r] for p, q, r in itertools.product(pts, repeat=3))

        space = CounterexampleSpace(24)
        counts = [covering_number(range(len(space)), space, space.index(n, 1),
                                  2.0 ** -n, 2.0 ** -(n + 1)) for n in range(3, 13)]
        counts_ok = counts == list(range(3, 13))

        small = CounterexampleSpace(12)
        stars = 0
        for n in (6, 7):
            for a in (1.2, 1.5, 2.0, 3.0, 4.0):
                for eta in np.linspace(0.01, (a - 1) / 2, 5, endpoint=False):
                    stars += generic_star_search(small, range(len(small)), n, a, eta) is not None
    ok = axiom_bad == 0 and counts_ok and stars == 0 and t.elapsed < 60
    assert report("counterexample fidelity", ok,
                  f"{axiom_bad} axiom violations, covering counts {counts}, "
                  f"{stars} stars with n >= 6, {t.elapsed:.1f}s")


def test_assouad_calibration():
    with Timer() as t:
        line = EuclideanPoints(np.arange(4096) / 4095)
        pairs = [(R, R / q) for R in (0.05, 0.1, 0.2, 0.4) for q in (4, 8, 16, 64, 256)]
        alpha = assouad_estimate(range(4096), line, pairs).fitted_alpha

        # truncation deeper than the probed levels so that every ball B((n+1, 1), 2^-n)
        # with n <= 24 is present
        space = CounterexampleSpace(32)
        scales = [(2.0 ** -n, 2.0 ** -(n + 1)) for n in range(8, 25)]
        rep = assouad_estimate(range(len(space)), space, scales, centers=range(len(space)))
        exps = rep.exponents
        growing = all(b > a for a, b in zip(exps, exps[1:]))
    ok = 0.8 <= alpha <= 1.3 and growing and exps[-1] >= 4.5 and rep.nonconvergent \
        and t.elapsed < 60
    assert report("Assouad calibration", ok,
                  f"line alpha {alpha:.3f}; counterexample exponents strictly increasing="
                  f"{growing}, final {exps[-1]:.3f}; {t.elapsed:.1f}s")


def test_qs_obstruction_arithmetic():
    def star(n):
        cd, pd = np.ones(n), np.full((n, n), 2.0)
        return StarCertificate("tree", 0, tuple(range(1, n + 1)), Fraction(3),
                               Fraction(2, 3), 1.0, cd, pd)

    with Timer() as t:
        hi = qs_obstruction(star(45), QSProfile.linear(), 1, 2)
        lo = qs_obstruction(star(44), QSProfile.linear(), 1, 2)
    ok = (hi.threshold == Fraction(400, 9) and isinstance(hi.threshold, Fraction)
          and hi.verdict == "CONTRADICTS" and lo.verdict == "INSUFFICIENT" and t.elapsed < 1)
    assert report("QS obstruction arithmetic", ok,
                  f"threshold {hi.threshold}, n=45 {hi.verdict}, n=44 {lo.verdict}")


def window_detection_frequency(seeds, n=3, n_cells=2**16):
    lengths = [2**k for k in range(6, 13)]
    hits = 0
    for seed in seeds:
        if scan_windows(brownian_excursion(n_cells, seed), n, lengths):
            hits += 1
    return hits / len(seeds)


def test_stochastic_window_detection():
    with Timer() as t:
        freq = window_detection_frequency(range(50))
    ok = freq >= WINDOW_FLOOR and t.elapsed < 600
    assert report("stochastic window detection", ok,
                  f"{freq:.0%} of 50 seeds matched (floor {WINDOW_FLOOR:.0%}; "
                  f"pilot {WINDOW_PILOT['frequency']:.0%} of {WINDOW_PILOT['seeds']}, best "
                  f"tol {WINDOW_PILOT['best_tol']} vs bound 0.25); {t.elapsed:.1f}s")


def test_map_metric_properties():
    with Timer() as t:
        bad = 0
        for seed in range(10):
            tm = TreeMetric(brownian_excursion(2048, 500 + seed))
            sl = simulate_labels(tm, seed)
            small, big = map_metric(sl, 16), map_metric(sl, 64)
            for mm in (small, big):
                d = mm.d_map
                bad += int(np.sum(d != d.T)) + int(np.sum(np.diag(d) != 0))
                bad += int(np.sum(d[:, None, :] > d[:, :, None] + d[None, :, :]))
                bad += int(np.sum(d > mm.d_circ))
            shared = np.intersect1d(small.sample_indices, big.sample_indices)
            bad += int(shared.size != 16)
            bad += int(np.sum(big.distances(shared, shared) > small.distances(shared, shared)))
    ok = bad == 0 and t.elapsed < 120
    assert report("map-metric properties", ok, f"{bad} violations over 10 seeds in {t.elapsed:.1f}s")


def run_pipeline(root, threads):
    root.mkdir()

    def cli(*args):
        assert main([str(a) for a in args] + ["--threads", str(threads)]) == 0

    cli("sample", "--kind", "brownian", "--grid", 4096, "--seed", 17, "--out", root / "e.csv")
    cli("tree", "--in", root / "e.csv", "--subset", 64, "--out", root / "t.csv")
    cli("map", "--in", root / "e.csv", "--seed", 17, "--subset", 64, "--strategy", "extremes",
        "--out", root / "m.csv")
    cli("stars", "--in", root / "e.csv", "--n-min", 6, "--n-max", 8, "--out", root / "sb.json")
    cli("sample", "--kind", "zigzag:8", "--grid", 4096, "--out", root / "z.csv")
    cli("stars", "--in", root / "z.csv", "--n-min", 6, "--n-max", 10, "--out", root / "s.json",
        "--plot")
    cli("assouad", "--in", root / "m.csv", "--centers", 16, "--seed", 17, "--out", root / "a.csv")
    cli("obstruct", "--star", root / "s.json", "--psi", "power:2", "--C", 1, "--s", 1,
        "--out", root / "v.json")
    return {p.name: p.read_bytes() for p in sorted(root.iterdir())}


def test_end_to_end_determinism(tmp_path):
    with Timer() as t:
        first = run_pipeline(tmp_path / "one", 1)
        second = run_pipeline(tmp_path / "two", 1)
        threaded = run_pipeline(tmp_path / "eight", 8)
    same = first == second == threaded
    ok = same and len(first) == 9 and t.elapsed < 120
    assert report("end-to-end determinism", ok,
                  f"{len(first)} artifacts identical across runs and thread counts={same}; "
                  f"{t.elapsed:.1f}s")
