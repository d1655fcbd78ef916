"""Acceptance criteria 1-11 at their stated scales and tolerances.

Each test prints one ``criterion N: PASS|FAIL`` line (also collected in the
terminal summary).  Run directly with ``python tests/test_acceptance.py``.
"""

import time

import numpy as np

from gueminors.experiments import (
    merge_config,
    null_calibration,
    run_corollary1,
    run_corollary2,
    run_markov,
    run_oracles,
    run_prelimit,
    run_theorem1,
)
from gueminors.functionals import max_functional_batch
from gueminors.hermitian import INTERLACING_TOL, GelfandTsetlinPattern, diagonal_from_pattern, minor_spectra_batch
from gueminors.sampling import RngStream, brownian_increments, sample_gue_batch

RESULTS: dict[int, tuple[bool, str]] = {}


def report(n: int, ok: bool, detail: str, capsys=None) -> None:
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = (ok, line)
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert ok, line


def _oracles(**counts):
    base = {"n_int_arrays": 0, "n_real_arrays": 0, "n_rsk_arrays": 0, "n_collections": 0}
    return run_oracles(merge_config("oracles", {**base, **counts}))


def _fmt(recs):
    return ", ".join(f"{r.statistic}({r.l},{r.k})={r.distance:.4g}" + (f"/p={r.p_value:.3g}" if r.p_value is not None else "")
                     for r in recs)


def test_criterion_01(capsys):
    t0 = time.perf_counter()
    recs = _oracles(n_int_arrays=500, n_real_arrays=200)
    dt = time.perf_counter() - t0
    bad = sum(r.distance for r in recs)
    report(1, bad == 0 and dt < 30, f"DP vs brute force: {int(bad)} mismatches in 500 int + 200 real arrays, {dt:.1f}s", capsys)


def test_criterion_02(capsys):
    t0 = time.perf_counter()
    recs = _oracles(n_rsk_arrays=1000)
    dt = time.perf_counter() - t0
    bad = sum(r.distance for r in recs)
    report(2, bad == 0 and dt < 60, f"DP vs RSK partial sums: {int(bad)} mismatches in 1000 arrays, {dt:.1f}s", capsys)


def test_criterion_03(capsys):
    t0 = time.perf_counter()
    recs = _oracles(n_collections=10_000)
    dt = time.perf_counter() - t0
    bad = sum(r.distance for r in recs)
    report(3, bad == 0 and dt < 60, f"path lemmas: {int(bad)} failures in 10^4 collections, {dt:.1f}s", capsys)


def test_criterion_04(capsys):
    cfg = merge_config("markov", {
        "pathwise": {"ks": [2, 3, 4, 5, 6], "n_paths": 1000, "n_steps": 64},
        "covariance": None, "k3_distribution": None, "k4_criterion": None,
    })
    recs = [r for r in run_markov(cfg) if r.statistic == "pathwise_residual"]
    worst = max(r.distance for r in recs)
    report(4, len(recs) == 5 and worst <= 1e-10, f"max pathwise residual over k=2..6, 10^3 paths each: {worst:.2e}", capsys)


def test_criterion_05(capsys):
    worst_total = worst_diag = worst_inter = 0.0
    for m in range(1, 7):
        incr = brownian_increments(1000, 32, m, RngStream(5, m))
        total = incr.sum(axis=1)
        for k in range(1, m + 1):
            worst_total = max(worst_total, np.abs(max_functional_batch(incr, k, k) - total[:, :k].sum(axis=1)).max())
        h = sample_gue_batch(m, 1000, RngStream(5, 10 + m))
        pats = minor_spectra_batch(h)
        for hi, pa in zip(h, pats):
            pat = GelfandTsetlinPattern.from_array(pa)
            worst_diag = max(worst_diag, np.abs(diagonal_from_pattern(pat) - np.diag(hi).real).max())
            worst_inter = max(worst_inter, pat.interlacing_violation())
    ok = worst_total <= 1e-10 and worst_diag <= 1e-8 and worst_inter <= INTERLACING_TOL
    report(5, ok, f"forced total {worst_total:.1e}, diagonal {worst_diag:.1e}, interlacing {worst_inter:.1e} (M<=6, 10^3 draws)", capsys)


def test_criterion_06(capsys):
    cfg = merge_config("theorem1", {"M": 3, "n_samples": 20_000, "n_steps": 4096})
    recs = run_theorem1(cfg)
    recs2 = run_theorem1(dict(cfg, n_steps=8192))
    w1 = np.mean([r.distance for r in recs if r.statistic.endswith("w1")])
    w1_2 = np.mean([r.distance for r in recs2 if r.statistic.endswith("w1")])
    ok = len(recs) == 12 and all(r.passed for r in recs) and w1_2 - w1 <= 0.01
    report(6, ok, f"{_fmt(recs)}; mean W1 4096={w1:.4f}, 8192={w1_2:.4f}", capsys)


def test_criterion_07(capsys):
    recs = run_prelimit(merge_config("prelimit", {"M": 2, "q": 0.5, "N": 10_000, "n_samples": 10_000}))
    report(7, all(r.passed for r in recs), _fmt(recs), capsys)


def test_criterion_08(capsys):
    cfg = merge_config("corollary1", {"p": [1 / 3, 1 / 3, 1 - 2 / 3], "N": 100_000, "n_samples": 5000,
                                      "n_variant_samples": 20_000})
    recs = run_corollary1(cfg)
    main = [r for r in recs if r.statistic.startswith(("lis_vs_limit_b", "limit_a_vs_limit_b"))]
    report(8, all(r.passed for r in main), _fmt(recs), capsys)


def test_criterion_09(capsys):
    cfg = merge_config("corollary2", {"p": [1 / 3, 1 / 3, 1 - 2 / 3], "N": 100_000, "n_samples": 5000})
    recs = run_corollary2(cfg)
    joint = [r for r in recs if r.statistic.endswith("energy")]
    report(9, len(joint) == 1 and joint[0].passed, _fmt(recs), capsys)


def test_criterion_10(capsys):
    cfg = merge_config("markov", {"pathwise": None})
    recs = run_markov(cfg)
    cov = [r for r in recs if r.statistic == "covariance_dev"]
    k3 = [r for r in recs if r.statistic.startswith("k3_")]
    k4 = [r for r in recs if r.statistic.startswith("k4_")]
    ok = len(cov) == 15 and len(k3) == 1 and len(k4) == 1 and all(r.passed for r in cov + k3 + k4)
    report(10, ok, f"(a) max cov dev {max(r.distance for r in cov):.4f}; (b) W1 {k3[0].distance:.4f}; "
                   f"(c) {int(k4[0].distance)} disagreements", capsys)


def test_criterion_11(capsys):
    cfg = merge_config("theorem1", {"M": 3, "n_samples": 20_000})
    pvals = np.array(null_calibration(cfg, n_runs=200))
    good = int(np.sum(pvals.min(axis=1) >= 1e-3))
    below = int(np.sum(pvals < 0.01))
    report(11, good >= 195, f"{good}/200 null runs with every pair KS p >= 1e-3 ({below} of 1200 p-values < 0.01)", capsys)


if __name__ == "__main__":
    import sys

    failed = 0
    for n in range(1, 12):
        try:
            globals()[f"test_criterion_{n:02d}"](None)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
