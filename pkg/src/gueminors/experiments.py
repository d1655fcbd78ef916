"""Verification suites: seeded Monte Carlo comparisons and exact oracle sweeps.

Each ``run_*`` function takes a config dict (see ``configs/*.json``) and
returns a list of :class:`ResultRecord`.  Randomness is organized in blocks of
replicates; block ``b`` of side ``s`` of suite ``x`` always reads stream
``RngStream(seed, b, (x, s))``, so results do not depend on the worker count
or completion order.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from importlib import resources
from typing import Any, Callable

import numpy as np

from . import _backend
from .functionals import (
    block_limit_spectra,
    block_sizes,
    gue_limit_sample,
    max_functional_batch,
    proposition_functional_batch,
    proposition_functional_direct,
    traceless_top_eigenvalues,
)
from .hermitian import minor_spectra_batch
from .markov import (
    CyclicMarkovSpec,
    check_sigma_u,
    correlated_from_standard,
    markov_sigma,
    random_spec,
    sigma_u_criterion_k4,
)
from .paths import (
    collection_weight,
    is_ordered,
    multipath_lpp_bruteforce,
    multipath_lpp_dp_batch,
    normalize_ends,
    normalize_starts,
    order_paths,
    random_disjoint_collection,
)
from .rsk import lis_batch, shape_pattern_batch, word_shape_batch
from .sampling import (
    RngStream,
    brownian_increments,
    geometric_moments,
    sample_geometric_array_batch,
    sample_gue_batch,
    sample_words_iid,
    sample_words_markov,
    validate_probability_vector,
)
from .stats import energy_distance, ks_two_sample, wasserstein1

SUITES = ("theorem1", "prelimit", "corollary1", "corollary2", "markov", "oracles")
_SUITE_CODE = {name: i + 1 for i, name in enumerate(SUITES)}

CSV_HEADER = "experiment,statistic,l,k,n_samples,n_steps,distance,p_value,threshold,pass,seed,ms"


class ConfigError(ValueError):
    pass


@dataclass
class ResultRecord:
    experiment: str
    statistic: str
    l: int | None
    k: int | None
    n_samples: int
    n_steps: int | None
    distance: float
    p_value: float | None
    threshold: float
    passed: bool
    seed: int
    ms: int
    exact: bool = False
    diagnostic: bool = False

    def csv_row(self, timing: bool = True) -> str:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, bool):
                return "true" if x else "false"
            if isinstance(x, float):
                return repr(float(x))
            return str(x)

        cells = [
            self.experiment, self.statistic, self.l, self.k, self.n_samples, self.n_steps,
            self.distance, self.p_value, self.threshold, self.passed, self.seed,
            self.ms if timing else 0,
        ]
        return ",".join(fmt(c) for c in cells)


# ------------------------------------------------------------------ config

def default_config(suite: str) -> dict[str, Any]:
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}")
    text = resources.files("gueminors").joinpath("configs", f"{suite}.json").read_text()
    return json.loads(text)


def merge_config(suite: str, overrides: dict[str, Any] | None = None) -> dict[str, Any]:
    cfg = default_config(suite)
    for key, val in (overrides or {}).items():
        if isinstance(val, dict) and isinstance(cfg.get(key), dict):
            cfg[key] = {**cfg[key], **val}
        else:
            cfg[key] = val
    return cfg


_MIN_VALUE = {"n_samples": 2, "N": 1, "n_steps": 1, "M": 1}


def _need(cfg, *keys):
    for key in keys:
        if key not in cfg:
            raise ConfigError(f"config is missing {key!r}")
        if key in _MIN_VALUE:
            val = cfg[key]
            if not isinstance(val, int) or isinstance(val, bool) or val < _MIN_VALUE[key]:
                raise ConfigError(f"{key} must be an integer >= {_MIN_VALUE[key]}, got {val!r}")


def _threshold(cfg, name):
    try:
        return float(cfg["thresholds"][name])
    except KeyError:
        raise ConfigError(f"config has no threshold {name!r}") from None


def _prob_vector(cfg, key="p"):
    try:
        return validate_probability_vector(cfg[key])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"invalid probability vector {key!r}: {exc}") from None


# ------------------------------------------------------------- parallelism

def _blocks(n: int, size: int) -> list[tuple[int, int]]:
    return [(b, min(size, n - b * size)) for b in range((n + size - 1) // size)]


def _map_blocks(fn: Callable, tasks: list[tuple], workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, *zip(*tasks)))


def _stream(seed: int, suite: str, side: int, block: int) -> RngStream:
    return RngStream(seed, block, (_SUITE_CODE[suite], side))


def _gather(fn, seed, suite, side, n, block_size, workers, *args):
    tasks = [(seed, suite, side, b, size, *args) for b, size in _blocks(n, block_size)]
    return np.concatenate(_map_blocks(fn, tasks, workers), axis=0)


# ---------------------------------------------------------------- helpers

def _pairs(m: int) -> list[tuple[int, int]]:
    return [(ell, k) for k in range(1, m + 1) for ell in range(1, k + 1)]


class _Clock:
    def __init__(self):
        self.t0 = time.perf_counter()

    def ms(self) -> int:
        return int(round(1000 * (time.perf_counter() - self.t0)))


def _compare(name, stat, a, b, cfg, l, k, n_steps, clock, w1=True, ks=True) -> list[ResultRecord]:
    seed = int(cfg["seed"])
    out = []
    n = int(min(len(a), len(b)))
    if w1:
        thr = _threshold(cfg, "w1")
        d = wasserstein1(a, b)
        out.append(ResultRecord(name, f"{stat}:w1", l, k, n, n_steps, d, None, thr, d <= thr, seed, clock.ms()))
    if ks:
        thr = _threshold(cfg, "ks_p")
        d, p = ks_two_sample(a, b)
        out.append(ResultRecord(name, f"{stat}:ks", l, k, n, n_steps, d, p, thr, p >= thr, seed, clock.ms()))
    return out


def _energy(name, stat, a, b, cfg, clock, side=9, l=None, k=None, n_steps=None) -> ResultRecord:
    seed = int(cfg["seed"])
    thr = _threshold(cfg, "energy_p")
    en = cfg.get("energy", {})
    e, p = energy_distance(
        a, b,
        n_permutations=int(en.get("n_permutations", 999)),
        rng=_stream(seed, name, side, 0),
        max_points=en.get("max_points", 2000),
    )
    return ResultRecord(name, f"{stat}:energy", l, k, int(min(len(a), len(b))), n_steps, e, p, thr, p >= thr, seed, clock.ms())


# ------------------------------------------- minor partial sums vs functional

def _t1_gue_block(seed, suite, side, block, size, m):
    h = sample_gue_batch(m, size, _stream(seed, suite, side, block))
    spec = minor_spectra_batch(h)
    csum = np.cumsum(spec, axis=2)
    return np.stack([csum[:, k - 1, ell - 1] for ell, k in _pairs(m)], axis=1)


def _t1_bm_block(seed, suite, side, block, size, m, n_steps):
    incr = brownian_increments(size, n_steps, m, _stream(seed, suite, side, block))
    return np.stack([max_functional_batch(incr, ell, k) for ell, k in _pairs(m)], axis=1)


def theorem1_samples(cfg) -> tuple[np.ndarray, np.ndarray]:
    """GUE partial sums and Brownian functionals, columns ordered as ``_pairs(M)``."""
    m, n, steps = int(cfg["M"]), int(cfg["n_samples"]), int(cfg["n_steps"])
    seed, bs, workers = int(cfg["seed"]), int(cfg.get("block_size", 256)), int(cfg.get("workers", 1))
    gue = _gather(_t1_gue_block, seed, "theorem1", 0, n, bs, workers, m)
    bm = _gather(_t1_bm_block, seed, "theorem1", 1, n, bs, workers, m, steps)
    return gue, bm


def run_theorem1(cfg) -> list[ResultRecord]:
    _need(cfg, "M", "n_samples", "n_steps", "seed")
    m = int(cfg["M"])
    if not 1 <= m <= int(cfg.get("max_M", 6)):
        raise ConfigError(f"M={m} outside 1..{cfg.get('max_M', 6)}")
    clock = _Clock()
    gue, bm = theorem1_samples(cfg)
    out = []
    for col, (ell, k) in enumerate(_pairs(m)):
        out += _compare("theorem1", "partial_sum_vs_max_functional", gue[:, col], bm[:, col],
                        cfg, ell, k, int(cfg["n_steps"]), clock)
    return out


def null_calibration(cfg, n_runs: int = 200) -> list[list[float]]:
    """KS p-values between two independent GUE-side samples, per run and pair."""
    m, n = int(cfg["M"]), int(cfg["n_samples"])
    bs = int(cfg.get("block_size", 256))
    out = []
    for run in range(n_runs):
        a = _gather(_t1_gue_block, int(cfg["seed"]), "theorem1", 10 + 2 * run, n, bs, 1, m)
        b = _gather(_t1_gue_block, int(cfg["seed"]), "theorem1", 11 + 2 * run, n, bs, 1, m)
        out.append([ks_two_sample(a[:, c], b[:, c])[1] for c in range(a.shape[1])])
    return out


# ------------------------------------------------------------- pre-limit

def _pre_array_block(seed, suite, side, block, size, n, m, q):
    w = sample_geometric_array_batch(size, n, m, q, _stream(seed, suite, side, block))
    pat = shape_pattern_batch(w)
    e, v = geometric_moments(q)
    xi = (pat - e * n) / np.sqrt(v * n)
    return _flatten_pattern(xi, m)


def _pre_gue_block(seed, suite, side, block, size, m):
    return _flatten_pattern(minor_spectra_batch(sample_gue_batch(m, size, _stream(seed, suite, side, block))), m)


def _flatten_pattern(pat: np.ndarray, m: int) -> np.ndarray:
    return np.stack([pat[:, k - 1, i - 1] for i, k in _coords(m)], axis=1)


def _coords(m: int) -> list[tuple[int, int]]:
    return [(i, k) for k in range(1, m + 1) for i in range(1, k + 1)]


def run_prelimit(cfg) -> list[ResultRecord]:
    _need(cfg, "M", "q", "N", "n_samples", "seed")
    m, q, big_n = int(cfg["M"]), float(cfg["q"]), int(cfg["N"])
    if not 0 < q < 1 or big_n < 1 or m < 1:
        raise ConfigError("need 0 < q < 1, N >= 1, M >= 1")
    n, seed = int(cfg["n_samples"]), int(cfg["seed"])
    bs, workers = int(cfg.get("block_size", 64)), int(cfg.get("workers", 1))
    clock = _Clock()
    xi = _gather(_pre_array_block, seed, "prelimit", 0, n, bs, workers, big_n, m, q)
    mu = _gather(_pre_gue_block, seed, "prelimit", 1, n, max(bs, 256), workers, m)
    out = []
    for col, (i, k) in enumerate(_coords(m)):
        out += _compare("prelimit", "xi_vs_mu", xi[:, col], mu[:, col], cfg, i, k, big_n, clock, ks=False)
    out.append(_energy("prelimit", "xi_pattern_vs_mu_pattern", xi, mu, cfg, clock, n_steps=big_n))
    return out


# ------------------------------------------------------------ corollaries

def _lis_block(seed, suite, side, block, size, big_n, p):
    words = sample_words_iid(size, big_n, p, _stream(seed, suite, side, block))
    return lis_batch(words, len(p)).astype(float)


def _shape_block(seed, suite, side, block, size, big_n, p):
    words = sample_words_iid(size, big_n, p, _stream(seed, suite, side, block))
    return word_shape_batch(words, len(p)).astype(float)


def _limit_block(seed, suite, side, block, size, k1, p_max, variant):
    return gue_limit_sample(k1, p_max, _stream(seed, suite, side, block), variant=variant, size=size)


def _block_limit_block(seed, suite, side, block, size, p):
    return block_limit_spectra(p, size, _stream(seed, suite, side, block))


def run_corollary1(cfg) -> list[ResultRecord]:
    _need(cfg, "p", "N", "n_samples", "seed")
    p = _prob_vector(cfg)
    big_n, n, seed = int(cfg["N"]), int(cfg["n_samples"]), int(cfg["seed"])
    bs, workers = int(cfg.get("block_size", 16)), int(cfg.get("workers", 1))
    p_max, k1 = float(p[0]), block_sizes(p)[0]
    clock = _Clock()
    lis = _gather(_lis_block, seed, "corollary1", 0, n, bs, workers, big_n, p)
    stat = (lis - big_n * p_max) / np.sqrt(big_n * p_max)
    out = []
    for side, variant in ((1, "b"), (2, "a")):
        lim = _gather(_limit_block, seed, "corollary1", side, n, 4096, workers, k1, p_max, variant)
        out += _compare("corollary1", f"lis_vs_limit_{variant}", stat, lim, cfg, 1, k1, big_n, clock)
    nv = int(cfg.get("n_variant_samples", 20000))
    va = _gather(_limit_block, seed, "corollary1", 3, nv, 4096, workers, k1, p_max, "a")
    vb = _gather(_limit_block, seed, "corollary1", 4, nv, 4096, workers, k1, p_max, "b")
    out += _compare("corollary1", "limit_a_vs_limit_b", va, vb, cfg, 1, k1, None, clock, w1=False)
    return out


def run_corollary2(cfg) -> list[ResultRecord]:
    _need(cfg, "p", "N", "n_samples", "seed")
    p = _prob_vector(cfg)
    big_n, n, seed = int(cfg["N"]), int(cfg["n_samples"]), int(cfg["seed"])
    bs, workers = int(cfg.get("block_size", 16)), int(cfg.get("workers", 1))
    clock = _Clock()
    shape = _gather(_shape_block, seed, "corollary2", 0, n, bs, workers, big_n, p)
    xi = (shape - big_n * p) / np.sqrt(big_n * p)
    mu = _gather(_block_limit_block, seed, "corollary2", 1, n, 4096, workers, p)
    out = []
    for i in range(len(p)):
        diag = _compare("corollary2", "xi_vs_mu", xi[:, i], mu[:, i], cfg, i + 1, len(p), big_n, clock, w1=False)
        for r in diag:
            # per-coordinate KS is reported but the verdict rests on the joint test
            r.statistic += "_diagnostic"
            r.diagnostic = True
        out += diag
    out.append(_energy("corollary2", "xi_vs_mu", xi, mu, cfg, clock, k=len(p), n_steps=big_n))
    return out


# ----------------------------------------------------------------- Markov

def _markov_functional_block(seed, suite, side, block, size, p, n_steps):
    spec = CyclicMarkovSpec(tuple(p))
    incr = brownian_increments(size, n_steps, spec.k - 1, _stream(seed, suite, side, block))
    return proposition_functional_batch(incr, spec) / np.sqrt(markov_sigma(spec)[0, 0])


def _markov_lis_block(seed, suite, side, block, size, big_n, p):
    spec = CyclicMarkovSpec(tuple(p))
    return lis_batch(sample_words_markov(size, big_n, spec, _stream(seed, suite, side, block)), spec.k)


def _markov_specs(cfg, k: int, count: int, tag: int) -> list[CyclicMarkovSpec]:
    given = [CyclicMarkovSpec(tuple(s)) for s in cfg.get("specs", []) if len(s) == k]
    rng = _stream(int(cfg["seed"]), "markov", 100 + tag, k).generator()
    return given + [random_spec(k, rng) for _ in range(max(0, count - len(given)))]


def run_markov(cfg) -> list[ResultRecord]:
    _need(cfg, "seed")
    seed = int(cfg["seed"])
    clock = _Clock()
    out = []

    # (1) pathwise identity: cos/sin expansion vs correlated motion + DP kernel
    pw = cfg.get("pathwise") or {}
    steps = int(pw.get("n_steps", 64))
    tol = _threshold(cfg, "pathwise_residual")
    for k in pw.get("ks", []):
        spec = _markov_specs(cfg, k, 1, 0)[0]
        n_paths = int(pw.get("n_paths", 1000))
        incr = brownian_increments(n_paths, steps, k - 1, _stream(seed, "markov", 1, k))
        fast = proposition_functional_batch(incr, spec)
        vals = np.concatenate([np.zeros((n_paths, 1, k - 1)), np.cumsum(incr, axis=1)], axis=1)
        slow = np.array([proposition_functional_direct(v, spec) for v in vals])
        res = float(np.abs(fast - slow).max())
        out.append(ResultRecord("markov", "pathwise_residual", None, k, n_paths, steps, res, None, tol,
                                res <= tol, seed, clock.ms(), exact=True))

    # (2) covariance of B~(1) against Sigma, both divided by Sigma_11
    cv = cfg.get("covariance") or {}
    tol = _threshold(cfg, "covariance_abs")
    n_cov = int(cv.get("n_samples", 100000))
    for k in cv.get("ks", []):
        for idx, spec in enumerate(_markov_specs(cfg, k, int(cv.get("specs_per_k", 5)), 1)):
            incr = brownian_increments(n_cov, 1, k - 1, _stream(seed, "markov", 2, 1000 * k + idx))[:, 0, :]
            tilde = correlated_from_standard(incr, spec)
            sigma = markov_sigma(spec)
            emp = np.cov(tilde, rowvar=False, ddof=1)
            dev = float(np.abs((emp - sigma) / sigma[0, 0]).max())
            out.append(ResultRecord("markov", "covariance_dev", idx + 1, k, n_cov, 1, dev, None, tol,
                                    dev <= tol, seed, clock.ms()))

    # (3) k = 3: normalized functional vs sqrt(3/2) x traceless-GUE top eigenvalue
    dist = cfg.get("k3_distribution") or {}
    if dist:
        spec = CyclicMarkovSpec(tuple(dist.get("p", (0.5, 0.25, 0.25))))
        n, st = int(dist.get("n_samples", 10000)), int(dist.get("n_steps", 4096))
        bs, workers = int(cfg.get("block_size", 256)), int(cfg.get("workers", 1))
        fun = _gather(_markov_functional_block, seed, "markov", 3, n, bs, workers, list(spec.p), st)
        gue = np.sqrt(1.5) * traceless_top_eigenvalues(3, n, _stream(seed, "markov", 4, 0))
        sub = dict(cfg, thresholds={"w1": _threshold(cfg, "k3_w1")})
        out += _compare("markov", "k3_functional_vs_traceless_gue", fun, gue, sub, 1, 3, st, clock, ks=False)

    # (4) k = 4: covariance verdict vs the algebraic criterion
    k4 = cfg.get("k4_criterion") or {}
    if k4:
        rng = _stream(seed, "markov", 5, 0).generator()
        n_specs = int(k4.get("n_specs", 1000))
        bad = 0
        for i in range(n_specs):
            spec = random_spec(4, rng, force_equal_12=(i % 4 == 0))
            if check_sigma_u(spec)[0] != sigma_u_criterion_k4(spec):
                bad += 1
        out.append(ResultRecord("markov", "k4_sigma_u_disagreements", None, 4, n_specs, None, float(bad),
                                None, 0.0, bad == 0, seed, clock.ms(), exact=True))

    # optional: Markov words against the functional, for a user-supplied sigma
    words = cfg.get("words") or {}
    if words.get("sigma"):
        spec = CyclicMarkovSpec(tuple(words["p"]))
        k, big_n, n = spec.k, int(words.get("N", 100000)), int(words.get("n_samples", 2000))
        st = int(words.get("n_steps", 1024))
        lis = _gather(_markov_lis_block, seed, "markov", 6, n, 16, 1, big_n, list(spec.p)).astype(float)
        stat = (lis - big_n / k) / (float(words["sigma"]) * np.sqrt(big_n))
        fun = _gather(_markov_functional_block, seed, "markov", 7, n, 256, 1, list(spec.p), st)
        fun = fun * np.sqrt(markov_sigma(spec)[0, 0])
        sub = dict(cfg, thresholds={"w1": float(words.get("w1", 0.1))})
        out += _compare("markov", "lis_vs_functional", stat, fun, sub, 1, k, big_n, clock, ks=False)
    return out


# ----------------------------------------------------------------- oracles

def run_oracles(cfg) -> list[ResultRecord]:
    _need(cfg, "seed")
    seed = int(cfg["seed"])
    clock = _Clock()
    out = []

    def rec(stat, count, bad, k=None):
        out.append(ResultRecord("oracles", stat, None, k, count, None, float(bad), None, 0.0,
                                bad == 0, seed, clock.ms(), exact=True))

    # DP vs brute force, integer and real weights
    rng = _stream(seed, "oracles", 0, 0).generator()
    bad = 0
    n_int = int(cfg.get("n_int_arrays", 500))
    for _ in range(n_int):
        n, k = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        w = rng.integers(0, 6, size=(n, k)).astype(float)
        for ell in range(1, k + 1):
            if multipath_lpp_dp_batch(w[None], ell)[0] != multipath_lpp_bruteforce(w, ell):
                bad += 1
    rec("dp_vs_bruteforce_int", n_int, bad)

    bad = 0
    n_real = int(cfg.get("n_real_arrays", 200))
    for _ in range(n_real):
        n, k = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        w = rng.standard_normal((n, k))
        for ell in range(1, k + 1):
            if abs(multipath_lpp_dp_batch(w[None], ell)[0] - multipath_lpp_bruteforce(w, ell)) > 1e-12:
                bad += 1
    rec("dp_vs_bruteforce_real", n_real, bad)

    # DP vs RSK partial sums on geometric arrays
    bad = 0
    n_rsk = int(cfg.get("n_rsk_arrays", 1000))
    for _ in range(n_rsk):
        n, k = int(rng.integers(1, 9)), int(rng.integers(1, 6))
        w = rng.geometric(0.5, size=(n, k)) - 1
        shape = shape_pattern_batch(w[None])[0, k - 1]
        for ell in range(1, k + 1):
            if multipath_lpp_dp_batch(w[None].astype(float), ell)[0] != shape[:ell].sum():
                bad += 1
    rec("dp_vs_rsk_partial_sums", n_rsk, bad)

    # path lemma procedures
    bad = 0
    n_col = int(cfg.get("n_collections", 10000))
    for _ in range(n_col):
        n, k = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        ell = int(rng.integers(1, k + 1))
        c = random_disjoint_collection(n, k, ell, rng)
        w = rng.integers(0, 5, size=(n, k))
        try:
            s = normalize_starts(c)
            e = normalize_ends(s)
            o = order_paths(e)
        except (ValueError, RuntimeError):
            bad += 1
            continue
        ok = (
            len(o) == len(c)
            and all(x == 1 for x in o.starts())
            and all(x == n for x in o.ends())
            and is_ordered(o)
            and c.support() <= s.support() <= e.support() == o.support()
            and collection_weight(w, c) <= collection_weight(w, s) <= collection_weight(w, e)
        )
        bad += not ok
    rec("path_lemmas", n_col, bad)
    return out


RUNNERS: dict[str, Callable[[dict], list[ResultRecord]]] = {
    "theorem1": run_theorem1,
    "prelimit": run_prelimit,
    "corollary1": run_corollary1,
    "corollary2": run_corollary2,
    "markov": run_markov,
    "oracles": run_oracles,
}


def suite_passed(records: list[ResultRecord]) -> bool:
    return all(r.passed for r in records if not r.diagnostic)


def summarize(suite: str, records: list[ResultRecord], cfg) -> dict[str, Any]:
    return {
        "experiment": suite,
        "passed": suite_passed(records),
        "n_rows": len(records),
        "n_failed": sum(not r.passed for r in records if not r.diagnostic),
        "n_diagnostic_failed": sum(not r.passed for r in records if r.diagnostic),
        "exact_failures": sum(r.exact and not r.passed for r in records),
        "seed": int(cfg["seed"]),
        "backend": _backend.NAME,
        "rows": [asdict(r) for r in records],
    }
