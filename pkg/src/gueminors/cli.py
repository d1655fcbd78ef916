"""Command line entry point: ``verify <suite> [options]``.

Exit codes: 0 all rows pass, 2 a statistical row failed, 3 an exact identity
failed, 4 the configuration is invalid.
"""

from __future__ import annotations

import argparse
import json
import subprocess
import sys
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

from . import _backend
from .experiments import CSV_HEADER, RUNNERS, SUITES, ConfigError, merge_config, suite_passed, summarize

EXIT_OK, EXIT_STAT, EXIT_EXACT, EXIT_CONFIG = 0, 2, 3, 4


def version_string() -> str:
    try:
        base = version("gueminors")
    except PackageNotFoundError:
        base = "0+unknown"
    try:
        desc = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).resolve().parent, capture_output=True, text=True, timeout=5,
        )
        if desc.returncode == 0 and desc.stdout.strip():
            return f"{base}+g{desc.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return base


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="verify", description="Seeded verification suites.")
    ap.add_argument("suite", choices=SUITES)
    ap.add_argument("--config", type=Path, help="JSON document overriding the packaged defaults")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--samples", type=int, help="n_samples override")
    ap.add_argument("--steps", type=int, help="n_steps override")
    ap.add_argument("--workers", type=int)
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--no-timing", action="store_true",
                    help="write 0 in the ms column so reruns are byte-identical")
    return ap


def load_config(args) -> dict:
    overrides = {}
    if args.config is not None:
        try:
            overrides = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(overrides, dict):
            raise ConfigError("config must be a JSON object")
        if overrides.get("experiment", args.suite) != args.suite:
            raise ConfigError(f"config is for {overrides['experiment']!r}, not {args.suite!r}")
    for flag, key in (("seed", "seed"), ("samples", "n_samples"), ("steps", "n_steps"), ("workers", "workers")):
        val = getattr(args, flag)
        if val is not None:
            overrides[key] = val
    cfg = merge_config(args.suite, overrides)
    if int(cfg.get("workers", 1)) < 1:
        raise ConfigError("workers must be >= 1")
    return cfg


def write_outputs(out: Path, suite: str, cfg: dict, records, timing: bool = True) -> None:
    out.mkdir(parents=True, exist_ok=True)
    lines = [CSV_HEADER] + [r.csv_row(timing) for r in records]
    (out / f"{suite}.csv").write_text("\n".join(lines) + "\n")
    summary = summarize(suite, records, cfg)
    if not timing:
        for row in summary["rows"]:
            row["ms"] = 0
    (out / f"{suite}.summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    manifest = {"config": cfg, "version": version_string(), "seed": int(cfg["seed"]), "backend": _backend.NAME}
    (out / f"{suite}.manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        records = RUNNERS[args.suite](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    write_outputs(args.out, args.suite, cfg, records, timing=not args.no_timing)
    for r in records:
        tag = "PASS" if r.passed else ("note" if r.diagnostic else "FAIL")
        print(f"{tag} {r.experiment} {r.statistic} l={r.l} k={r.k} distance={r.distance:.4g} "
              f"p={r.p_value if r.p_value is None else f'{r.p_value:.3g}'} threshold={r.threshold:g}")
    if any(r.exact and not r.passed for r in records):
        return EXIT_EXACT
    if not suite_passed(records):
        return EXIT_STAT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
