"""Batch front door: config parsing, subcommand dispatch, report emission.

Subcommands: build, verify-vaguelet, verify-riesz, counterexample,
simulate, all. One JSON document configures a run; unknown keys are
rejected. Reports embed the resolved config and are byte-reproducible for
identical config + seed. Exit codes: 0 all requested checks pass, 1 a
check failed, 2 configuration error (in which case nothing is written).
"""

from __future__ import annotations

import argparse
import copy
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .counterexample import (CounterexampleConfig, default_window,
                             ratio_exponent, run_counterexample,
                             vaguelet_violation)
from .family import FamilyBuilder, FamilyIndex
from .filters import FilterPair, filter_from_config
from .mra import WaveletSpec, check_cmf
from .procsim import SynthesisPlan, dyadic_times, simulate
from .report import CheckResult, dump_report, render_report, report_merge
from .riesz import (Truncation, biorthogonality_defect, bracket_sum, gram,
                    refinement_identity, riesz_bounds)
from .vaguelet import VagueletParams, synthesis_bound, vaguelet_suite


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


DEFAULT_CONFIG = {
    "wavelet": {"kind": "meyer"},
    "filters": {"h1": {"kind": "ou"}, "h2": {"kind": "ou"}},
    "output_dir": "vaguelab-out",
    "seed": 0,
    "build": {"J": 3, "K": 8},
    "vaguelet": {"alpha1": 0.9, "alpha2": 0.5, "j_min": 0, "j_max": 8,
                 "t_window": 32.0, "sides": ["primal", "dual"],
                 "synthesis_J": 4, "synthesis_K": 16},
    "riesz": {"J": 3, "K": 8, "refinement_levels": 4},
    "counterexample": {"gamma": 1.0, "j_min": None, "j_max": None,
                       "alpha1": 0.5},
    "simulate": {"J_detail": 6, "K": 64, "n_paths": 100,
                 "t_min": -2.0, "t_max": 2.0, "resolution": 10,
                 "time_step": 0.25, "synthesis_side": "primal",
                 "include_approximation": True, "j_coarse": 0},
}


def thread_count() -> int:
    """Parallelism cap from VAGUELET_LAB_THREADS (default: 1)."""
    raw = os.environ.get("VAGUELET_LAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"VAGUELET_LAB_THREADS={raw!r} is not an integer") \
            from exc
    if n < 1:
        raise ConfigError("VAGUELET_LAB_THREADS must be >= 1")
    return n


def _merge_section(defaults: dict, overrides: dict, path: str) -> dict:
    if not isinstance(overrides, dict):
        raise ConfigError(f"{path}: expected an object")
    unknown = sorted(set(overrides) - set(defaults))
    if unknown:
        raise ConfigError(f"{path}: unknown keys {unknown}")
    out = copy.deepcopy(defaults)
    for key, val in overrides.items():
        if isinstance(out[key], dict) and path not in ("wavelet", "filters.h1",
                                                       "filters.h2"):
            out[key] = _merge_section(out[key], val, f"{path}.{key}"
                                      if path else key)
        else:
            out[key] = copy.deepcopy(val)
    return out


def resolve_config(document: dict) -> dict:
    """Defaults overlaid with the user document; unknown keys rejected.

    The wavelet and filter sub-objects are replaced wholesale (their own
    key validation lives with their constructors).
    """
    if not isinstance(document, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = sorted(set(document) - set(DEFAULT_CONFIG))
    if unknown:
        raise ConfigError(f"unknown top-level config keys {unknown}")
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    for key, val in document.items():
        if key in ("wavelet",):
            cfg[key] = copy.deepcopy(val)
        elif key == "filters":
            if not isinstance(val, dict) or set(val) - {"h1", "h2"}:
                raise ConfigError("filters must be an object with keys h1, h2")
            for side in ("h1", "h2"):
                if side in val:
                    cfg["filters"][side] = copy.deepcopy(val[side])
        elif isinstance(cfg[key], dict):
            cfg[key] = _merge_section(cfg[key], val, key)
        else:
            cfg[key] = copy.deepcopy(val)
    # construct early so bad specs are config errors, not runtime failures
    _instantiate(cfg)
    return cfg


def _instantiate(cfg: dict):
    try:
        wavelet = WaveletSpec.from_config(cfg["wavelet"])
        pair = FilterPair(filter_from_config(cfg["filters"]["h1"]),
                          filter_from_config(cfg["filters"]["h2"]))
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    return wavelet, pair


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: list, rows: list) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(repr(float(v)) if isinstance(v, float)
                              else str(v) for v in row))
    return "\n".join(lines) + "\n"


def _write_report(cfg: dict, checks: list, out_path: Path) -> dict:
    report = render_report(checks, cfg)
    _atomic_write(out_path, dump_report(report))
    return report


def _exit_code(report: dict) -> int:
    return 0 if report["pass"] else 1


# ---------------------------------------------------------------- commands

def cmd_build(cfg: dict) -> dict:
    wavelet, pair = _instantiate(cfg)
    builder = FamilyBuilder(wavelet, pair)
    tr = Truncation(cfg["build"]["J"], cfg["build"]["K"])
    grid = builder.grid
    indices, spectra = [], {}
    for side in ("primal", "dual"):
        for idx in tr.indices(side, normalized=False):
            member = builder.build_member(idx)
            record = {"j": idx.j, "k": idx.k, "side": idx.side,
                      "role": idx.role, "log_norm": member.log_norm,
                      "norm": member.norm}
            indices.append(record)
            if idx.k == 0:
                key = f"member_{side}_{idx.role}_j{idx.j}"
                spectra[key] = member.spectrum
    out_dir = Path(cfg["output_dir"])
    manifest = {
        "wavelet": wavelet.config(), "filters": pair.config(),
        "grid": {"x_max": grid.x_max, "n": grid.n},
        "indices": indices,
    }
    for key, spectrum in spectra.items():
        rows = list(zip(spectrum.grid.x,
                        spectrum.values.real, spectrum.values.imag))
        _atomic_write(out_dir / f"{key}.csv",
                      _csv_text(["x", "re", "im"], rows))
        _atomic_write(out_dir / f"{key}.json", spectrum.to_json() + "\n")
    checks = [check_cmf(wavelet),
              CheckResult("build_manifest", True,
                          statistics={"n_members": len(indices)},
                          params={"J": tr.J, "K": tr.K})]
    report = render_report(checks, cfg)
    report["manifest"] = manifest
    _atomic_write(out_dir / "build_report.json", dump_report(report))
    _atomic_write(out_dir / "manifest.json",
                  json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return report


def cmd_verify_vaguelet(cfg: dict) -> dict:
    wavelet, pair = _instantiate(cfg)
    builder = FamilyBuilder(wavelet, pair)
    block = cfg["vaguelet"]
    params = VagueletParams(block["alpha1"], block["alpha2"],
                            block["j_min"], block["j_max"],
                            block["t_window"])
    sides = block["sides"]

    def one_side(side):
        checks = vaguelet_suite(builder, side, params)
        checks.append(synthesis_bound(builder, side, J=block["synthesis_J"],
                                      K=block["synthesis_K"],
                                      seed=cfg["seed"]))
        return checks

    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        per_side = list(pool.map(one_side, sides))
    checks = []
    for side, side_checks in zip(sides, per_side):
        for c in side_checks:
            c.name = f"{c.name}_{side}"
            checks.append(c)
    return _write_report(cfg, checks,
                         Path(cfg["output_dir"]) / "vaguelet_report.json")


def cmd_verify_riesz(cfg: dict) -> dict:
    wavelet, pair = _instantiate(cfg)
    builder = FamilyBuilder(wavelet, pair)
    block = cfg["riesz"]
    tr = Truncation(block["J"], block["K"])
    checks = []
    for side in ("primal", "dual"):
        g = gram(builder, side, tr)
        c1, c2 = riesz_bounds(g)
        checks.append(CheckResult(
            f"riesz_bounds_{side}",
            passed=c1 > 1e-6 and c2 / max(c1, 1e-300) < 1e6,
            statistics={"C1": c1, "C2": c2,
                        "hermitian_defect": g.hermitian_defect(),
                        "dimension": g.dimension},
            params={"J": tr.J, "K": tr.K}))
    checks.append(biorthogonality_defect(builder, tr))
    checks.append(bracket_sum(wavelet, pair))
    for j in range(block["refinement_levels"]):
        c = refinement_identity(wavelet, pair, j, builder)
        c.name = f"refinement_identity_j{j}"
        checks.append(c)
    return _write_report(cfg, checks,
                         Path(cfg["output_dir"]) / "riesz_report.json")


def cmd_counterexample(cfg: dict) -> dict:
    block = cfg["counterexample"]
    gamma = float(block["gamma"])
    j_min, j_max = default_window(gamma)
    if block["j_min"] is not None:
        j_min = int(block["j_min"])
    if block["j_max"] is not None:
        j_max = int(block["j_max"])
    try:
        ce_cfg = CounterexampleConfig(gamma, j_min, j_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    run = run_counterexample(ce_cfg)
    checks = [ratio_exponent(ce_cfg),
              vaguelet_violation(ce_cfg, float(block["alpha1"]))]
    rows = [(r["j"], r["scaled_norm"], r["scaled_peak"], r["ratio"])
            for r in run.records()]
    out_dir = Path(cfg["output_dir"])
    _atomic_write(out_dir / "counterexample.csv",
                  _csv_text(["j", "scaled_norm", "scaled_peak", "ratio"], rows))
    report = render_report(checks, cfg)
    report["verdict"] = {
        "violation": bool(checks[1].statistics["violation"]),
        "slope": checks[0].statistics["slope"],
        "target": checks[0].statistics["target"],
    }
    _atomic_write(out_dir / "counterexample_report.json", dump_report(report))
    return report


def cmd_simulate(cfg: dict) -> dict:
    wavelet, pair = _instantiate(cfg)
    block = cfg["simulate"]
    times = dyadic_times(block["t_min"], block["t_max"], block["resolution"])
    step = block["time_step"]
    if step is not None:
        keep = np.abs(times / step - np.round(times / step)) < 1e-9
        times = times[keep]
    try:
        plan = SynthesisPlan(
            pair, wavelet, times=times, J_detail=block["J_detail"],
            K=block["K"], synthesis_side=block["synthesis_side"],
            include_approximation=block["include_approximation"],
            seed=cfg["seed"], n_paths=block["n_paths"],
            resolution=block["resolution"], j_coarse=block["j_coarse"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    ensemble = simulate(plan)
    out_dir = Path(cfg["output_dir"])
    header = [f"t={t!r}" for t in ensemble.times]
    rows = [tuple(float(v) for v in row) for row in ensemble.values]
    _atomic_write(out_dir / "paths.csv", _csv_text(header, rows))
    _atomic_write(out_dir / "paths_manifest.json",
                  json.dumps(plan.config(), sort_keys=True, indent=2) + "\n")
    var0 = float(np.var(ensemble.values[:, np.argmin(np.abs(ensemble.times))]))
    checks = [CheckResult(
        "simulate", True,
        statistics={"n_paths": ensemble.n_paths,
                    "n_times": len(ensemble.times),
                    "empirical_var_near_zero": var0},
        params=plan.config())]
    return _write_report(cfg, checks, out_dir / "simulate_report.json")


COMMANDS = {
    "build": cmd_build,
    "verify-vaguelet": cmd_verify_vaguelet,
    "verify-riesz": cmd_verify_riesz,
    "counterexample": cmd_counterexample,
    "simulate": cmd_simulate,
}


def cmd_all(cfg: dict) -> dict:
    order = ["build", "verify-vaguelet", "verify-riesz", "counterexample",
             "simulate"]
    reports = [COMMANDS[name](cfg) for name in order]
    summary = report_merge([{k: v for k, v in r.items()
                             if k in ("schema", "config_hash", "checks",
                                      "pass")} for r in reports])
    _atomic_write(Path(cfg["output_dir"]) / "summary.json",
                  dump_report(summary))
    return summary


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vaguelab",
        description="Filter-transformed wavelet families: construction, "
                    "vaguelet/Riesz verification, counterexample asymptotics "
                    "and Gaussian process synthesis.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, default=None,
                       help="JSON run configuration")
        p.add_argument("--out", type=Path, default=None,
                       help="output directory (overrides config)")

    for name in ("build", "verify-vaguelet", "verify-riesz", "all"):
        common(sub.add_parser(name))
    ce = sub.add_parser("counterexample")
    common(ce)
    ce.add_argument("--gamma", type=float, default=None)
    ce.add_argument("--jmin", type=int, default=None)
    ce.add_argument("--jmax", type=int, default=None)
    ce.add_argument("--alpha1", type=float, default=None)
    sim = sub.add_parser("simulate")
    common(sim)
    sim.add_argument("--filter", dest="filter_spec", type=str, default=None,
                     help='synthesis filter h2, e.g. "ou" or '
                          '\'{"kind":"fractional","d":0.7}\'')
    sim.add_argument("--wavelet", type=str, default=None,
                     help='e.g. "meyer" or \'{"kind":"daubechies","n":4}\'')
    sim.add_argument("--levels", type=int, default=None, help="top level J")
    sim.add_argument("--shifts", type=int, default=None,
                     help="shift half-width K")
    sim.add_argument("--paths", type=int, default=None)
    sim.add_argument("--seed", type=int, default=None)
    return parser


def _parse_inline_spec(text: str) -> dict:
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    return {"kind": text}


def _load_config(args) -> dict:
    document = {}
    if args.config is not None:
        try:
            document = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON in {args.config}: {exc}") \
                from exc
    cfg = resolve_config(document)
    if args.out is not None:
        cfg["output_dir"] = str(args.out)
    if args.command == "counterexample":
        for flag, key in (("gamma", "gamma"), ("jmin", "j_min"),
                          ("jmax", "j_max"), ("alpha1", "alpha1")):
            val = getattr(args, flag)
            if val is not None:
                cfg["counterexample"][key] = val
    if args.command == "simulate":
        try:
            if args.filter_spec is not None:
                cfg["filters"]["h2"] = _parse_inline_spec(args.filter_spec)
            if args.wavelet is not None:
                cfg["wavelet"] = _parse_inline_spec(args.wavelet)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed inline JSON spec: {exc}") from exc
        if args.levels is not None:
            cfg["simulate"]["J_detail"] = args.levels
        if args.shifts is not None:
            cfg["simulate"]["K"] = args.shifts
        if args.paths is not None:
            cfg["simulate"]["n_paths"] = args.paths
        if args.seed is not None:
            cfg["seed"] = args.seed
        _instantiate(cfg)  # revalidate after inline overrides
    return cfg


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args)
        thread_count()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.command == "all":
            report = cmd_all(cfg)
        else:
            report = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    for check in report["checks"]:
        verdict = {True: "PASS", False: "FAIL", None: "INCONCLUSIVE"}[
            check["pass"]]
        print(f"{verdict:12s} {check['check']}")
    return _exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
