"""Experiment runner: P-greedy on the discretized unit ball, traces, fits and plots.

Single run::

    pgreedy --kernel gaussian --dim 1 --out runs/gauss1
    pgreedy --kernel wendland-k0 --dim 2 --record-fill --plots --out runs/w0d2

Batch::

    pgreedy --suite reference --out runs/reference

Exit codes: 0 success, 1 configuration error, 2 numerical breakdown,
3 partial suite failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import List, Optional, Tuple

from pgreedy import reference
from pgreedy.errors import ConfigError, InputError, PGreedyError
from pgreedy.geometry import discretize_ball
from pgreedy.greedy import GreedyTrace, StopCriteria, run_pgreedy
from pgreedy.kernel import KERNEL_IDS, KernelSpec
from pgreedy.rates import (
    SUMMARY_FIELDS,
    algebraic_exponent,
    fit_algebraic,
    fit_exponential,
    fit_fill_decay,
    fixed_rate_prefactor,
    theoretical_curve,
)

log = logging.getLogger("pgreedy")

EXIT_OK, EXIT_CONFIG, EXIT_BREAKDOWN, EXIT_PARTIAL = 0, 1, 2, 3

DEFAULT_MEMORY_CAP = 1 << 30

COMPARISON_FIELDS = [
    "name", "kernel", "dim", "beta", "quantity", "fitted", "reference", "tolerance", "within_tolerance", "status",
]


@dataclass
class ExperimentConfig:
    kernel: str = "gaussian"
    shape: float = 1.0
    dim: int = 1
    per_axis: Optional[int] = None
    tol: float = 1e-15
    max_n: int = 1000
    record_fill: bool = False
    fit_window: Optional[Tuple[int, int]] = None
    output_dir: str = "out"
    emit_plots: bool = False
    memory_cap: int = DEFAULT_MEMORY_CAP
    name: Optional[str] = None

    def __post_init__(self):
        if self.per_axis is None:
            self.per_axis = reference.DEFAULT_PER_AXIS.get(self.dim)
        if isinstance(self.fit_window, str):
            self.fit_window = parse_window(self.fit_window)
        elif self.fit_window is not None:
            self.fit_window = tuple(int(v) for v in self.fit_window)

    @classmethod
    def from_dict(cls, d: dict, output_dir: str = "out") -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        d.setdefault("output_dir", output_dir)
        return cls(**d)

    def kernel_spec(self) -> KernelSpec:
        try:
            return KernelSpec.from_id(self.kernel, self.shape, self.dim)
        except InputError as exc:
            raise ConfigError(str(exc)) from exc

    def validate(self) -> KernelSpec:
        if self.dim not in (1, 2, 3):
            raise ConfigError(f"dim must be 1, 2 or 3, got {self.dim}")
        if self.per_axis is None or self.per_axis < 2:
            raise ConfigError("per_axis must be >= 2")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.max_n < 1:
            raise ConfigError("max_n must be >= 1")
        spec = self.kernel_spec()
        # the full grid bounds the candidate count; build the grid only if the bound is too big
        upper = self.per_axis**self.dim
        if _table_bytes(upper, self.max_n) > self.memory_cap:
            count = upper if upper > 10**8 else len(discretize_ball(self.dim, self.per_axis))
            if _table_bytes(count, self.max_n) > self.memory_cap:
                raise ConfigError(
                    f"Newton table for {count} candidates x {self.max_n} steps exceeds the memory cap "
                    f"of {self.memory_cap} bytes"
                )
        return spec


def _table_bytes(count: int, max_n: int) -> int:
    return 8 * count * min(count, max_n)


def parse_window(text: str) -> Tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError as exc:
        raise ConfigError(f"fit window must look like LO:HI, got {text!r}") from exc


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    status: int
    trace: Optional[GreedyTrace] = None
    fits: dict = field(default_factory=dict)
    prefactors: dict = field(default_factory=dict)
    error: str = ""


def _prepare_dir(path: Path) -> None:
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {path}: {exc}") from exc
    if not os.access(path, os.W_OK):
        raise ConfigError(f"output directory {path} is not writable")


def _fit_trace(spec: KernelSpec, trace: GreedyTrace, window) -> Tuple[dict, dict]:
    fits, prefactors = {}, {}
    try:
        if spec.smoothness.finite:
            fit = fits["power"] = fit_algebraic(trace, window, dim=spec.dim)
            beta = spec.smoothness.beta
            y = trace.max_power
            prefactors["proven"] = fixed_rate_prefactor(y, algebraic_exponent(beta, spec.dim), fit.window)
            prefactors["improved"] = fixed_rate_prefactor(y, algebraic_exponent(beta, spec.dim, True), fit.window)
        else:
            fits["power"] = fit_exponential(trace, spec.dim, window)
        if trace.fill_distance is not None:
            fill = fits["fill"] = fit_fill_decay(trace, window)
            prefactors["fill"] = fixed_rate_prefactor(trace.fill_distance, -1.0 / spec.dim, fill.window)
    except InputError as exc:
        log.warning("fit skipped: %s", exc)
    return fits, prefactors


def _write_fits(path: Path, spec: KernelSpec, fits: dict) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, SUMMARY_FIELDS, lineterminator="\n")
        w.writeheader()
        for row in _fit_rows(spec, fits):
            w.writerow(row)


def _fit_rows(spec: KernelSpec, fits: dict) -> List[dict]:
    rows = []
    beta = spec.smoothness.beta
    if "power" in fits:
        rows.append(fits["power"].summary_row(spec.id, beta))
    if "fill" in fits:
        rows.append(fits["fill"].summary_row(spec.id, beta, model="fill-algebraic"))
    return rows


def _write_plots(out: Path, spec: KernelSpec, trace: GreedyTrace, fits: dict, prefactors: dict) -> None:
    from pgreedy import plots

    n = trace.n
    title = f"{spec.id}, d = {spec.dim}"
    smooth = spec.smoothness
    if smooth.finite:
        curves = []
        if "proven" in prefactors:
            curves.append(("proven rate", "tab:red", theoretical_curve(smooth, spec.dim, prefactors["proven"], n)))
            curves.append(
                ("improved rate", "gold", theoretical_curve(smooth, spec.dim, prefactors["improved"], n, improved=True))
            )
        plots.decay_plot(out / "power.svg", n, trace.max_power, curves, True, "max Power Function", title)
    else:
        curves = []
        if "power" in fits:
            f = fits["power"]
            curves.append(("fitted rate", "tab:red", theoretical_curve(smooth, spec.dim, (f.c2, f.c3), n)))
        plots.decay_plot(out / "power.svg", n, trace.max_power, curves, False, "max Power Function", title)
    if trace.fill_distance is not None:
        curves = []
        if "fill" in prefactors:
            curves.append(("n^(-1/d)", "tab:red", prefactors["fill"] * n ** (-1.0 / spec.dim)))
        plots.decay_plot(out / "fill.svg", n, trace.fill_distance, curves, True, "fill distance", title)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run one configuration and write its artifacts into ``config.output_dir``.

    Configuration problems raise :class:`ConfigError`; a numerical breakdown
    is reported through ``status == EXIT_BREAKDOWN`` with artifacts written.
    """
    spec = config.validate()
    out = Path(config.output_dir)
    _prepare_dir(out)

    candidates = discretize_ball(config.dim, config.per_axis)
    if len(candidates) == 0:
        raise ConfigError(f"grid with per_axis={config.per_axis} has no points in the unit ball")
    grid = {
        "domain": "unit-ball",
        "per_axis": config.per_axis,
        "axis": "linspace(-1, 1, per_axis), endpoints included",
        "count": len(candidates),
    }
    stop = StopCriteria(config.tol, config.max_n)
    log.info("running %s d=%d on %d candidates", spec.id, spec.dim, len(candidates))
    trace = run_pgreedy(spec, candidates, stop, record_fill=config.record_fill, keep_state=False, metadata={"grid": grid})
    fits, prefactors = _fit_trace(spec, trace, config.fit_window)

    from pgreedy import __version__

    meta = dict(trace.metadata)
    meta["version"] = __version__
    meta["final_max_power"] = trace.final_max_power
    meta["beta_mapping"] = {
        "beta": spec.smoothness.beta,
        "native_sobolev_order_in_dim": spec.native_order,
        "note": "beta is the nominal d=3 Sobolev order of the Wendland index",
    }
    meta["fits"] = {k: asdict(v) for k, v in fits.items()}
    meta["fixed_rate_prefactors"] = prefactors
    try:
        trace.to_csv(out / "trace.csv")
        with open(out / "metadata.json", "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
        _write_fits(out / "fits.csv", spec, fits)
        if config.emit_plots:
            _write_plots(out, spec, trace, fits, prefactors)
    except OSError as exc:
        raise ConfigError(f"cannot write artifacts to {out}: {exc}") from exc

    status = EXIT_BREAKDOWN if trace.breakdown else EXIT_OK
    return ExperimentResult(config, status, trace, fits, prefactors)


def compare_to_reference(result: ExperimentResult) -> List[dict]:
    """Rows comparing fitted quantities with the published estimates."""
    cfg = result.config
    spec = cfg.kernel_spec()
    name = cfg.name or spec.id
    beta = spec.smoothness.beta
    base = {"name": name, "kernel": spec.id, "dim": spec.dim, "beta": "" if beta is None else beta, "status": "ok"}
    rows = []

    def row(quantity, fitted, ref, tol_text, ok):
        rows.append({
            **base,
            "quantity": quantity,
            "fitted": repr(float(fitted)),
            "reference": repr(float(ref)),
            "tolerance": tol_text,
            "within_tolerance": "yes" if ok else "no",
        })

    fit = result.fits.get("power")
    if fit is None:
        return rows
    d = spec.dim
    if beta is None and d in reference.GAUSSIAN_RATE:
        c2_ref, c3_ref = reference.GAUSSIAN_RATE[d]
        if d == 1:
            lo, hi = reference.C3_BAND_D1
        else:
            rel = reference.C3_REL_TOL[d]
            lo, hi = c3_ref * (1 - rel), c3_ref * (1 + rel)
        row("c3", fit.c3, c3_ref, f"[{lo:.4g}, {hi:.4g}]", lo <= fit.c3 <= hi)
        fac = reference.PREFACTOR_FACTOR
        row("c2", fit.c2, c2_ref, f"factor {fac:g}", c2_ref / fac <= fit.c2 <= c2_ref * fac)
    elif beta is not None and (int(beta), d) in reference.WENDLAND_IMPROVED_PREFACTOR:
        target = algebraic_exponent(beta, d, improved=True)
        ok = fit.p <= target + reference.EXPONENT_MARGIN and abs(fit.p - target) <= reference.EXPONENT_ABS_TOL
        row("p", fit.p, target, f"|p - ref| <= {reference.EXPONENT_ABS_TOL}, p <= ref + {reference.EXPONENT_MARGIN}", ok)
        fac = reference.PREFACTOR_FACTOR
        for key, table in (("proven", reference.WENDLAND_PROVEN_PREFACTOR), ("improved", reference.WENDLAND_IMPROVED_PREFACTOR)):
            ref = table[(int(beta), d)]
            got = result.prefactors[key]
            row(f"c1_{key}", got, ref, f"factor {fac:g}", ref / fac <= got <= ref * fac)
        fill = result.fits.get("fill")
        if fill is not None:
            target = -1.0 / d
            row("fill_p", fill.p, target, "+-0.15", abs(fill.p - target) <= 0.15)
    return rows


def load_suite(path) -> List[dict]:
    """Read a suite file: JSON with an ``experiments`` list of config dicts.

    ``"reference"`` names the shipped suite of nine runs (Gaussian and Wendland k = 0, 1 in d = 1, 2, 3).
    """
    if str(path) == "reference":
        text = resources.files("pgreedy").joinpath("data/reference_suite.json").read_text()
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read suite file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"suite file {path} is not valid JSON: {exc}") from exc
    entries = data.get("experiments") if isinstance(data, dict) else data
    if not isinstance(entries, list):
        raise ConfigError("suite file must hold a list of experiments")
    return entries


def run_suite(suite_file, output_dir="out", overrides: Optional[dict] = None) -> int:
    """Run every experiment of a suite; failures are recorded and the suite continues."""
    entries = load_suite(suite_file)
    out = Path(output_dir)
    _prepare_dir(out)
    fit_rows, comparison_rows = [], []
    failed = False
    for i, entry in enumerate(entries):
        entry = {**entry, **(overrides or {})}
        name = entry.get("name") or f"exp{i:02d}"
        entry["name"] = name
        try:
            cfg = ExperimentConfig.from_dict(entry)
            cfg.output_dir = str(out / name)
            result = run_experiment(cfg)
        except (PGreedyError, TypeError) as exc:
            failed = True
            log.error("experiment %s failed: %s", name, exc)
            comparison_rows.append({"name": name, "kernel": entry.get("kernel", ""), "status": f"error: {exc}"})
            continue
        if result.status != EXIT_OK:
            failed = True
        spec = cfg.kernel_spec()
        fit_rows.extend(_fit_rows(spec, result.fits))
        rows = compare_to_reference(result)
        if result.trace.breakdown:
            for r in rows:
                r["status"] = "breakdown"
        comparison_rows.extend(rows)

    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, SUMMARY_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerows(fit_rows)
    with open(out / "comparison.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, COMPARISON_FIELDS, lineterminator="\n", restval="")
        w.writeheader()
        w.writerows(comparison_rows)
    return EXIT_PARTIAL if failed else EXIT_OK


def _window_arg(text: str) -> Tuple[int, int]:
    try:
        return parse_window(text)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pgreedy", description="P-greedy convergence experiments on the unit ball.")
    p.add_argument("--kernel", default="gaussian", help=f"one of: {', '.join(KERNEL_IDS)}")
    p.add_argument("--shape", type=float, default=1.0, help="shape parameter eps (default 1)")
    p.add_argument("--dim", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--per-axis", type=int, default=None, help="grid points per axis (default 10000/114/28 by dim)")
    p.add_argument("--tol", type=float, default=1e-15, help="stop when max P^2 <= TOL (default 1e-15)")
    p.add_argument("--max-n", type=int, default=1000)
    p.add_argument("--record-fill", action="store_true", help="record the fill distance per iteration")
    p.add_argument("--fit-window", type=_window_arg, default=None, metavar="LO:HI")
    p.add_argument("--out", default="out", metavar="DIR")
    p.add_argument("--plots", action="store_true", help="write SVG decay plots")
    p.add_argument("--suite", default=None, metavar="FILE", help="JSON suite file, or 'reference'")
    p.add_argument("--memory-cap-mb", type=float, default=DEFAULT_MEMORY_CAP / 2**20)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cap = int(args.memory_cap_mb * 2**20)
    try:
        if args.suite is not None:
            overrides = {"memory_cap": cap}
            if args.plots:
                overrides["emit_plots"] = True
            code = run_suite(args.suite, args.out, overrides)
            print(f"suite finished, summary in {Path(args.out) / 'comparison.csv'}")
            return code
        cfg = ExperimentConfig(
            kernel=args.kernel,
            shape=args.shape,
            dim=args.dim,
            per_axis=args.per_axis,
            tol=args.tol,
            max_n=args.max_n,
            record_fill=args.record_fill,
            fit_window=args.fit_window,
            output_dir=args.out,
            emit_plots=args.plots,
            memory_cap=cap,
        )
        result = run_experiment(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    trace = result.trace
    print(f"{cfg.kernel} d={cfg.dim}: {len(trace)} points, stop={trace.status}, "
          f"final max P = {trace.final_max_power:.3e}")
    for key, fit in result.fits.items():
        print(f"  {key}: {fit.model} coef={fit.coef:.4g} rate={fit.rate:.4g} "
              f"window={fit.window[0]}:{fit.window[1]} r2={fit.r_squared:.4f}")
    return result.status


if __name__ == "__main__":
    sys.exit(main())
