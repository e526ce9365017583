"""Command-line entry point: ``specflow <command> [options]``.

Settings resolve as command-line flags, then the flat JSON ``--config``
file, then built-in defaults.  Exit status is 0 on success (a missing
index is a result, not a failure), 1 for configuration errors and 2 for
numerical failures.  Parameters outside an operation's domain count as
configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Optional, Sequence

import numpy as np

from . import __version__, criterion, flow, kernels, modular, solver, stats
from .errors import ConfigError, DomainError, SpecflowError
from .lfunc import LFunctionSpec

COMMANDS = ("zeros", "flow", "criterion", "dh-scan", "hadamard", "stats", "tau")

SCHEMAS = {
    "zeros": ("n", "sigma", "delta", "energy", "residual", "status"),
    "flow": ("n", "sigma", "energy", "dE_dsigma", "status"),
    "criterion": ("t", "lhs", "rhs", "margin", "near_pole"),
    "dh-scan": ("n", "sigma", "delta", "energy", "residual", "status"),
    "hadamard": ("zeros_count", "inverse_square_sum", "residual"),
    "stats": ("bin_left", "bin_right", "density"),
    "tau": ("n", "tau"),
}

_COMMON = {"family": "zeta", "format": "csv", "output": None, "workers": 1}
DEFAULTS: dict[str, dict[str, Any]] = {
    "zeros": {"n": "1..5", "sigma": 0.5, "delta": solver.DEFAULT_DELTA},
    "flow": {"n": "1..5", "sigma_start": 3.0, "sigma_end": 0.5 + 1e-6, "step": 0.02},
    "criterion": {"sigma": 0.75, "t": "10.5..30", "step": 0.05},
    "dh-scan": {"family": "dh", "n": "1..50", "delta": solver.DEFAULT_DELTA, "seed": "0.8+85.7j",
                "count_at": "85,86"},
    "hadamard": {"s": "2", "zeros_count": 10000, "checkpoints": "1000,2000,5000,10000"},
    "stats": {"n": "10000..15000", "sigma": 0.5, "bins": 50, "k": 1, "summary": None},
    "tau": {"n_max": 100},
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def parse_range(text: str, kind=int) -> tuple:
    """'a..b' (inclusive) or a single value."""
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return kind(lo), kind(hi)
        v = kind(text)
    except ValueError:
        raise ConfigError(f"malformed range {text!r}") from None
    return v, v


def _list(text: str, kind) -> list:
    try:
        return [kind(x) for x in str(text).replace(" ", "").split(",") if x]
    except ValueError:
        raise ConfigError(f"malformed list {text!r}") from None


def _spec(name: str) -> LFunctionSpec:
    try:
        return LFunctionSpec.from_name(name)
    except SpecflowError as exc:
        raise ConfigError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="specflow", description="Spectral flow of L-function zeros.",
                     argument_default=argparse.SUPPRESS)
    parser.add_argument("--version", action="version", version=f"specflow {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="flat JSON file of option values")
        p.add_argument("--family", help="zeta, dh, mod5 or tau")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--output", "-o", help="output path (default stdout)")
        p.add_argument("--workers", type=int, help="worker processes")
        return p

    p = common(sub.add_parser("zeros", help="solve the zero equation for a range of indices",
                              argument_default=argparse.SUPPRESS))
    p.add_argument("--n", help="index range a..b")
    p.add_argument("--sigma", type=float)
    p.add_argument("--delta", type=float)

    p = common(sub.add_parser("flow", help="continue E_n(sigma) towards the critical line",
                              argument_default=argparse.SUPPRESS))
    p.add_argument("--n")
    p.add_argument("--sigma-start", dest="sigma_start", type=float)
    p.add_argument("--sigma-end", dest="sigma_end", type=float)
    p.add_argument("--step", type=float)

    p = common(sub.add_parser("criterion", help="scan -Re Upsilon against the log bound",
                              argument_default=argparse.SUPPRESS))
    p.add_argument("--sigma", type=float)
    p.add_argument("--t", help="height range lo..hi")
    p.add_argument("--step", type=float)

    p = common(sub.add_parser("dh-scan", help="missing indices and the located off-line zero",
                              argument_default=argparse.SUPPRESS))
    p.add_argument("--n")
    p.add_argument("--delta", type=float)
    p.add_argument("--seed", help="complex Newton seed, e.g. 0.8+85.7j")
    p.add_argument("--count-at", dest="count_at", help="heights for N(T), comma separated")

    p = common(sub.add_parser("hadamard", help="Hadamard identity residuals and zero sums",
                              argument_default=argparse.SUPPRESS))
    p.add_argument("--s", help="comma separated evaluation points")
    p.add_argument("--zeros-count", dest="zeros_count", type=int)
    p.add_argument("--checkpoints", help="comma separated partial-sum sizes")

    p = common(sub.add_parser("stats", help="spacing histogram and KS distance",
                              argument_default=argparse.SUPPRESS))
    p.add_argument("--n")
    p.add_argument("--sigma", type=float)
    p.add_argument("--bins", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--summary", help="path for the summary JSON")

    p = common(sub.add_parser("tau", help="Ramanujan tau coefficients", argument_default=argparse.SUPPRESS))
    p.add_argument("--n-max", dest="n_max", type=int)
    return parser


def resolve(argv: Sequence[str]) -> dict[str, Any]:
    """Parse ``argv`` and merge flags > config file > defaults."""
    ns = vars(build_parser().parse_args(list(argv)))
    command = ns.pop("command")
    config_path = ns.pop("config", None)
    merged = dict(_COMMON)
    merged.update(DEFAULTS[command])
    if config_path:
        try:
            with open(config_path) as fh:
                cfg = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {config_path}: {exc}") from None
        if not isinstance(cfg, dict) or any(isinstance(v, (dict, list)) for v in cfg.values()):
            raise ConfigError("config must be a flat key-value JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        cfg.pop("command", None)
        unknown = sorted(set(cfg) - set(merged))
        if unknown:
            raise ConfigError(f"unknown config keys for {command}: {unknown}")
        merged.update(cfg)
    merged.update(ns)
    merged["command"] = command
    if int(merged["workers"]) < 1:
        raise ConfigError("workers must be >= 1")
    if merged["format"] not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    return merged


# ---------------------------------------------------------------------------
# output

def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render(config: dict, rows: list[tuple], extra: Optional[dict] = None) -> str:
    """CSV with a '#'-prefixed JSON metadata line, or a JSON document."""
    columns = SCHEMAS[config["command"]]
    meta = {"specflow": __version__, "backend": kernels.BACKEND,
            "config": {k: config[k] for k in sorted(config) if k not in ("output",)}}
    if extra:
        meta["result"] = extra
    if config["format"] == "json":
        body = [{c: (float(v) if isinstance(v, np.floating) else v) for c, v in zip(columns, r)} for r in rows]
        return json.dumps({"metadata": meta, "columns": list(columns), "rows": body}, indent=1, default=str) + "\n"
    buf = io.StringIO()
    buf.write("# " + json.dumps(meta, sort_keys=True, default=str) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _emit(config: dict, text: str) -> None:
    path = config.get("output")
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands

def _zero_rows(records) -> list[tuple]:
    return [(r.n, r.sigma, r.delta, r.energy, r.residual, r.status) for r in records]


def cmd_zeros(cfg: dict):
    spec = _spec(cfg["family"])
    lo, hi = parse_range(cfg["n"])
    recs = solver.zero_table(spec, lo, hi, float(cfg["sigma"]), float(cfg["delta"]), int(cfg["workers"]))
    summary = {"count": len(recs), "converged": sum(r.converged for r in recs),
               "no_solution": [r.n for r in recs if r.status == solver.NO_SOLUTION]}
    return _zero_rows(recs), summary


def cmd_flow(cfg: dict):
    spec = _spec(cfg["family"])
    lo, hi = parse_range(cfg["n"])
    trajs = flow.flow_trajectories(spec, range(lo, hi + 1), int(cfg["workers"]), sigma_start=float(cfg["sigma_start"]),
                                   sigma_end=float(cfg["sigma_end"]), step_init=float(cfg["step"]))
    rows = [(tr.n, s.sigma, s.energy, s.dE_dsigma, tr.status) for tr in trajs for s in tr.samples]
    summary = {str(tr.n): {"status": tr.status, "sigma_c": tr.sigma_c, "partner": tr.partner,
                           "final_energy": tr.final.energy} for tr in trajs}
    return rows, summary


def _scan_chunk(args):
    spec, sigma, ts, zeros = args
    return criterion.scan_points(spec, sigma, ts, zeros)


def cmd_criterion(cfg: dict):
    spec = _spec(cfg["family"])
    sigma = float(cfg["sigma"])
    t_lo, t_hi = parse_range(cfg["t"], float)
    step = float(cfg["step"])
    workers = int(cfg["workers"])
    if spec.family == "modular_tau":
        samples = criterion.criterion_scan(spec, sigma, t_lo, t_hi, step)
    else:
        grid = criterion.scan_grid(t_lo, t_hi, step)
        zeros = criterion.known_ordinates(spec, float(grid[0]) - 1.0, float(grid[-1]) + 1.0)
        if workers == 1:
            samples = criterion.scan_points(spec, sigma, grid, zeros)
        else:
            parts = np.array_split(grid, min(len(grid), 4 * workers))
            with ProcessPoolExecutor(max_workers=workers) as pool:
                chunks = pool.map(_scan_chunk, [(spec, sigma, p, zeros) for p in parts if len(p)])
                samples = [s for c in chunks for s in c]
    rows = [(s.t, s.lhs, s.rhs, s.margin, s.near_pole) for s in samples]
    clean = [s.margin for s in samples if not s.near_pole and s.in_regime]
    summary = {"samples": len(samples), "min_margin": min(clean) if clean else None,
               "violations": sum(1 for s in samples if s.margin < 0 and not s.near_pole and s.in_regime),
               "out_of_regime": sum(1 for s in samples if not s.in_regime)}
    return rows, summary


def _complex(text: str) -> complex:
    try:
        return complex(str(text).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ConfigError(f"malformed complex number {text!r}") from None


def cmd_dh_scan(cfg: dict):
    spec = _spec(cfg["family"])
    lo, hi = parse_range(cfg["n"])
    recs = solver.zero_table(spec, lo, hi, 0.5, float(cfg["delta"]), int(cfg["workers"]))
    failed = [r.n for r in recs if r.status == solver.BRACKET_FAILED]
    if failed:
        raise solver.BracketFailedError(f"solver breakdown at n = {failed}", failed)
    missing = [r.n for r in recs if r.status == solver.NO_SOLUTION]
    report: dict[str, Any] = {"missing": missing,
                              "counts": {repr(T): solver.count_zeros(spec, T, float(cfg["delta"]))
                                         for T in _list(cfg["count_at"], float)}}
    if missing:
        z = solver.find_offline_zero(spec, _complex(cfg["seed"]))
        report["zero"] = {"re": z.rho.real, "im": z.rho.imag, "residual": z.residual,
                          "on_line": isinstance(z, solver.OnLineZero)}
    return _zero_rows(recs), report


def cmd_hadamard(cfg: dict):
    count = int(cfg["zeros_count"])
    recs = solver.zero_table(LFunctionSpec.zeta(), 1, count, workers=int(cfg["workers"]))
    zeros = [r.energy for r in recs if r.converged]
    points = [_complex(x) for x in str(cfg["s"]).split(",") if x.strip()]
    checks = sorted(c for c in _list(cfg["checkpoints"], int) if c <= len(zeros))
    partials = criterion.inverse_square_partials(zeros, checks) if checks else []
    main = points[0] if points else 2.0
    rows = [(c, float(p), criterion.hadamard_identity_check(main, c, zeros)) for c, p in zip(checks, partials)]
    summary = {"B": criterion.B_CONSTANT,
               "residuals": {repr(s): criterion.hadamard_identity_check(s, len(zeros), zeros) for s in points}}
    return rows, summary


def cmd_stats(cfg: dict):
    spec = _spec(cfg["family"])
    lo, hi = parse_range(cfg["n"])
    hist = stats.spacing_histogram(spec, float(cfg["sigma"]), lo, hi, int(cfg["bins"]), k=int(cfg["k"]),
                                   workers=int(cfg["workers"]))
    summary = hist.summary()
    if cfg.get("summary"):
        with open(cfg["summary"], "w") as fh:
            json.dump(summary, fh, indent=1, sort_keys=True)
            fh.write("\n")
    return hist.rows(), summary


def cmd_tau(cfg: dict):
    table = modular.ramanujan_tau(int(cfg["n_max"]))
    return [(n, table[n]) for n in range(1, table.n_max + 1)], None


HANDLERS = {"zeros": cmd_zeros, "flow": cmd_flow, "criterion": cmd_criterion, "dh-scan": cmd_dh_scan,
            "hadamard": cmd_hadamard, "stats": cmd_stats, "tau": cmd_tau}


def run(config: dict) -> int:
    """Execute a resolved configuration; returns the exit status."""
    try:
        rows, extra = HANDLERS[config["command"]](config)
        _emit(config, render(config, rows, extra))
    except (ConfigError, DomainError) as exc:
        # DomainError here means a parameter outside the command's domain
        print(f"specflow: configuration error: {exc}", file=sys.stderr)
        return 1
    except (SpecflowError, ArithmeticError, OverflowError) as exc:
        print(f"specflow: numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = resolve(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"specflow: configuration error: {exc}", file=sys.stderr)
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
