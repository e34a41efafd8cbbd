"""Command-line front end: figure reproduction, scans, and verification.

Subcommands: fig, scan, evolve, qfi, probe, eigen, verify. Series data is
written as CSV (header ``t,<quantity>``, 17 significant digits, LF line
endings) with a JSON metadata sidecar per file; output is byte-stable
across runs. Exit codes: 0 success, 1 verification failure, 2 invalid
arguments, 3 numeric error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, verify
from ._backend import BACKEND
from .core import NumericError
from .dynamics import FeedbackConfig, integrate_master, rho_analytic, rho_no_feedback
from .estimation import (
    classical_fisher_projective,
    feedback_family,
    no_feedback_family,
    qfi_of_family,
)
from .probes import (
    ProbeConfig,
    eigenstates_heff,
    optimal_theta,
    precision_bound,
    qfi_eigenstate,
    qfi_probe_closed,
    qfi_probe_oracle,
)
from .verify import FIG_PARAMS

GAMMA0 = 0.1

DEFAULTS = {
    "a": 1.0,
    "b": 0.0,
    "gamma": GAMMA0,
    "omega": 0.0,
    "theta": math.pi / 4,
    "n_qubits": 1,
    "t": 1.0,
    "t_min": None,
    "t_max": 50.0,
    "points": 2000,
    "quantity": "F",
    "out": ".",
    "total_time": 1.0,
    "method": "analytic",
    "dt": 1e-4,
}

FEEDBACK_QUANTITIES = ("F", "f", "F_over_t", "rho11", "re_rho12", "im_rho12")
PROBE_QUANTITIES = ("F", "bound")
EIGEN_QUANTITIES = ("F",)


@dataclass
class TimeSeries:
    """A sampled scalar quantity over a grid, with full parameter echo."""

    grid: np.ndarray
    values: np.ndarray
    label: str
    meta: dict = field(default_factory=dict)


def format_float(x: float) -> str:
    return f"{x:.17g}"


def write_series(series: TimeSeries, path: Path) -> None:
    quantity = series.meta.get("quantity", "value")
    lines = [f"t,{quantity}"]
    lines += [f"{format_float(float(t))},{format_float(float(v))}"
              for t, v in zip(series.grid, series.values)]
    path.write_text("\n".join(lines) + "\n", newline="\n")
    sidecar = path.with_suffix(".meta.json")
    sidecar.write_text(json.dumps(series.meta, indent=2, sort_keys=True) + "\n",
                       newline="\n")


def make_grid(t_min: float | None, t_max: float, points: int) -> np.ndarray:
    if points < 2:
        raise ValueError(f"points must be >= 2, got {points}")
    if t_min is None:
        t_min = t_max / points  # first point strictly positive: avoids 0/0 in F/t
    if not (t_min >= 0 and t_max > t_min):
        raise ValueError(f"need 0 <= t_min < t_max, got [{t_min}, {t_max}]")
    return np.linspace(t_min, t_max, points)


def _feedback_values(p: dict, quantity: str, ts: np.ndarray) -> np.ndarray:
    a, b, gamma = p["a"], p["b"], p["gamma"]
    if quantity in ("rho11", "re_rho12", "im_rho12"):
        cfg = FeedbackConfig(a=a, b=b, gamma=gamma, omega=p["omega"])
        out = np.empty(len(ts))
        for i, t in enumerate(ts):
            try:
                rho = rho_analytic(cfg, float(t))
            except (NumericError, ValueError) as exc:
                raise type(exc)(f"at grid point t={t}: {exc}") from exc
            out[i] = {"rho11": rho.rho11,
                      "re_rho12": rho.rho12.real,
                      "im_rho12": rho.rho12.imag}[quantity]
        return out
    fam = feedback_family(a, b) if (a, b) != (0.0, 0.0) else no_feedback_family()
    if p["omega"] != 0.0:
        raise ValueError("Fisher scans require omega = 0")
    out = np.empty(len(ts))
    for i, t in enumerate(ts):
        try:
            if quantity == "f":
                out[i] = classical_fisher_projective(fam, gamma, float(t))
            else:
                v = qfi_of_family(fam, gamma, float(t)).value
                out[i] = v / t if quantity == "F_over_t" else v
        except (NumericError, ValueError) as exc:
            raise type(exc)(f"at grid point t={t}: {exc}") from exc
    return out


def _probe_values(p: dict, quantity: str, ts: np.ndarray) -> np.ndarray:
    out = np.empty(len(ts))
    for i, t in enumerate(ts):
        cfg = ProbeConfig(theta=p["theta"], n_qubits=p["n_qubits"],
                          gamma=p["gamma"], t=float(t),
                          total_time=p["total_time"])
        try:
            out[i] = (qfi_probe_closed(cfg) if quantity == "F"
                      else precision_bound(cfg))
        except (NumericError, ValueError) as exc:
            raise type(exc)(f"at grid point t={t}: {exc}") from exc
    return out


def _eigen_values(p: dict, ts: np.ndarray) -> np.ndarray:
    # The grid sweeps the drive strength; the CSV keeps the generic grid
    # column name. Metadata records grid_variable = omega.
    out = np.empty(len(ts))
    for i, om in enumerate(ts):
        try:
            out[i] = qfi_eigenstate(float(om), p["gamma"]).closed_form
        except (NumericError, ValueError) as exc:
            raise type(exc)(f"at grid point omega={om}: {exc}") from exc
    return out


def cmd_scan(p: dict, out_dir: Path, tag: str | None = None) -> TimeSeries:
    model = p["model"]
    quantity = p["quantity"]
    allowed = {"feedback": FEEDBACK_QUANTITIES, "probe": PROBE_QUANTITIES,
               "eigenstate": EIGEN_QUANTITIES}[model]
    if quantity not in allowed:
        raise ValueError(f"quantity {quantity!r} not valid for model {model!r}; "
                         f"choose from {allowed}")
    ts = make_grid(p["t_min"], p["t_max"], p["points"])
    if model == "feedback":
        vals = _feedback_values(p, quantity, ts)
        params = {k: p[k] for k in ("a", "b", "gamma", "omega")}
    elif model == "probe":
        vals = _probe_values(p, quantity, ts)
        params = {k: p[k] for k in ("theta", "n_qubits", "gamma", "total_time")}
    else:
        vals = _eigen_values(p, ts)
        params = {"gamma": p["gamma"], "grid_variable": "omega"}
    meta = {"model": model, "params": params, "quantity": quantity,
            "grid": {"t_min": float(ts[0]), "t_max": float(ts[-1]),
                     "points": len(ts)}}
    series = TimeSeries(ts, vals, label=f"{model}:{quantity}", meta=meta)
    name = tag or f"scan_{model}_{quantity}"
    write_series(series, out_dir / f"{name}.csv")
    return series


def emit_gnuplot(path: Path, csvs: list[tuple[str, str]], ylabel: str) -> None:
    lines = ["set datafile separator ','",
             "set key top right",
             "set xlabel 't'",
             f"set ylabel '{ylabel}'"]
    plots = [f"'{name}' using 1:2 with lines title '{title}'"
             for name, title in csvs]
    lines.append("plot " + ", \\\n     ".join(plots))
    path.write_text("\n".join(lines) + "\n", newline="\n")


def cmd_fig(fig_id: int, p: dict, out_dir: Path,
            emit_plot: bool = False) -> tuple[TimeSeries, TimeSeries]:
    a, b = FIG_PARAMS[fig_id]
    gamma = GAMMA0
    quantity = "F" if fig_id in (2, 3, 4) else "F_over_t"
    ts = make_grid(p["t_min"], p["t_max"], p["points"])
    grid_meta = {"t_min": float(ts[0]), "t_max": float(ts[-1]), "points": len(ts)}

    fb = _feedback_values({"a": a, "b": b, "gamma": gamma, "omega": 0.0},
                          quantity, ts)
    line_a = TimeSeries(ts, fb, label="A: PT feedback", meta={
        "model": "feedback", "figure": fig_id, "line": "A",
        "params": {"a": a, "b": b, "gamma": gamma, "omega": 0.0},
        "quantity": quantity, "grid": grid_meta})

    base = _feedback_values({"a": 0.0, "b": 0.0, "gamma": gamma, "omega": 0.0},
                            quantity, ts)
    line_b = TimeSeries(ts, base, label="B: no feedback", meta={
        "model": "feedback", "figure": fig_id, "line": "B",
        "params": {"a": 0.0, "b": 0.0, "gamma": gamma, "omega": 0.0},
        "quantity": quantity, "grid": grid_meta})

    fa = out_dir / f"fig{fig_id}_feedback.csv"
    fbp = out_dir / f"fig{fig_id}_no_feedback.csv"
    write_series(line_a, fa)
    write_series(line_b, fbp)
    if emit_plot:
        emit_gnuplot(out_dir / f"fig{fig_id}.gp",
                     [(fa.name, line_a.label), (fbp.name, line_b.label)],
                     ylabel=quantity)
    return line_a, line_b


def cmd_evolve(p: dict, out_dir: Path) -> TimeSeries:
    quantity = p["quantity"]
    if quantity not in ("rho11", "re_rho12", "im_rho12"):
        raise ValueError("evolve supports quantities rho11, re_rho12, im_rho12")
    ts = make_grid(p["t_min"], p["t_max"], p["points"])
    cfg = FeedbackConfig(a=p["a"], b=p["b"], gamma=p["gamma"], omega=p["omega"])
    if p["method"] == "analytic":
        vals = _feedback_values(p, quantity, ts)
    else:
        from .dynamics import initial_superposition
        out, state, t_now = [], initial_superposition(), 0.0
        for t in ts:
            state = integrate_master(cfg, state, float(t) - t_now, p["dt"])
            t_now = float(t)
            rho = state
            out.append({"rho11": rho.rho11, "re_rho12": rho.rho12.real,
                        "im_rho12": rho.rho12.imag}[quantity])
        vals = np.array(out)
    meta = {"model": "feedback", "method": p["method"],
            "params": {k: p[k] for k in ("a", "b", "gamma", "omega")},
            "quantity": quantity,
            "grid": {"t_min": float(ts[0]), "t_max": float(ts[-1]),
                     "points": len(ts)}}
    series = TimeSeries(ts, vals, label=f"evolve:{quantity}", meta=meta)
    write_series(series, out_dir / f"evolve_{quantity}.csv")
    return series


def cmd_qfi(p: dict) -> dict:
    fam = (feedback_family(p["a"], p["b"]) if (p["a"], p["b"]) != (0.0, 0.0)
           else no_feedback_family())
    res = qfi_of_family(fam, p["gamma"], p["t"])
    f_cl = classical_fisher_projective(fam, p["gamma"], p["t"])
    return {"params": {k: p[k] for k in ("a", "b", "gamma", "t")},
            "qfi": res.value, "qfi_method": res.method,
            "classical_fisher": f_cl}


def cmd_probe(p: dict) -> dict:
    cfg = ProbeConfig(theta=p["theta"], n_qubits=p["n_qubits"],
                      gamma=p["gamma"], t=p["t"], total_time=p["total_time"])
    closed = qfi_probe_closed(cfg)
    oracle = qfi_probe_oracle(cfg)
    opt = optimal_theta(p["n_qubits"], p["gamma"], p["t"])
    out = {"params": {k: p[k] for k in
                      ("theta", "n_qubits", "gamma", "t", "total_time")},
           "qfi_closed": closed, "qfi_oracle": oracle,
           "oracle_over_closed": oracle / closed if closed else None,
           "optimal_sin2_theta": opt.sin2_theta, "qfi_at_optimum": opt.f_max}
    try:
        out["precision_bound"] = precision_bound(cfg)
    except NumericError as exc:
        out["precision_bound"] = None
        out["precision_bound_note"] = str(exc)
    return out


def cmd_eigen(p: dict) -> dict:
    pair = eigenstates_heff(p["omega"], p["gamma"])
    out = {"params": {"omega": p["omega"], "gamma": p["gamma"]},
           "psi_minus": [[z.real, z.imag] for z in pair.psi_minus],
           "psi_plus": [[z.real, z.imag] for z in pair.psi_plus],
           "coalesced": pair.coalesced}
    res = qfi_eigenstate(p["omega"], p["gamma"])
    out.update({"qfi_closed": res.closed_form,
                "qfi_finite_difference": res.finite_difference,
                "fd_over_closed": res.ratio})
    return out


def cmd_verify(json_path: Path | None) -> int:
    results = verify.run_all()
    for r in results:
        print(f"{r.status:4s} {r.name}: {r.detail}")
    if json_path is not None:
        json_path.write_text(
            json.dumps([r.as_dict() for r in results], indent=2) + "\n",
            newline="\n")
    n_fail = sum(r.status == "FAIL" for r in results)
    n_pass = sum(r.status == "PASS" for r in results)
    print(f"-- {n_pass} passed, {n_fail} failed, "
          f"{len(results) - n_pass - n_fail} informational")
    return 1 if n_fail else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptfisher",
        description="Damping-rate estimation toolkit for a dissipative qubit "
                    "under PT-symmetric feedback and no-jump probing")
    parser.add_argument("--version", action="version",
                        version=f"ptfisher {__version__} ({BACKEND} kernel)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, *names):
        flags = {
            "a": dict(type=float, help="feedback sigma_x strength"),
            "b": dict(type=float, help="feedback i*sigma_z strength"),
            "gamma": dict(type=float, help="damping rate (inverse time)"),
            "omega": dict(type=float, help="drive strength (inverse time)"),
            "theta": dict(type=float, help="probe angle (radians)"),
            "n-qubits": dict(type=int, help="probe size N"),
            "t": dict(type=float, help="evolution time"),
            "t-min": dict(type=float, help="grid start (default t_max/points)"),
            "t-max": dict(type=float, help="grid end"),
            "points": dict(type=int, help="grid size"),
            "quantity": dict(type=str, help="quantity to evaluate"),
            "total-time": dict(type=float, help="interrogation budget T"),
            "dt": dict(type=float, help="integrator step"),
        }
        for name in names:
            sp.add_argument(f"--{name}", default=None, **flags[name])
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--config", default=None,
                        help="JSON file with defaults (flags still win)")

    sp = sub.add_parser("fig", help="reproduce a figure as CSV line pair")
    sp.add_argument("fig_id", type=int, choices=range(2, 8))
    add_common(sp, "t-min", "t-max", "points")
    sp.add_argument("--emit-plot", action="store_true",
                    help="write a gnuplot script next to the CSVs")

    sp = sub.add_parser("scan", help="evaluate a quantity over a grid")
    sp.add_argument("--model", choices=("feedback", "probe", "eigenstate"),
                    required=True)
    add_common(sp, "a", "b", "gamma", "omega", "theta", "n-qubits",
               "t-min", "t-max", "points", "quantity", "total-time")

    sp = sub.add_parser("evolve", help="state components over time")
    add_common(sp, "a", "b", "gamma", "omega", "t-min", "t-max", "points",
               "quantity", "dt")
    sp.add_argument("--method", choices=("analytic", "rk4"), default=None)

    sp = sub.add_parser("qfi", help="Fisher information at a single point")
    add_common(sp, "a", "b", "gamma", "t")

    sp = sub.add_parser("probe", help="entangled-probe report (JSON)")
    add_common(sp, "theta", "n-qubits", "gamma", "t", "total-time")

    sp = sub.add_parser("eigen", help="driven-generator eigenstate report (JSON)")
    add_common(sp, "omega", "gamma")

    sp = sub.add_parser("verify", help="run the full self-check battery")
    sp.add_argument("--json", default=None, help="also write a JSON report")
    sp.add_argument("--out", default=None)
    sp.add_argument("--config", default=None)
    return parser


def resolve_params(args: argparse.Namespace) -> dict:
    """Merge defaults < config file < explicit flags."""
    merged = dict(DEFAULTS)
    cfg_path = getattr(args, "config", None)
    if cfg_path:
        loaded = json.loads(Path(cfg_path).read_text())
        if not isinstance(loaded, dict):
            raise ValueError("config file must hold a JSON object")
        unknown = set(loaded) - set(DEFAULTS) - {"model"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        merged.update(loaded)
    for key in DEFAULTS:
        arg = getattr(args, key, None)
        if arg is not None:
            merged[key] = arg
    if getattr(args, "model", None) is not None:
        merged["model"] = args.model
    if getattr(args, "method", None) is not None:
        merged["method"] = args.method
    return merged


def _main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        json_path = Path(args.json) if args.json else None
        return cmd_verify(json_path)

    p = resolve_params(args)
    out_dir = Path(p["out"])
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.command == "fig":
        cmd_fig(args.fig_id, p, out_dir, emit_plot=bool(args.emit_plot))
        print(f"wrote fig{args.fig_id}_feedback.csv and "
              f"fig{args.fig_id}_no_feedback.csv in {out_dir}")
    elif args.command == "scan":
        series = cmd_scan(p, out_dir)
        print(f"wrote scan_{p['model']}_{p['quantity']}.csv "
              f"({len(series.grid)} points) in {out_dir}")
    elif args.command == "evolve":
        if p["quantity"] == "F":
            p = {**p, "quantity": "rho11"}
        series = cmd_evolve(p, out_dir)
        print(f"wrote evolve_{p['quantity']}.csv "
              f"({len(series.grid)} points) in {out_dir}")
    elif args.command == "qfi":
        print(json.dumps(cmd_qfi(p), indent=2))
    elif args.command == "probe":
        print(json.dumps(cmd_probe(p), indent=2))
    elif args.command == "eigen":
        print(json.dumps(cmd_eigen(p), indent=2))
    return 0


def main(argv=None) -> int:
    try:
        return _main(argv)
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
