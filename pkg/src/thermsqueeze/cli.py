"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 truncation-regime error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import fock, group, kraus, snr, states
from .errors import TruncationError
from .group import SqueezeParams, from_squeeze_params
from .states import ThermalParams
from .verification import run_checks

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_REGIME = 3

DEFAULT_TOL = 1e-8


@dataclass
class RunConfig:
    dim: int | str = fock.DEFAULT_DIM
    tol: float = DEFAULT_TOL
    output_path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.dim != "auto":
            self.dim = fock.check_dim(self.dim)
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")


def _default_dim() -> int | str:
    value = os.environ.get("THERMSQUEEZE_DIM")
    return _dim_arg(value) if value else fock.DEFAULT_DIM


def _dim_arg(text: str) -> int | str:
    if text == "auto":
        return text
    try:
        return fock.check_dim(int(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _emit(text: str, config: RunConfig):
    if config.output_path:
        with open(config.output_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_snr_sweep(N: float, t_min: float, t_max: float, points: int, config: RunConfig) -> int:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        rows = snr.temperature_sweep(N, t_min, t_max, points)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    if config.format == "json":
        text = json.dumps(
            [{"T": r.T, "nbar": r.nbar, "sigma": r.sigma, "sigma_ratio": r.sigma_ratio} for r in rows],
            indent=1,
        ) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["T", "nbar", "sigma", "sigma_ratio"])
        for r in rows:
            writer.writerow([_fmt(r.T), _fmt(r.nbar), _fmt(r.sigma), _fmt(r.sigma_ratio)])
        text = buf.getvalue()
    _emit(text, config)
    return EXIT_OK


def _resolve_dim(config: RunConfig, g, t) -> int:
    if config.dim == "auto":
        return states.required_dim(g, t)
    return config.dim


def cmd_variances(r: float, phi: float, alpha_re: float, alpha_im: float, beta_eps: float, config: RunConfig) -> int:
    g = from_squeeze_params(SqueezeParams(r, phi), complex(alpha_re, alpha_im))
    t = ThermalParams(beta_eps)
    dim = _resolve_dim(config, g, t)
    nbar = states.mean_photon(t)
    closed = states.quadrature_variances_closed(g, nbar)
    rho = states.thermal_squeezed(g, t, dim)
    oracle = states.quadrature_variances(rho)
    leak = states.truncation_leak(g, t, dim)
    deviation = max(abs(closed[0] - oracle[0]), abs(closed[1] - oracle[1]))
    report = {
        "dim": dim,
        "nbar": nbar,
        "closed": {"varX": closed[0], "varP": closed[1]},
        "oracle": {"varX": oracle[0], "varP": oracle[1]},
        "deviation": deviation,
        "leak": leak,
        "match": deviation <= config.tol,
    }
    if config.format == "json":
        _emit(json.dumps(report, indent=1) + "\n", config)
    else:
        lines = [
            f"dim            {dim}",
            f"nbar           {_fmt(nbar)}",
            f"closed form    VarX = {_fmt(closed[0])}  VarP = {_fmt(closed[1])}",
            f"trace oracle   VarX = {_fmt(oracle[0])}  VarP = {_fmt(oracle[1])}",
            f"deviation      {deviation:.3e}",
            f"leak past cutoff {leak:.3e}",
        ]
        if deviation > config.tol:
            lines.append(
                f"warning: deviation exceeds tol {config.tol:.1e}; the state needs more Fock levels "
                "(try --dim auto)"
            )
        _emit("\n".join(lines) + "\n", config)
    return EXIT_OK


def cmd_kraus_demo(p_list, beta_eps, dim, r, phi, alpha, config: RunConfig) -> int:
    lines = []
    summary: dict = {}
    if p_list is not None:
        p = kraus.check_probabilities(p_list)
        sets = [("canonical", kraus.canonical_set(p))]
        if p.size == 2:
            sets.insert(0, ("two-level", kraus.two_level_set(float(p[0]))))
        rho0 = states.vacuum(p.size)
        for name, K in sets:
            report = kraus.validate_conditions(K)
            out = kraus.apply_channel(K, rho0)
            target_dev = float(np.abs(out - np.diag(p)).max())
            lines.append(f"{name} set: {len(K)} operators, dim {K.dim}")
            lines += ["  " + s for s in report.lines()]
            lines.append(f"  |0><0| -> diag(p) deviation {target_dev:.3e}")
            summary[name] = {"conditions": report.deviations, "ok": report.ok, "output_deviation": target_dev}
    else:
        t = ThermalParams(beta_eps)
        g = from_squeeze_params(SqueezeParams(r, phi), alpha)
        if dim == "auto":
            dim = states.required_dim(g, t)
        K = kraus.thermal_kraus(t, dim)
        report = kraus.validate_conditions(K)
        U = group.to_unitary(g, dim)
        Kc = kraus.conjugate_set(K, U)
        out = kraus.apply_channel(Kc, states.squeezed(g, dim))
        target = states.thermal_squeezed(g, t, dim)
        dist = fock.trace_distance(out, target)
        lines.append(f"thermal set: {len(K)} operators, dim {dim}, nbar {_fmt(states.mean_photon(t))}")
        lines += ["  " + s for s in report.lines()]
        lines.append(f"conjugated set completeness deviation {kraus.completeness_deviation(Kc):.3e}")
        lines.append(f"trace distance (conjugated channel on squeezed state, thermal squeezed state) {dist:.3e}")
        summary = {
            "dim": dim,
            "conditions": report.deviations,
            "conjugated_completeness": kraus.completeness_deviation(Kc),
            "trace_distance": dist,
        }
    if config.format == "json":
        _emit(json.dumps(summary, indent=1) + "\n", config)
    else:
        _emit("\n".join(lines) + "\n", config)
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    dim = fock.DEFAULT_DIM if config.dim == "auto" else config.dim
    results = run_checks(dim, config.tol)
    failed = [r for r in results if r.status == "fail"]
    if config.format == "json":
        text = json.dumps({"passed": not failed, "dim": dim, "checks": [r.as_dict() for r in results]}, indent=1)
        _emit(text + "\n", config)
    else:
        lines = [r.line() for r in results]
        lines.append(f"{len(results) - len(failed)}/{len(results)} checks without failure")
        if failed:
            lines.append("failed: " + ", ".join(r.name for r in failed))
        _emit("\n".join(lines) + "\n", config)
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=_dim_arg, default=_default_dim(),
                        help="Fock dimension, or 'auto' (default 64, env THERMSQUEEZE_DIM)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="comparison tolerance")
    common.add_argument("--out", default=None, help="write output to this file")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    state = argparse.ArgumentParser(add_help=False)
    state.add_argument("--r", type=float, default=0.0, help="squeeze magnitude")
    state.add_argument("--phi", type=float, default=0.0, help="squeeze phase")
    state.add_argument("--alpha-re", type=float, default=0.0)
    state.add_argument("--alpha-im", type=float, default=0.0)

    parser = argparse.ArgumentParser(prog="thermsqueeze", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("snr-sweep", parents=[common], help="optimal signal-to-noise ratio against temperature")
    p.add_argument("--photons", type=float, default=1.0, help="photon budget N")
    p.add_argument("--tmin", type=float, default=0.01)
    p.add_argument("--tmax", type=float, default=3.0)
    p.add_argument("--points", type=int, default=100)

    p = sub.add_parser("variances", parents=[common, state], help="quadrature variances, closed form and trace")
    p.add_argument("--beta-eps", type=float, default=50.0)

    p = sub.add_parser("kraus-demo", parents=[common, state], help="Kraus thermalisation demonstration")
    group_ = p.add_mutually_exclusive_group(required=True)
    group_.add_argument("--p", type=float, nargs="+", help="target populations")
    group_.add_argument("--beta-eps", type=float)

    sub.add_parser("verify", parents=[common], help="run the invariant suite")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(args.dim, args.tol, args.out, args.format)
        if args.command == "snr-sweep":
            return cmd_snr_sweep(args.photons, args.tmin, args.tmax, args.points, config)
        if args.command == "variances":
            return cmd_variances(args.r, args.phi, args.alpha_re, args.alpha_im, args.beta_eps, config)
        if args.command == "kraus-demo":
            return cmd_kraus_demo(args.p, args.beta_eps, config.dim, args.r, args.phi,
                                  complex(args.alpha_re, args.alpha_im), config)
        return cmd_verify(config)
    except TruncationError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
