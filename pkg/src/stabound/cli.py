"""Command-line surface.

Two subcommands:

* ``analyze``      - full pipeline; writes the envelope CSV and a JSON report.
* ``log-measure``  - the running-integral sufficient criterion on its own.

Exit codes: 0 success, 2 configuration/usage error, 3 system not UAS.
A failed log-measure criterion is a result, not an error (exit 0).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .analysis import AnalysisConfig, report_to_json, run_analyze, system_from_json
from .errors import ConfigError, ExprError, NotUasError, StaboundError
from .systems import DEFAULT_ATOL, DEFAULT_RTOL, SystemSpec

_RANDOM_PREFIX = "random_uas"


def _parse_system(text: str) -> SystemSpec:
    if text.startswith("builtin:"):
        ident = text[len("builtin:") :]
        if ident == _RANDOM_PREFIX or ident.startswith(_RANDOM_PREFIX + ":"):
            from .scenarios import random_uas

            n = 3
            if ":" in ident:
                try:
                    n = int(ident.split(":", 1)[1])
                except ValueError:
                    raise ConfigError(f"bad dimension in {text!r}") from None
            seed = int(os.environ.get("STABOUND_SEED", "0"))
            return random_uas(n, seed).spec
        return SystemSpec.builtin(ident)
    if text.lstrip().startswith("{"):
        return system_from_json(text)
    try:
        with open(text, encoding="utf-8") as fh:
            payload = fh.read()
    except OSError as err:
        raise ConfigError(f"cannot read system file {text!r}: {err}") from err
    try:
        return system_from_json(payload)
    except ConfigError as err:
        raise ConfigError(f"{text}: {err}") from err


def _parse_x0(text: str) -> np.ndarray:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as err:
        raise ConfigError(f"bad --x0 value {text!r}: {err}") from err
    if not values:
        raise ConfigError("--x0 must contain at least one number")
    return np.array(values)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--system",
        required=True,
        metavar="PATH|builtin:ID|JSON",
        help="system source: a JSON file path, builtin:<id> "
        "(example1_lti, example3_ltv, random_uas[:n]), or inline JSON",
    )
    parser.add_argument("--t0", type=float, default=0.0, help="grid start time (default 0)")
    parser.add_argument("--t-end", type=float, required=True, help="grid end time")
    parser.add_argument(
        "--samples", type=int, default=501, help="number of grid samples (default 501)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stabound",
        description="Lower/upper solution-norm envelopes and decay certificates "
        "for uniformly asymptotically stable linear systems x' = A(t) x.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="run the full envelope/certificate pipeline")
    _add_common(analyze)
    analyze.add_argument(
        "--horizon", type=float, default=None, help="truncation horizon for the weight sweep"
    )
    analyze.add_argument(
        "--x0", type=str, default=None, metavar='"c1,c2,..."', help="initial state"
    )
    analyze.add_argument("--out-csv", type=str, default="bounds.csv", help="CSV output path")
    analyze.add_argument(
        "--out-report", type=str, default="report.json", help="JSON report output path"
    )
    analyze.add_argument("--rtol", type=float, default=DEFAULT_RTOL, help="trajectory rtol")
    analyze.add_argument("--atol", type=float, default=DEFAULT_ATOL, help="trajectory atol")
    analyze.add_argument(
        "--gamma-tilde", type=float, default=None, help="also run the log-measure criterion"
    )
    analyze.add_argument(
        "--lambda-tilde", type=float, default=None, help="decay slope for the criterion"
    )

    measure = sub.add_parser("log-measure", help="run only the log-measure criterion")
    _add_common(measure)
    measure.add_argument("--gamma-tilde", type=float, required=True)
    measure.add_argument("--lambda-tilde", type=float, required=True)
    measure.add_argument(
        "--out-report", type=str, default=None, help="optional JSON output path"
    )
    return parser


def _cmd_analyze(args) -> int:
    cfg = AnalysisConfig(
        system=_parse_system(args.system),
        t0=args.t0,
        t_end=args.t_end,
        num_samples=args.samples,
        horizon_t=args.horizon,
        x0=None if args.x0 is None else _parse_x0(args.x0),
        rtol=args.rtol,
        atol=args.atol,
        gamma_tilde=args.gamma_tilde,
        lambda_tilde=args.lambda_tilde,
    )
    result = run_analyze(cfg)
    with open(args.out_csv, "w", encoding="utf-8", newline="") as fh:
        fh.write(result.csv_text)
    with open(args.out_report, "w", encoding="utf-8") as fh:
        fh.write(report_to_json(result.report))
    report = result.report
    print(f"certificate: gamma = {report.certificate.gamma:.6g}, lambda = {report.certificate.lam:.6g}")
    print(f"certificate margin on pair grid: {report.certificate_margin:.3e} (<= 0 verifies)")
    print(f"L = sup ||A(t)|| = {report.L:.6g}")
    print(f"weight eigenvalue range: [{result.weights.lmin.min():.6g}, {result.weights.lmax.max():.6g}]")
    print(f"truncation tail bound: {report.tail_bound:.3e}")
    print(f"Lyapunov residual self-check: {report.lyapunov_residual:.3e}")
    if report.log_measure is not None:
        verdict = "satisfied" if report.log_measure.satisfied else "not satisfied"
        print(f"log-measure criterion: {verdict} (worst margin {report.log_measure.worst_margin:.6g})")
    print(f"wrote {args.out_csv} and {args.out_report}")
    return 0


def _cmd_log_measure(args) -> int:
    from .bounds import log_measure_check
    from .systems import TimeGrid

    spec = _parse_system(args.system)
    if not args.t_end > args.t0:
        raise ConfigError("t_end must exceed t0")
    if args.samples < 2:
        raise ConfigError("samples must be >= 2")
    grid = TimeGrid.uniform(args.t0, args.t_end, args.samples)
    outcome = log_measure_check(spec, grid, args.gamma_tilde, args.lambda_tilde)
    verdict = "satisfied" if outcome.satisfied else "not satisfied"
    print(f"log-measure criterion {verdict}: worst margin = {outcome.worst_margin:.6g}")
    if outcome.certificate is not None:
        print(
            f"implied certificate: gamma = {outcome.certificate.gamma:.6g}, "
            f"lambda = {outcome.certificate.lam:.6g}"
        )
    if args.out_report:
        payload = {
            "gamma_tilde": outcome.gamma_tilde,
            "lambda_tilde": outcome.lambda_tilde,
            "satisfied": outcome.satisfied,
            "worst_margin": outcome.worst_margin,
        }
        with open(args.out_report, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def _glue_x0(argv: list[str]) -> list[str]:
    """Join '--x0 -4,3' into '--x0=-4,3' so leading-dash vectors parse."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--x0" and i + 1 < len(argv):
            out.append("--x0=" + argv[i + 1])
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_x0(list(sys.argv[1:] if argv is None else argv)))
    try:
        if args.command == "analyze":
            return _cmd_analyze(args)
        return _cmd_log_measure(args)
    except NotUasError as err:
        print(f"error: system not UAS: {err}", file=sys.stderr)
        return 3
    except (ConfigError, ExprError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except StaboundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
