"""Command-line interface: CSV ingestion, report serialization, subcommands.

Exit codes: 0 success, 2 usage error, 3 data error. The decision itself is
never encoded in the exit code; it lives in the emitted report.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .bootstrap import BootstrapConfig, TestReport, run_test
from .limitdist import BridgePathConfig, limit_quantiles, simulate_bridge_functional
from .odc import Pairing, TwoSampleData, empirical_odc
from .simulate import CopulaKind, CopulaSpec, FamilyKind, OdcFamily, ScenarioSpec, rejection_rate
from .stats import StatKind

__all__ = ["parse_csv", "emit_report", "parse_report", "main"]

_REPORT_KEYS = (
    "statistic",
    "critical_value",
    "p_value",
    "reject",
    "alpha",
    "tau",
    "num_bootstrap",
    "eta",
    "seed",
    "pairing",
    "n1",
    "n2",
    "ties_detected",
    "statistic_kind",
)


def _float_cell(text: str, line_no: int, column: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"line {line_no}: cannot parse {column} value {text!r}") from None


def _looks_like_header(row: list[str]) -> bool:
    for cell in row:
        try:
            float(cell)
        except ValueError:
            return True
    return False


def parse_csv(source, paired: bool = False) -> TwoSampleData:
    """Read a two-sample dataset from CSV.

    Unpaired layout: columns ``group,value`` with group 1 or 2. Paired
    layout: columns ``x1,x2``, one pair per row. An optional header row is
    skipped. Errors carry the 1-based line number.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return parse_csv(fh, paired=paired)
    rows = list(csv.reader(source))
    start = 0
    if rows and _looks_like_header(rows[0]):
        start = 1
    x1: list[float] = []
    x2: list[float] = []
    for idx in range(start, len(rows)):
        row = [cell.strip() for cell in rows[idx]]
        if not any(row):
            continue
        line_no = idx + 1
        if paired:
            if len(row) != 2 or not row[0] or not row[1]:
                raise ValueError(f"line {line_no}: expected two cells x1,x2")
            x1.append(_float_cell(row[0], line_no, "x1"))
            x2.append(_float_cell(row[1], line_no, "x2"))
        else:
            if len(row) != 2 or not row[0] or not row[1]:
                raise ValueError(f"line {line_no}: expected two cells group,value")
            group = row[0]
            if group not in ("1", "2"):
                raise ValueError(f"line {line_no}: group must be 1 or 2, got {group!r}")
            value = _float_cell(row[1], line_no, "value")
            (x1 if group == "1" else x2).append(value)
    if not x1 or not x2:
        raise ValueError("each sample needs at least one observation")
    pairing = Pairing.MATCHED if paired else Pairing.INDEPENDENT
    return TwoSampleData(x1=np.array(x1), x2=np.array(x2), pairing=pairing)


def _tau_out(tau: float):
    return "inf" if math.isinf(tau) else tau


def emit_report(report: TestReport, format: str = "json") -> str:
    """Serialize a test report as strict JSON or a human-readable table.

    JSON output carries no timestamp so identical runs emit identical bytes;
    an infinite tau is written as the string "inf".
    """
    if format == "json":
        doc = {
            "statistic": report.statistic,
            "critical_value": report.critical_value,
            "p_value": report.p_value,
            "reject": report.reject,
            "alpha": report.alpha,
            "tau": _tau_out(report.tau),
            "num_bootstrap": report.num_reps,
            "eta": report.eta,
            "seed": report.seed,
            "pairing": report.pairing.value,
            "n1": report.n1,
            "n2": report.n2,
            "ties_detected": report.ties_detected,
            "statistic_kind": report.statistic_kind.value,
            "version": __version__,
        }
        return json.dumps(doc, indent=2) + "\n"
    if format != "table":
        raise ValueError(f"unknown report format: {format!r}")
    decision = "REJECT H0" if report.reject else "FAIL TO REJECT H0"
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    lines = [
        f"dominance test ({report.statistic_kind.value}, {report.pairing.value})",
        f"  n1 = {report.n1}, n2 = {report.n2}, ties = {report.ties_detected}",
        f"  statistic      = {report.statistic:.6g}",
        f"  critical value = {report.critical_value:.6g}  (alpha = {report.alpha:g})",
        f"  p-value        = {report.p_value:.6g}",
        f"  tau = {_tau_out(report.tau)}, bootstrap reps = {report.num_reps}, "
        f"eta = {report.eta:g}, seed = {report.seed}",
        f"  decision: {decision}",
        f"  domtest {__version__} at {stamp}",
    ]
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> TestReport:
    """Rebuild a TestReport from its JSON serialization."""
    doc = json.loads(text)
    missing = [key for key in _REPORT_KEYS if key not in doc]
    if missing:
        raise ValueError(f"report is missing keys: {missing}")
    tau = doc["tau"]
    return TestReport(
        statistic=float(doc["statistic"]),
        critical_value=float(doc["critical_value"]),
        p_value=float(doc["p_value"]),
        reject=bool(doc["reject"]),
        ties_detected=bool(doc["ties_detected"]),
        alpha=float(doc["alpha"]),
        tau=math.inf if tau == "inf" else float(tau),
        num_reps=int(doc["num_bootstrap"]),
        eta=float(doc["eta"]),
        seed=int(doc["seed"]),
        pairing=Pairing(doc["pairing"]),
        n1=int(doc["n1"]),
        n2=int(doc["n2"]),
        statistic_kind=StatKind(doc["statistic_kind"]),
    )


def _tau_flag(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid tau: {text!r}") from None
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="domtest",
        description="Rank-based stochastic dominance tests with bootstrap critical values.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run a dominance test on a CSV file")
    p_test.add_argument("--input", required=True, help="CSV file (group,value or x1,x2)")
    p_test.add_argument("--paired", action="store_true", help="treat rows as matched pairs")
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument("--tau", type=_tau_flag, default=0.75, help="screen width; 'inf' for none")
    p_test.add_argument("--boot", type=int, default=999, help="bootstrap replications")
    p_test.add_argument("--eta", type=float, default=0.0, help="critical value floor")
    p_test.add_argument("--seed", type=int, default=0)
    p_test.add_argument("--stat", choices=["wmw", "ks"], default="wmw")
    p_test.add_argument("--format", choices=["json", "table"], default="json")

    p_sim = sub.add_parser("simulate", help="Monte Carlo rejection rate for a scenario")
    p_sim.add_argument(
        "--family",
        required=True,
        choices=[k.value for k in FamilyKind],
    )
    p_sim.add_argument("--gamma", type=float, default=0.0)
    p_sim.add_argument("--n", type=int, help="common sample size")
    p_sim.add_argument("--n1", type=int)
    p_sim.add_argument("--n2", type=int)
    p_sim.add_argument("--paired", action="store_true")
    p_sim.add_argument("--rho", type=float, default=0.0, help="Gaussian copula correlation")
    p_sim.add_argument("--reps", type=int, default=5000, help="Monte Carlo replications")
    p_sim.add_argument("--boot", type=int, default=500)
    p_sim.add_argument("--tau", type=_tau_flag, default=0.75)
    p_sim.add_argument("--alpha", type=float, default=0.05)
    p_sim.add_argument("--stat", choices=["wmw", "ks"], default="wmw")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", help="write the CSV row here instead of stdout")

    p_odc = sub.add_parser("odc", help="emit the empirical dominance curve as CSV")
    p_odc.add_argument("--input", required=True)
    p_odc.add_argument("--paired", action="store_true")
    p_odc.add_argument("--out", help="write CSV here instead of stdout")

    p_nq = sub.add_parser("null-quantiles", help="limit-distribution quantiles by simulation")
    p_nq.add_argument("--paths", type=int, default=100000)
    p_nq.add_argument("--grid", type=int, default=1000)
    p_nq.add_argument("--levels", default="0.9,0.95,0.99")
    p_nq.add_argument("--seed", type=int, default=0)

    return parser


def _usage_checked(factory):
    """Turn config-validation failures into usage errors (exit code 2)."""
    try:
        return factory()
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _cmd_test(args) -> int:
    config = _usage_checked(
        lambda: BootstrapConfig(
            alpha=args.alpha,
            tau=args.tau,
            num_reps=args.boot,
            eta=args.eta,
            seed=args.seed,
            statistic_kind=StatKind(args.stat),
        )
    )
    data = parse_csv(args.input, paired=args.paired)
    report = run_test(data, config)
    sys.stdout.write(emit_report(report, format=args.format))
    return 0


def _cmd_simulate(args) -> int:
    if args.n is not None:
        n1 = n2 = args.n
    else:
        n1, n2 = args.n1, args.n2
    if n1 is None or n2 is None:
        raise argparse.ArgumentTypeError("give --n, or both --n1 and --n2")
    pairing = Pairing.MATCHED if args.paired else Pairing.INDEPENDENT
    copula = _usage_checked(
        lambda: CopulaSpec(kind=CopulaKind.GAUSSIAN, rho=args.rho)
        if args.paired
        else CopulaSpec(kind=CopulaKind.PRODUCT)
    )
    spec = _usage_checked(
        lambda: ScenarioSpec(
            family=OdcFamily(kind=FamilyKind(args.family), gamma=args.gamma),
            n1=n1,
            n2=n2,
            copula=copula,
            pairing=pairing,
            mc_reps=args.reps,
            bootstrap=BootstrapConfig(
                alpha=args.alpha,
                tau=args.tau,
                num_reps=args.boot,
                seed=args.seed,
                statistic_kind=StatKind(args.stat),
            ),
        )
    )
    result = rejection_rate(spec)
    header = "family,gamma,n1,n2,pairing,rho,alpha,tau,boot,reps,seed,rate,std_error"
    row = ",".join(
        [
            spec.family.kind.value,
            repr(spec.family.gamma),
            str(n1),
            str(n2),
            pairing.value,
            repr(args.rho if args.paired else 0.0),
            repr(args.alpha),
            "inf" if math.isinf(args.tau) else repr(args.tau),
            str(args.boot),
            str(args.reps),
            str(args.seed),
            repr(result.rate),
            repr(result.std_error),
        ]
    )
    text = header + "\n" + row + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_odc(args) -> int:
    data = parse_csv(args.input, paired=args.paired)
    curve = empirical_odc(data)
    buf = io.StringIO()
    buf.write("u,R_hat\n")
    for u, value in zip(curve.grid, curve.values):
        buf.write(f"{float(u)!r},{float(value)!r}\n")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def _cmd_null_quantiles(args) -> int:
    try:
        levels = [float(part) for part in args.levels.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid levels: {args.levels!r}") from None
    if not levels:
        raise argparse.ArgumentTypeError("need at least one quantile level")
    config = _usage_checked(
        lambda: BridgePathConfig(num_paths=args.paths, grid_size=args.grid, seed=args.seed)
    )
    samples = simulate_bridge_functional(config)
    values = limit_quantiles(samples, levels)
    for level, value in zip(levels, values):
        sys.stdout.write(f"{level:g} {value:.6f}\n")
    return 0


_COMMANDS = {
    "test": _cmd_test,
    "simulate": _cmd_simulate,
    "odc": _cmd_odc,
    "null-quantiles": _cmd_null_quantiles,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    try:
        return _COMMANDS[args.command](args)
    except argparse.ArgumentTypeError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
