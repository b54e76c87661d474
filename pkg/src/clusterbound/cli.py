"""Command-line front end.

Exit status: 0 success, 1 a verification check failed, 2 usage or input
error, 3 an inconclusive comparison while ``--strict`` is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import numerics as nx
from .bounds import compare_bounds, evain_applies, nagata_floor, sqrt_bound, theorem_bound
from .cluster import ClusterError, read_cluster
from .numerics import Verdict, decimal_str, fraction_str
from .product_bound import PROPOSITION_MIN_N, Status, verify_proposition
from .specialization import MAX_M, MAX_R, simulate_theorem
from .unloading import Policy, unload

SCHEMA = "clusterbound/1"
EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

SWEEP_COLUMNS = [
    "r",
    "m",
    "paper_bound_exact",
    "paper_bound_decimal",
    "nagata_floor",
    "sqrt_bound_lo",
    "sqrt_bound_hi",
    "improves",
]


class UsageError(Exception):
    pass


def _positive(name: str):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {text!r}") from None
        if value < 0:
            raise argparse.ArgumentTypeError(f"{name} must be non-negative, got {value}")
        return value

    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_positive("--precision"), default=nx.DEFAULT_PRECISION,
                        help="starting precision in significant digits (default %(default)s)")
    common.add_argument("--max-precision", type=_positive("--max-precision"), default=None,
                        help=f"precision cap; defaults to ${nx._ENV_PRECISION_CAP} or 4096")
    common.add_argument("--digits", type=_positive("--digits"), default=6,
                        help="significant digits for decimal display (default %(default)s)")
    common.add_argument("--format", choices=["table", "csv", "json"], default=None,
                        help="output format (default: csv for sweep, table otherwise)")
    common.add_argument("--strict", action="store_true", help="exit 3 on any inconclusive comparison")
    common.add_argument("--allow-large", action="store_true",
                        help=f"lift the caps r <= {MAX_R}, m <= {MAX_M}")
    parser = argparse.ArgumentParser(
        prog="clusterbound",
        description="Unloading of weighted clusters and degree bounds for curves with r points of multiplicity m.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common], help="evaluate and compare the bounds for one (r, m)")
    p.add_argument("--r", type=_positive("--r"), required=True)
    p.add_argument("--m", type=_positive("--m"), default=1)

    p = sub.add_parser("sweep", parents=[common], help="bounds for a range of r, as CSV by default")
    p.add_argument("--r-min", type=_positive("--r-min"), required=True)
    p.add_argument("--r-max", type=_positive("--r-max"), required=True)
    p.add_argument("--m", type=_positive("--m"), default=1)
    p.add_argument("--evain", action="store_true", help="add an evain_applies column")

    p = sub.add_parser("simulate", parents=[common], help="run the staged unloading from (m, ..., m)")
    p.add_argument("--r", type=_positive("--r"), required=True)
    p.add_argument("--m", type=_positive("--m"), required=True)
    p.add_argument("--trace", action="store_true", help="list every unloading step")

    p = sub.add_parser("unload", parents=[common], help="unload a cluster file")
    p.add_argument("--input", required=True, help="cluster file (JSON)")
    p.add_argument("--trace", action="store_true", help="one line per unloading step")
    p.add_argument("--policy", choices=[x.value for x in Policy], default=Policy.LOWEST.value)

    p = sub.add_parser("verify-prop", parents=[common], help="prove b(n) > sqrt(n) - pi/8 for a range of n")
    p.add_argument("--n-min", type=_positive("--n-min"), required=True)
    p.add_argument("--n-max", type=_positive("--n-max"), required=True)
    p.add_argument("--terms", type=_positive("--terms"), default=10_000,
                   help="series terms for the Parseval check in the proof chain")
    p.add_argument("--verbose", action="store_true", help="print the proof chain")
    return parser


# emitters ------------------------------------------------------------------


def dump_json(command: str, records: list[dict]) -> str:
    return json.dumps({"schema": SCHEMA, "command": command, "records": records}, indent=2) + "\n"


def dump_csv(columns: Sequence[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _table(rows: list[dict], columns: Sequence[str]) -> str:
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) for c in columns}
    lines = ["  ".join(c.ljust(widths[c]) for c in columns)]
    lines += ["  ".join(str(r[c]).ljust(widths[c]) for c in columns) for r in rows]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _emit(fmt: str, command: str, rows: list[dict], columns: Sequence[str]) -> str:
    if fmt == "json":
        return dump_json(command, rows)
    if fmt == "csv":
        return dump_csv(columns, rows)
    return _table(rows, columns)


def _enc(e: nx.Enclosure, digits: int) -> tuple[str, str]:
    return decimal_str(e.lower, digits, "down"), decimal_str(e.upper, digits, "up")


# commands --------------------------------------------------------------------


def _caps(args, r: int, m: int, r_flag: str = "--r", m_flag: str = "--m") -> None:
    if args.allow_large:
        return
    if r > MAX_R:
        raise UsageError(f"{r_flag}: {r} is above the cap {MAX_R}; pass --allow-large to override")
    if m > MAX_M:
        raise UsageError(f"{m_flag}: {m} is above the cap {MAX_M}; pass --allow-large to override")


def _cmd_bound(args, out) -> int:
    if args.r < 2:
        raise UsageError("--r: must be at least 2")
    _caps(args, args.r, args.m)
    rep = compare_bounds(args.r, args.m, args.precision, args.max_precision)
    d = args.digits
    xu1, xu2 = rep.xu_bounds
    row = {
        "r": rep.r,
        "m": rep.m,
        "paper_bound_exact": fraction_str(rep.paper_bound),
        "paper_bound_decimal": decimal_str(rep.paper_bound, d),
        "nagata_floor": rep.nagata_floor,
        "sqrt_bound_lo": _enc(rep.sqrt_bound, d)[0],
        "sqrt_bound_hi": _enc(rep.sqrt_bound, d)[1],
        "xu_sqrt_r_minus_1_lo": _enc(xu1, d)[0],
        "xu_sqrt_r_minus_1_hi": _enc(xu1, d)[1],
        "xu_sqrt_r_lo": _enc(xu2, d)[0],
        "xu_sqrt_r_hi": _enc(xu2, d)[1],
        "evain_applies": rep.evain_applies,
    }
    for name, comp in rep.verdicts.items():
        row[name] = str(comp.verdict)
    if args.format == "table":
        out.write(
            f"r = {rep.r}, m = {rep.m}\n"
            f"product bound       {row['paper_bound_exact']} ~ {row['paper_bound_decimal']}\n"
            f"nagata floor        {rep.nagata_floor}\n"
            f"sqrt(r-1) - pi/8    [{row['sqrt_bound_lo']}, {row['sqrt_bound_hi']}]\n"
            f"xu sqrt(r-1)        [{row['xu_sqrt_r_minus_1_lo']}, {row['xu_sqrt_r_minus_1_hi']}]  (irreducible reduced curves only)\n"
            f"xu sqrt(r) - ...    [{row['xu_sqrt_r_lo']}, {row['xu_sqrt_r_hi']}]  (irreducible reduced curves only)\n"
            f"evain applies       {'yes' if rep.evain_applies else 'no'}\n"
        )
        for name, comp in rep.verdicts.items():
            out.write(f"{name:<28}{comp.verdict}\n")
    else:
        out.write(_emit(args.format, "bound", [row], list(row)))
    if args.strict and any(c.verdict is Verdict.INCONCLUSIVE for c in rep.verdicts.values()):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def sweep_rows(r_min: int, r_max: int, m: int, precision: int, digits: int, evain: bool = False) -> list[dict]:
    rows = []
    for r in range(r_min, r_max + 1):
        product = theorem_bound(r, m)
        floor_bound = nagata_floor(r, m)
        lo, hi = _enc(sqrt_bound(r, m, precision), digits)
        row = {
            "r": r,
            "m": m,
            "paper_bound_exact": fraction_str(product),
            "paper_bound_decimal": decimal_str(product, digits),
            "nagata_floor": floor_bound,
            "sqrt_bound_lo": lo,
            "sqrt_bound_hi": hi,
            "improves": str(product > floor_bound).lower(),
        }
        if evain:
            row["evain_applies"] = str(evain_applies(r, m)).lower()
        rows.append(row)
    return rows


def _cmd_sweep(args, out) -> int:
    if not 2 <= args.r_min <= args.r_max:
        raise UsageError("--r-min/--r-max: need 2 <= r-min <= r-max")
    _caps(args, args.r_max, args.m, "--r-max")
    rows = sweep_rows(args.r_min, args.r_max, args.m, args.precision, args.digits, args.evain)
    columns = SWEEP_COLUMNS + (["evain_applies"] if args.evain else [])
    out.write(_emit(args.format or "csv", "sweep", rows, columns))
    return EXIT_OK


def _cmd_simulate(args, out) -> int:
    if args.r < 2 or args.m < 1:
        raise UsageError("--r/--m: need r >= 2 and m >= 1")
    _caps(args, args.r, args.m)
    sim = simulate_theorem(args.r, args.m, strict=False, allow_large=args.allow_large)
    rows = []
    for st in sim.stages:
        row = {
            "stage": st.stage,
            "input": " ".join(map(str, st.input)),
            "output": " ".join(map(str, st.output)),
            "steps": len(st.trace),
            "A": fraction_str(st.A),
            "target": fraction_str(st.target),
            "m1": st.m1,
            "M": st.M,
            "hypotheses": "ok" if st.hypotheses_hold else "FAIL",
            "checks": "ok" if st.passed else "FAIL:" + ",".join(c.name for c in st.failures()),
        }
        if args.trace:
            row["trace"] = "; ".join(
                f"p{s.pivot}+{s.amount} ({s.rho_before}->{s.rho_after})" for s in st.trace.steps
            )
        rows.append(row)
    cert = sim.certificate
    cert_row = {
        "r": cert.r,
        "m": cert.m,
        "final": " ".join(map(str, cert.final)),
        "m1": cert.m1,
        "bound_exact": fraction_str(cert.bound),
        "bound_decimal": decimal_str(cert.bound, args.digits),
        "certified": cert.certified,
    }
    if args.format == "json":
        out.write(json.dumps({"schema": SCHEMA, "command": "simulate", "records": rows,
                              "certificate": cert_row}, indent=2) + "\n")
    elif args.format == "csv":
        out.write(dump_csv(list(rows[0]) if rows else ["stage"], rows))
    else:
        if rows:
            out.write(_table(rows, list(rows[0])))
        out.write(
            f"certificate: m1 = {cert.m1} >= {cert_row['bound_exact']} ~ {cert_row['bound_decimal']}"
            f" [{'ok' if cert.certified else 'FAIL'}]\n"
        )
    return EXIT_OK if sim.passed else EXIT_FAILED


def _cmd_unload(args, out) -> int:
    cluster = read_cluster(args.input)
    result, trace = unload(cluster, args.policy)
    if args.format == "json":
        out.write(json.dumps({
            "schema": SCHEMA,
            "command": "unload",
            "initial": list(trace.initial),
            "final": list(trace.final),
            "steps": [
                {"pivot": s.pivot, "amount": s.amount, "excess_before": s.rho_before, "excess_after": s.rho_after}
                for s in trace.steps
            ],
        }, indent=2) + "\n")
        return EXIT_OK
    out.write("(" + ", ".join(map(str, result.m)) + ")\n")
    if args.trace:
        for k, s in enumerate(trace.steps, 1):
            out.write(f"step {k}: pivot {s.pivot}, n = {s.amount}, excess {s.rho_before} -> {s.rho_after}\n")
    return EXIT_OK


def _cmd_verify(args, out) -> int:
    if not 1 <= args.n_min <= args.n_max:
        raise UsageError("--n-min/--n-max: need 1 <= n-min <= n-max")
    _caps(args, args.n_max + 1, 1, "--n-max")
    rows, chains = [], []
    failed = inconclusive = False
    for n in range(args.n_min, args.n_max + 1):
        cert = verify_proposition(n, args.precision, args.max_precision, parseval_terms=args.terms)
        lo, hi = _enc(cert.rhs, args.digits)
        chain_state = "ok" if cert.chain_passed else "FAIL:" + ",".join(i.name for i in cert.failed_items())
        rows.append({
            "n": n,
            "b_exact": fraction_str(cert.b),
            "b_decimal": decimal_str(cert.b, args.digits),
            "rhs_lo": lo,
            "rhs_hi": hi,
            "verdict": str(cert.verdict),
            "chain": chain_state,
            "exploratory": str(cert.exploratory).lower(),
        })
        chains.append(cert)
        if cert.verdict is Verdict.INCONCLUSIVE or any(i.status is Status.INCONCLUSIVE for i in cert.proof_chain):
            inconclusive = True
        if cert.verdict is Verdict.LESS or (not cert.exploratory and any(i.status is Status.FAIL for i in cert.proof_chain)):
            failed = True
    if args.format == "table":
        for row, cert in zip(rows, chains):
            tag = " (exploratory, n < %d)" % PROPOSITION_MIN_N if cert.exploratory else ""
            out.write(f"n={row['n']}  b={row['b_decimal']}  sqrt(n)-pi/8 in [{row['rhs_lo']}, {row['rhs_hi']}]"
                      f"  {row['verdict']}{tag}\n")
            if args.verbose:
                for item in cert.proof_chain:
                    out.write(f"    {item}\n")
    else:
        if args.verbose:
            for row, cert in zip(rows, chains):
                row["proof_chain"] = {i.name: str(i.status) for i in cert.proof_chain} if args.format == "json" else \
                    ";".join(f"{i.name}={i.status}" for i in cert.proof_chain)
        out.write(_emit(args.format, "verify-prop", rows, list(rows[0])))
    if failed:
        return EXIT_FAILED
    if args.strict and inconclusive:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


_COMMANDS = {
    "bound": _cmd_bound,
    "sweep": _cmd_sweep,
    "simulate": _cmd_simulate,
    "unload": _cmd_unload,
    "verify-prop": _cmd_verify,
}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.max_precision is not None and args.max_precision < args.precision:
        err.write("error: --max-precision must be at least --precision\n")
        return EXIT_USAGE
    if args.format is None:
        args.format = "csv" if args.command == "sweep" else "table"
    try:
        return _COMMANDS[args.command](args, out)
    except (UsageError, ClusterError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
