"""Command-line entry point.

Commands: ``synthesize``, ``verify``, ``search``, ``table``, ``fidelity``.
Exit codes: 0 success, 1 usage or I/O error, 2 synthesis failure, 3
verification failure.  Output is byte-identical across repeated identical
invocations: orderings are fixed, RNG seeds default to constants, rationals
are serialized exactly, and strength-dependent reals use 15 significant
digits in CSV.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import oracle, synthesis
from .exact import format_rational
from .partitions import Partition
from .synthesis import (
    CodeSpec,
    SearchExhausted,
    SynthesisFailure,
    SynthesisParams,
    build_matrix,
    fidelity_lower_bound,
    search_min_excitation,
    synthesize,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SYNTHESIS = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    """argparse reports usage problems with exit code 2; this contract wants 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _json_line(payload: object) -> str:
    return json.dumps(payload, separators=(",", ":")) + "\n"


def _parse_gammas(raw: list[str]) -> list[float]:
    gammas = []
    for chunk in raw:
        for piece in chunk.split(","):
            piece = piece.strip()
            if piece:
                gammas.append(float(piece))
    if not gammas:
        raise ValueError("at least one gamma value is required")
    return gammas


def _parse_subset(raw: str, w: int) -> list[Partition]:
    subset = []
    for chunk in raw.split(";"):
        parts = tuple(int(p) for p in chunk.split(",") if p.strip())
        subset.append(Partition(parts, w))
    return subset


def _format_real(value: float) -> str:
    return format(value, ".15g")


def _matrix_dump(cm: synthesis.ConstraintMatrix) -> str:
    lines = ["# rows: loss partitions (weight ascending, descending-lex within weight)"]
    for index, label in enumerate(cm.basis.labels, start=1):
        lines.append(f"# column {index}: {','.join(str(v) for v in label)}")
    for label in cm.row_labels:
        name = "(" + ",".join(str(p) for p in label.partition.parts) + ")"
        entries = " ".join(format_rational(v) for v in cm.matrix.row(label.index - 1))
        lines.append(f"{name} {entries}")
    return "\n".join(lines) + "\n"


def _cmd_synthesize(args: argparse.Namespace) -> int:
    try:
        subset = _parse_subset(args.q_subset, args.w if args.w is not None else args.t) \
            if args.q_subset else None
        params = SynthesisParams.create(args.t, w=args.w, u=args.u, subset=subset)
    except ValueError as exc:
        sys.stderr.write(f"adcodes synthesize: {exc}\n")
        return EXIT_USAGE
    if args.dump_matrix:
        _emit(_matrix_dump(build_matrix(params)), args.out)
        return EXIT_OK
    try:
        spec = synthesize(params)
    except SynthesisFailure as failure:
        _emit(
            _json_line(
                {
                    "error": "synthesis_failure",
                    "reason": failure.reason,
                    "details": failure.details,
                }
            ),
            args.out,
        )
        return EXIT_SYNTHESIS
    _emit(spec.to_json(), args.out)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    try:
        text = Path(args.spec).read_text()
    except OSError as exc:
        sys.stderr.write(f"adcodes verify: cannot read {args.spec}: {exc}\n")
        return EXIT_USAGE
    try:
        spec = CodeSpec.from_json(text)
        gammas = _parse_gammas(args.gamma)
    except (ValueError, KeyError) as exc:
        sys.stderr.write(f"adcodes verify: {exc}\n")
        return EXIT_USAGE
    scope = "full" if args.scope == "full" else "partition"
    reports = []
    try:
        for gamma in gammas:
            reports.append(
                oracle.report_json_dict(
                    spec,
                    gamma,
                    scope=scope,
                    full_cap=args.cap,
                    sample_pairs=args.samples,
                    seed=args.seed,
                )
            )
    except oracle.CapExceeded as exc:
        sys.stderr.write(f"adcodes verify: {exc}\n")
        return EXIT_USAGE
    _emit(_json_line(reports), args.out)
    worst = max(max(report["max_violation"].values()) for report in reports)
    clean = all(report["nondegenerate"] and report["permutation_invariant"] for report in reports)
    return EXIT_OK if worst < args.tol and clean else EXIT_VERIFY


def _cmd_search(args: argparse.Namespace) -> int:
    try:
        result = search_min_excitation(args.t, args.mode, w_max=args.w_max)
    except SearchExhausted as exc:
        _emit(
            _json_line(
                {
                    "error": "search_exhausted",
                    "t": exc.t,
                    "w_max": exc.w_max,
                    "scan": [list(entry) for entry in exc.scan],
                }
            ),
            args.out,
        )
        return EXIT_SYNTHESIS
    certificate: object
    if isinstance(result.certificate, CodeSpec):
        certificate = result.certificate.to_json_dict()
    else:
        certificate = result.certificate
    payload = {
        "t": result.t,
        "mode": result.mode,
        "w": result.w,
        "N": result.total_excitation,
        "scan": [list(entry) for entry in result.scan],
        "certificate": certificate,
    }
    _emit(_json_line(payload), args.out)
    return EXIT_OK


def _table_rows(t_max: int, mode: str, exact_max: int) -> list[dict]:
    rows = []
    for t in range(1, t_max + 1):
        if mode == "auto":
            row_mode = "exact" if t <= exact_max else "inequality"
        else:
            row_mode = mode
        result = search_min_excitation(t, row_mode)
        square = (t + 1) ** 2
        rows.append(
            {
                "t": t,
                "N": result.total_excitation,
                "square": square,
                "ratio": result.total_excitation / square,
                "mode": row_mode,
            }
        )
    return rows


def _cmd_table(args: argparse.Namespace) -> int:
    rows = _table_rows(args.t_max, args.mode, args.exact_max)
    if args.format == "json":
        payload = [
            {
                "t": row["t"],
                "N": row["N"],
                "square": row["square"],
                "ratio": float(_format_real(row["ratio"])),
                "mode": row["mode"],
            }
            for row in rows
        ]
        _emit(_json_line(payload), args.out)
        return EXIT_OK
    lines = ["t,N,(t+1)^2,ratio,mode"]
    for row in rows:
        lines.append(
            f"{row['t']},{row['N']},{row['square']},{_format_real(row['ratio'])},{row['mode']}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_fidelity(args: argparse.Namespace) -> int:
    try:
        gammas = _parse_gammas(args.gamma)
        bounds = [fidelity_lower_bound(args.n, args.t, gamma) for gamma in gammas]
    except ValueError as exc:
        sys.stderr.write(f"adcodes fidelity: {exc}\n")
        return EXIT_USAGE
    if args.format == "json":
        payload = [
            {"gamma": gamma, "bound": bound} for gamma, bound in zip(gammas, bounds)
        ]
        _emit(_json_line(payload), args.out)
        return EXIT_OK
    lines = ["gamma,bound"]
    for gamma, bound in zip(gammas, bounds):
        lines.append(f"{_format_real(gamma)},{_format_real(bound)}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="adcodes", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    syn = commands.add_parser("synthesize", help="synthesize a code from (t, w, u)")
    syn.add_argument("--t", type=int, required=True, help="number of losses to correct")
    syn.add_argument("--w", type=int, default=None, help="base integer (default: t)")
    syn.add_argument("--u", type=int, default=None, help="scale factor (default: t+1)")
    syn.add_argument(
        "--q-subset",
        default=None,
        help="semicolon-separated partitions of w, e.g. '4;3,1' (default: all)",
    )
    syn.add_argument("--dump-matrix", action="store_true", help="print the constraint matrix")
    syn.add_argument("--out", default=None)
    syn.set_defaults(handler=_cmd_synthesize)

    ver = commands.add_parser("verify", help="verify a code spec file numerically")
    ver.add_argument("spec", help="path to a code-spec JSON file")
    ver.add_argument("--gamma", action="append", required=True, help="comma-separated strengths")
    ver.add_argument("--scope", choices=("full", "partition"), default="full")
    ver.add_argument("--cap", type=int, default=oracle.FULL_SCOPE_CAP)
    ver.add_argument("--samples", type=int, default=200)
    ver.add_argument("--seed", type=int, default=7)
    ver.add_argument("--tol", type=float, default=oracle.DEFAULT_TOLERANCE)
    ver.add_argument("--out", default=None)
    ver.set_defaults(handler=_cmd_verify)

    sea = commands.add_parser("search", help="search the smallest excitation number")
    sea.add_argument("--t", type=int, required=True)
    sea.add_argument("--mode", choices=("exact", "inequality"), required=True)
    sea.add_argument("--w-max", type=int, default=60)
    sea.add_argument("--out", default=None)
    sea.set_defaults(handler=_cmd_search)

    tab = commands.add_parser("table", help="tabulate excitation numbers for t = 1..t_max")
    tab.add_argument("--t-max", type=int, required=True)
    tab.add_argument("--mode", choices=("auto", "exact", "inequality"), default="auto")
    tab.add_argument("--exact-max", type=int, default=5, help="largest t searched exactly in auto mode")
    tab.add_argument("--format", choices=("csv", "json"), default="csv")
    tab.add_argument("--out", default=None)
    tab.set_defaults(handler=_cmd_table)

    fid = commands.add_parser("fidelity", help="tabulate the fidelity lower bound")
    fid.add_argument("--n", type=int, required=True, help="total excitation number")
    fid.add_argument("--t", type=int, required=True)
    fid.add_argument("--gamma", action="append", required=True)
    fid.add_argument("--format", choices=("csv", "json"), default="csv")
    fid.add_argument("--out", default=None)
    fid.set_defaults(handler=_cmd_fidelity)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
