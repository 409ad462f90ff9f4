"""Batch command line: ``roughimpute <subcommand> [flags]``.

Exit status is 0 on success, 1 on a data or validation error and 2 on a
usage error.  Files named by ``--out`` (and the other output flags) are
written atomically; without ``--out`` results go to standard output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Sequence

from . import __version__
from .approximations import Method, approximate
from .belongingness import Mode, weighted_equivalence_family, weighted_indiscernibility
from .errors import RoughSetError, UsageError
from .harness import MaskPlan, SynthSpec, evaluate_imputation, format_grid, generate_synthetic
from .imputer import ImputationConfig, Selection, impute
from .partitions import characteristic_set, decision_concepts, equivalence_family, indiscernibility_pairs
from .prep import BUILTIN_RULES, apply_bins, default_bins, dump_bins, filter_invalid, load_bins, rules_by_name
from .table import MISSING_TOKEN, DecisionTable, dump_schema, load_schema, parse_table

THREADS_ENV = "ROUGHIMPUTE_THREADS"
SUBCOMMANDS = ("impute", "eval", "approx", "partitions", "discretize", "filter", "synth")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class Command:
    subcommand: str
    args: argparse.Namespace


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def _csv_list(text: str) -> list[str]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list")
    return items


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in _csv_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _concept(text: str) -> tuple[str, str]:
    attr, sep, value = text.partition("=")
    if not sep or not attr.strip():
        raise argparse.ArgumentTypeError(f"concept must look like attr=value, got {text!r}")
    return attr.strip(), value.strip()


def _fraction(text: str) -> float:
    try:
        f = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 <= f <= 1:
        raise argparse.ArgumentTypeError("fraction must lie in [0, 1]")
    return f


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", default="-", help="CSV table (default: stdin)")
    p.add_argument("--schema", help="JSON schema; without it the last column is the decision")
    p.add_argument("--decision", help="decision column when no schema is given")
    p.add_argument("--missing", default=MISSING_TOKEN, help="missing-value token (default: ?)")


def _add_imputation(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PROBABILISTIC.value)
    p.add_argument("--method", choices=["singleton", "subset"], default=Method.SUBSET.value)
    p.add_argument("--selection", choices=[s.value for s in Selection], default=Selection.MAX_WEIGHT.value)
    p.add_argument("--passes", type=_positive, default=3)
    p.add_argument("--threads", type=_positive, default=None, help=f"worker threads (default: ${THREADS_ENV} or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="roughimpute", description="Rough-set analysis and imputation of incomplete decision tables.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("impute", help="fill missing cells")
    _add_input(p)
    _add_imputation(p)
    p.add_argument("--out", help="completed CSV (default: stdout)")
    p.add_argument("--log", help="imputation log as JSON lines")

    p = sub.add_parser("eval", help="mask known cells, impute and report accuracy")
    _add_input(p)
    _add_imputation(p)
    p.add_argument("--targets", type=_csv_list, help="attributes to mask (default: all conditions)")
    p.add_argument("--fraction", type=_fraction, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=_positive, default=1)
    p.add_argument("--bins", help="bin config; adds a row for the discretised table")
    p.add_argument("--baseline", action="store_true", help="also score column-mode imputation")
    p.add_argument("--out", help="JSON report")

    p = sub.add_parser("approx", help="lower/upper approximations of concepts")
    _add_input(p)
    p.add_argument("--attrs", type=_csv_list, required=True)
    p.add_argument("--concept", type=_concept, action="append", help="attr=value, repeatable (default: every decision concept)")
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.SUBSET.value)
    p.add_argument("--out", help="JSON output (default: stdout)")

    p = sub.add_parser("partitions", help="dump relations, families and characteristic sets")
    _add_input(p)
    p.add_argument("--attrs", type=_csv_list, required=True)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.PROBABILISTIC.value)
    p.add_argument("--max-pairs-rows", type=int, default=200, help="skip pairwise dumps above this row count")
    p.add_argument("--out", help="JSON output (default: stdout)")

    p = sub.add_parser("discretize", help="apply bin specs")
    _add_input(p)
    p.add_argument("--bins", help="bin config (default: shipped survey bins)")
    p.add_argument("--out", help="binned CSV (default: stdout)")
    p.add_argument("--schema-out", help="schema of the binned table")
    p.add_argument("--dump-default-bins", action="store_true", help="print the shipped bin config and exit")

    p = sub.add_parser("filter", help="drop invalid rows")
    _add_input(p)
    p.add_argument("--rule", action="append", choices=sorted(BUILTIN_RULES), required=True)
    p.add_argument("--out", help="surviving rows as CSV (default: stdout)")
    p.add_argument("--report", help="rejected rows and id mapping as JSON")

    p = sub.add_parser("synth", help="generate a seeded synthetic table")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--arity", type=int, default=2)
    p.add_argument("--domains", type=_int_list, default=[4, 4, 4, 4])
    p.add_argument("--p", type=_fraction, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV (default: stdout)")
    p.add_argument("--schema-out", help="schema JSON")
    return parser


def parse_command(argv: Sequence[str]) -> Command:
    args = build_parser().parse_args(list(argv))
    for flag in ("input", "schema", "bins"):
        path = getattr(args, flag, None)
        if path and path != "-" and not os.path.isfile(path):
            raise UsageError(f"--{flag}: no such file: {path}")
    return Command(args.subcommand, args)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        write_atomic(path, text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _load_table(args) -> DecisionTable:
    schema = load_schema(_read(args.schema)) if args.schema else None
    return parse_table(_read(args.input), schema, missing=args.missing, decision=args.decision)


def _config(args) -> ImputationConfig:
    return ImputationConfig(mode=args.mode, method=args.method, selection=args.selection, max_passes=args.passes)


def _threads(args) -> int:
    return args.threads if args.threads is not None else _default_threads()


def _run_impute(args) -> None:
    table = _load_table(args)
    filled, log = impute(table, _config(args), workers=_threads(args))
    _emit(args.out, filled.to_csv(args.missing))
    if args.log:
        write_atomic(args.log, log.to_jsonl())


def _run_eval(args) -> None:
    table = _load_table(args)
    config = _config(args)
    targets = tuple(args.targets) if args.targets else table.conditions
    plan = MaskPlan(targets, args.fraction, args.seed)
    kw = dict(trials=args.trials, workers=_threads(args), baseline=args.baseline)
    reports = [evaluate_imputation(table, plan, config, label="Original", **kw)]
    if args.bins:
        binned = apply_bins(table, load_bins(_read(args.bins)))
        reports.append(evaluate_imputation(binned, plan, config, label="Generalised", **kw))
    sys.stdout.write(format_grid(reports))
    doc = {"reports": [r.to_json() for r in reports]}
    if args.out:
        write_atomic(args.out, _json(doc))


def _concepts(table: DecisionTable, selectors):
    if not selectors:
        return [(table.decision, value, rows) for value, rows in decision_concepts(table)]
    out = []
    for attr, value in selectors:
        rows = frozenset(i for i, v in enumerate(table.column(attr)) if v == value)
        out.append((attr, value, rows))
    return out


def _run_approx(args) -> None:
    table = _load_table(args)
    results = []
    for attr, value, rows in _concepts(table, args.concept):
        doc = approximate(table, args.attrs, rows, args.method).to_json()
        doc["selector"] = {"attribute": attr, "value": value}
        results.append(doc)
    _emit(args.out, _json({"approximations": results}))


def _run_partitions(args) -> None:
    table = _load_table(args)
    attrs = table.check_attributes(args.attrs)
    doc: dict = {
        "attributes": list(attrs),
        "concepts": [{"value": v, "rows": sorted(rows)} for v, rows in decision_concepts(table)],
        "family": [
            {"representative": list(c.representative), "rows": sorted(c.members)}
            for c in equivalence_family(table, attrs).classes
        ],
        "characteristic_sets": {
            str(x): sorted(characteristic_set(table, attrs, x).members) for x in range(len(table))
        },
    }
    small = len(table) <= args.max_pairs_rows
    if small:
        doc["pairs"] = [list(p) for p in sorted(indiscernibility_pairs(table, attrs))]
        doc["weighted_pairs"] = [
            {"pair": list(p), "degree": round(float(d), 6)} for p, d in weighted_indiscernibility(table, attrs, args.mode)
        ]
    if len(attrs) == 1 and attrs[0] != table.decision:
        fam = weighted_equivalence_family(table, attrs[0], args.mode)
        doc["weighted_family"] = [
            {
                "value": c.value,
                "rows": sorted(c.members),
                "weight": round(float(c.weight), 6),
                "member_weights": {str(r): round(float(w), 6) for r, w in c.member_weights},
            }
            for c in fam.classes
        ]
    _emit(args.out, _json(doc))


def _run_discretize(args) -> None:
    if args.dump_default_bins:
        sys.stdout.write(dump_bins(default_bins()) + "\n")
        return
    table = _load_table(args)
    specs = load_bins(_read(args.bins)) if args.bins else default_bins()
    present = set(table.attributes)
    binned = apply_bins(table, [s for s in specs if s.attribute in present] if not args.bins else specs)
    _emit(args.out, binned.to_csv(args.missing))
    if args.schema_out:
        write_atomic(args.schema_out, dump_schema(binned.schema) + "\n")


def _run_filter(args) -> None:
    table = _load_table(args)
    kept, report = filter_invalid(table, rules_by_name(args.rule))
    _emit(args.out, kept.to_csv(args.missing))
    if args.report:
        write_atomic(args.report, _json(report.to_json()))


def _run_synth(args) -> None:
    table = generate_synthetic(SynthSpec(args.rows, args.arity, tuple(args.domains), args.p, args.seed))
    _emit(args.out, table.to_csv())
    if args.schema_out:
        write_atomic(args.schema_out, dump_schema(table.schema) + "\n")


_RUNNERS = {
    "impute": _run_impute,
    "eval": _run_eval,
    "approx": _run_approx,
    "partitions": _run_partitions,
    "discretize": _run_discretize,
    "filter": _run_filter,
    "synth": _run_synth,
}


def execute(cmd: Command) -> int:
    try:
        _RUNNERS[cmd.subcommand](cmd.args)
    except UsageError as exc:
        print(f"roughimpute: usage error: {exc}", file=sys.stderr)
        return 2
    except (RoughSetError, OSError, json.JSONDecodeError) as exc:
        print(f"roughimpute: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cmd = parse_command(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"roughimpute: usage error: {exc}", file=sys.stderr)
        return 2
    return execute(cmd)


if __name__ == "__main__":
    sys.exit(main())
