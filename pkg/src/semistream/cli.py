"""Command-line entry point: ``semistream {gen,run,audit,bench}``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .algorithms import ALGORITHMS, get_algorithm
from .analysis_audit import AuditReport, audit_run, is_triangle_free
from .exact_matching import max_matching_edges
from .generators import FAMILIES, FamilySpec, generate
from .stream_engine import ORDER_POLICIES, RunResult, load_instance, make_order, run_multi_pass
from .stream_engine import format_instance

INSTANCE_SUFFIXES = (".el", ".txt", ".edges")


class CliError(Exception):
    pass


def ratio_of(output: int, opt: int) -> Fraction:
    # an empty optimum is matched perfectly by the empty output
    return Fraction(output, opt) if opt else Fraction(1)


def _fmt_ratio(r: Fraction) -> str:
    return f"{r.numerator}/{r.denominator}"


def _execute(args: argparse.Namespace) -> RunResult:
    algo_cls = get_algorithm(args.algo)
    try:
        instance = load_instance(args.input)
    except OSError as exc:
        raise CliError(f"cannot read {args.input}: {exc.strerror or exc}") from None
    if args.strict_tf and args.algo == "wing-tf" and not is_triangle_free(instance.n, instance.edges):
        raise CliError(f"{args.input} contains a triangle; wing-tf needs a triangle-free input")
    order = make_order(len(instance.edges), args.order, args.seed)
    return run_multi_pass(algo_cls, instance, order)


def build_report(run: RunResult, opt: int | None = None,
                 audit: AuditReport | None = None) -> dict[str, Any]:
    report: dict[str, Any] = {
        "instance": run.instance.name,
        "n": run.instance.n,
        "m": len(run.instance.edges),
        "algo": run.algo,
        "order": run.order.policy,
        "seed": run.order.seed,
        "passes": run.passes_used,
        "output_size": run.output_size,
    }
    if opt is not None:
        r = ratio_of(run.output_size, opt)
        report["opt_size"] = opt
        report["ratio"] = {"num": r.numerator, "den": r.denominator, "value": float(r)}
    report["memory"] = run.meter.to_dict()
    if audit is not None:
        report["audit"] = audit.to_list()
        report["audit_passed"] = audit.passed
    return report


def _write_json(path: str, report: dict[str, Any]) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_gen(args: argparse.Namespace) -> int:
    params: dict[str, Any] = {}
    for key in ("n", "n1", "n2", "k", "max_piece"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    if args.p is not None:
        params["p"] = args.p
    if args.kind is not None:
        params["kind"] = args.kind
    spec = FamilySpec(args.family, params, args.seed)
    instance = generate(spec)
    text = format_instance(instance, comment=f"family={args.family} params={params} seed={args.seed}")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}: n={instance.n} m={len(instance.edges)}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    run = _execute(args)
    opt = len(max_matching_edges(run.instance.n, run.instance.edges)) if args.opt else None
    line = f"output={run.output_size}"
    if opt is not None:
        line += f" opt={opt} ratio={_fmt_ratio(ratio_of(run.output_size, opt))}"
    print(line)
    mem = run.meter.to_dict()
    print(f"memory peak_edges={mem['peak_edges']} per_pass={mem['per_pass']}")
    if args.json:
        _write_json(args.json, build_report(run, opt))
    return 0


def cmd_audit(args: argparse.Namespace) -> int:
    run = _execute(args)
    mstar = max_matching_edges(run.instance.n, run.instance.edges)
    report = audit_run(run, mstar)
    opt = len(mstar)
    print(f"output={run.output_size} opt={opt} ratio={_fmt_ratio(ratio_of(run.output_size, opt))}")
    for rec in report.records:
        print(rec)
    fails = report.failures()
    print(f"{len(report.records) - len(fails)}/{len(report.records)} inequalities hold")
    if args.json:
        _write_json(args.json, build_report(run, opt, report))
    return 1 if fails else 0


def _corpus(directory: str) -> list[Path]:
    root = Path(directory)
    if not root.is_dir():
        raise CliError(f"{directory} is not a directory")
    files = sorted(p for p in root.iterdir() if p.suffix in INSTANCE_SUFFIXES)
    if not files:
        raise CliError(f"no instance files ({', '.join(INSTANCE_SUFFIXES)}) in {directory}")
    return files


def cmd_bench(args: argparse.Namespace) -> int:
    files = _corpus(args.dir)
    algos = args.algo or list(ALGORITHMS)
    for name in algos:
        get_algorithm(name)
    instances = []
    for f in files:
        try:
            inst = load_instance(f)
        except OSError as exc:
            raise CliError(f"cannot read {f}: {exc.strerror or exc}") from None
        instances.append((inst, len(max_matching_edges(inst.n, inst.edges))))
    rows = []
    for name in algos:
        ratios: list[Fraction] = []
        peak = 0
        for i, (inst, opt) in enumerate(instances):
            order = make_order(len(inst.edges), args.order, args.seed + i)
            run = run_multi_pass(get_algorithm(name), inst, order)
            ratios.append(ratio_of(run.output_size, opt))
            peak = max(peak, run.meter.peak)
        mean = sum(ratios, Fraction(0)) / len(ratios)
        rows.append({"algo": name, "instances": len(ratios),
                     "min_ratio": _fmt_ratio(min(ratios)),
                     "mean_ratio": f"{float(mean):.6f}",
                     "max_peak_edges": peak})
    out = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algo", required=True, help=f"one of {', '.join(ALGORITHMS)}")
    p.add_argument("--input", required=True, help="edge-list instance file")
    p.add_argument("--order", choices=ORDER_POLICIES, default="file")
    p.add_argument("--seed", type=int, default=0, help="seed for --order random")
    p.add_argument("--json", metavar="OUT", help="write a JSON report ('-' for stdout)")
    p.add_argument("--strict-tf", action="store_true",
                   help="reject wing-tf inputs that contain a triangle")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semistream",
                                     description="Multi-pass streaming matching workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--n", type=int)
    g.add_argument("--n1", type=int)
    g.add_argument("--n2", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--p", type=float)
    g.add_argument("--kind", choices=("mixed", "bipartite", "circulant"))
    g.add_argument("--max-piece", dest="max_piece", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="output path (default: stdout)")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run one algorithm on one instance")
    _add_run_flags(r)
    r.add_argument("--opt", action="store_true", help="also compute the exact optimum")
    r.set_defaults(func=cmd_run)

    a = sub.add_parser("audit", help="run and verify every analysis inequality")
    _add_run_flags(a)
    a.set_defaults(func=cmd_audit)

    b = sub.add_parser("bench", help="aggregate ratios and memory over a corpus")
    b.add_argument("--dir", required=True)
    b.add_argument("--algo", action="append", help="restrict to this algorithm (repeatable)")
    b.add_argument("--order", choices=ORDER_POLICIES, default="file")
    b.add_argument("--seed", type=int, default=0, help="base seed; file i uses seed+i")
    b.add_argument("--csv", help="write the summary here (default: stdout)")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
