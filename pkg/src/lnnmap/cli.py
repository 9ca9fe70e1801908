"""Command-line front end: ``route``, ``bench`` and ``gen``.

Exit codes: 0 on success, 1 when a requested verification fails, 2 on bad
input (unreadable file, QASM error, invalid parameter).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .circuit import LogicalProgram
from .errors import LnnmapError
from .generate import KINDS, generate
from .qasm import emit_program, parse_program
from .router import DEFAULT_PAIRS, MetaReport, RoutedCircuit, RouterConfig, route, route_meta
from .verify import check_compliance, check_equivalence_permutation, check_equivalence_unitary

SCHEMA_VERSION = "lnnmap.run/1.0"
CSV_COLUMNS = ("name", "M", "N", "swaps", "cpu_ms", "verified")

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2


@dataclass
class RunRecord:
    name: str
    M: int
    N: int
    config: dict
    swap_count: Optional[int] = None
    cpu_time_ms: Optional[float] = None
    verified: Optional[bool] = None
    meta: Optional[dict] = None
    error: Optional[str] = None
    checks: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"schema": SCHEMA_VERSION, **asdict(self)}


def _config_from_args(args) -> RouterConfig:
    return RouterConfig(
        alpha=args.alpha,
        beta=args.beta,
        tau_regular=args.tau_regular,
        tau_forced=args.tau_forced,
        forced_mode=args.forced,
        direction=args.direction,
        seed=args.seed,
    )


def _config_dict(cfg: RouterConfig, meta: bool) -> dict:
    d = {
        "tau_regular": cfg.tau_regular,
        "tau_forced": cfg.tau_forced,
        "forced": cfg.forced_mode.value,
        "direction": cfg.direction.value,
        "seed": cfg.seed,
    }
    if meta:
        d["meta"] = True
    else:
        d["alpha"], d["beta"] = cfg.alpha, cfg.beta
    return d


def _run_checks(program: LogicalProgram, routed: RoutedCircuit, mode: str) -> dict:
    checks = {"compliant": check_compliance(routed)}
    if mode in ("perm", "both"):
        checks["permutation"] = check_equivalence_permutation(program, routed)
    if mode in ("unitary", "both"):
        checks["unitary"] = check_equivalence_unitary(program, routed)
    return checks


def _route_program(
    name: str,
    program: LogicalProgram,
    cfg: RouterConfig,
    meta: bool,
    verify_mode: Optional[str],
    on_graph=None,
) -> tuple[RoutedCircuit, RunRecord]:
    report: Optional[MetaReport] = None
    t0 = os.times().user
    if meta:
        routed, report = route_meta(
            program,
            seed=cfg.seed,
            forced_mode=cfg.forced_mode,
            direction=cfg.direction,
            tau_regular=cfg.tau_regular,
            tau_forced=cfg.tau_forced,
        )
    else:
        routed = route(program, cfg, on_graph=on_graph)
    cpu_ms = (os.times().user - t0) * 1000.0
    rec = RunRecord(
        name=name,
        M=program.num_qubits,
        N=program.num_cnots,
        config=_config_dict(cfg, meta),
        swap_count=routed.swap_count,
        cpu_time_ms=cpu_ms,
        meta=report.to_dict() if report else None,
    )
    if verify_mode:
        rec.checks = _run_checks(program, routed, verify_mode)
        rec.verified = all(rec.checks.values())
    return routed, rec


def _graph_dumper(directory: Path):
    directory.mkdir(parents=True, exist_ok=True)
    count = [0]

    def dump(stage: int, graph):
        kind = "forced" if stage else "regular"
        path = directory / f"iter{count[0]:05d}_{kind}.csv"
        path.write_text(graph.to_csv())
        count[0] += 1

    return dump


def cmd_route(args) -> int:
    try:
        text = Path(args.input).read_text()
        program = parse_program(text)
        cfg = _config_from_args(args)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (LnnmapError, ValueError) as e:
        print(f"{type(e).__name__}: {args.input}: {e}", file=sys.stderr)
        return EXIT_INPUT

    hook = _graph_dumper(Path(args.dump_weights)) if args.dump_weights else None
    try:
        routed, rec = _route_program(
            Path(args.input).name, program, cfg, args.meta, args.verify, hook
        )
    except LnnmapError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT

    out = emit_program(routed, decompose_swaps=args.decompose_swaps)
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    if args.report:
        Path(args.report).write_text(json.dumps(rec.to_dict(), indent=2) + "\n")
    print(
        f"{rec.name}: M={rec.M} N={rec.N} swaps={rec.swap_count} cpu_ms={rec.cpu_time_ms:.1f}"
        + ("" if rec.verified is None else f" verified={rec.verified}"),
        file=sys.stderr,
    )
    if rec.verified is False:
        failed = ", ".join(k for k, v in rec.checks.items() if not v)
        print(f"verification failed: {failed}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _bench_one(path: str, cfg: RouterConfig, meta: bool, verify_mode: str) -> RunRecord:
    name = Path(path).name
    try:
        program = parse_program(Path(path).read_text())
    except (OSError, LnnmapError) as e:
        return RunRecord(name, 0, 0, _config_dict(cfg, meta), error=f"{type(e).__name__}: {e}")
    try:
        _, rec = _route_program(name, program, cfg, meta, verify_mode)
    except LnnmapError as e:
        return RunRecord(
            name,
            program.num_qubits,
            program.num_cnots,
            _config_dict(cfg, meta),
            error=f"{type(e).__name__}: {e}",
        )
    return rec


def _meta_columns(pairs) -> list[str]:
    return [f"swaps_a{a:g}_b{b:g}" for a, b in pairs]


def bench_csv(records: Sequence[RunRecord], meta: bool) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    extra = _meta_columns(DEFAULT_PAIRS) if meta else []
    writer.writerow(list(CSV_COLUMNS) + extra + ["error"])
    for r in records:
        cpu = "" if r.cpu_time_ms is None else f"{r.cpu_time_ms:.3f}"
        verified = "" if r.verified is None else str(r.verified).lower()
        row = [r.name, r.M, r.N, "" if r.swap_count is None else r.swap_count, cpu, verified]
        if meta:
            counts = [e["swap_count"] for e in r.meta["entries"]] if r.meta else []
            row += counts + [""] * (len(extra) - len(counts))
        writer.writerow(row + [r.error or ""])
    return buf.getvalue()


def cmd_bench(args) -> int:
    directory = Path(args.directory)
    if not directory.is_dir():
        print(f"error: {directory} is not a directory", file=sys.stderr)
        return EXIT_INPUT
    try:
        cfg = _config_from_args(args)
    except LnnmapError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    paths = sorted(str(p) for p in directory.glob("*.qasm"))
    n = len(paths)
    if args.jobs and args.jobs > 1 and n > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            records = list(
                pool.map(_bench_one, paths, [cfg] * n, [args.meta] * n, [args.verify] * n)
            )
    else:
        records = [_bench_one(p, cfg, args.meta, args.verify) for p in paths]

    table = bench_csv(records, args.meta)
    if args.csv:
        Path(args.csv).write_text(table)
    else:
        sys.stdout.write(table)
    ok = [r for r in records if r.error is None]
    summary = {
        "files": len(records),
        "errors": len(records) - len(ok),
        "total_swaps": sum(r.swap_count for r in ok),
        "total_cpu_ms": sum(r.cpu_time_ms for r in ok),
        "all_verified": all(r.verified for r in ok),
    }
    if args.json:
        doc = {"schema": SCHEMA_VERSION, "records": [r.to_dict() for r in records], "summary": summary}
        Path(args.json).write_text(json.dumps(doc, indent=2) + "\n")
    print(
        f"files={summary['files']} errors={summary['errors']} "
        f"total_swaps={summary['total_swaps']} total_cpu_ms={summary['total_cpu_ms']:.1f}",
        file=sys.stderr,
    )
    if not summary["all_verified"]:
        return EXIT_VERIFY
    return EXIT_INPUT if summary["errors"] else EXIT_OK


def cmd_gen(args) -> int:
    try:
        program = generate(
            args.kind,
            args.qubits,
            args.cnots,
            seed=args.seed,
            one_qubit_rate=args.one_qubit_rate,
            relabel=not args.no_relabel,
            measure=args.measure,
        )
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    text = emit_program(program)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _add_router_flags(p: argparse.ArgumentParser):
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=0.6)
    p.add_argument("--tau-regular", type=int, default=None, help="default: number of qubits")
    p.add_argument("--tau-forced", type=int, default=None, help="default: 4 x number of qubits")
    p.add_argument("--direction", choices=("forward", "bidi"), default="forward")
    p.add_argument("--forced", choices=("standalone", "fallback"), default="fallback")
    p.add_argument("--meta", action="store_true", help="try every preset (alpha, beta), keep the best")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lnnmap", description="Route circuits onto a qubit line.")
    sub = parser.add_subparsers(dest="command", required=True)

    r = sub.add_parser("route", help="route one OpenQASM file")
    r.add_argument("input")
    r.add_argument("-o", "--output", help="write routed QASM here instead of stdout")
    _add_router_flags(r)
    r.add_argument("--decompose-swaps", action="store_true")
    r.add_argument("--verify", choices=("perm", "unitary", "both"))
    r.add_argument("--report", metavar="PATH.json")
    r.add_argument("--dump-weights", metavar="DIR", help="write each interaction graph as CSV")
    r.set_defaults(func=cmd_route)

    b = sub.add_parser("bench", help="route every .qasm file in a directory")
    b.add_argument("directory")
    _add_router_flags(b)
    b.add_argument("--verify", choices=("perm", "unitary", "both"), default="perm")
    b.add_argument("--csv", metavar="PATH")
    b.add_argument("--json", metavar="PATH")
    b.add_argument("-j", "--jobs", type=int, default=1)
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("gen", help="write a synthetic benchmark circuit")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("-M", "--qubits", type=int, required=True)
    g.add_argument("-N", "--cnots", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--one-qubit-rate", type=float, default=0.0)
    g.add_argument("--measure", action="store_true")
    g.add_argument("--no-relabel", action="store_true")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
