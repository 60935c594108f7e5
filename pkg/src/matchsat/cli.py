"""Command-line entry point: ``matchsat <command> ...``.

Exit codes: 0 success/agreement, 10 SAT, 20 UNSAT, 30 discrepancy or golden
mismatch, 40 solver budget exhausted, 1 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .certifier import DecodeError, decode, verify
from .corpus import FLAG_SWEEP, CorpusSpec, run_corpus, write_report
from .encoder import EncodeFlags, encode, to_dimacs
from .graph import GraphError, InstanceError, read_graph, validate_instance
from .oracle import OracleTooLarge, max_matching
from .solver import Status, analyze_structure, solve

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_DISCREPANCY = 30
EXIT_BUDGET = 40


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _flags(args) -> EncodeFlags:
    return EncodeFlags(embed_bfc=args.embed_bfc,
                       tighten_ranges=args.tighten_ranges,
                       include_redundant=not args.no_redundant)


def _load(args, k=None):
    g = read_graph(args.graph, require_connected=not args.allow_disconnected)
    if k is None:
        return g
    return validate_instance(g, k, require_connected=not args.allow_disconnected)


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print("\n".join(text_lines))


def cmd_encode(args) -> int:
    inst = _load(args, args.k)
    sys.stdout.write(to_dimacs(encode(inst, _flags(args))))
    return EXIT_OK


def _solve_report(inst, flags, budget):
    cnf = encode(inst, flags)
    r = solve(cnf, budget=budget)
    report = {"k": inst.k, "m": inst.graph.m, "status": r.status.value,
              "flags": flags.label(),
              "stats": {"decisions": r.stats.decisions,
                        "propagations": r.stats.propagations,
                        "conflicts": r.stats.conflicts}}
    if r.sat:
        cert = decode(cnf, r.assignment)
        report["matched"] = sorted(cert.matched)
        report["index"] = list(cert.index_table)
        report["violations"] = verify(cert, inst.graph)
    return r, report


def cmd_solve(args) -> int:
    inst = _load(args, args.k)
    r, report = _solve_report(inst, _flags(args), args.budget)
    if args.timing:
        report["stats"]["seconds"] = round(r.stats.seconds, 6)
    lines = [r.status.value]
    if r.sat:
        lines.append("matched: " + " ".join(map(str, report["matched"])))
        lines.append("index: " + " ".join(map(str, report["index"])))
        for v in report["violations"]:
            lines.append(f"violation: {v}")
    elif r.status is Status.BUDGET_EXHAUSTED:
        lines.append(f"budget of {args.budget} steps exhausted; no verdict")
    if args.timing:
        lines.append(f"seconds: {r.stats.seconds:.6f}")
    _emit(args, report, lines)
    if r.sat:
        return EXIT_DISCREPANCY if report["violations"] else EXIT_SAT
    if r.status is Status.UNSAT:
        return EXIT_UNSAT
    return EXIT_BUDGET


def cmd_sweep(args) -> int:
    g = _load(args)
    flags = _flags(args)
    rows = []
    best = None
    budget_hit = False
    for k in range(2, g.m + 1):
        r, _ = _solve_report(validate_instance(
            g, k, require_connected=not args.allow_disconnected), flags,
            args.budget)
        rows.append({"k": k, "status": r.status.value})
        if r.sat:
            best = k
        budget_hit |= r.status is Status.BUDGET_EXHAUSTED
    payload = {"m": g.m, "rows": rows, "max_sat_k": best}
    lines = [f"K={row['k']} {row['status']}" for row in rows]
    lines.append(f"max SAT K: {best if best is not None else 'none'}")
    code = EXIT_BUDGET if budget_hit else EXIT_OK
    if args.check:
        oracle = max_matching(g).max_size
        expect = oracle if oracle >= 2 else None
        agree = expect == best
        payload["oracle_max"] = oracle
        payload["agree"] = agree
        lines.append(f"oracle max matching: {oracle} "
                     f"({'agree' if agree else 'DISAGREE'})")
        if not agree:
            code = EXIT_DISCREPANCY
    _emit(args, payload, lines)
    return code


def _parse_k_range(text: str):
    if text == "all":
        return "all"
    try:
        ks = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--k-range must be 'all' or a comma list, got {text!r}")
    if any(k < 2 for k in ks):
        raise UsageError("--k-range values must be >= 2")
    return ks


def cmd_corpus(args) -> int:
    if args.flag_sweep:
        variants = tuple(EncodeFlags(f.embed_bfc, f.tighten_ranges,
                                     not args.no_redundant) for f in FLAG_SWEEP)
    else:
        variants = (_flags(args),)
    spec = CorpusSpec(max_n=args.max_n, k_range=_parse_k_range(args.k_range),
                      flag_variants=variants,
                      orderings_max_n=args.orderings_max_n,
                      budget=args.budget)
    progress = None
    if args.progress:
        def progress(done, total):
            print(f"\r{done}/{total} chunks", end="", file=sys.stderr,
                  flush=True)
    summary = run_corpus(spec, workers=args.workers, progress=progress)
    if args.progress:
        print(file=sys.stderr)
    payload = summary.to_dict(timing=args.timing)
    if args.report:
        write_report(summary, args.report, timing=args.timing)
    lines = [f"graphs: {summary.graphs}",
             f"instances: {summary.instances}",
             f"agree-SAT: {summary.agree_sat}",
             f"agree-UNSAT: {summary.agree_unsat}",
             f"disagree: {summary.disagree}",
             f"budget-exhausted: {summary.budget_exhausted}",
             f"decided by propagation alone: {summary.decided_by_propagation}",
             f"certificates checked: {summary.certificates_checked}",
             f"certificate failures: {len(summary.certificate_failures)}",
             f"flag differences: {len(summary.flag_differences)}",
             f"ordering differences: {len(summary.ordering_differences)}"]
    for d in summary.discrepancies:
        lines.append(f"discrepancy: K={d.instance.k} {d.flags.label()} "
                     f"solver={d.sat_answer} oracle={d.oracle_answer} "
                     f"edges={list(d.instance.graph.edges)}")
        if d.shrunk is not None:
            lines.append(f"  shrunk: n={d.shrunk.graph.n} "
                         f"edges={list(d.shrunk.graph.edges)} K={d.shrunk.k}")
    for msg in (summary.certificate_failures + summary.flag_differences
                + summary.ordering_differences):
        lines.append(msg)
    if args.timing:
        lines.append(f"seconds: {summary.seconds:.1f}")
    _emit(args, payload, lines)
    return EXIT_OK if summary.clean else EXIT_DISCREPANCY


def stats_payload(inst, flags) -> dict:
    cnf = encode(inst, flags)
    vm = cnf.varmap
    rep = analyze_structure(cnf)
    return {"n": inst.graph.n, "m": vm.m, "k": vm.k, "flags": flags.label(),
            "total_vars": vm.total_vars, "f_vars": vm.num_f_vars,
            "l_vars": vm.num_l_vars, "clauses": len(cnf.clauses),
            "family_counts": dict(cnf.family_counts),
            "structure": rep.to_dict()}


GOLDEN_KEYS = ("total_vars", "f_vars", "l_vars", "clauses", "family_counts")


def cmd_stats(args) -> int:
    inst = _load(args, args.k)
    payload = stats_payload(inst, _flags(args))
    st = payload["structure"]
    except_ = st["all_have_negative_except"]
    lines = [f"vars: {payload['total_vars']} "
             f"(F={payload['f_vars']}, L={payload['l_vars']})",
             f"clauses: {payload['clauses']}"]
    lines += [f"family {f} count={c}" for f, c in payload["family_counts"].items()]
    lines.append("clauses with >=1 negative literal: " +
                 (f"all except {', '.join(except_)}" if except_ else "all"))
    lines.append(f"max clause width: {st['max_width']}")
    lines.append(f"horn: {'yes' if st['is_horn'] else 'no'}")
    code = EXIT_OK
    if args.golden:
        with open(args.golden, encoding="utf-8") as fh:
            golden = json.load(fh)
        diffs = [k for k in GOLDEN_KEYS if k in golden and golden[k] != payload[k]]
        payload["golden_mismatch"] = diffs
        if diffs:
            lines.append(f"golden mismatch: {', '.join(diffs)}")
            code = EXIT_DISCREPANCY
        else:
            lines.append("golden: match")
    _emit(args, payload, lines)
    return code


def cmd_oracle(args) -> int:
    g = _load(args)
    res = max_matching(g, limit=args.limit)
    payload = {"max_size": res.max_size, "witness": sorted(res.witness)}
    lines = [f"max matching: {res.max_size}",
             "witness: " + " ".join(map(str, sorted(res.witness)))]
    code = EXIT_OK
    if args.k is not None:
        ok = res.max_size >= args.k
        payload["k"] = args.k
        payload["decision"] = ok
        lines.append(f"K={args.k}: {'yes' if ok else 'no'}")
    _emit(args, payload, lines)
    return code


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="matchsat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, need_k=False, graph=True):
        if graph:
            sp.add_argument("graph", help="edge-list graph file")
        if need_k:
            sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--embed-bfc", action="store_true")
        sp.add_argument("--tighten-ranges", action="store_true")
        sp.add_argument("--no-redundant", action="store_true")
        sp.add_argument("--json", action="store_true")
        sp.add_argument("--budget", type=int, default=None,
                        help="max solver steps (decisions + propagations)")
        sp.add_argument("--timing", action="store_true")
        sp.add_argument("--allow-disconnected", action="store_true",
                        help="warn instead of failing on disconnected graphs")

    common(sub.add_parser("encode", help="print DIMACS CNF"), need_k=True)
    common(sub.add_parser("solve", help="decide and print a certificate"),
           need_k=True)
    sp = sub.add_parser("sweep", help="answers for every K in 2..m")
    common(sp)
    sp.add_argument("--check", action="store_true",
                    help="compare the largest SAT K with the oracle")
    sp = sub.add_parser("corpus", help="exhaustive run against the oracle")
    common(sp, graph=False)
    sp.add_argument("--max-n", type=int, default=6)
    sp.add_argument("--k-range", default="all")
    sp.add_argument("--flag-sweep", action="store_true",
                    help="run all embed-bfc x tighten-ranges combinations")
    sp.add_argument("--orderings-max-n", type=int, default=0,
                    help="also try every edge order for graphs with n <= this")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--report", help="write the JSON report to this file")
    sp.add_argument("--progress", action="store_true")
    sp = sub.add_parser("stats", help="clause counts and structure")
    common(sp, need_k=True)
    sp.add_argument("--golden", help="expected-counts JSON to compare with")
    sp = sub.add_parser("oracle", help="exhaustive maximum matching")
    common(sp)
    sp.set_defaults(k=None)
    sp.add_argument("--k", type=int)
    sp.add_argument("--limit", type=int, default=22)
    return p


COMMANDS = {"encode": cmd_encode, "solve": cmd_solve, "sweep": cmd_sweep,
            "corpus": cmd_corpus, "stats": cmd_stats, "oracle": cmd_oracle}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (GraphError, InstanceError, UsageError, OracleTooLarge,
            DecodeError, OSError) as exc:
        print(f"matchsat {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
