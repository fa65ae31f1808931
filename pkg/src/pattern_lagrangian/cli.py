"""Command line interface: ``pattern-lagrangian <command> ...``.

Exit codes: 0 success, 1 bad input or usage, 2 the optimizer did not reach a
trustworthy answer, 3 a certificate or catalog check failed.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import report
from .catalog import ENTRY_NAMES, family_pattern, get_entry, verify_entry
from .frankl_rodl import certify_nonjump, fr_construct
from .optimizer import OptConfig, lagrangian
from .pattern import (
    Pattern,
    PatternError,
    blowup,
    edge_string,
    parse_pattern,
    serialize_pattern,
    simple_blowup,
    simple_blowup_edge_count,
)
from .search import SearchSpec, run_search
from .symmetry import equivalence_classes

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPUTE = 2
EXIT_CONDITION = 3

SEED_ENV = "PATTERN_LAGRANGIAN_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _global_flags(parser: argparse.ArgumentParser) -> None:
    # SUPPRESS keeps a flag given before the subcommand from being
    # overwritten by the subparser's default
    g = parser.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=f"RNG seed (default ${SEED_ENV} or 0)")
    g.add_argument("--restarts", type=int, default=argparse.SUPPRESS, help="random restarts (default 200)")
    g.add_argument("--exact", action="store_true", default=argparse.SUPPRESS, help="rational certification")
    g.add_argument("--json", nargs="?", const="-", default=argparse.SUPPRESS, metavar="PATH",
                   help="emit JSON to PATH, or stdout when PATH is omitted")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pattern-lagrangian", description="Lagrangians and non-jump certificates for 3-patterns.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    _global_flags(parser)
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("lagrangian", help="maximize the blowup polynomial over the simplex")
    p.add_argument("file")
    p.add_argument("--show-symmetry", action="store_true", help="print the vertex equivalence classes")
    _global_flags(p)

    p = sub.add_parser("fr", help="build FR_v(P)")
    p.add_argument("file")
    p.add_argument("--vertex", type=int, required=True)
    p.add_argument("-o", "--output", help="write the pattern here instead of stdout")
    _global_flags(p)

    p = sub.add_parser("certify", help="check the non-jump condition at a pivot")
    p.add_argument("file")
    p.add_argument("--vertex", type=int, required=True)
    _global_flags(p)

    p = sub.add_parser("catalog", help="built-in patterns with known Lagrangians")
    p.add_argument("--list", action="store_true")
    p.add_argument("--entry", help="lemma44, thm16 or family:<n>")
    p.add_argument("--emit", metavar="PATH", help="write the entry's pattern file")
    p.add_argument("--verify", action="store_true", help="recompute and check the expected values")
    p.add_argument("--strict-paper-edges", action="store_true",
                   help="for family:<n>, also show the variant without the 11i edges")
    _global_flags(p)

    p = sub.add_parser("search", help="certify every extension of the core pattern")
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--max-extra-edges", type=int)
    p.add_argument("--window", help="keep densities in lo,hi")
    p.add_argument("--jobs", type=int, default=1)
    _global_flags(p)

    p = sub.add_parser("blowup", help="blowup and simple blowup")
    p.add_argument("file")
    p.add_argument("--t", required=True, help="comma separated copy counts")
    p.add_argument("--simple", action="store_true")
    p.add_argument("--count-only", action="store_true")
    _global_flags(p)
    return parser


def _config(args, exact_default: bool = False) -> OptConfig:
    seed = getattr(args, "seed", None)
    if seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    kwargs = {"seed": seed, "exact_mode": getattr(args, "exact", False) or exact_default}
    if getattr(args, "restarts", None) is not None:
        kwargs["restarts"] = args.restarts
    try:
        return OptConfig(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read_pattern(path: str) -> Pattern:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_pattern(text)


def _emit_json(args, payload: dict, out) -> None:
    text = report.dumps(payload)
    if args.json == "-":
        out.write(text)
    else:
        Path(args.json).write_text(text, encoding="utf-8")


def _wants_json(args) -> bool:
    return getattr(args, "json", None) is not None


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be comma separated integers, got {text!r}") from None


def cmd_lagrangian(args, out) -> int:
    P = _read_pattern(args.file)
    rec = lagrangian(P, _config(args))
    part = equivalence_classes(P) if args.show_symmetry else None
    if _wants_json(args):
        _emit_json(args, report.lagrangian_payload(P, rec, part), out)
    if not _wants_json(args) or args.json != "-":
        print(f"pattern: {edge_string(P)}", file=out)
        print(f"lambda: {report.fmt_float(rec.value)}", file=out)
        if rec.certified is not None:
            print(f"certified: {report.fmt_fraction(rec.certified.value)}", file=out)
        print("witness: " + " ".join(f"{w:.12g}" for w in rec.witness), file=out)
        print("support: " + " ".join(map(str, rec.support)), file=out)
        print(f"kkt_residual: {rec.kkt_residual:.3g}", file=out)
        print(f"restarts_agreeing: {rec.restarts_agreeing}", file=out)
        if part is not None:
            print(f"equivalence classes: {part}", file=out)
        if not rec.converged:
            print("warning: optimizer did not converge", file=out)
        if not rec.consistent:
            print("warning: full and symmetry-reduced optima disagree", file=out)
    return EXIT_OK if rec.converged and rec.consistent else EXIT_COMPUTE


def cmd_fr(args, out) -> int:
    P = _read_pattern(args.file)
    fr = fr_construct(P, args.vertex)
    labels = ", ".join(f"({v},{c})={i}" for i, (v, c) in enumerate(fr.label_map, start=1))
    text = serialize_pattern(fr.pattern, comments=(f"FR_{args.vertex} of {edge_string(P)}", f"labels {labels}"))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def _certificate_lines(cert) -> list[str]:
    flags = [
        ("structural condition", cert.structural_condition),
        ("pivot weight positive", cert.pivot_weight_positive),
        ("λ(P) < 1", cert.lambda_below_one),
        ("density < 1", cert.density_below_one),
        ("λ(FR) = λ(P)", cert.equality),
    ]
    lp, lf = cert.lambda_P, cert.lambda_FR
    lines = [
        f"pattern: {edge_string(cert.source)}  pivot {cert.pivot}",
        f"FR pattern: {edge_string(cert.fr.pattern)}",
        f"λ(P) = {report.fmt_float(lp.value)}" + (f" = {lp.certified.value}" if lp.certified else ""),
        f"λ(FR) = {report.fmt_float(lf.value)}" + (f" = {lf.certified.value}" if lf.certified else ""),
        f"gap: {cert.gap:.3g}",
    ]
    lines += [f"{name}: {'PASS' if ok else 'FAIL'}" for name, ok in flags]
    density = cert.exact_claimed_density if cert.exact_claimed_density is not None else report.fmt_float(cert.claimed_density)
    lines.append(f"claimed density: {density}")
    lines.append(f"status: {cert.status}")
    return lines


def cmd_certify(args, out) -> int:
    P = _read_pattern(args.file)
    cert = certify_nonjump(P, args.vertex, _config(args))
    if _wants_json(args):
        _emit_json(args, report.certificate_payload(cert), out)
    if not _wants_json(args) or args.json != "-":
        for line in _certificate_lines(cert):
            print(line, file=out)
    if not all(r.converged and r.consistent for r in (cert.lambda_P, cert.lambda_FR)):
        return EXIT_COMPUTE
    return EXIT_OK if cert.passed else EXIT_CONDITION


def cmd_catalog(args, out) -> int:
    if args.list:
        for name in ENTRY_NAMES:
            print(name, file=out)
        if not args.entry:
            return EXIT_OK
    if not args.entry:
        raise UsageError("catalog needs --list or --entry")
    try:
        entries = [get_entry(args.entry)]
    except KeyError:
        raise UsageError(f"unknown catalog entry {args.entry!r}; choose from {', '.join(ENTRY_NAMES)}") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.strict_paper_edges:
        if not args.entry.startswith("family:"):
            raise UsageError("--strict-paper-edges only applies to family:<n>")
        entries.append(family_pattern(int(args.entry.split(":")[1]), strict_paper_edges=True))

    if args.emit:
        path = Path(args.emit)
        for i, entry in enumerate(entries):
            target = path if i == 0 else path.with_name(path.stem + ".strict" + path.suffix)
            target.write_text(serialize_pattern(entry.pattern, comments=(entry.name, entry.description)),
                              encoding="utf-8")

    reports = None
    if args.verify:
        cfg = _config(args, exact_default=True)
        reports = [verify_entry(e, cfg) for e in entries]

    if _wants_json(args):
        _emit_json(args, report.catalog_payload(entries, reports), out)
    if not _wants_json(args) or args.json != "-":
        for i, entry in enumerate(entries):
            print(f"{entry.name}: {edge_string(entry.pattern)}", file=out)
            print(f"  {entry.description}", file=out)
            lam = entry.exact_lambda if entry.exact_lambda is not None else report.fmt_float(entry.expected_lambda)
            print(f"  expected λ = {lam}, density {report.fmt_float(entry.expected_density)}", file=out)
            if reports is not None:
                for check in reports[i].checks:
                    print("  " + check.line(), file=out)
    if reports is None:
        return EXIT_OK
    # only the primary entry decides the exit code; the strict variant is informational
    return EXIT_OK if reports[0].passed else EXIT_CONDITION


def _search_table(result) -> list[str]:
    lines = [f"{'pattern':<40} {'density':<20} {'rational':<10} {'gap':<10} {'status':<16} count"]
    for row in result.rows:
        rational = report.fmt_fraction(row.exact_density) or "-"
        lines.append(f"{edge_string(row.pattern):<40} {report.fmt_float(row.density):<20} {rational:<10} "
                     f"{row.gap:<10.3g} {row.status:<16} {row.patterns_with_density}")
    lines.append(f"{result.candidates} candidates, {result.kept} kept, {len(result.rows)} distinct densities, "
                 f"{len(result.flagged)} flagged")
    return lines


def cmd_search(args, out) -> int:
    window = None
    if args.window:
        try:
            lo, hi = (float(s) for s in args.window.split(","))
        except ValueError:
            raise UsageError(f"--window must be lo,hi, got {args.window!r}") from None
        window = (lo, hi)
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    try:
        spec = SearchSpec(n=args.vertices, max_extra_edges=args.max_extra_edges, lambda_window=window,
                          cfg=_config(args, exact_default=True))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    result = run_search(spec, jobs=args.jobs)
    if _wants_json(args):
        _emit_json(args, report.search_payload(args.vertices, args.max_extra_edges, result), out)
    if not _wants_json(args) or args.json != "-":
        for line in _search_table(result):
            print(line, file=out)
    return EXIT_OK


def cmd_blowup(args, out) -> int:
    P = _read_pattern(args.file)
    t = _int_list(args.t, "--t")
    if args.count_only and args.simple:
        count, res = simple_blowup_edge_count(P, t), None
    else:
        res = simple_blowup(P, t) if args.simple else blowup(P, t)
        count = len(res.pattern.edges)
    if _wants_json(args):
        _emit_json(args, report.blowup_payload(P, t, args.simple, count, None if args.count_only else res), out)
        if args.json == "-":
            return EXIT_OK
    if args.count_only:
        print(count, file=out)
    else:
        labels = ", ".join(f"({v},{c})={i}" for i, (v, c) in enumerate(res.label_map, start=1))
        kind = "simple blowup" if args.simple else "blowup"
        out.write(serialize_pattern(res.pattern, comments=(f"{kind} of {edge_string(P)} with t = {args.t}",
                                                          f"labels {labels}")))
    return EXIT_OK


COMMANDS = {
    "lagrangian": cmd_lagrangian,
    "fr": cmd_fr,
    "certify": cmd_certify,
    "catalog": cmd_catalog,
    "search": cmd_search,
    "blowup": cmd_blowup,
}


def _bare_json(argv: list[str]) -> list[str]:
    # a bare --json in front of the subcommand would otherwise take its name as PATH
    return ["--json=-" if a == "--json" and i + 1 < len(argv) and argv[i + 1] in COMMANDS else a
            for i, a in enumerate(argv)]


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    argv = _bare_json(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except PatternError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
