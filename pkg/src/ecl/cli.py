"""Command-line front end.

Every command prints a report whose last line is machine-readable: a verdict
token, a formula, or ``PASS k/n``. Exit codes: 0/1/2 for VALID/UNSAT/CONTINGENT
on single-sentence ``decide``; 64 for unreadable or malformed input; 65 when a
resource cap is hit; 70 on an internal invariant violation.
"""

from __future__ import annotations

import argparse
import random
import sys
from typing import Sequence

from .decide import decide, decide_with_diagram, naive_universal_check
from .errors import EclError, InvariantViolation, ParseError, ResourceLimitError, SignatureError
from .harness import SUITES
from .interp import (
    binary_reduction,
    obligations,
    parse_translation,
    print_translation,
    translate,
)
from .qe import Caps, StepInfo, eliminate
from .structures import diagram, eval_formula, parse_structure, print_structure
from .syntax import Signature, parse_formulas, print_formula
from .trep import (
    STYLES,
    parse_tables,
    print_tables,
    r_axioms,
    r_fragment_model,
    r_signature,
    random_tables,
    table_structure,
    trep_axioms,
)

EXIT_PARSE = 64
EXIT_CAP = 65
EXIT_INVARIANT = 70


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _sig(path: str | None) -> Signature:
    return Signature.parse(_read(path)) if path else Signature()


def _caps(args) -> Caps:
    for name in ("max_theta", "max_partitions"):
        if getattr(args, name) <= 0:
            raise ValueError(f"--{name.replace('_', '-')} must be positive")
    return Caps(max_theta=args.max_theta, max_partitions=args.max_partitions)


def _formulas(args, sig: Signature) -> list:
    if not args.formula:
        raise ParseError("--formula is required", 0)
    fs = parse_formulas(_read(args.formula), sig)
    if not fs:
        raise ParseError("no formula found", 0)
    return fs


def _tracer(args, out):
    if not args.verbose:
        return None

    def trace(info: StepInfo) -> None:
        out(
            f"; eliminate {info.var}: |Theta|={info.theta_size} "
            f"decompositions={info.decompositions} xi_sizes={list(info.xi_sizes)}"
        )

    return trace


def cmd_qe(args, out) -> int:
    sig = _sig(args.sig)
    for f in _formulas(args, sig):
        out(print_formula(eliminate(f, _caps(args), _tracer(args, out))))
    return 0


def cmd_decide(args, out) -> int:
    sig = _sig(args.sig)
    fs = _formulas(args, sig)
    code = 0
    for f in fs:
        res = decide(f, sig, _caps(args), _tracer(args, out))
        if args.verbose:
            out(f"; qf image: {print_formula(res.qf_equivalent)}")
        out(res.token)
        code = res.verdict.exit_code
    return code if len(fs) == 1 else 0


def cmd_decide_diag(args, out) -> int:
    if not args.structure:
        raise ParseError("--structure is required", 0)
    sig = _sig(args.sig)
    M = parse_structure(_read(args.structure), sig if args.sig else None)
    exp, _ = diagram(M)
    fs = _formulas(args, exp)
    code = 0
    for f in fs:
        res = decide_with_diagram(M, f, caps=_caps(args), trace=_tracer(args, out))
        out(res.token)
        code = res.verdict.exit_code
    return code if len(fs) == 1 else 0


def _translation(args):
    if not args.translation:
        raise ParseError("--translation is required", 0)
    src, tgt = _sig(args.sig), _sig(args.target_sig)
    return parse_translation(_read(args.translation), src, tgt)


def cmd_translate(args, out) -> int:
    I = _translation(args)
    for f in _formulas(args, I.source):
        out(print_formula(translate(I, f)))
    return 0


def cmd_check_interp(args, out) -> int:
    I = _translation(args)
    axioms = parse_formulas(_read(args.formula), I.source) if args.formula else []
    theory = parse_formulas(_read(args.theory), I.target) if args.theory else []
    M = parse_structure(_read(args.structure), I.target) if args.structure else None
    report = obligations(I, axioms, theory, structure=M, caps=_caps(args))
    for o in report:
        out(f"{o.label} {o.status}")
        if args.verbose:
            out(f";   {print_formula(o.formula)}")
    out(f"{'PASS' if report.all_valid else 'FAIL'} {report.passed}/{len(report)}")
    return 0 if report.all_valid else 1


def cmd_binary_reduce(args, out) -> int:
    sig = _sig(args.sig)
    br = binary_reduction(sig, relation_handling=args.relations)
    out(br.target.to_text())
    out(print_translation(br.translation))
    for d in br.distinctness:
        out(print_formula(d))
    if args.formula:
        for f in parse_formulas(_read(args.formula), sig):
            out(print_formula(translate(br.translation, f)))
    return 0


def cmd_gen_trep(args, out) -> int:
    if args.tables:
        tables = parse_tables(_read(args.tables))
    else:
        tables = random_tables(random.Random(args.seed))
        out("; " + print_tables(tables).replace("\n", "\n; "))
    if args.verbose:
        out("; " + tables.signature(args.style).to_text().replace("\n", "\n; "))
    axioms = trep_axioms(tables, args.style)
    for a in axioms:
        out(print_formula(a))
    M = table_structure(tables, args.style)
    ok = sum(eval_formula(M, a) for a in axioms)
    out(f"{'PASS' if ok == len(axioms) else 'FAIL'} {ok}/{len(axioms)}")
    return 0 if ok == len(axioms) else 1


def cmd_gen_r(args, out) -> int:
    if args.bound < 0:
        raise ValueError("--bound must be non-negative")
    if args.verbose:
        out("; " + r_signature().to_text().replace("\n", "\n; "))
    axioms = r_axioms(args.bound)
    for a in axioms:
        out(print_formula(a))
    M = r_fragment_model(args.bound)
    if args.verbose:
        out("; " + print_structure(M).replace("\n", "\n; "))
    ok = sum(eval_formula(M, a) for a in axioms)
    out(f"{'PASS' if ok == len(axioms) else 'FAIL'} {ok}/{len(axioms)}")
    return 0 if ok == len(axioms) else 1


def cmd_oracle(args, out) -> int:
    if args.cases < 0:
        raise ValueError("--cases must be non-negative")
    names = ["res", "euf"] if args.suite == "all" else [args.suite]
    passed = total = 0
    for name in names:
        if name == "res":
            r = SUITES[name](args.cases, args.seed, max_theta=min(args.max_theta, 6), max_model=args.max_model)
        else:
            r = SUITES[name](args.cases, args.seed)
        if len(names) > 1 or args.verbose:
            out(f"{name}: {r.line()} {r.stats}")
        for fail in r.failures:
            out(f"; failure {fail}")
        passed += r.passed
        total += r.total
    out(f"{'PASS' if passed == total else 'FAIL'} {passed}/{total}")
    return 0 if passed == total else 1


def cmd_naive(args, out) -> int:
    sig = _sig(args.sig)
    code = 0
    for f in _formulas(args, sig):
        ok = naive_universal_check(f, sig, max_model=args.max_model)
        out("true" if ok else "false")
        code = 0 if ok else 1
    return code


COMMANDS = {
    "qe": (cmd_qe, "print a quantifier-free equivalent"),
    "decide": (cmd_decide, "decide sentences in EC_L"),
    "decide-diag": (cmd_decide_diag, "decide sentences in EC_L plus the diagram of a finite structure"),
    "translate": (cmd_translate, "translate formulas along a translation"),
    "check-interp": (cmd_check_interp, "generate and discharge interpretation obligations"),
    "binary-reduce": (cmd_binary_reduce, "reduce a signature to one binary function and constants"),
    "gen-trep": (cmd_gen_trep, "axioms for numerals and finite tables"),
    "gen-r": (cmd_gen_r, "axioms of a finite fragment of R and check its finite model"),
    "oracle": (cmd_oracle, "randomized cross-checks against brute force"),
    "naive": (cmd_naive, "check universal sentences in all small structures"),
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ecl", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        s = sub.add_parser(name, help=help_)
        s.add_argument("--sig", metavar="PATH")
        s.add_argument("--formula", metavar="PATH|-")
        s.add_argument("--structure", metavar="PATH")
        s.add_argument("--translation", metavar="PATH")
        s.add_argument("--target-sig", metavar="PATH")
        s.add_argument("--theory", metavar="PATH", help="target sentences assumed by check-interp")
        s.add_argument("--tables", metavar="PATH")
        s.add_argument("--style", choices=STYLES, default="constants")
        s.add_argument("--bound", type=int, default=2)
        s.add_argument("--relations", action="store_true", help="binary-reduce: turn relations into functions")
        s.add_argument("--suite", choices=["res", "euf", "all"], default="res")
        s.add_argument("--max-theta", type=int, default=12)
        s.add_argument("--max-partitions", type=int, default=10**6)
        s.add_argument("--max-model", type=int, default=4)
        s.add_argument("--cases", type=int, default=100)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--verbose", action="store_true")
    return p


def run(argv: Sequence[str] | None = None, out=None) -> int:
    """Run one command; returns the exit status."""
    if out is None:
        def out(line: str) -> None:
            print(line, flush=True)
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    try:
        return handler(args, out)
    except InvariantViolation as exc:
        print(f"error: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except ResourceLimitError as exc:
        print(f"error: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, SignatureError, OSError, ValueError, EclError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
