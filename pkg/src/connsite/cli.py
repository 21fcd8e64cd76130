"""Command-line interface.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or
input error, 3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import (
    GeneratorFamily,
    generate_structure,
    induced_structure,
    irreducible_by_definition,
    is_integral,
    validate_structure,
)
from .errors import ConnsiteError, EnumerationCapError
from .interval import RationalInterval, _q, build_witness, verify_witness
from .io import (
    load_json,
    parse_presheaf,
    read_space_file,
    witness_from_json,
    witness_to_json,
)
from .sheaf import is_sheaf, validate_presheaf
from .site import DEFAULT_CAP, covering_table, enumerate_sieves, is_covering, verify_axioms

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Usage(f"cannot read {path}: {exc.strerror}") from None


def _load_space(path: str):
    return read_space_file(_read(path)).build()


def _set_arg(K, text: str) -> int:
    text = text.strip()
    return K.ground.from_key(text) if text else 0


def _fmt_sieve(g, members) -> str:
    return "[" + ", ".join(g.fmt(m) for m in members) + "]"


def cmd_validate(args):
    sf = read_space_file(_read(args.file))
    report = validate_structure((0, *sf.sets), sf.ground)
    g = sf.ground
    data = {
        "command": "validate",
        "ok": report.ok,
        "violations": [
            {"pair": [g.key(p) for p in v.pair] if v.pair else None, "missing": g.key(v.missing)}
            for v in report.violations
        ],
    }
    text = ["ok"] if report.ok else ["violation: " + d for d in report.describe()]
    return data, text, EXIT_OK if report.ok else EXIT_NEGATIVE


def cmd_generate(args):
    sf = read_space_file(_read(args.file))
    K = generate_structure(GeneratorFamily(sf.ground, frozenset(sf.sets)))
    g = K.ground
    data = {"command": "generate", "elements": list(g.names), "family": [g.key(A) for A in K.family]}
    return data, [g.fmt(A) for A in K.family], EXIT_OK


def cmd_induced(args):
    K = _load_space(args.file)
    A = _set_arg(K, args.set)
    sub = induced_structure(K, A)
    g = K.ground
    data = {"command": "induced", "set": g.key(A), "family": [g.key(B) for B in sub.family]}
    return data, [g.fmt(B) for B in sub.family], EXIT_OK


def cmd_sieves(args):
    K = _load_space(args.file)
    A = K.require(_set_arg(K, args.on))
    g = K.ground
    sieves = enumerate_sieves(K, A, args.cap)
    rows = [(s, is_covering(K, s)) for s in sieves]
    if args.covering:
        rows = sorted(((s, c) for s, c in rows if c), key=lambda r: r[0].sort_key())
    data = {
        "command": "sieves",
        "object": g.key(A),
        "covering_only": args.covering,
        "count": len(rows),
        "sieves": [{"members": [g.key(m) for m in s.ordered], "covering": c} for s, c in rows],
    }
    text = [f"{len(rows)} {'covering ' if args.covering else ''}sieves on {g.fmt(A)}"]
    text += [f"  {'*' if c else ' '} {_fmt_sieve(g, s.ordered)}" for s, c in rows]
    return data, text, EXIT_OK


def cmd_jtable(args):
    K = _load_space(args.file)
    table = covering_table(K, args.cap)
    g = K.ground
    data = {
        "command": "jtable",
        "table": [
            {
                "object": g.key(A),
                "count": len(table[A]),
                "sieves": [[g.key(m) for m in s.ordered] for s in table[A]],
            }
            for A in K.family
        ],
    }
    width = max(len(g.fmt(A)) for A in K.family)
    text = []
    for A in K.family:
        text.append(f"{g.fmt(A):<{width}}  |J|={len(table[A])}")
        text += [f"    {_fmt_sieve(g, s.ordered)}" for s in table[A]]
    return data, text, EXIT_OK


def cmd_irreducibles(args):
    K = _load_space(args.file)
    g = K.ground
    irr = [A for A in K.family if irreducible_by_definition(K, A)]
    data = {"command": "irreducibles", "integral": is_integral(K), "irreducibles": [g.key(A) for A in irr]}
    text = [g.fmt(A) for A in irr] + [f"integral: {'yes' if is_integral(K) else 'no'}"]
    return data, text, EXIT_OK


def cmd_axioms(args):
    K = _load_space(args.file)
    g = K.ground
    reports = verify_axioms(K, samples=args.samples, seed=args.seed, cap=args.cap)
    ok = all(r.passed for r in reports)
    data = {"command": "axioms", "pass": ok, "reports": []}
    text = []
    for r in reports:
        data["reports"].append({
            "axiom": r.axiom,
            "pass": r.passed,
            "instances": r.instances,
            "mode": r.mode,
            "violations": [
                {
                    "object": g.key(v.obj),
                    "sieves": [[g.key(m) for m in s.ordered] for s in v.sieves],
                    "at": None if v.at is None else g.key(v.at),
                }
                for v in r.violations
            ],
        })
        text.append(f"{r.axiom}: {'PASS' if r.passed else 'FAIL'} ({r.instances} instances, {r.mode})")
        for v in r.violations:
            where = "" if v.at is None else f" at {g.fmt(v.at)}"
            text.append(f"  object {g.fmt(v.obj)}{where}: " + " ; ".join(_fmt_sieve(g, s.ordered) for s in v.sieves))
    return data, text, EXIT_OK if ok else EXIT_NEGATIVE


def cmd_sheaf(args):
    K = _load_space(args.space)
    F = parse_presheaf(_read(args.presheaf), K)
    g = K.ground
    report = validate_presheaf(F)
    if not report.ok:
        v = report.violations[0]
        raise _Usage(
            f"not a presheaf: restriction {g.fmt(v.upper)} -> {g.fmt(v.lower)} depends on the path "
            f"({' > '.join(g.fmt(m) for m in v.path1)} vs {' > '.join(g.fmt(m) for m in v.path2)}, "
            f"section {v.section!r}: {v.image1!r} vs {v.image2!r})"
        )
    verdict = is_sheaf(F, covering_table(K, args.cap), args.cap)
    data = {"command": "sheaf", "sheaf": verdict.is_sheaf, "counterexample": None}
    if verdict.is_sheaf:
        return data, ["sheaf: yes"], EXIT_OK
    ce = verdict.counterexample
    data["counterexample"] = {
        "object": g.key(ce.obj),
        "sieve": [g.key(m) for m in ce.sieve.ordered],
        "family": {g.key(B): ce.family.assignment[B] for B in ce.sieve.ordered},
        "amalgamations": ce.amalgamations,
    }
    family = ", ".join(f"{g.fmt(B)}: {ce.family.assignment[B]}" for B in ce.sieve.ordered)
    text = [
        "sheaf: no",
        f"counterexample: object {g.fmt(ce.obj)}",
        f"  covering sieve {_fmt_sieve(g, ce.sieve.ordered)}",
        f"  matching family {{{family}}}",
        f"  amalgamations: {ce.amalgamations}",
    ]
    return data, text, EXIT_NEGATIVE


def _interval_arg(text: str) -> RationalInterval:
    parts = text.split(",")
    if len(parts) != 2:
        raise _Usage(f"--target must look like lo,hi, got {text!r}")
    return RationalInterval(_q(parts[0].strip()), _q(parts[1].strip()))


def cmd_interval_witness(args):
    if args.verify_only:
        w = witness_from_json(load_json(_read(args.verify_only)))
        mismatch = (args.target is not None and _interval_arg(args.target) != w.target) or (
            args.epsilon is not None and _q(args.epsilon) != w.epsilon
        )
        valid = verify_witness(w) and not mismatch
    else:
        if args.target is None or args.epsilon is None:
            raise _Usage("--target and --epsilon are required unless --verify-only is given")
        w = build_witness(_interval_arg(args.target), args.epsilon)
        valid = verify_witness(w)
    data = {"command": "interval-witness", **witness_to_json(w), "valid": valid}
    text = [f"target {w.target}, epsilon {w.epsilon}, {len(w.pieces)} pieces"]
    text += [f"  {p}" for p in w.pieces]
    text.append(f"valid: {'yes' if valid else 'no'}")
    return data, text, EXIT_OK if valid else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    cap = argparse.ArgumentParser(add_help=False)
    cap.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum sieves enumerated per object")

    parser = argparse.ArgumentParser(prog="connsite", description="Covering sieves and sheaves on finite connectivity spaces.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[fmt], help="check the structure axioms of a space file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("generate", parents=[fmt], help="print the structure generated by the listed sets")
    p.add_argument("file")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("induced", parents=[fmt], help="connected parts of a connected set")
    p.add_argument("file")
    p.add_argument("--set", required=True, help="comma-separated labels; empty string for the empty set")
    p.set_defaults(func=cmd_induced)

    p = sub.add_parser("sieves", parents=[fmt, cap], help="enumerate sieves on a connected set")
    p.add_argument("file")
    p.add_argument("--on", required=True, help="comma-separated labels; empty string for the empty set")
    p.add_argument("--covering", action="store_true", help="only covering sieves")
    p.set_defaults(func=cmd_sieves)

    p = sub.add_parser("jtable", parents=[fmt, cap], help="covering sieves of every connected set")
    p.add_argument("file")
    p.set_defaults(func=cmd_jtable)

    p = sub.add_parser("irreducibles", parents=[fmt], help="irreducible connected sets")
    p.add_argument("file")
    p.set_defaults(func=cmd_irreducibles)

    p = sub.add_parser("axioms", parents=[fmt, cap], help="verify the topology axioms")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="check every instance (default)")
    mode.add_argument("--samples", type=int, default=None, help="check this many random instances per axiom")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("sheaf", parents=[fmt, cap], help="check the sheaf condition for a presheaf file")
    p.add_argument("space")
    p.add_argument("presheaf")
    p.set_defaults(func=cmd_sheaf)

    p = sub.add_parser("interval-witness", parents=[fmt], help="chain witness for the epsilon-sieve on an interval")
    p.add_argument("--target", help="lo,hi (use --target=-1,1 for negative endpoints)")
    p.add_argument("--epsilon", help="positive rational such as 3/10")
    p.add_argument("--verify-only", metavar="WITNESS_FILE", help="verify a witness file instead of building one")
    p.set_defaults(func=cmd_interval_witness)
    return parser


def run_command(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "samples", None) is not None and args.samples < 1:
        print("error: --samples must be positive", file=stderr)
        return EXIT_INPUT
    if getattr(args, "cap", 1) < 1:
        print("error: --cap must be positive", file=stderr)
        return EXIT_INPUT
    try:
        data, text, code = args.func(args)
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_CAP
    except (ConnsiteError, _Usage) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    if args.format == "json":
        stdout.write(json.dumps(data, indent=2, ensure_ascii=False) + "\n")
    else:
        stdout.write("\n".join(text) + "\n")
    return code


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
