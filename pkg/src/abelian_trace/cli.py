"""Command-line interface: ``abelian-trace {verify,field,index,leopoldt}``.

Exit codes: 0 success, 1 a verification failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from math import gcd

from . import chargroup as cg
from .cyclotomic import factorize
from .errors import AbelianTraceError, check_conductor
from .fields import (
    AbelianField,
    cyclotomic_is_wild_over,
    field_from_subgroup,
    is_wild_extension,
    ring_of_integers,
)
from .trace import (
    associated_order,
    galois_representatives,
    index_I,
    leopoldt_alpha,
    leopoldt_index,
    predicted_I,
)
from .verify import RunConfig, default_jobs, format_records, run

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_gens(text: str, n: int) -> list[int]:
    """``a,b,c`` residues, or the shortcuts ``cyclotomic`` and ``maxreal``."""
    text = text.strip()
    if text == "cyclotomic" or text == "":
        return []
    if text == "maxreal":
        return [(n - 1) % n] if n > 1 else []
    try:
        gens = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"bad generator list {text!r}") from None
    for g in gens:
        if g < 0 or g >= max(n, 1):
            raise UsageError(f"generator {g} is not a residue in [0, {n})")
        if gcd(g, n) != 1:
            raise UsageError(f"generator {g} is not coprime to {n}")
    return gens


def build_field(n: int, gens_text: str) -> AbelianField:
    try:
        check_conductor(n)
    except AbelianTraceError as exc:
        raise UsageError(str(exc)) from None
    return field_from_subgroup(n, parse_gens(gens_text, n))


def _fmt_gens(k: AbelianField) -> str:
    return ",".join(map(str, k.H.generators)) or "1"


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = RunConfig(
        max_conductor=args.max_conductor,
        min_conductor=args.min_conductor,
        jobs=args.jobs,
        output_format=args.format,
        out_path=args.out,
        check_adjusted_trace=args.check_adjusted_trace,
        check_leopoldt=args.check_leopoldt,
        leopoldt_max=args.leopoldt_max,
        timing=args.timing,
    )
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    results = run(cfg)
    records = [r for res in results for r in res.records]
    aux = [a for res in results for a in res.aux]
    text = format_records(records, cfg.output_format)
    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    mismatches = [r for r in records if not r.match]
    aux_failed = [a for a in aux if not a.ok]
    for a in aux_failed:
        print(f"FAIL {a.check} n={a.n} K=<{','.join(map(str, a.K_gens))}> {a.detail}", file=sys.stderr)
    print(
        f"conductors {cfg.min_conductor}..{cfg.max_conductor}: {len(records)} records, "
        f"{len(mismatches)} mismatches; auxiliary checks {len(aux) - len(aux_failed)}/{len(aux)} passed",
        file=sys.stderr,
    )
    return EXIT_FAIL if mismatches or aux_failed else EXIT_OK


def field_report(k: AbelianField) -> dict:
    full = k.full_conductor
    ok = ring_of_integers(k).lattice
    return {
        "n": k.n,
        "generators": list(k.H.generators),
        "degree": k.degree,
        "conductor": k.conductor,
        "full_conductor": full,
        "wild_over_cyclotomic": cyclotomic_is_wild_over(k) if full else None,
        "ramification": {str(p): cg.ram_index(k.chars, p) for p in sorted(factorize(k.n))},
        "ring_of_integers": [list(row) for row in ok.basis],
    }


def cmd_field(args: argparse.Namespace) -> int:
    k = build_field(args.conductor, args.gens)
    rep = field_report(k)
    if args.json:
        print(json.dumps(rep))
        return EXIT_OK
    print(f"field: subfield of Q(zeta_{k.n}) fixed by <{_fmt_gens(k)}>")
    print(f"degree: {rep['degree']}")
    print(f"conductor: {rep['conductor']}")
    if rep["full_conductor"]:
        print(f"wild over Q^({k.n}): {'yes' if rep['wild_over_cyclotomic'] else 'no'}")
    else:
        print(
            f"note: conductor {rep['conductor']} is smaller than {k.n}; "
            "wildness over the cyclotomic field is only defined at full conductor"
        )
    for p, e in rep["ramification"].items():
        print(f"ramification index at {p}: {e}")
    print("ring of integers (HNF, power basis of zeta_n):")
    for row in rep["ring_of_integers"]:
        print("  " + " ".join(str(x) for x in row))
    return EXIT_OK


def cmd_index(args: argparse.Namespace) -> int:
    n = args.conductor
    k = build_field(n, args.k_gens)
    l = build_field(n, args.l_gens)
    if not l.H.issubset(k.H):
        raise UsageError("K is not contained in L (L's subgroup must lie inside K's)")
    for name, f in (("K", k), ("L", l)):
        if not f.full_conductor:
            raise UsageError(f"{name} has conductor {f.conductor}, not {n}")
    computed = index_I(l, k)
    predicted = predicted_I(l, k)
    wild = is_wild_extension(l, k)
    print(f"n={n} K=<{_fmt_gens(k)}> L=<{_fmt_gens(l)}> wild={'yes' if wild else 'no'} "
          f"I={computed} predicted={predicted} match={'yes' if computed == predicted else 'no'}")
    return EXIT_OK if computed == predicted else EXIT_FAIL


def cmd_leopoldt(args: argparse.Namespace) -> int:
    k = build_field(args.conductor, args.gens)
    if not k.full_conductor:
        raise UsageError(f"field has conductor {k.conductor}, not {k.n}")
    alpha = leopoldt_alpha(k)
    ok = ring_of_integers(k).lattice
    coords = ok.coordinates(alpha.coeffs)
    order = associated_order(k)
    idx = leopoldt_index(k)
    print(f"field: n={k.n} K=<{_fmt_gens(k)}> degree={k.degree}")
    print(f"alpha = {alpha}")
    print(f"alpha in O_K coordinates: {coords}")
    print(f"coset representatives: {galois_representatives(k)}")
    print(f"associated order: denominator {order.denominator}, numerator basis:")
    for row in order.numerator.basis:
        print("  " + " ".join(str(x) for x in row))
    print(f"leopoldt index: {idx}")
    return EXIT_OK if idx == 1 else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abelian-trace",
        description="Trace images of rings of integers in abelian number fields.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check the index formula for all pairs up to a conductor")
    p.add_argument("--max-conductor", type=int, required=True)
    p.add_argument("--min-conductor", type=int, default=1)
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default: $ABELIAN_TRACE_JOBS or CPU count)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.add_argument("--check-adjusted-trace", action="store_true")
    p.add_argument("--check-leopoldt", action="store_true")
    p.add_argument("--leopoldt-max", type=int, default=40)
    p.add_argument("--timing", action="store_true",
                   help="fill elapsed_ms (makes output run-dependent)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("field", help="describe one field")
    p.add_argument("--conductor", type=int, required=True)
    p.add_argument("--gens", default="")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("index", help="compute I(L/K) both ways")
    p.add_argument("--conductor", type=int, required=True)
    p.add_argument("--k-gens", required=True)
    p.add_argument("--l-gens", default="")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("leopoldt", help="check the Leopoldt generator of one field")
    p.add_argument("--conductor", type=int, required=True)
    p.add_argument("--gens", default="")
    p.set_defaults(func=cmd_leopoldt)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if getattr(args, "jobs", 0) is None:
        try:
            args.jobs = default_jobs()
        except ValueError:
            print("error: $ABELIAN_TRACE_JOBS is not an integer", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, AbelianTraceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
