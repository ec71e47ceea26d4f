"""``fmc`` command line.

Exit codes: 0 success, 1 usage error, 2 domain error (singular model, tower
exhausted, ...), 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import census as _census
from .classify import (
    BUNDLE_KINDS,
    SurfaceDescriptor,
    fiber_table,
    fm_partners,
    h_group,
    lambda_multisection,
)
from .curves import curve_new
from .errors import DomainError, FMCError
from .structure import automorphism_group, group_structure_check, torsion_subgroup

EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _coeffs(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"curve must be five integers a1,a2,a3,a4,a6, got {text!r}")
    if len(parts) != 5:
        raise argparse.ArgumentTypeError(f"curve must be five integers a1,a2,a3,a4,a6, got {text!r}")
    return parts


def _primes(text: str) -> list[int]:
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated primes, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fmc", description="Fourier-Mukai partner counts over finite fields.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def curve_args(sp, with_m=True):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--curve", type=_coeffs, required=True, metavar="a1,a2,a3,a4,a6")
        if with_m:
            sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--format", choices=("text", "json"), default="text")

    curve_args(sub.add_parser("aut", help="automorphism group Aut_0(E)"), with_m=False)
    curve_args(sub.add_parser("torsion", help="m-torsion subgroup and basis"))
    curve_args(sub.add_parser("hgroup", help="multiplier subgroup H of (Z/mZ)*"))
    sp = sub.add_parser("partners", help="Fourier-Mukai partners of P(O + L), ord L = m")
    curve_args(sp)
    sp.add_argument("--verify-oracle", action="store_true")

    sp = sub.add_parser("fibers", help="multiple fibres of the elliptic fibration")
    sp.add_argument("--e", type=int, required=True, choices=(0, -1))
    sp.add_argument("--bundle", choices=BUNDLE_KINDS)
    sp.add_argument("--ord", type=int)
    sp.add_argument("--p", type=int, default=0)
    kind = sp.add_mutually_exclusive_group()
    kind.add_argument("--ordinary", action="store_true")
    kind.add_argument("--supersingular", action="store_true")
    sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("census", help="run a parameter-grid census")
    sp.add_argument("--p", type=_primes, required=True, help="comma-separated primes")
    sp.add_argument("--curves", choices=("canonical", "all"), default="canonical")
    sp.add_argument("--curve", type=_coeffs, action="append", metavar="a1,a2,a3,a4,a6")
    sp.add_argument("--m-min", type=int, default=2)
    sp.add_argument("--m-max", type=int, default=10)
    sp.add_argument("--verify-oracle", action="store_true")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out", metavar="PATH")
    return parser


def _emit(record: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(record, ensure_ascii=False))
        return
    for key, value in record.items():
        if isinstance(value, (list, tuple)):
            value = ", ".join(map(str, value))
        print(f"{key}: {value}")


def cmd_aut(args) -> dict:
    E = curve_new(args.p, *args.curve)
    G = automorphism_group(E)
    report = group_structure_check(G)
    return {
        "curve": str(E),
        "j": E.j,
        "supersingular": E.is_supersingular(),
        "order": G.order,
        "label": G.structure_label,
        "field_degree": G.field_degree,
        "abelian": report.abelian,
        "checks": "ok" if report.ok else "; ".join(report.violations),
    }


def cmd_torsion(args) -> dict:
    E = curve_new(args.p, *args.curve)
    T = torsion_subgroup(E, args.m)
    return {
        "curve": str(E),
        "m": T.m,
        "structure": T.structure,
        "size": T.size,
        "field_degree": T.field_degree,
        "basis": [repr(P) for P in T.basis],
    }


def _generator(E, m):
    T = torsion_subgroup(E, m)
    if T.structure == "trivial":
        raise DomainError(f"E[{m}] is trivial on {E}: no line bundle of order {m}")
    return T


def cmd_hgroup(args) -> dict:
    E = curve_new(args.p, *args.curve)
    T = _generator(E, args.m)
    H = h_group(E, T.generator)
    return {
        "curve": str(E),
        "m": H.m,
        "point": repr(T.generator),
        "field_degree": T.field_degree,
        "h_members": list(H.members),
        "h_size": len(H),
    }


def cmd_partners(args) -> dict:
    E = curve_new(args.p, *args.curve)
    T = _generator(E, args.m)
    r = fm_partners(E, T.generator, verify_oracle=args.verify_oracle)
    out = {
        "curve": str(E),
        "m": r.m,
        "h_members": list(r.h.members),
        "representatives": list(r.representatives),
        "fm_count": r.count,
        "bound_ok": r.bound_ok,
    }
    if r.oracle_count is not None:
        out["oracle_count"] = r.oracle_count
    return out


def cmd_fibers(args) -> dict:
    d = SurfaceDescriptor(
        e=args.e,
        bundle_kind=args.bundle,
        p=args.p,
        order=args.ord,
        base_ordinary=True if args.ordinary else None,
        base_supersingular=True if args.supersingular else None,
    )
    row = fiber_table(d)
    out = {"row": row.label, "fibers": row.render(), "pattern": row.pattern}
    if row.has_elliptic_fibration:
        out["lambda"] = lambda_multisection(d)
    return out


def cmd_census(args) -> int:
    if args.curve:
        source, curves = "explicit", args.curve
    else:
        source, curves = ("canonical_per_j" if args.curves == "canonical" else "all_smooth_models"), None
    config = _census.CensusConfig(
        primes=args.p,
        curve_source=source,
        curves=curves,
        m_min=args.m_min,
        m_max=args.m_max,
        verify_oracle=args.verify_oracle,
        output_format=args.format,
        output_path=args.out,
    )
    try:
        config.validate()
    except ValueError as exc:
        raise UsageError(str(exc))
    rows = _census.run_census(config)
    text = _census.to_csv(rows) if config.output_format == "csv" else _census.to_json(rows)
    try:
        if config.output_path:
            with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"fmc: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    summary = _census.summarize(rows)
    print(f"census: {summary.line()}", file=sys.stderr)
    return EXIT_DOMAIN if summary.oracle_mismatches else 0


COMMANDS = {
    "aut": cmd_aut,
    "torsion": cmd_torsion,
    "hgroup": cmd_hgroup,
    "partners": cmd_partners,
    "fibers": cmd_fibers,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "census":
            return cmd_census(args)
        _emit(COMMANDS[args.command](args), args.format)
    except (UsageError, ValueError) as exc:
        print(f"fmc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"fmc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except FMCError as exc:
        print(f"fmc: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":
    sys.exit(main())
