"""
Main entry point for the weak-approximation certificate tool
Every subcommand prints one JSON document on stdout (or writes it with --out).
Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 bad input.
"""

import argparse
import sys
from fractions import Fraction
from typing import List, Optional

from wacert.brauer_cert import pole_element, quaternion_invariant, ramified_place, variant_wa_failure
from wacert.certificates import canonical_bytes, envelope, write_atomic
from wacert.chatelet import SearchBounds, certify_local_solvability, variant_surface, verify_params
from wacert.config import Config
from wacert.errors import InvalidInputError, MathCheckError
from wacert.fibration import DEFAULT_PENCIL, PERTURBED_PENCIL, etale_over_branch
from wacert.logger import logger
from wacert.nf_core import QuadraticField, principal_prime
from wacert.pipeline import (
    STRATEGY_TABLE,
    assemble_construction,
    bunyakovsky_scan,
    compare_golden,
    recheck_file,
    verify_example,
    verify_table_row,
)
from wacert.symbols import INFINITY, hilbert_odd, hilbert_rational

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _field(args) -> QuadraticField:
    return QuadraticField(args.field)


def _params(K: QuadraticField, text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise InvalidInputError("--params expects four comma-separated values a,b,c,e")
    return [K.parse(p) for p in parts]


# ---- Subcommands ----

def cmd_construct(args) -> dict:
    K = _field(args)
    bounds = SearchBounds(
        radius=args.radius or Config.SEARCH_RADIUS,
        positivity_bound=Fraction(args.bound) if args.bound else Config.POSITIVITY_BOUND,
        workers=args.workers,
    )
    params = _params(K, args.params) if args.params else None
    return assemble_construction(K, params=params, bounds=bounds, precision=args.precision).to_document()


def cmd_verify_example(args) -> dict:
    doc = verify_example(args.precision)
    mismatches = compare_golden(doc, args.golden)
    for problem in mismatches:
        logger.warning(f"golden mismatch: {problem}")
    doc["golden"] = {"matches": not mismatches, "mismatches": mismatches}
    doc["ok"] = doc["ok"] and not mismatches
    return doc


def cmd_verify_table(args) -> dict:
    if args.row is not None and not 1 <= args.row <= len(STRATEGY_TABLE):
        raise InvalidInputError(f"--row must be between 1 and {len(STRATEGY_TABLE)}")
    indices = [args.row] if args.row else range(1, len(STRATEGY_TABLE) + 1)
    reports = [verify_table_row(STRATEGY_TABLE[i - 1], i) for i in indices]
    return envelope("table", {"rows": [r.to_dict() for r in reports]}, ok=all(r.passed for r in reports))


def cmd_hilbert(args) -> dict:
    K = _field(args)
    if K.degree == 1:
        v = INFINITY if args.v == INFINITY else int(args.v)
        value = hilbert_rational(Fraction(args.s), Fraction(args.t), v)
    else:
        prime = principal_prime(K.parse(args.v), K, stage="v")
        value = hilbert_odd(K.parse(args.s), K.parse(args.t), prime)
    return envelope("hilbert", {"field": K.describe(), "s": args.s, "t": args.t, "v": args.v,
                                "symbol": value}, ok=True)


def cmd_solvable(args) -> dict:
    K = _field(args)
    params = verify_params(*_params(K, args.params), K=K)
    cert = certify_local_solvability(params, args.precision)
    return envelope("solvable", cert.to_dict(), ok=True)


def cmd_brauer_eval(args) -> dict:
    K = _field(args)
    params = verify_params(*_params(K, args.params), K=K)
    if (args.x is None) == (args.pole is None):
        raise InvalidInputError("give exactly one of --x and --pole")
    if args.x is not None:
        x = K.parse(args.x)
        where = {"x": str(x)}
    else:
        x = pole_element(ramified_place(params), args.pole)
        where = {"pole_order": args.pole}
    invariant = quaternion_invariant(params, x)
    return envelope("brauer-eval", {"params": params.to_dict(), **where, **invariant.to_dict()}, ok=True)


def cmd_etale_check(args) -> dict:
    pencil = PERTURBED_PENCIL if args.perturbed else DEFAULT_PENCIL
    cert = etale_over_branch(pencil=pencil)
    return envelope("etale", cert.to_dict(), ok=cert.etale)


def cmd_scan(args) -> dict:
    K = _field(args)
    hits = bunyakovsky_scan(args.delta, K.parse(args.c), args.nmax, K)
    return envelope("scan", {
        "field": K.describe(),
        "delta": args.delta,
        "c": args.c,
        "n_max": args.nmax,
        "hits": [h.to_dict() for h in hits],
    }, ok=True)


def cmd_recheck(args) -> dict:
    ok, problems = recheck_file(args.cert)
    return envelope("recheck", {"cert": str(args.cert), "problems": problems}, ok=ok)


def cmd_variant(args) -> dict:
    K = _field(args)
    surface = variant_surface(K.parse(args.a), K.parse(args.b), K)
    cert = variant_wa_failure(surface.a, surface.b, K)
    return envelope("variant", {"field": K.describe(), "surface": surface.to_dict(),
                                "wa_failure": cert.to_dict()}, ok=True)


COMMANDS = {
    "construct": cmd_construct,
    "verify-example": cmd_verify_example,
    "verify-table": cmd_verify_table,
    "hilbert": cmd_hilbert,
    "solvable": cmd_solvable,
    "brauer-eval": cmd_brauer_eval,
    "etale-check": cmd_etale_check,
    "scan": cmd_scan,
    "recheck": cmd_recheck,
    "variant": cmd_variant,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wacert",
        description="Certify Chatelet surfaces that lose weak approximation over a quadratic extension",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Recompute every fact of the example over Q and compare with the golden file
  python -m wacert verify-example

  # Search parameters over Q(sqrt(-1)) and write the certificate
  python -m wacert construct --field=-1 --out cert.json

  # Re-derive a certificate written by construct
  python -m wacert recheck --cert cert.json

  # Hilbert symbol (17, 5) at 5 over Q
  python -m wacert hilbert --field 1 17 5 5

  # Values starting with '-' and containing '+' need the --flag=value form
  python -m wacert scan --field -1 --delta 5 --c=2+i --nmax 20
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_out(p):
        p.add_argument("--out", help="Write the JSON document to this file instead of stdout")
        return p

    def with_field(p):
        p.add_argument("--field", type=int, default=1,
                       help="Square-free delta0 of K = Q(sqrt(delta0)); 1 means Q")
        return p

    p = with_out(with_field(sub.add_parser("construct", help="Search or verify parameters and certify them")))
    p.add_argument("--params", help="Explicit a,b,c,e instead of a search")
    p.add_argument("--radius", type=int, help="Lattice search radius")
    p.add_argument("--bound", help="Positivity bound for a and b (exact rational)")
    p.add_argument("--workers", type=int, help="Candidate-testing threads")
    p.add_argument("--precision", type=int, help="Hensel precision")

    p = with_out(sub.add_parser("verify-example", help="Full run on the example surface over Q"))
    p.add_argument("--precision", type=int, help="Hensel precision")
    p.add_argument("--golden", help="Golden file to compare against")

    p = with_out(sub.add_parser("verify-table", help="Check the quadratic-field strategy table"))
    p.add_argument("--row", type=int, help="Only this row (1-based)")

    p = with_out(with_field(sub.add_parser("hilbert", help="Hilbert symbol (s, t)_v")))
    p.add_argument("s")
    p.add_argument("t")
    p.add_argument("v", help="Prime (generator over K), or 'inf' over Q")

    p = with_out(with_field(sub.add_parser("solvable", help="Local solvability certificate")))
    p.add_argument("--params", required=True, help="a,b,c,e")
    p.add_argument("--precision", type=int, help="Hensel precision")

    p = with_out(with_field(sub.add_parser("brauer-eval", help="Local invariant at the ramified place of L")))
    p.add_argument("--params", required=True, help="a,b,c,e")
    p.add_argument("--x", help="x-coordinate in K")
    p.add_argument("--pole", type=int, help="Use x = sqrt(D)^(-k), so v_P(x) = -k")

    p = with_out(sub.add_parser("etale-check", help="Etaleness of gamma over the branch locus"))
    p.add_argument("--perturbed", action="store_true", help="Use the pencil (y'^2 + z'^2 : x'z' - z'^2)")

    p = with_out(with_field(sub.add_parser("scan", help="Prime values of (-delta/c) n^2 + c")))
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--c", required=True)
    p.add_argument("--nmax", type=int, required=True)

    p = with_out(sub.add_parser(
        "recheck", help="Re-derive a certificate written by construct (other kinds are rejected)"))
    p.add_argument("--cert", required=True)

    p = with_out(with_field(sub.add_parser("variant", help="Variant surface y^2 - a z^2 = -(x^2 + b)(x^2 - b)")))
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    return parser


def _emit(doc: dict, out: Optional[str]) -> None:
    if out:
        write_atomic(out, doc)
        logger.info(f"wrote {out}")
    else:
        sys.stdout.buffer.write(canonical_bytes(doc))
        sys.stdout.flush()


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Validate configuration
    try:
        Config.validate_config()
    except ValueError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_USAGE

    out = getattr(args, "out", None)
    try:
        doc = COMMANDS[args.command](args)
    except MathCheckError as e:
        logger.error(f"{args.command}: {e}")
        body = {"error": str(e), "stage": e.stage}
        if e.report is not None:
            body["report"] = e.report
        _emit(envelope(args.command, body, ok=False), out)
        return EXIT_CHECK_FAILED
    except ValueError as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    if args.command == "hilbert" and not out:
        print(doc["symbol"])
    else:
        _emit(doc, out)
    return EXIT_OK if doc.get("ok") else EXIT_CHECK_FAILED


if __name__ == '__main__':
    sys.exit(main())
