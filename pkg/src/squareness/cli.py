"""Command-line entry point: single computations and the batch scans."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import modsym as ms
from . import newform as nf
from . import ratlattice as rl
from .brandt import module as bm
from .elliptic import EllipticCurve, SingularCurve, quadratic_twist, real_periods, root_number_and_L1, twist_an
from .elliptic.lseries import _terms_needed
from .harness import conj25, db as dbm, report, squareness, star

PRECISION_ENV = "SQUARENESS_PRECISION"


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    precision_bits: int = 128
    hecke_bound: int = 13
    d_search_max: int = 100
    threads: int = 1
    manin_constant: int = 1
    fmt: str = "text"
    out: str | None = None

    def __post_init__(self):
        if self.precision_bits < 64:
            raise UsageError("precision must be at least 64 bits")
        if self.threads < 1:
            raise UsageError("threads must be at least 1")
        if self.manin_constant < 1:
            raise UsageError("Manin constant must be positive")


def _default_precision() -> int:
    v = os.environ.get(PRECISION_ENV)
    if v is None:
        return 128
    try:
        return int(v)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV} must be an integer") from None


def _config(args) -> CliConfig:
    fmt = "json" if args.json else getattr(args, "format", None) or "text"
    prec = args.precision if args.precision is not None else _default_precision()
    return CliConfig(prec, args.hecke_bound, args.d_search_max, args.threads, args.manin_constant, fmt, getattr(args, "out", None))


def _curve(args) -> tuple[EllipticCurve, str]:
    if args.curve and args.label:
        raise UsageError("give either --curve or --label")
    if args.curve:
        try:
            a = [int(x) for x in args.curve.split(",")]
        except ValueError:
            raise UsageError(f"malformed invariants {args.curve!r}") from None
        if len(a) != 5:
            raise UsageError("expected five a-invariants a1,a2,a3,a4,a6")
        try:
            return EllipticCurve(*a), args.curve
        except SingularCurve:
            raise UsageError("singular curve") from None
    if args.label:
        if not args.db:
            raise UsageError("--label requires --db")
        return dbm.find(dbm.parse_db(args.db), args.label).curve, args.label
    raise UsageError("a curve is required (--curve or --label with --db)")


def _factor(E: EllipticCurve, cfg: CliConfig) -> nf.NewformFactor:
    space = ms.cached_space(E.conductor)
    return nf.match_curve(nf.decompose(space), E, cfg.hecke_bound)


def _out(cfg: CliConfig, obj, text: str):
    if cfg.fmt == "json":
        print(json.dumps(obj, indent=2, default=str))
    else:
        print(text)


# -- commands ----------------------------------------------------------------------

def cmd_lratio(args, cfg: CliConfig) -> int:
    E, name = _curve(args)
    f = _factor(E, cfg)
    r = nf.lratio_plus(f).value / cfg.manin_constant
    _out(cfg, {"curve": name, "conductor": E.conductor, "lratio": str(r)}, str(r))
    return 0


def cmd_twist_lratio(args, cfg: CliConfig) -> int:
    E, name = _curve(args)
    D = args.D
    if not rl.is_fundamental_discriminant(-D):
        raise UsageError(f"-{D} is not a fundamental discriminant")
    f = _factor(E, cfg)
    try:
        t = nf.twisted_index(f, D)
        exact = t.odd / cfg.manin_constant
    except nf.ZeroTwist:
        exact = Fraction(0)
    Et = quadratic_twist(E, D)
    n = _terms_needed(Et.conductor, 1.2, 2.0 ** -min(cfg.precision_bits, 60))
    _, L = root_number_and_L1(Et, cfg.precision_bits, twist_an(E, D, n))
    with mpmath.workprec(cfg.precision_bits):
        num = L * mpmath.sqrt(D) / real_periods(E, cfg.precision_bits).omega_minus
    ratio = None if exact == 0 else float(num / (exact.numerator / mpmath.mpf(exact.denominator)))
    obj = {"curve": name, "D": D, "odd_part": str(exact), "numeric": mpmath.nstr(num, 15),
           "numeric_over_exact": ratio}
    text = f"{exact}\nnumeric L(E_-D,1) sqrt(D)/Omega^- = {mpmath.nstr(num, 15)}"
    if ratio is not None:
        text += f"  (ratio {ratio:.12g}, a power of 2 expected)"
    _out(cfg, obj, text)
    return 0


def cmd_brandt(args, cfg: CliConfig) -> int:
    M = bm.build_brandt(args.N)
    obj = {"N": args.N, "classes": M.rank, "weights": list(M.weights),
           "mass": str(M.classes.mass)}
    lines = [f"N = {args.N}: {M.rank} classes, weights {list(M.weights)}, mass {M.classes.mass}"]
    if args.matrices:
        try:
            ms_ = [int(x) for x in args.matrices.split(",")]
        except ValueError:
            raise UsageError("--matrices expects a comma list of integers") from None
        obj["matrices"] = {}
        for m in ms_:
            B = M.brandt_matrix(m)
            obj["matrices"][str(m)] = B
            lines.append(f"B({m}) = {B}")
    if args.gross:
        if args.D is None:
            raise UsageError("--gross requires -D")
        g = bm.gross_vector(M, args.D)
        obj["gross"] = {"D": g.D, "embedding_numbers": list(g.embedding_numbers),
                        "chi": [str(x) for x in g.chi], "chi0": [str(x) for x in g.chi0],
                        "deg_chi0": str(M.deg(g.chi0))}
        lines.append(f"h_i(-{g.D}) = {list(g.embedding_numbers)}")
        lines.append(f"chi  = {[str(x) for x in g.chi]}")
        lines.append(f"chi0 = {[str(x) for x in g.chi0]}  (degree {M.deg(g.chi0)})")
    _out(cfg, obj, "\n".join(lines))
    return 0


def cmd_squareness(args, cfg: CliConfig) -> int:
    N, D = args.N, args.D
    fs = nf.decompose(ms.cached_space(N))
    recs = []
    for f in fs:
        try:
            recs.append(squareness.squareness_check(N, f, D).as_dict())
        except squareness.ZeroLValue as exc:
            recs.append({"factor": f.label, "d": f.d, "skipped": str(exc)})
    lines = []
    for r in recs:
        if "skipped" in r:
            lines.append(f"{N}{r['factor']} (d={r['d']}): skipped, {r['skipped']}")
        else:
            lines.append(
                f"{N}{r['factor']} (d={r['d']}), D={D}: lhs {r['lhs']} rhs {r['rhs']}; "
                f"away from 2D {r['lhs_away']} vs {r['rhs_away']}; verdict {r['verdict']}, square {r['is_square']}"
                + (f"; away from {list(r['eisenstein_primes'])} too: {r['verdict_away_from_eisenstein']}"
                   if r["eisenstein_primes"] else "")
            )
    _out(cfg, {"N": N, "D": D, "factors": recs}, "\n".join(lines))
    return 0


def _emit(rep, cfg: CliConfig):
    fmt = "json" if cfg.fmt == "text" else cfg.fmt
    text = report.emit(rep, fmt, cfg.out)
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        print(json.dumps(report.summary(rep)), file=sys.stderr)


def _load_db(args):
    if not args.db:
        raise UsageError("--db is required")
    return dbm.parse_db(args.db, validate_records=args.validate)


def cmd_scan_conj25(args, cfg: CliConfig) -> int:
    rep = conj25.scan_conjecture(_load_db(args), args.bound, "star" if args.star else "gcd",
                                 cfg.precision_bits, cfg.threads)
    _emit(rep, cfg)
    return 0


def cmd_scan_star(args, cfg: CliConfig) -> int:
    rep = star.scan_hypothesis_star(_load_db(args), args.conductor_bound, args.bound,
                                    "gcd" if args.gcd else "star", cfg.precision_bits, cfg.threads)
    _emit(rep, cfg)
    return 0


def cmd_table1(args, cfg: CliConfig) -> int:
    _emit(conj25.table1(_load_db(args), cfg.precision_bits), cfg)
    return 0


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=None, help=f"bits (default ${PRECISION_ENV} or 128)")
    common.add_argument("--hecke-bound", type=int, default=13)
    common.add_argument("--d-search-max", type=int, default=100)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--manin-constant", type=int, default=1)
    common.add_argument("--json", action="store_true", help="JSON output")

    curve = argparse.ArgumentParser(add_help=False)
    curve.add_argument("--curve", help="a1,a2,a3,a4,a6")
    curve.add_argument("--label", help="curve label, looked up in --db")
    curve.add_argument("--db")

    scan = argparse.ArgumentParser(add_help=False)
    scan.add_argument("--db", required=True)
    scan.add_argument("--validate", action="store_true", help="recompute conductor and torsion of every record")
    scan.add_argument("--format", choices=("json", "csv"), default=None)
    scan.add_argument("--out")

    p = argparse.ArgumentParser(prog="squareness", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("lratio", parents=[common, curve], help="L(E,1)/Omega^+ as an exact rational")
    s.set_defaults(func=cmd_lratio)
    s = sub.add_parser("twist-lratio", parents=[common, curve], help="odd part of the twisted ratio")
    s.add_argument("-D", type=int, required=True)
    s.set_defaults(func=cmd_twist_lratio)
    s = sub.add_parser("brandt", parents=[common], help="Brandt matrices and Gross vectors")
    s.add_argument("-N", type=int, required=True)
    s.add_argument("-D", type=int)
    s.add_argument("--matrices")
    s.add_argument("--gross", action="store_true")
    s.set_defaults(func=cmd_brandt)
    s = sub.add_parser("squareness", parents=[common], help="compare the two paths for every factor of level N")
    s.add_argument("-N", type=int, required=True)
    s.add_argument("-D", type=int, required=True)
    s.set_defaults(func=cmd_squareness)
    s = sub.add_parser("scan-conj25", parents=[common, scan], help="torsion versus Sha and Tamagawa numbers")
    s.add_argument("--bound", type=int, required=True, help="limit on N D^2")
    s.add_argument("--star", action="store_true", help="require (**) instead of gcd(N, D) = 1")
    s.set_defaults(func=cmd_scan_conj25)
    s = sub.add_parser("scan-star", parents=[common, scan], help="twists removing odd primes from Sha")
    s.add_argument("--conductor-bound", type=int, default=700)
    s.add_argument("--bound", type=int, default=130000, help="limit on N D^2")
    s.add_argument("--gcd", action="store_true", help="require gcd(N, D) = 1 instead of (**)")
    s.set_defaults(func=cmd_scan_star)
    s = sub.add_parser("table1", parents=[common, scan], help="the four published twists")
    s.set_defaults(func=cmd_table1)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        parser.error(str(exc))
    except (KeyError, dbm.ParseError, dbm.ValidationError, nf.NoMatch, bm.NotPrime, ms.NotPrime,
            bm.NotCoprime, rl.NotFundamental, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
