"""Command-line interface.

Subcommands:
    fetch           download (or load from fixtures) newform data for levels
    genus           genus of the full Atkin-Lehner quotient X0*(N)
    quotient-genus  genus of X0*(N)/<V2> or X0*(N)/<V3>
    count           points of X0*(N) over a finite field, via Frobenius traces
    enum            points of a stored projective model, by enumeration
    sieve           run the level sieve and report survivors
    classify        gonality verdicts for one or more levels
    verify-paper    full pipeline, compared against the golden tables

Exit codes: 0 success, 1 verification mismatch, 2 usage error,
3 network failure, 4 data-integrity failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .arith import factorize, is_prime_power
from .config import Config
from .errors import DataIntegrityError, NetworkError, UsageError
from .ffgeom import ExtensionField, count_projective_points, load_model
from .newforms import fetch_level, load_database
from .pointcount import count_points
from .spectra import (decompose_jacobian_star, genus_x0star,
                      v2_quotient_genus, v3_quotient_genus)
from .classify import classify_levels, load_facts, sieve, verify_tables


def _config(args) -> Config:
    cfg = Config()
    if getattr(args, "offline", False):
        cfg.offline = True
    if getattr(args, "workers", None):
        cfg.workers = args.workers
    return cfg


def _emit(args, doc, text_lines):
    """JSON to --out (or stdout with --json), otherwise a human table."""
    out_path = getattr(args, "out", None)
    if out_path:
        with open(out_path, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print("wrote %s" % out_path)
    elif getattr(args, "json", False):
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        for line in text_lines:
            print(line)


def _parse_q(args) -> tuple[int, int]:
    """Resolve --q / --p / --n into a prime power (p, n)."""
    if args.q is not None:
        if args.p is not None or args.n != 1:
            raise UsageError("--q cannot be combined with --p/--n")
        q = args.q
        if q < 2 or not is_prime_power(q):
            raise UsageError("--q must be a prime power, got %d" % q)
        (p, n), = factorize(q)
        return p, n
    if args.p is None:
        raise UsageError("either --q or --p is required")
    if not is_prime_power(args.p) or factorize(args.p)[0][1] != 1:
        raise UsageError("--p must be prime, got %d" % args.p)
    return args.p, args.n


# --------------------------------------------------------------------------
# Subcommand handlers (each returns an exit code)


def _cmd_fetch(args) -> int:
    cfg = _config(args)
    lines = []
    doc = {}
    for level in args.levels:
        orbits = fetch_level(level, cfg)
        doc[level] = [{"label": o.label, "dim": o.dim,
                       "al_signs": list(o.al_signs)} for o in orbits]
        lines.append("level %d: %d orbits" % (level, len(orbits)))
        for o in orbits:
            signs = " ".join("w%d=%+d" % (p, s) for p, s in o.al_signs)
            lines.append("  %-14s dim %-3d %s" % (o.label, o.dim, signs))
    _emit(args, doc, lines)
    return 0


def _cmd_genus(args) -> int:
    cfg = _config(args)
    db = load_database([args.level], cfg)
    dec = decompose_jacobian_star(args.level, db)
    doc = {"level": args.level, "genus": dec.genus,
           "constituents": [{"label": o.label, "dim": o.dim, "multiplicity": m}
                            for o, m in dec.constituents]}
    lines = ["genus of X0*(%d) = %d" % (args.level, dec.genus)]
    if args.decompose:
        for o, m in dec.constituents:
            lines.append("  %-14s dim %-3d x %d" % (o.label, o.dim, m))
    _emit(args, doc, lines)
    return 0


def _cmd_quotient_genus(args) -> int:
    cfg = _config(args)
    db = load_database([args.level], cfg)
    fn = v2_quotient_genus if args.kind == "v2" else v3_quotient_genus
    g = fn(args.level, db)
    doc = {"level": args.level, "involution": args.kind, "quotient_genus": g}
    _emit(args, doc, ["genus of X0*(%d)/<%s> = %d"
                      % (args.level, args.kind.upper(), g)])
    return 0


def _cmd_count(args) -> int:
    cfg = _config(args)
    p, n = _parse_q(args)
    db = load_database([args.level], cfg)
    c = count_points(args.level, p, n, db)
    doc = {"level": args.level, "p": p, "n": n, "q": p ** n, "count": c}
    _emit(args, doc, ["#X0*(%d)(F_%d) = %d" % (args.level, p ** n, c)])
    return 0


def _cmd_enum(args) -> int:
    p, n = _parse_q(args)
    model = load_model(args.model)
    c = count_projective_points(model, ExtensionField(p, n))
    doc = {"model": args.model, "p": p, "n": n, "q": p ** n, "count": c}
    _emit(args, doc, ["%s: %d points over F_%d" % (args.model, c, p ** n)])
    return 0


def _cmd_sieve(args) -> int:
    cfg = _config(args)
    report = sieve(cfg, max_level=args.max_level)
    doc = report.to_json()
    lines = [
        "levels <= %d, composite and not a prime power" % report.max_level,
        "genus <= 3:            %5d dropped" % len(report.genus_le3),
        "genus 4:               %5d dropped" % len(report.genus4),
        "hyperelliptic/trigonal:%5d dropped" % len(report.ht_dropped),
        "survivors:             %5d" % len(report.survivors),
        "gonality-bound sieve:  %5d dropped" % len(report.abramovich_eliminated),
        "final survivors:       %5d" % len(report.final_survivors),
    ]
    if not report.complete:
        lines.append("WARNING: incomplete (missing data for %d levels)"
                     % len(report.missing_data))
    _emit(args, doc, lines)
    return 0 if report.complete else 1


def _cmd_classify(args) -> int:
    cfg = _config(args)
    facts = load_facts(cfg.facts_path)
    db = load_database(args.levels, cfg)
    verdicts = classify_levels(args.levels, db, facts,
                               schedule=cfg.schedule, workers=cfg.workers)
    doc = [v.to_json() for v in verdicts]
    lines = ["%6s %6s %-12s %-12s %s"
             % ("level", "genus", "gon_Q", "gon_C", "status")]
    for v in verdicts:
        def fmt(pair):
            lo, hi = pair
            if hi is not None and lo == hi:
                return str(lo)
            return "[%s, %s]" % (lo, hi if hi is not None else "?")
        lines.append("%6d %6d %-12s %-12s %s"
                     % (v.level, v.genus, fmt(v.gon_q), fmt(v.gon_c),
                        "resolved" if v.resolved else "open"))
        if args.explain:
            for f in v.chain:
                lines.append("         %s gon_%s %s %d  (%s)"
                             % ("", f.field, f.kind, f.value, f.provenance))
    _emit(args, doc, lines)
    return 0


def _verification_scope(cfg: Config) -> tuple[list[int], "SieveReport"]:
    report = sieve(cfg)
    scope = set(report.final_survivors)
    with open("%s/thm_trigonal.json" % cfg.golden_dir) as fh:
        scope.update(json.load(fh)["levels"])
    for name in ("thm_tetragonal_q.json", "thm_tetragonal_c_only.json"):
        with open("%s/%s" % (cfg.golden_dir, name)) as fh:
            for row in json.load(fh)["rows"].values():
                scope.update(row)
    with open("%s/genus_anchors.json" % cfg.golden_dir) as fh:
        scope.update(json.load(fh)["genus4_section2_printed"])
    # levels the tables leave open, plus those covered only by errata
    scope.update((279, 316, 344, 366, 378, 620, 2040))
    return sorted(scope), report


def _cmd_verify_paper(args) -> int:
    cfg = _config(args)
    scope, sieve_report = _verification_scope(cfg)
    facts = load_facts(cfg.facts_path)
    db = load_database(scope, cfg)
    verdicts = classify_levels(scope, db, facts,
                               schedule=cfg.schedule, workers=cfg.workers)
    report = verify_tables(verdicts, cfg.golden_dir,
                           "%s/errata.json" % cfg.golden_dir)
    report["sieve"] = sieve_report.to_json()
    lines = ["classified %d levels" % len(verdicts)]
    for name, tbl in report["tables"].items():
        lines.append("%-18s golden %3d  computed %3d  diffs %d"
                     % (name, tbl["golden_size"], tbl["computed_size"],
                        len(tbl["diffs"])))
        for d in tbl["diffs"]:
            lines.append("    level %d (%s): %s" %
                         (d["level"], d["direction"],
                          d["covered_by"] or "NOT COVERED"))
    for lvl, info in sorted(report["open_levels"].items(), key=lambda kv: int(kv[0])):
        lines.append("open level %s: gon_Q %s  gon_C %s"
                     % (lvl, info["gon_q"], info["gon_c"]))
    lines.append("verification %s" % ("OK" if report["ok"] else "FAILED"))
    _emit(args, report, lines)
    return 0 if report["ok"] else 1


# --------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="alq",
        description="Gonality classification for Atkin-Lehner quotient "
                    "modular curves X0*(N).")
    parser.add_argument("--offline", action="store_true",
                        help="never open a network connection")
    parser.add_argument("--json", action="store_true",
                        help="emit JSON on stdout instead of a table")
    parser.add_argument("--out", metavar="FILE",
                        help="write JSON output to FILE")
    parser.add_argument("--workers", type=int, default=None,
                        help="worker threads for sieve/classify/verify")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fetch", help="load newform orbit data for levels")
    p.add_argument("levels", type=int, nargs="+")
    p.set_defaults(fn=_cmd_fetch)

    p = sub.add_parser("genus", help="genus of X0*(N)")
    p.add_argument("level", type=int)
    p.add_argument("--decompose", action="store_true",
                   help="also print the Jacobian decomposition")
    p.set_defaults(fn=_cmd_genus)

    p = sub.add_parser("quotient-genus",
                       help="genus of the V2 or V3 quotient of X0*(N)")
    p.add_argument("level", type=int)
    p.add_argument("--kind", choices=("v2", "v3"), required=True)
    p.set_defaults(fn=_cmd_quotient_genus)

    p = sub.add_parser("count", help="count points of X0*(N) over F_q")
    p.add_argument("level", type=int)
    p.add_argument("--q", type=int, help="prime power q")
    p.add_argument("--p", type=int, help="prime (with --n)")
    p.add_argument("--n", type=int, default=1, help="extension degree")
    p.set_defaults(fn=_cmd_count)

    p = sub.add_parser("enum",
                       help="enumerate points of a projective model file")
    p.add_argument("model", help="path to a .model file")
    p.add_argument("--q", type=int, help="prime power q")
    p.add_argument("--p", type=int, help="prime (with --n)")
    p.add_argument("--n", type=int, default=1, help="extension degree")
    p.set_defaults(fn=_cmd_enum)

    p = sub.add_parser("sieve", help="run the level sieve")
    p.add_argument("--max-level", type=int, default=None)
    p.set_defaults(fn=_cmd_sieve)

    p = sub.add_parser("classify", help="gonality verdicts for levels")
    p.add_argument("levels", type=int, nargs="+")
    p.add_argument("--explain", action="store_true",
                   help="print the certificate chain for each level")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("verify-paper",
                       help="full pipeline against the golden tables")
    p.set_defaults(fn=_cmd_verify_paper)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; keep both
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return 2
    except NetworkError as exc:
        print("network error: %s" % exc, file=sys.stderr)
        return 3
    except DataIntegrityError as exc:
        print("data error: %s" % exc, file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
