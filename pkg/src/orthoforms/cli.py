"""Command-line front end: JSON in, JSON or plain text out.

Exit codes form a stable contract: 0 success, 1 internal check failure,
2 input validation error, 3 missing data.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction as Q

from . import classify, lattice as lattice_mod, roots as roots_mod, series as series_mod, weyl as weyl_mod
from .series import parse_q, q_str

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2
EXIT_MISSING = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _thread_cap() -> int:
    raw = os.environ.get("ORTHOFORMS_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        raise CliError(f"ORTHOFORMS_THREADS must be a positive integer, got {raw!r}")
    if cap < 1:
        raise CliError(f"ORTHOFORMS_THREADS must be a positive integer, got {raw!r}")
    return cap  # all computations are single-threaded today; the cap is honored trivially


def _parse_rect(text: str) -> tuple[Q, Q]:
    parts = text.split(",")
    if len(parts) != 2:
        raise CliError(f"--rect expects 'A,T', got {text!r}")
    try:
        return parse_q(parts[0]), parse_q(parts[1])
    except (ValueError, ZeroDivisionError):
        raise CliError(f"cannot parse rectangle bounds {text!r}")


def _load_lattice(ref: str) -> lattice_mod.Lattice:
    try:
        return lattice_mod.load_lattice(ref)
    except FileNotFoundError:
        raise CliError(f"no such file: {ref}")
    except KeyError as exc:
        raise CliError(str(exc))
    except (ValueError, json.JSONDecodeError) as exc:
        raise CliError(f"invalid lattice {ref!r}: {exc}")


def _load_qzero(path: str) -> weyl_mod.QZeroData:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise CliError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise CliError(f"invalid JSON in {path}: {exc}")
    if not isinstance(doc, dict) or "lattice" not in doc:
        raise CliError(f"{path}: coefficient file needs a 'lattice' field")
    lat_ref = doc["lattice"]
    lat = _load_lattice(lat_ref) if isinstance(lat_ref, str) else lattice_mod.lattice_from_json(lat_ref)
    raw = doc.get("coeffs", [])
    entries: dict[tuple[int, tuple], int] = {}
    for item in raw:
        try:
            n = int(item["n"])
            coords = tuple(parse_q(str(v)) for v in item["l"])
            f = int(item["f"])
        except (KeyError, ValueError, TypeError) as exc:
            raise CliError(f"{path}: bad coefficient entry {item!r}: {exc}")
        entries[(n, coords)] = f
    # structural completeness of the stored layer: principal part and
    # evenness partners must be present
    missing = []
    zero = tuple(Q(0) for _ in range(lat.rank))
    if entries.get((-1, zero)) != 1:
        missing.append((-1, zero))
    for (n, coords), f in entries.items():
        neg = (n, tuple(-x for x in coords))
        if f and entries.get(neg, 0) != f:
            missing.append(neg)
    if missing:
        listing = ", ".join(
            f"(n={n}, l=[{', '.join(q_str(x) for x in coords)}])" for n, coords in sorted(missing)
        )
        raise CliError(f"{path}: missing required coefficients: {listing}", EXIT_MISSING)
    k_raw = doc.get("k", "symbolic")
    k = None if k_raw == "symbolic" else Q(str(k_raw))
    try:
        return weyl_mod.QZeroData(lat, entries, k)
    except ValueError as exc:
        raise CliError(f"{path}: {exc}")


def _emit(doc, args) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        print(json.dumps(doc, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_lattice(args) -> int:
    lat = _load_lattice(args.ref)
    disc = lattice_mod.discriminant_group(lat)
    doc = {
        "label": lat.label,
        "rank": lat.rank,
        "determinant": lat.determinant,
        "even": lat.is_even,
        "positive_definite": lat.is_positive_definite,
        "discriminant_group": list(disc.elementary_divisors),
        "order": disc.order,
        "level": disc.level,
    }
    if args.format == "json":
        _emit(doc, args)
    else:
        print(f"lattice {lat.label or '(unlabelled)'}")
        print(f"  rank          {lat.rank}")
        print(f"  determinant   {lat.determinant}")
        print(f"  even          {'yes' if lat.is_even else 'no'}")
        print(f"  disc. group   {disc}")
        print(f"  order         {disc.order}")
        print(f"  level         {disc.level}")
    return EXIT_OK


def cmd_roots(args) -> int:
    lat = _load_lattice(args.ref)
    try:
        rd = roots_mod.detect_roots(lat, args.max_norm)
        comps = roots_mod.decompose(rd) if rd.roots else []
    except (ValueError, ArithmeticError) as exc:
        raise CliError(str(exc))
    reports = []
    for comp in comps:
        reports.append(
            {
                "type": comp.type_tag[0] if comp.type_tag[0] in "ABCD" else comp.type_tag,
                "rank": comp.rank,
                "d": comp.d,
                "scale": comp.scale,
                "roots": len(comp.roots),
                "coxeter": roots_mod.coxeter_number(comp),
                "modified_coxeter": _mc_field(comp),
                "subcase": comp.subcase,
                "short_div": comp.short_div,
                "long_div": comp.long_div,
            }
        )
    doc = {"lattice": lat.label, "total_roots": len(rd.roots), "components": reports}
    if args.format == "json":
        _emit(doc, args)
    else:
        print(f"{len(rd.roots)} reflective vectors up to norm {args.max_norm}")
        for rep in reports:
            mc = rep["modified_coxeter"]
            name = rep["type"]
            if name in ("A", "B", "C", "D"):
                name = f"{name}{rep['rank']}"
            print(
                f"  {name}({rep['scale']}): {rep['roots']} roots, "
                f"coxeter {rep['coxeter']}, modified {mc}"
            )
    return EXIT_OK


def _mc_field(comp) -> str | None:
    try:
        return q_str(roots_mod.modified_coxeter(comp))
    except roots_mod.SubcaseRequiredError:
        return None


def cmd_weyl(args) -> int:
    phi = _load_qzero(args.coeffs)
    report = weyl_mod.quadratic_weyl_constant(phi)
    if phi.k is None:
        if not report.ok:
            raise CliError(
                f"weight is symbolic and the sum rule failed: {report.reason}",
                EXIT_MISSING,
            )
        phi = phi.with_weight(weyl_mod.solve_weight(phi))
    wv = weyl_mod.weyl_vector(phi)
    d, sign = weyl_mod.character_data(phi)
    doc = {
        "A": q_str(wv.a),
        "B": [q_str(x) for x in wv.b],
        "C": q_str(wv.c),
        "weight": q_str(phi.k),
        "sum_rule_C": q_str(report.c) if report.ok else None,
        "sum_rule_failure": report.reason,
        "character_D": d,
        "character_sign": sign,
    }
    if args.format == "json":
        _emit(doc, args)
    else:
        print(f"A = {doc['A']}, B = [{', '.join(doc['B'])}], C = {doc['C']}")
        print(f"weight k = {doc['weight']}")
        if report.ok:
            print(f"sum rule: C = {doc['sum_rule_C']}")
        else:
            print(f"sum rule failed: {report.reason}")
        print(f"character: D = {d}, sign = {sign:+d}")
    return EXIT_OK


def cmd_borch(args) -> int:
    phi = _load_qzero(args.coeffs)
    rect = _parse_rect(args.rect)
    if phi.k is None:
        report = weyl_mod.quadratic_weyl_constant(phi)
        if not report.ok:
            raise CliError(
                f"weight is symbolic and the sum rule failed: {report.reason}",
                EXIT_MISSING,
            )
        phi = phi.with_weight(weyl_mod.solve_weight(phi))
    wv = weyl_mod.weyl_vector(phi)
    table = {}
    for (n, coords), f in phi.coefficient_table().items():
        table[(n, coords)] = f
    try:
        expansion = series_mod.expand_product(
            table, wv, rect, phi.lattice.rank, den=args.den
        )
    except series_mod.SeriesOverflowError as exc:
        raise CliError(str(exc), EXIT_INTERNAL)
    except ValueError as exc:
        raise CliError(str(exc))
    d, sign = weyl_mod.character_data(phi)
    print(f"A = {q_str(wv.a)}, B = [{', '.join(q_str(x) for x in wv.b)}], C = {q_str(wv.c)}")
    print(f"weight = {q_str(phi.k)}")
    print(f"character: D = {d}, chi(V) = {sign:+d}")
    print(f"terms stored: {len(expansion.terms)}")
    _emit(series_mod.series_to_json(expansion), args)
    return EXIT_OK


def cmd_jacobian(args) -> int:
    try:
        weights = [int(w) for w in args.weights.split(",")]
    except ValueError:
        raise CliError(f"--weights expects comma-separated integers, got {args.weights!r}")
    if len(weights) != len(args.series):
        raise CliError(
            f"{len(args.series)} series but {len(weights)} weights"
        )
    loaded = []
    for path in args.series:
        try:
            with open(path) as fh:
                loaded.append(series_mod.series_from_json(json.load(fh)))
        except FileNotFoundError:
            raise CliError(f"no such file: {path}")
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            raise CliError(f"invalid series file {path}: {exc}")
    forms = [series_mod.WeightedSeries(s, w) for s, w in zip(loaded, weights)]
    try:
        if args.syzygy:
            result = series_mod.syzygy_sum(forms)
        else:
            result = series_mod.jacobian(forms)
    except ValueError as exc:
        raise CliError(str(exc))
    s = forms[0].series.rank
    try:
        lead = result.leading_order()
        target = (Q(s + 1), Q(s + 1))
        meets = lead[0] >= target[0] and lead[1] >= target[1]
        print(f"leading order: q^{q_str(lead[0])} xi^{q_str(lead[1])}")
        print(f"meets (s+1, s+1) = ({s + 1}, {s + 1}): {'yes' if meets else 'no'}")
    except series_mod.ZeroSeriesError:
        print("vanishes to rectangle order")
    _emit(series_mod.series_to_json(result), args)
    return EXIT_OK


def cmd_classify(args) -> int:
    try:
        report = classify.full_table(args.max_rank)
        checks = classify.ledger_arithmetic_checks()
    except classify.ClassificationError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if report.unresolved:
        print(
            f"internal check failed: unresolved candidates "
            f"{[r.candidate.label for r in report.unresolved]}",
            file=sys.stderr,
        )
        return EXIT_INTERNAL
    if args.format == "json":
        doc = classify.report_to_json(report)
        doc["arithmetic_checks"] = [
            {"code": c.code, "statement": c.statement, "values": dict(c.values), "passed": c.passed}
            for c in checks
        ]
        _emit(doc, args)
    else:
        sys.stdout.write(classify.report_to_text(report))
        print("arithmetic checks: " + ", ".join(f"{c.code} ok" for c in checks))
    if report.complete and len(report.accepted) != 26:
        return EXIT_INTERNAL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthoforms",
        description="exact lattice, root-system and modular-form-product toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", help="inspect a lattice")
    p.add_argument("ref", help="JSON file path or builtin:NAME")
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("roots", help="detect and identify root systems")
    p.add_argument("ref")
    p.add_argument("--max-norm", type=int, default=2)
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("weyl", help="Weyl vector and weight of a coefficient file")
    p.add_argument("coeffs")
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("borch", help="expand the product of a coefficient file")
    p.add_argument("coeffs")
    p.add_argument("--rect", default="2,2", help="exactness rectangle 'A,T'")
    p.add_argument("--den", type=int, default=series_mod.DEFAULT_DEN)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_borch)

    p = sub.add_parser("jacobian", help="Jacobian determinant of series files")
    p.add_argument("series", nargs="+")
    p.add_argument("--weights", required=True, help="comma-separated weights")
    p.add_argument("--syzygy", action="store_true", help="alternating-sum mode")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_jacobian)

    p = sub.add_parser("classify", help="emit the 26-pair classification table")
    p.add_argument("--max-rank", type=int, default=8)
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_classify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _thread_cap()
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
