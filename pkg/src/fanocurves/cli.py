"""Command line driver: ``fanocurves <verb> ...``.

Exit codes: 0 success, 1 usage or I/O error, 2 invariant violation (including
a failed selftest), 3 parse error, 4 group closure cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from collections.abc import Sequence
from pathlib import Path

from . import catalog, discovery, geometry, groups, isogeny, linalg
from .errors import CapExceeded, FanoCurvesError, GeometryError, InadmissibleParameters, InvariantViolation, ParseError
from .field import format_coeff, is_prime, parse_coeff
from .geometry import ProjectivePoint
from .poly import Cubic, Poly, cubic_from_text, cubic_to_text

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3, 4

PLANE_VARS = ("s", "t", "r")

LOWER_BOUND_NOTE = (
    "curve set found from the default candidates and saturation; "
    "for a cubic that is not a pinned catalog instance it is a lower bound"
)


class UsageError(Exception):
    pass


def parse_cubic(path: str | Path) -> Cubic:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    return cubic_from_text(text)


def read_seeds(path: str | Path) -> list[ProjectivePoint]:
    """One point per line: five coefficients separated by commas and/or
    whitespace, optionally in parentheses.  ``#`` starts a comment."""
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    points = []
    for lineno, raw in enumerate(lines, 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        body = body.strip("()[] ")
        fields = [t for t in re.split(r"[,\s]+", body) if t]
        if len(fields) != 5:
            raise ParseError(f"expected 5 coordinates, got {len(fields)}", lineno)
        coords = []
        for tok in fields:
            try:
                coords.append(parse_coeff(tok))
            except ParseError as exc:
                raise ParseError(f"bad coordinate {tok!r}: {exc}", lineno, raw.index(tok) + 1) from None
        if all(c.is_zero() for c in coords):
            raise ParseError("the zero vector is not a projective point", lineno)
        points.append(ProjectivePoint(coords))
    return points


def _seeds(option: str) -> list[ProjectivePoint] | None:
    return None if option == "default" else read_seeds(option)


def scan_warnings(f: Poly, prime: int) -> list[str]:
    if not prime:
        return []
    witness = geometry.singular_scan(f, prime)
    if witness is None:
        return []
    pt = ", ".join(geometry.format_witness(witness))
    return [
        f"reduction mod {prime} is singular at ({pt}): either the cubic is singular "
        f"or {prime} is a prime of bad reduction"
    ]


def _model_str(m: Poly) -> str:
    return m.to_str(PLANE_VARS)


def build_report(f: Poly, cfg: discovery.Configuration, warnings: Sequence[str], violations: Sequence[str] = (), timings: dict | None = None) -> dict:
    curves = [
        {
            "label": c.label,
            "vertex": c.vertex.point.to_strings(),
            "plane_model": _model_str(c.plane_model),
        }
        for c in cfg.curves
    ]
    report = {
        "input_digest": catalog.cubic_digest(f),
        "cubic": f.to_str(),
        "curves": curves,
        "n_S": cfg.n_s,
        "intersection_matrix": cfg.matrix,
        "graphs": {
            "coxeter": [list(e) for e in cfg.coxeter.edges],
            "incidence": [list(e) for e in cfg.incidence.edges],
        },
        "group": cfg.group.as_dict(),
        "class_label": cfg.class_label,
        "complete": cfg.complete,
        "warnings": list(warnings),
        "violations": list(violations),
    }
    if isinstance(cfg.classification, groups.Unclassified):
        report["classification_note"] = cfg.classification.diagnostic
    if timings is not None:
        report["timings"] = {k: round(v, 4) for k, v in timings.items()}
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_text(report: dict) -> str:
    lines = []
    if "input_digest" in report:
        lines.append(f"input: {report['input_digest']}")
    if "class_label" in report:
        lines.append(f"class: {report['class_label']}  n_S = {report['n_S']}  complete = {str(report['complete']).lower()}")
    if "group" in report:
        g = report["group"]
        lines.append(
            f"group: order {g['order']}, {g['reflection_count']} reflections, "
            f"{g['generator_count']} generators, preserves F: {str(g['character_trivial']).lower()}"
        )
    for c in report.get("curves", []):
        lines.append(f"  {c['label']}  ({', '.join(c['vertex'])})  model: {c.get('plane_model', '')}".rstrip())
    if "intersection_matrix" in report:
        lines.append("intersection matrix:")
        for row in report["intersection_matrix"]:
            lines.append("  " + " ".join(f"{v:2d}" for v in row))
    if "graphs" in report:
        for flavor in ("coxeter", "incidence"):
            edges = report["graphs"][flavor]
            lines.append(f"{flavor} graph: {len(edges)} edges")
            lines.extend(f"  {a} -- {b}" for a, b in edges)
    for w in report.get("warnings", []):
        lines.append(f"warning: {w}")
    for v in report.get("violations", []):
        lines.append(f"violation: {v}")
    if "timings" in report:
        lines.append("timings: " + ", ".join(f"{k} {v}s" for k, v in report["timings"].items()))
    return "\n".join(lines) + "\n"


def emit(report: dict, fmt: str) -> None:
    sys.stdout.write(dumps(report) if fmt == "json" else render_text(report))


def run_pipeline(path: str, args) -> tuple[Cubic, discovery.Configuration, dict, list[str], list[str]]:
    timings: dict[str, float] = {}
    f = parse_cubic(path)
    t = time.perf_counter()
    warnings = scan_warnings(f, args.scan_prime)
    timings["singular_scan"] = time.perf_counter() - t
    pinned_id = catalog.is_pinned_instance(f) if args.seeds == "default" else None
    t = time.perf_counter()
    cfg = discovery.analyze(f, seeds=_seeds(args.seeds), max_order=args.max_order, complete=pinned_id is not None)
    timings["pipeline"] = time.perf_counter() - t
    if not cfg.complete:
        warnings.append(LOWER_BOUND_NOTE)
    t = time.perf_counter()
    violations = discovery.configuration_violations(cfg)
    timings["invariants"] = time.perf_counter() - t
    return f, cfg, timings, warnings, violations


def cmd_verify(args) -> int:
    f, cfg, timings, warnings, violations = run_pipeline(args.cubic, args)
    emit(build_report(f, cfg, warnings, violations, timings if args.timings else None), args.format or "json")
    return EXIT_INVARIANT if violations else EXIT_OK


def cmd_classify(args) -> int:
    f, cfg, timings, warnings, violations = run_pipeline(args.cubic, args)
    full = build_report(f, cfg, warnings, violations, timings if args.timings else None)
    keep = ("input_digest", "class_label", "n_S", "group", "complete", "warnings", "violations", "classification_note", "timings")
    emit({k: full[k] for k in keep if k in full}, args.format or "json")
    return EXIT_INVARIANT if violations else EXIT_OK


def cmd_intersections(args) -> int:
    f, cfg, timings, warnings, violations = run_pipeline(args.cubic, args)
    full = build_report(f, cfg, warnings, violations, timings if args.timings else None)
    full["curves"] = [{"label": c["label"], "vertex": c["vertex"]} for c in full["curves"]]
    keep = ("input_digest", "curves", "n_S", "intersection_matrix", "graphs", "warnings", "violations", "timings")
    emit({k: full[k] for k in keep if k in full}, args.format or "json")
    return EXIT_INVARIANT if violations else EXIT_OK


def cmd_planemodels(args) -> int:
    f = parse_cubic(args.cubic)
    warnings = scan_warnings(f, args.scan_prime)
    vertices = discovery.saturate(f, _seeds(args.seeds))
    curves = []
    for k, v in enumerate(vertices):
        basis = geometry.plane_basis(v)
        curves.append(
            {
                "label": discovery.curve_label(v.point, k),
                "vertex": v.point.to_strings(),
                "plane_basis": [[format_coeff(c) for c in u] for u in basis],
                "plane_model": _model_str(geometry.plane_model(f, v)),
            }
        )
    report = {"input_digest": catalog.cubic_digest(f), "curves": curves, "warnings": warnings}
    emit(report, args.format or "json")
    return EXIT_OK


def cmd_isogeny(args) -> int:
    f = parse_cubic(args.cubic)
    vertices = discovery.saturate(f, _seeds(args.seeds))
    by_label = {discovery.curve_label(v.point, k): v for k, v in enumerate(vertices)}
    missing = [lab for lab in args.labels if lab not in by_label]
    if missing:
        raise UsageError(f"unknown curve label(s) {', '.join(missing)}; known: {', '.join(by_label)}")
    mats = [isogeny.n_matrix(by_label[lab], lab) for lab in args.labels]
    total = isogeny.differential_sum(mats)
    det = linalg.det(total)
    norm = isogeny.degree_norm(total)
    if (args.format or "text") == "json":
        emit(
            {
                "curves": list(args.labels),
                "determinant": format_coeff(det),
                "degree_norm": str(norm),
                "differential": [[format_coeff(c) for c in row] for row in total],
            },
            "json",
        )
    else:
        sys.stdout.write(f"degree_norm = {norm}\n")
    return EXIT_OK


def _parse_param(fam: catalog.FamilySpec, item: str):
    if "=" not in item:
        raise UsageError(f"parameter {item!r} must look like name=value")
    name, value = item.split("=", 1)
    param = {p.name: p for p in fam.params}.get(name)
    if param is None:
        known = ", ".join(p.name for p in fam.params) or "none"
        raise UsageError(f"{fam.id} has no parameter {name!r} (parameters: {known})")
    if param.kind == "scalar":
        return name, parse_coeff(value)
    if param.kind == "linear":
        return name, tuple(parse_coeff(t) for t in value.split(","))
    return name, parse_cubic(value.removeprefix("@"))


def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = []
        for fam in catalog.FAMILIES.values():
            params = ", ".join(f"{p.name}={catalog.param_str(fam.pinned[p.name])}" for p in fam.params)
            rows.append(
                {
                    "id": fam.id,
                    "slug": fam.slug,
                    "n_S": fam.row.n_s,
                    "order": fam.row.order,
                    "irreducible": fam.row.irreducible,
                    "pinned": params,
                    "form": fam.notes,
                }
            )
        if (args.format or "text") == "json":
            emit({"families": rows}, "json")
        else:
            for r in rows:
                pinned = f"  [{r['pinned']}]" if r["pinned"] else ""
                sys.stdout.write(f"{r['id']:<20} {r['slug']:<12} n_S={r['n_S']:<3} order={r['order']:<5} {r['form']}{pinned}\n")
        return EXIT_OK
    if not args.family:
        raise UsageError("catalog instantiate needs a family id or slug")
    try:
        fam = catalog.family(args.family)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    params = dict(_parse_param(fam, item) for item in args.param or [])
    f = catalog.instantiate(fam.id, params)
    text = cubic_to_text(f)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from . import acceptance

    results = acceptance.run_all()
    for r in results:
        sys.stdout.write(r.line() + "\n")
    failed = [r for r in results if not r.passed]
    sys.stdout.write(f"{len(results) - len(failed)}/{len(results)} criteria passed\n")
    return EXIT_INVARIANT if failed else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _max_order(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _prime_or_zero(value: str) -> int:
    n = int(value)
    if n != 0 and not is_prime(n):
        raise argparse.ArgumentTypeError(f"{n} is not prime (use 0 to disable the scan)")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seeds", default="default", help="'default' or a file with one candidate point per line")
    common.add_argument("--max-order", type=_max_order, default=None, help=f"group closure cap (default {groups.DEFAULT_MAX_ORDER}, env {groups.MAX_ORDER_ENV})")
    common.add_argument("--scan-prime", type=_prime_or_zero, default=7, help="prime for the smoothness falsifier, 0 disables (default 7)")
    common.add_argument("--format", choices=("json", "text"), default=None)
    common.add_argument("--timings", action="store_true", help="include stage timings in the report (makes output nondeterministic)")

    parser = _Parser(prog="fanocurves", description="Elliptic curve configurations of cubic threefolds over Q(w).")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    for verb, fn, help_ in (
        ("verify", cmd_verify, "full report with invariant checks"),
        ("classify", cmd_classify, "class label, curve count and group summary"),
        ("intersections", cmd_intersections, "intersection matrix and graphs"),
        ("planemodels", cmd_planemodels, "plane cubic model of every curve"),
    ):
        p = sub.add_parser(verb, parents=[common], help=help_)
        p.add_argument("cubic")
        p.set_defaults(func=fn)
    p = sub.add_parser("isogeny", parents=[common], help="degree norm of the summed differential of five curves")
    p.add_argument("cubic")
    p.add_argument("labels", nargs=5, metavar="LABEL")
    p.set_defaults(func=cmd_isogeny)
    p = sub.add_parser("catalog", help="list families or write a family member as a cubic file")
    p.add_argument("action", choices=("list", "instantiate"))
    p.add_argument("family", nargs="?")
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="scalar, comma-separated linear coefficients, or @file.cubic")
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=("json", "text"), default=None)
    p.set_defaults(func=cmd_catalog)
    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InadmissibleParameters as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InvariantViolation, GeometryError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except FanoCurvesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
