"""Command-line interface.

Subcommands: validate, decompose, relations, diagram, check, generate.
Exit status is 0 on success, 1 when validation findings (or property
failures) are present, and 2 on usage errors.  The environment variable
FOLIAGE_SEED overrides --seed where one is accepted.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from fractions import Fraction

from . import geometry, realize, relations
from .checks import run_check
from .decompose import reduce_scenario
from .generator import GeneratorConfig, generate_scenario
from .model import (
    FoliageError,
    Scenario,
    ScenarioParseError,
    emit_scenario,
    parse_scenario,
    validate,
)

USAGE_ERROR = 2
FINDINGS = 1


def _load(path: str) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise SystemExit(_usage_error(f"cannot read {path!r}: {exc.strerror}"))
    return parse_scenario(text)


def _usage_error(message: str) -> int:
    print(f"foliage: {message}", file=sys.stderr)
    return USAGE_ERROR


def _require_valid(s: Scenario) -> None:
    report = validate(s)
    if not report.ok:
        for f in report.findings:
            print(f"finding: {f.code}: {f.message}", file=sys.stderr)
        raise SystemExit(FINDINGS)


def _cmd_validate(args) -> int:
    s = _load(args.file)
    report = validate(s)
    if args.json:
        doc = {"findings": [{"code": f.code, "message": f.message} for f in report.findings]}
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for f in report.findings:
            print(f"finding: {f.code}: {f.message}")
        print(f"{len(report.findings)} findings")
    return 0 if report.ok else FINDINGS


def _cmd_decompose(args) -> int:
    s = _load(args.file)
    _require_valid(s)
    r = reduce_scenario(s)
    if args.json:
        doc = {
            "maxdomains": [
                {
                    "id": m.id,
                    "chain": list(m.chain),
                    "left": list(m.left),
                    "right": list(m.right),
                    "crossers": sorted(m.crossers),
                    "internal": list(m.internal),
                    "shed": list(m.shed),
                }
                for m in r.maxdomains
            ],
            "critical": sorted(r.critical),
            "edges": [list(e) for e in r.forest_edges],
            "roles": {
                mid: {
                    "alpha": sorted(rr.alpha),
                    "omega": sorted(rr.omega),
                    "in": sorted(rr.incoming),
                    "out": sorted(rr.outgoing),
                }
                for mid, rr in r.roles
            },
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
        return 0
    print("maxdomains:")
    for m in r.maxdomains:
        print(
            f"  {m.id} chain=[{','.join(m.chain)}] left=[{','.join(m.left)}] "
            f"right=[{','.join(m.right)}] crossers={{{','.join(sorted(m.crossers))}}}"
            + (f" shed=[{','.join(m.shed)}]" if m.shed else "")
        )
    print(f"critical: {{{','.join(sorted(r.critical))}}}")
    print("edges:")
    for a, leaf, b in r.forest_edges:
        print(f"  {a} -[{leaf}]-> {b}")
    print("roles:")
    for mid, rr in r.roles:
        print(
            f"  {mid} alpha={{{','.join(sorted(rr.alpha))}}} omega={{{','.join(sorted(rr.omega))}}} "
            f"in={{{','.join(sorted(rr.incoming))}}} out={{{','.join(sorted(rr.outgoing))}}}"
        )
    return 0


def _pair_line(s: Scenario, a: str, b: str) -> str:
    left = relations.compare_left(s, a, b)
    right = relations.compare_right(s, a, b)
    weak = relations.weak_transverse(s, a, b)
    return f"L: {left}; R: {right}; weak: {str(weak).lower()}"


def _cmd_relations(args) -> int:
    s = _load(args.file)
    _require_valid(s)
    ids = sorted(o.id for o in s.orbits)
    if args.pair:
        a, b = args.pair
        if a not in ids or b not in ids:
            return _usage_error("unknown orbit in --pair")
        print(_pair_line(s, a, b))
        return 0
    rows = []
    for a, b in itertools.combinations(ids, 2):
        rows.append(
            {
                "pair": [a, b],
                "left": str(relations.compare_left(s, a, b)),
                "right": str(relations.compare_right(s, a, b)),
                "forward_asymptotic": relations.plus_asymptotic(s, a, b),
                "backward_asymptotic": relations.minus_asymptotic(s, a, b),
                "weak": relations.weak_transverse(s, a, b),
                "classic": relations.classic_transverse(s, a, b),
            }
        )
    if args.json:
        print(json.dumps({"pairs": rows}, sort_keys=True, indent=2))
        return 0
    for row in rows:
        a, b = row["pair"]
        print(
            f"{a},{b} L={row['left']} R={row['right']} "
            f"+~={str(row['forward_asymptotic']).lower()} -~={str(row['backward_asymptotic']).lower()} "
            f"weak={str(row['weak']).lower()} classic={str(row['classic']).lower()}"
        )
    return 0


def _cmd_diagram(args) -> int:
    s = _load(args.file)
    _require_valid(s)
    r = reduce_scenario(s)
    plans = realize.all_port_plans(s, r)
    matrix = realize.crossing_matrix(s, r)
    order = realize.boundary_order(s, r) if r.maxdomains else None
    if args.svg or args.chord:
        lay = geometry.layout(s, r, plans)
        routed = geometry.route(s, r, lay)
        if args.svg:
            with open(args.svg, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(geometry.emit_svg(lay, routed, roles=r))
        if args.chord:
            if order is None:
                return _usage_error("chord diagram requires at least one orbit")
            with open(args.chord, "w", encoding="utf-8", newline="\n") as handle:
                handle.write(geometry.emit_chord_svg(geometry.chord_diagram(order)))
    ids = sorted(o.id for o in s.orbits)
    if args.format == "matrix":
        if args.json:
            doc = {
                "pairs": [
                    {"pair": [a, b], "crossings": matrix.count(a, b), "witness": matrix.witness(a, b)}
                    for a, b in itertools.combinations(ids, 2)
                ]
            }
            print(json.dumps(doc, sort_keys=True, indent=2))
        else:
            for a, b in itertools.combinations(ids, 2):
                witness = matrix.witness(a, b)
                print(f"{a},{b} {matrix.count(a, b)}" + (f" witness={witness}" if witness else ""))
    else:
        if order is None:
            return _usage_error("boundary order requires at least one orbit")
        if args.json:
            print(json.dumps({"ends": [list(e) for e in order.ends]}, sort_keys=True, indent=2))
        else:
            print(" ".join(f"({orbit},{kind})" for orbit, kind in order.ends))
    return 0


def _seed(args) -> int:
    env = os.environ.get("FOLIAGE_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise SystemExit(_usage_error(f"FOLIAGE_SEED must be an integer, got {env!r}")) from exc
    return args.seed


def _config(args) -> GeneratorConfig:
    try:
        bias = Fraction(args.weak_bias)
    except (ValueError, ZeroDivisionError) as exc:
        raise SystemExit(_usage_error(f"invalid weak bias {args.weak_bias!r}")) from exc
    return GeneratorConfig(
        seed=_seed(args),
        max_domains=args.max_domains,
        max_orbits=args.max_orbits,
        max_boundary=args.max_boundary,
        weak_bias=bias,
    )


def _cmd_generate(args) -> int:
    s = generate_scenario(_config(args))
    sys.stdout.write(emit_scenario(s))
    return 0


def _cmd_check(args) -> int:
    report = run_check(_config(args), args.cases)
    if args.json:
        sys.stdout.write(report.render_json())
    else:
        sys.stdout.write(report.render_text())
    print(f"elapsed: {report.elapsed:.3f}s", file=sys.stderr)
    return 0 if report.ok else FINDINGS


def _add_generator_args(sub) -> None:
    sub.add_argument("--seed", type=int, default=1)
    sub.add_argument("--max-domains", type=int, default=10)
    sub.add_argument("--max-orbits", type=int, default=8)
    sub.add_argument("--max-boundary", type=int, default=4)
    sub.add_argument("--weak-bias", default="1/2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="foliage", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("validate", help="check a scenario file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_validate)

    p = subs.add_parser("decompose", help="maximal domains, critical leaves, roles")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_decompose)

    p = subs.add_parser("relations", help="pairwise relation matrices")
    p.add_argument("file")
    p.add_argument("--pair", nargs=2, metavar=("ORBIT", "ORBIT"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_relations)

    p = subs.add_parser("diagram", help="crossing matrix, boundary order, SVG output")
    p.add_argument("file")
    p.add_argument("--format", choices=("matrix", "boundary"), default="matrix")
    p.add_argument("--svg")
    p.add_argument("--chord")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_diagram)

    p = subs.add_parser("check", help="run the property suite over generated scenarios")
    _add_generator_args(p)
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=_cmd_check)

    p = subs.add_parser("generate", help="emit one generated scenario")
    _add_generator_args(p)
    p.add_argument("--json", action="store_true")  # the canonical output is JSON already
    p.set_defaults(fn=_cmd_generate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.fn(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    except ScenarioParseError as exc:
        print(f"finding: parse: {exc}", file=sys.stderr)
        return FINDINGS
    except FoliageError as exc:
        print(f"foliage: {exc}", file=sys.stderr)
        return FINDINGS


if __name__ == "__main__":
    raise SystemExit(main())
