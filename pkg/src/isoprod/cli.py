"""Batch command-line front end.

Every invocation prints one JSON run report (or a CSV verdict table
with --csv) and exits 0 when all verdicts hold, 1 when some verdict is
false (the report then carries a witness), and 2 on input errors.
Reports are stable: identical inputs give identical output up to the
timing field.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import fileio
from .cantor import (
    cantor_decompose,
    in_cantor,
    in_scaled_cantor,
    rational_subspace_refutation,
    scaled_cantor_distance_witness,
    scaled_cantor_level_set,
    scaled_cantor_triple_refutation,
    three_point_search,
    transcendental_embed,
)
from .combiners import COMBINER_NAMES, named_combiner
from .continuation import (
    amenable_isotone_continuation,
    subadditive_envelope,
    sup_continuation,
)
from .errors import IsoprodError
from .fixtures import GENERATOR_KINDS, fixture_generate
from .metric import (
    ProductSpec,
    extract_product_function,
    metric_preserving_verdict,
    product_metric,
    unbounded_gauge,
    unbounded_witness,
    verify_metric,
)
from .modulus import difference_bound_holds, is_fixed_point, modulus, nonconstant_wrt
from .points import PointN
from .sampled import is_amenable, is_isotone, is_subadditive

LEVEL_ENV_VAR = "ISOPROD_LEVEL"


def _default_level(fallback: int) -> int:
    raw = os.environ.get(LEVEL_ENV_VAR)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise IsoprodError(f"{LEVEL_ENV_VAR}={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoprod",
        description="exact checks and constructions for isotone/subadditive "
        "functions, metric products, grid moduli and Cantor-set distances",
    )
    parser.add_argument("--csv", action="store_true", help="emit the verdict table as CSV")
    parser.add_argument("--json", action="store_true", help="emit the JSON report (default)")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("check", help="isotone / amenable / subadditive verdicts")
    p.add_argument("--function", required=True)

    for verb in ("extend-sup", "extend-amenable"):
        p = sub.add_parser(verb, help=f"evaluate the {verb.replace('-', ' ')} continuation")
        p.add_argument("--function", required=True)
        p.add_argument("--probe", action="append", default=[])
        p.add_argument("--probes", help="JSON file with an array of point arrays")

    p = sub.add_parser("envelope", help="subadditive envelope values with certificates")
    p.add_argument("--function", required=True)
    p.add_argument("--probe", action="append", default=[])
    p.add_argument("--probes")
    p.add_argument("--c", default="1", help="axis constant for unsupported axes")

    p = sub.add_parser("verify-metric", help="metric axioms on a candidate matrix")
    p.add_argument("--space", required=True)
    p.add_argument("--tol", default="0")

    p = sub.add_parser("product", help="product matrix from factors and a combiner")
    p.add_argument("--spec", help="product spec file")
    p.add_argument("--factor", action="append", default=[])
    p.add_argument("--combiner", choices=COMBINER_NAMES)
    p.add_argument("--combiner-file")
    p.add_argument("--cap", default="1")
    p.add_argument("--verify", action="store_true", help="also verify the metric axioms")

    p = sub.add_parser("extract", help="recover the combiner of a product metric")
    p.add_argument("--product", required=True)
    p.add_argument("--factor", action="append", default=[], required=False)
    p.add_argument("--out")

    p = sub.add_parser("witness-unbounded", help="pair exceeding a bound under the gauged ultrametric")
    p.add_argument("bound")

    p = sub.add_parser("omega", help="grid modulus of continuity at a box")
    p.add_argument("--grid", required=True)
    p.add_argument("--eps", required=True)

    p = sub.add_parser("fixed-point", help="is the grid function its own modulus")
    p.add_argument("--grid", required=True)

    p = sub.add_parser("lemma42", help="check |F(x)-F(y)| <= F(|x-y|) on the lattice")
    p.add_argument("--grid", required=True)

    p = sub.add_parser("nonconstant", help="nonconstancy w.r.t. one variable")
    p.add_argument("--grid", required=True)
    p.add_argument("--var", type=int, required=True)

    cantor = sub.add_parser("cantor", help="Cantor set membership and decompositions")
    cantor_sub = cantor.add_subparsers(dest="cantor_verb", required=True)
    p = cantor_sub.add_parser("member")
    p.add_argument("value")
    p = cantor_sub.add_parser("ce-member")
    p.add_argument("value")
    p = cantor_sub.add_parser("decompose")
    p.add_argument("value")
    p = cantor_sub.add_parser("ce-decompose")
    p.add_argument("value")
    p = cantor_sub.add_parser("refute-ce-triple")
    p.add_argument("--level", type=int, default=None)

    universal = sub.add_parser("universal", help="three-point line embeddings")
    universal_sub = universal.add_subparsers(dest="universal_verb", required=True)
    p = universal_sub.add_parser("search")
    p.add_argument("--set", dest="set_file")
    p.add_argument("--ce-level", type=int, default=None)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = sub.add_parser("embed", help="isometric shift of rationals into transcendentals")
    p.add_argument("--set", dest="set_file", required=True)

    p = sub.add_parser("fixture", help="deterministic fixture generation")
    p.add_argument("--kind", required=True, choices=GENERATOR_KINDS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--combiner", default="SUM", choices=COMBINER_NAMES)
    p.add_argument("--cap", default="1")
    p.add_argument("--dim", type=int)
    p.add_argument("--size", type=int)
    p.add_argument("--max-points", type=int, default=4)
    p.add_argument("--mode", default="raw", choices=("raw", "isotone", "amenable"))
    return parser


def _probes_from_args(args) -> list[PointN]:
    probes = [fileio.parse_point_string(s) for s in args.probe]
    if getattr(args, "probes", None):
        data = json.loads(Path(args.probes).read_text(encoding="utf-8"))
        probes.extend(fileio.parse_point(arr) for arr in data)
    if not probes:
        raise IsoprodError("no probes given; use --probe or --probes")
    return probes


def _point_witness(pair) -> list:
    return [fileio.format_point(p) for p in pair]


def _tolerance(text: str):
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def _run_check(args, inputs):
    f = fileio.load_sampled_function(args.function)
    inputs[args.function] = fileio.file_digest(args.function)
    verdicts = []
    iso_ok, iso_witness = is_isotone(f)
    verdicts.append(
        {
            "check": "isotone",
            "ok": iso_ok,
            **({"witness": _point_witness(iso_witness)} if iso_witness else {}),
        }
    )
    amen_ok, amen_witness = is_amenable(f)
    verdicts.append(
        {
            "check": "amenable",
            "ok": amen_ok,
            **({"witness": fileio.format_point(amen_witness)} if amen_witness else {}),
        }
    )
    if iso_ok:
        sub_ok, cert = is_subadditive(f)
        entry = {"check": "subadditive", "ok": sub_ok}
        if cert is not None:
            entry["witness"] = fileio.certificate_jsonable(cert)
        verdicts.append(entry)
    else:
        verdicts.append(
            {"check": "subadditive", "ok": False, "skipped": "requires an isotone function"}
        )
    return verdicts


def _run_extension(args, inputs, verb):
    f = fileio.load_sampled_function(args.function)
    inputs[args.function] = fileio.file_digest(args.function)
    verdicts = []
    for probe in _probes_from_args(args):
        if verb == "extend-sup":
            value = sup_continuation(f, probe)
            entry = {"check": f"extend-sup{probe}", "ok": True, "value": fileio.format_rational(value)}
        elif verb == "extend-amenable":
            value = amenable_isotone_continuation(f, probe)
            entry = {"check": f"extend-amenable{probe}", "ok": True, "value": fileio.format_rational(value)}
        else:
            value, cert = subadditive_envelope(f, probe, fileio.parse_rational(args.c))
            entry = {
                "check": f"envelope{probe}",
                "ok": True,
                "value": fileio.format_rational(value),
                "certificate": fileio.certificate_jsonable(cert),
            }
        verdicts.append(entry)
    return verdicts


def _run_verify_metric(args, inputs):
    labels, matrix = fileio.load_matrix(args.space)
    inputs[args.space] = fileio.file_digest(args.space)
    ok, violation = verify_metric(matrix, _tolerance(args.tol))
    entry = {"check": "metric-axioms", "ok": ok}
    if violation is not None:
        entry["witness"] = {
            "kind": violation.kind,
            "labels": [labels[i] for i in violation.indices],
            "detail": violation.detail,
        }
    return [entry]


def _load_product_inputs(args, inputs):
    if args.spec:
        spec, paths = fileio.load_product_spec(args.spec)
        for p in paths:
            inputs[str(p)] = fileio.file_digest(p)
        return spec
    if not args.factor:
        raise IsoprodError("give --spec or at least one --factor")
    factors = []
    for path in args.factor:
        factors.append(fileio.load_metric_space(path))
        inputs[path] = fileio.file_digest(path)
    if args.combiner_file:
        combiner = fileio.load_sampled_function(args.combiner_file)
        inputs[args.combiner_file] = fileio.file_digest(args.combiner_file)
    elif args.combiner:
        combiner = named_combiner(args.combiner, fileio.parse_rational(args.cap))
    else:
        raise IsoprodError("give --combiner or --combiner-file")
    return ProductSpec(tuple(factors), combiner)


def _run_product(args, inputs):
    spec = _load_product_inputs(args, inputs)
    labels, matrix = product_metric(spec)
    verdicts = [
        {
            "check": "product-matrix",
            "ok": True,
            "matrix": fileio.matrix_jsonable(labels, matrix),
        }
    ]
    if args.verify:
        tol = 0 if getattr(spec.combiner, "exact", True) else 1e-12
        ok, violation = verify_metric(matrix, tol)
        entry = {"check": "metric-axioms", "ok": ok}
        if violation is not None:
            entry["witness"] = {
                "kind": violation.kind,
                "labels": ["|".join(labels[i]) for i in violation.indices],
                "detail": violation.detail,
            }
        verdicts.append(entry)
    return verdicts


def _run_extract(args, inputs):
    labels, matrix = fileio.load_matrix(args.product)
    inputs[args.product] = fileio.file_digest(args.product)
    factors = []
    for path in args.factor:
        factors.append(fileio.load_metric_space(path))
        inputs[path] = fileio.file_digest(path)
    if not factors:
        raise IsoprodError("extract needs the factor files (--factor)")
    expected = 1
    for sp in factors:
        expected *= sp.size
    if expected != len(matrix):
        raise IsoprodError(
            f"product of factor sizes is {expected} but the matrix has {len(matrix)} rows"
        )
    f = extract_product_function(matrix, factors)
    if args.out:
        fileio.dump_sampled_function(f, args.out)
    return [
        {
            "check": "extract",
            "ok": True,
            "function": fileio.sampled_function_jsonable(f),
        }
    ]


def _run_witness_unbounded(args, inputs):
    bound = fileio.parse_rational(args.bound)
    x, y = unbounded_witness(bound)
    value = unbounded_gauge(max(x, y))
    return [
        {
            "check": f"witness-unbounded[{bound}]",
            "ok": True,
            "witness": [fileio.format_rational(x), fileio.format_rational(y)],
            "gauged_distance": fileio.format_rational(value),
        }
    ]


def _run_grid(args, inputs, verb):
    g = fileio.load_grid_function(args.grid)
    inputs[args.grid] = fileio.file_digest(args.grid)
    if verb == "omega":
        eps = fileio.parse_point_string(args.eps)
        value = modulus(g, eps)
        return [
            {"check": f"omega{eps}", "ok": True, "value": fileio.format_rational(value)}
        ]
    if verb == "fixed-point":
        ok, report = is_fixed_point(g)
        entry = {
            "check": "fixed-point",
            "ok": ok,
            "max_deviation": fileio.format_rational(report.max_deviation),
        }
        if report.at is not None:
            entry["at"] = fileio.format_point(report.at)
        return [entry]
    if verb == "lemma42":
        ok, witness = difference_bound_holds(g)
        entry = {"check": "difference-bound", "ok": ok}
        if witness is not None:
            entry["witness"] = _point_witness(witness)
        return [entry]
    ok = nonconstant_wrt(g, args.var)
    return [{"check": f"nonconstant[{args.var}]", "ok": ok}]


def _run_cantor(args, inputs):
    verb = args.cantor_verb
    if verb == "refute-ce-triple":
        level = args.level if args.level is not None else _default_level(10)
        report = scaled_cantor_triple_refutation(level)
        return [
            {"check": f"refute-ce-triple[level={level}]", "ok": report.ok, "report": report.to_jsonable()}
        ]
    t = fileio.parse_rational(args.value)
    if verb == "member":
        return [{"check": f"cantor-member[{t}]", "ok": in_cantor(t)}]
    if verb == "ce-member":
        return [{"check": f"ce-member[{t}]", "ok": in_scaled_cantor(t)}]
    if verb == "decompose":
        x, y = cantor_decompose(t)
    else:
        x, y = scaled_cantor_distance_witness(t)
    return [
        {
            "check": f"cantor-{verb}[{t}]",
            "ok": True,
            "witness": [fileio.format_rational(x), fileio.format_rational(y)],
        }
    ]


def _run_universal(args, inputs):
    if args.set_file:
        values = fileio.load_rational_set(args.set_file)
        inputs[args.set_file] = fileio.file_digest(args.set_file)
        source = args.set_file
    else:
        level = args.ce_level if args.ce_level is not None else _default_level(8)
        values = scaled_cantor_level_set(level)
        source = f"ce-level-{level}"
    a = fileio.parse_rational(args.a)
    b = fileio.parse_rational(args.b)
    triple = three_point_search(values, a, b)
    entry = {"check": f"universal-search[a={a}, b={b}, set={source}]", "ok": triple is not None}
    if triple is not None:
        entry["witness"] = [fileio.format_rational(v) for v in triple]
    return [entry]


def _run_embed(args, inputs):
    values = fileio.load_rational_set(args.set_file)
    inputs[args.set_file] = fileio.file_digest(args.set_file)
    images = transcendental_embed(values)
    original = sorted(abs(a - b) for a in values for b in values)
    shifted = sorted(
        abs((images[a] - images[b]).q) for a in values for b in values
    )
    preserved = original == shifted and all(
        not img.is_rational() for img in images.values()
    )
    refutations = {}
    for v, img in sorted(images.items()):
        refutations[str(v)] = rational_subspace_refutation(img).statement
    return [
        {
            "check": "embed-isometry",
            "ok": preserved,
            "images": {
                str(v): {"q": fileio.format_rational(img.q), "r": fileio.format_rational(img.r)}
                for v, img in sorted(images.items())
            },
            "non_rationality": refutations,
        }
    ]


def _run_fixture(args, inputs):
    params = {}
    if args.level is not None:
        params["level"] = args.level
    elif args.kind == "ce-level-set":
        params["level"] = _default_level(8)
    if args.kind == "named-combiner-grid":
        params["combiner"] = args.combiner
        params["cap"] = fileio.parse_rational(args.cap)
    if args.dim is not None:
        params["dim"] = args.dim
    if args.size is not None:
        params["size"] = args.size
    if args.kind == "random-metric-space":
        params["max_points"] = args.max_points
    if args.kind == "random-sampled-function":
        params["mode"] = args.mode
    paths = fixture_generate(args.kind, args.seed, args.out, **params)
    return [
        {"check": f"fixture[{args.kind}]", "ok": True, "files": [str(p) for p in paths]}
    ]


def dispatch(argv) -> tuple[int, dict]:
    """Run one CLI invocation and return (exit code, run report)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 2), {"command": " ".join(argv), "error": "unrecognized arguments"}
    started = time.perf_counter()
    inputs: dict[str, str] = {}
    command = args.verb
    if getattr(args, "cantor_verb", None):
        command = f"cantor {args.cantor_verb}"
    if getattr(args, "universal_verb", None):
        command = f"universal {args.universal_verb}"
    try:
        if args.verb == "check":
            verdicts = _run_check(args, inputs)
        elif args.verb in ("extend-sup", "extend-amenable", "envelope"):
            verdicts = _run_extension(args, inputs, args.verb)
        elif args.verb == "verify-metric":
            verdicts = _run_verify_metric(args, inputs)
        elif args.verb == "product":
            verdicts = _run_product(args, inputs)
        elif args.verb == "extract":
            verdicts = _run_extract(args, inputs)
        elif args.verb == "witness-unbounded":
            verdicts = _run_witness_unbounded(args, inputs)
        elif args.verb in ("omega", "fixed-point", "lemma42", "nonconstant"):
            verdicts = _run_grid(args, inputs, args.verb)
        elif args.verb == "cantor":
            verdicts = _run_cantor(args, inputs)
        elif args.verb == "universal":
            verdicts = _run_universal(args, inputs)
        elif args.verb == "embed":
            verdicts = _run_embed(args, inputs)
        elif args.verb == "fixture":
            verdicts = _run_fixture(args, inputs)
        else:  # pragma: no cover - argparse enforces the verb set
            raise IsoprodError(f"unknown verb {args.verb!r}")
    except (IsoprodError, ValueError, IndexError, OSError, KeyError, json.JSONDecodeError) as exc:
        report = {
            "command": command,
            "inputs": inputs,
            "error": f"{type(exc).__name__}: {exc}",
        }
        return 2, report
    elapsed_ms = int((time.perf_counter() - started) * 1000)
    report = {
        "command": command,
        "inputs": inputs,
        "verdicts": verdicts,
        "timing_ms": elapsed_ms,
    }
    code = 0 if all(v["ok"] for v in verdicts) else 1
    return code, report


def render(report: dict, as_csv: bool = False) -> str:
    if not as_csv:
        return json.dumps(report, indent=2)
    lines = ["check,ok,detail"]
    for v in report.get("verdicts", []):
        detail = {k: val for k, val in v.items() if k not in ("check", "ok")}
        blob = json.dumps(detail, separators=(",", ":")) if detail else ""
        blob = '"' + blob.replace('"', '""') + '"' if blob else ""
        lines.append(f"{v['check']},{str(v['ok']).lower()},{blob}")
    if "error" in report:
        lines.append(f"error,false,\"{report['error']}\"")
    return "\n".join(lines)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    as_csv = "--csv" in argv
    code, report = dispatch(argv)
    print(render(report, as_csv=as_csv))
    if "error" in report:
        print(report["error"], file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
