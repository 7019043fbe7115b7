"""JSON and CSV file formats for every object the CLI consumes.

Rationals travel as strings "p/q" (or "p" for integers) everywhere, so
reports and fixtures are bit-stable across platforms and locales.
"""

from __future__ import annotations

import csv
import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

from .combiners import named_combiner
from .continuation import CoverCertificate
from .errors import LoadError
from .metric import FiniteMetricSpace, ProductSpec
from .modulus import GridFunction
from .points import PointN
from .sampled import SampledFunction

PathLike = Union[str, Path]


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise LoadError(f"expected a rational, got boolean {value}")
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise LoadError(f"bad rational {value!r}: {exc}") from None
    if isinstance(value, Fraction):
        return value
    raise LoadError(f"expected a rational string, got {value!r}")


def format_point(p: PointN) -> list[str]:
    return [format_rational(c) for c in p.coords]


def parse_point(values: Sequence) -> PointN:
    if not isinstance(values, (list, tuple)) or not values:
        raise LoadError(f"expected a nonempty coordinate array, got {values!r}")
    return PointN(tuple(parse_rational(v) for v in values))


def parse_point_string(text: str) -> PointN:
    """Parse CLI probe syntax: "(2,0)", "[2, 0]" or "2,0"."""
    body = text.strip()
    if body and body[0] in "([" and body[-1] in ")]":
        body = body[1:-1]
    parts = [piece.strip() for piece in body.split(",") if piece.strip()]
    if not parts:
        raise LoadError(f"empty probe {text!r}")
    return PointN(tuple(parse_rational(piece) for piece in parts))


def file_digest(path: PathLike) -> str:
    digest = hashlib.sha256(Path(path).read_bytes()).hexdigest()
    return f"sha256:{digest}"


def _read_json(path: PathLike):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LoadError(f"{path}: invalid JSON: {exc}") from None


# -- sampled functions -------------------------------------------------

def sampled_function_jsonable(f: SampledFunction) -> dict:
    return {
        "dim": f.dim,
        "entries": [
            {"point": format_point(p), "value": format_rational(v)}
            for p, v in f.items()
        ],
    }


def load_sampled_function(path: PathLike) -> SampledFunction:
    """Load a sampled function from .json or .csv (n+1 columns)."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return _load_sampled_function_csv(path)
    data = _read_json(path)
    try:
        entries = [
            (parse_point(e["point"]), parse_rational(e["value"]))
            for e in data["entries"]
        ]
        dim = int(data["dim"])
    except (KeyError, TypeError) as exc:
        raise LoadError(f"{path}: malformed sampled function: {exc!r}") from None
    try:
        f = SampledFunction(entries)
    except ValueError as exc:
        raise LoadError(f"{path}: {exc}") from None
    if f.dim != dim:
        raise LoadError(f"{path}: declared dim {dim} but points have dim {f.dim}")
    return f


def _load_sampled_function_csv(path: Path) -> SampledFunction:
    entries = []
    with open(path, newline="", encoding="utf-8") as handle:
        for lineno, row in enumerate(csv.reader(handle), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 2:
                raise LoadError(f"{path}:{lineno}: need n+1 columns")
            coords = [parse_rational(cell.strip()) for cell in row[:-1]]
            entries.append((PointN(tuple(coords)), parse_rational(row[-1].strip())))
    if not entries:
        raise LoadError(f"{path}: no rows")
    try:
        return SampledFunction(entries)
    except ValueError as exc:
        raise LoadError(f"{path}: {exc}") from None


def dump_sampled_function(f: SampledFunction, path: PathLike) -> None:
    write_canonical_json(path, sampled_function_jsonable(f))


# -- metric spaces and matrices ----------------------------------------

def matrix_jsonable(labels: Sequence, matrix) -> dict:
    return {
        "labels": [
            "|".join(lab) if isinstance(lab, tuple) else str(lab) for lab in labels
        ],
        "dist": [
            [
                format_rational(v) if isinstance(v, (Fraction, int)) else float(v)
                for v in row
            ]
            for row in matrix
        ],
    }


def load_matrix(path: PathLike) -> tuple[list[str], list[list[Fraction]]]:
    """Load a labeled candidate matrix without metric validation."""
    data = _read_json(path)
    try:
        dist = [[parse_rational(v) for v in row] for row in data["dist"]]
    except (KeyError, TypeError) as exc:
        raise LoadError(f"{path}: malformed matrix: {exc!r}") from None
    labels = [str(x) for x in data.get("labels", range(len(dist)))]
    if len(labels) != len(dist):
        raise LoadError(f"{path}: {len(labels)} labels for {len(dist)} rows")
    return labels, dist


def load_metric_space(path: PathLike) -> FiniteMetricSpace:
    labels, dist = load_matrix(path)
    return FiniteMetricSpace(labels, dist)


def dump_metric_space(space: FiniteMetricSpace, path: PathLike) -> None:
    write_canonical_json(path, matrix_jsonable(space.labels, space.dist))


# -- grid functions ----------------------------------------------------

def grid_function_jsonable(g: GridFunction) -> dict:
    return {
        "n": g.n,
        "T": format_rational(g.bound),
        "h": format_rational(g.step),
        "values": [
            {"point": format_point(p), "value": format_rational(v)}
            for p, v in g.items()
        ],
    }


def load_grid_function(path: PathLike) -> GridFunction:
    data = _read_json(path)
    try:
        n = int(data["n"])
        bound = parse_rational(data["T"])
        step = parse_rational(data["h"])
        entries = [
            (parse_point(e["point"]), parse_rational(e["value"]))
            for e in data["values"]
        ]
    except (KeyError, TypeError) as exc:
        raise LoadError(f"{path}: malformed grid function: {exc!r}") from None
    try:
        return GridFunction.from_points(n, bound, step, entries)
    except ValueError as exc:
        raise LoadError(f"{path}: {exc}") from None


def dump_grid_function(g: GridFunction, path: PathLike) -> None:
    write_canonical_json(path, grid_function_jsonable(g))


# -- rational sets -----------------------------------------------------

def load_rational_set(path: PathLike) -> list[Fraction]:
    data = _read_json(path)
    if isinstance(data, dict):
        data = data.get("values")
    if not isinstance(data, list):
        raise LoadError(f"{path}: expected an array of rationals")
    return [parse_rational(v) for v in data]


def rational_set_jsonable(values: Iterable[Fraction]) -> dict:
    return {"values": [format_rational(v) for v in sorted(values)]}


def dump_rational_set(values: Iterable[Fraction], path: PathLike) -> None:
    write_canonical_json(path, rational_set_jsonable(values))


# -- product specs -----------------------------------------------------

def load_product_spec(path: PathLike) -> tuple[ProductSpec, list[Path]]:
    """Load a product spec; factor paths resolve relative to the spec file.

    Returns the spec plus every file it pulled in, for report digests.
    """
    path = Path(path)
    data = _read_json(path)
    base = path.parent
    try:
        factor_paths = [base / p for p in data["factors"]]
    except (KeyError, TypeError) as exc:
        raise LoadError(f"{path}: malformed product spec: {exc!r}") from None
    factors = [load_metric_space(p) for p in factor_paths]
    combiner_field = data.get("combiner")
    if isinstance(combiner_field, str):
        combiner = named_combiner(combiner_field, parse_rational(data.get("cap", "1")))
    elif isinstance(combiner_field, dict) and "file" in combiner_field:
        combiner_path = base / combiner_field["file"]
        factor_paths.append(combiner_path)
        combiner = load_sampled_function(combiner_path)
    elif isinstance(combiner_field, dict) and "name" in combiner_field:
        combiner = named_combiner(
            combiner_field["name"], parse_rational(combiner_field.get("cap", "1"))
        )
    else:
        raise LoadError(f"{path}: combiner must be a name or a file reference")
    try:
        spec = ProductSpec(tuple(factors), combiner)
    except ValueError as exc:
        raise LoadError(f"{path}: {exc}") from None
    return spec, [path, *factor_paths]


# -- certificates and reports ------------------------------------------

def certificate_jsonable(cert: CoverCertificate) -> dict:
    return {
        "target": format_point(cert.target),
        "parts": [
            {"point": format_point(p), "count": mult} for p, mult in cert.parts
        ],
        "cost": format_rational(cert.cost),
    }


def write_canonical_json(path: PathLike, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
