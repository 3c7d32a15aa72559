"""Reading and writing germ description files.

A germ file is UTF-8 JSON with this shape (coefficients are exact rational
strings like "-3/4", or integers; floats are rejected):

    {
      "variables": ["x", "y"],
      "P": [{"coefficient": "1", "exponents": [2, 0]},
            {"coefficient": "-1", "exponents": [0, 2]}],
      "Q": [{"coefficient": "2", "exponents": [1, 1]}],
      "weights": ["1", "1"],          # optional
      "degrees": ["2", "2"]           # optional [b1, b2]
    }

Unknown top-level keys are rejected.  Declared weights must make both P and
Q weighted homogeneous (degrees are derived when omitted), otherwise loading
fails.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .algebra import MapGerm, Polynomial
from .errors import GermFormatError
from .weights import WeightSystem, is_weighted_homogeneous

_ALLOWED_KEYS = {"variables", "P", "Q", "weights", "degrees"}


@dataclass(frozen=True)
class GermSpec:
    """A parsed germ file: the map germ plus any declared weight system."""

    germ: MapGerm
    weight_system: WeightSystem | None


def _parse_rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise GermFormatError(f"{where}: expected an exact rational string or integer, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise GermFormatError(f"{where}: cannot parse rational {value!r}") from exc
    raise GermFormatError(f"{where}: expected an exact rational string or integer, got {value!r}")


def _parse_polynomial(entries: Any, num_vars: int, which: str) -> Polynomial:
    if not isinstance(entries, list):
        raise GermFormatError(f"{which} must be a list of terms")
    terms: dict[tuple[int, ...], Fraction] = {}
    for idx, entry in enumerate(entries):
        where = f"{which}[{idx}]"
        if not isinstance(entry, dict) or set(entry) != {"coefficient", "exponents"}:
            raise GermFormatError(f"{where}: each term needs exactly 'coefficient' and 'exponents'")
        exps = entry["exponents"]
        if (
            not isinstance(exps, list)
            or len(exps) != num_vars
            or not all(isinstance(e, int) and not isinstance(e, bool) and e >= 0 for e in exps)
        ):
            raise GermFormatError(
                f"{where}: exponents must be {num_vars} non-negative integers, got {exps!r}"
            )
        coeff = _parse_rational(entry["coefficient"], where)
        key = tuple(exps)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return Polynomial(num_vars, terms)


def parse_germ_spec(data: bytes | str) -> GermSpec:
    """Parse a germ description; raises GermFormatError on any violation."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise GermFormatError("germ file is not valid UTF-8") from exc
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise GermFormatError(f"germ file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise GermFormatError("germ file must be a JSON object")
    unknown = set(raw) - _ALLOWED_KEYS
    if unknown:
        raise GermFormatError(f"unknown top-level keys: {sorted(unknown)}")
    for required in ("variables", "P", "Q"):
        if required not in raw:
            raise GermFormatError(f"missing required key {required!r}")
    variables = raw["variables"]
    if (
        not isinstance(variables, list)
        or len(variables) < 2
        or not all(isinstance(v, str) and v for v in variables)
    ):
        raise GermFormatError("variables must be a list of at least two non-empty names")
    m = len(variables)
    p = _parse_polynomial(raw["P"], m, "P")
    q = _parse_polynomial(raw["Q"], m, "Q")
    try:
        germ = MapGerm(p, q, variables)
    except ValueError as exc:
        raise GermFormatError(str(exc)) from exc

    ws = None
    if "degrees" in raw and "weights" not in raw:
        raise GermFormatError("degrees given without weights")
    if "weights" in raw:
        weights = raw["weights"]
        if not isinstance(weights, list) or len(weights) != m:
            raise GermFormatError(f"weights must list {m} rationals")
        w = tuple(_parse_rational(v, "weights") for v in weights)
        if any(v <= 0 for v in w):
            raise GermFormatError("declared weights must be strictly positive")
        if "degrees" in raw:
            degrees = raw["degrees"]
            if not isinstance(degrees, list) or len(degrees) != 2:
                raise GermFormatError("degrees must be a pair [b1, b2]")
            b1 = _parse_rational(degrees[0], "degrees")
            b2 = _parse_rational(degrees[1], "degrees")
        else:
            b1 = _derive_degree(p, w, "P")
            b2 = _derive_degree(q, w, "Q")
        if b1 <= 0 or b2 <= 0:
            raise GermFormatError("declared degrees must be strictly positive")
        ws = WeightSystem(w, b1, b2)
        for poly, degree, which in ((p, b1, "P"), (q, b2, "Q")):
            if not is_weighted_homogeneous(poly, ws, degree):
                raise GermFormatError(
                    f"{which} is not weighted homogeneous of degree {degree} "
                    f"for the declared weights {tuple(str(v) for v in w)}"
                )
    return GermSpec(germ=germ, weight_system=ws)


def _derive_degree(p: Polynomial, weights: tuple[Fraction, ...], which: str) -> Fraction:
    degrees = p.weighted_degrees(weights)
    if len(degrees) != 1:
        raise GermFormatError(
            f"cannot derive a degree for {which}: weighted degrees are {sorted(degrees)}"
        )
    return next(iter(degrees))


def _format_rational(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def germ_spec_document(germ: MapGerm, ws: WeightSystem | None = None) -> dict:
    """JSON-ready dictionary for a germ (inverse of parse_germ_spec)."""
    doc: dict = {
        "variables": list(germ.variable_names),
        "P": [
            {"coefficient": _format_rational(c), "exponents": list(e)}
            for e, c in germ.p.terms()
        ],
        "Q": [
            {"coefficient": _format_rational(c), "exponents": list(e)}
            for e, c in germ.q.terms()
        ],
    }
    if ws is not None:
        doc["weights"] = [_format_rational(w) for w in ws.weights]
        doc["degrees"] = [_format_rational(ws.degree_p), _format_rational(ws.degree_q)]
    return doc


def serialize_germ_spec(germ: MapGerm, ws: WeightSystem | None = None) -> str:
    return json.dumps(germ_spec_document(germ, ws), indent=2, sort_keys=True) + "\n"


def load_germ_file(path: str) -> GermSpec:
    try:
        with open(path, "rb") as handle:
            data = handle.read()
    except OSError as exc:
        raise GermFormatError(f"cannot read germ file {path}: {exc}") from exc
    return parse_germ_spec(data)
