"""Germ-file parsing: happy paths, round trips, and every rejection branch."""

import json

import pytest

from milnorfib import (
    GermFormatError,
    WeightSystem,
    parse_germ_spec,
    serialize_germ_spec,
)
from milnorfib.io import germ_spec_document


def germ_a_document() -> dict:
    return {
        "variables": ["x", "y"],
        "P": [
            {"coefficient": "1", "exponents": [2, 0]},
            {"coefficient": "-1", "exponents": [0, 2]},
        ],
        "Q": [{"coefficient": "2", "exponents": [1, 1]}],
    }


class TestParse:
    def test_basic_germ(self, germ_a):
        spec = parse_germ_spec(json.dumps(germ_a_document()))
        assert spec.germ == germ_a
        assert spec.germ.p.num_terms() == 2
        assert spec.germ.q.num_terms() == 1
        assert spec.weight_system is None

    def test_rational_string_coefficients(self):
        doc = germ_a_document()
        doc["P"][0]["coefficient"] = "3/4"
        spec = parse_germ_spec(json.dumps(doc))
        assert str(spec.germ.p.coefficient([2, 0])) == "3/4"

    def test_integer_coefficients_allowed(self):
        doc = germ_a_document()
        doc["Q"][0]["coefficient"] = 2
        spec = parse_germ_spec(json.dumps(doc))
        assert spec.germ.q.coefficient([1, 1]) == 2

    def test_declared_weights_accepted(self):
        doc = germ_a_document()
        doc["weights"] = ["1", "1"]
        doc["degrees"] = ["2", "2"]
        spec = parse_germ_spec(json.dumps(doc))
        assert spec.weight_system == WeightSystem((1, 1), 2, 2)

    def test_degrees_derived_when_absent(self):
        doc = germ_a_document()
        doc["weights"] = ["1", "1"]
        spec = parse_germ_spec(json.dumps(doc))
        assert spec.weight_system.degree_p == 2
        assert spec.weight_system.degree_q == 2

    def test_bytes_input(self):
        spec = parse_germ_spec(json.dumps(germ_a_document()).encode())
        assert spec.germ.num_vars == 2


class TestRejections:
    def test_malformed_json(self):
        with pytest.raises(GermFormatError, match="JSON"):
            parse_germ_spec(b"{not json")

    def test_unknown_top_level_key(self):
        doc = germ_a_document()
        doc["comment"] = "hello"
        with pytest.raises(GermFormatError, match="unknown top-level keys"):
            parse_germ_spec(json.dumps(doc))

    def test_wrong_exponent_length(self):
        doc = germ_a_document()
        doc["P"][0]["exponents"] = [2, 0, 0]
        with pytest.raises(GermFormatError, match="exponents"):
            parse_germ_spec(json.dumps(doc))

    def test_negative_exponent(self):
        doc = germ_a_document()
        doc["P"][0]["exponents"] = [-1, 0]
        with pytest.raises(GermFormatError, match="exponents"):
            parse_germ_spec(json.dumps(doc))

    def test_float_coefficient_rejected(self):
        doc = germ_a_document()
        doc["P"][0]["coefficient"] = 1.5
        with pytest.raises(GermFormatError, match="exact rational"):
            parse_germ_spec(json.dumps(doc))

    def test_non_positive_weights_rejected(self):
        doc = germ_a_document()
        doc["weights"] = ["0", "1"]
        with pytest.raises(GermFormatError, match="positive"):
            parse_germ_spec(json.dumps(doc))

    def test_wrong_declared_weights_rejected(self):
        doc = germ_a_document()
        doc["weights"] = ["1", "2"]
        with pytest.raises(GermFormatError, match="not weighted homogeneous"):
            parse_germ_spec(json.dumps(doc))

    def test_degrees_without_weights_rejected(self):
        doc = germ_a_document()
        doc["degrees"] = ["2", "2"]
        with pytest.raises(GermFormatError, match="degrees given without weights"):
            parse_germ_spec(json.dumps(doc))

    def test_missing_required_key(self):
        doc = germ_a_document()
        del doc["Q"]
        with pytest.raises(GermFormatError, match="missing required key"):
            parse_germ_spec(json.dumps(doc))

    def test_single_variable_rejected(self):
        doc = {
            "variables": ["x"],
            "P": [{"coefficient": "1", "exponents": [1]}],
            "Q": [{"coefficient": "1", "exponents": [2]}],
        }
        with pytest.raises(GermFormatError, match="two"):
            parse_germ_spec(json.dumps(doc))

    def test_mixed_degree_weight_declaration(self, germ_ex2):
        doc = germ_spec_document(germ_ex2)
        doc["weights"] = ["1", "1"]
        with pytest.raises(GermFormatError, match="cannot derive a degree"):
            parse_germ_spec(json.dumps(doc))


class TestRoundTrip:
    def test_germ_round_trip(self, germ_a, germ_b, germ_d, germ_ex2):
        for germ in (germ_a, germ_b, germ_d, germ_ex2):
            spec = parse_germ_spec(serialize_germ_spec(germ))
            assert spec.germ == germ

    def test_round_trip_with_weights(self, germ_b, ws_21):
        spec = parse_germ_spec(serialize_germ_spec(germ_b, ws_21))
        assert spec.germ == germ_b
        assert spec.weight_system == ws_21

    def test_round_trip_preserves_rational_coefficients(self):
        from fractions import Fraction
        from milnorfib import MapGerm, Polynomial

        p = Polynomial(2, {(2, 0): Fraction(22, 7), (0, 2): Fraction(-1, 3)})
        q = Polynomial(2, {(1, 1): Fraction(5, 9)})
        germ = MapGerm(p, q)
        spec = parse_germ_spec(serialize_germ_spec(germ))
        assert spec.germ.p.coefficient([2, 0]) == Fraction(22, 7)
        assert spec.germ.q.coefficient([1, 1]) == Fraction(5, 9)
