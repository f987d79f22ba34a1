"""JSON serialization: round trips, canonical text, schema errors."""

import json
from fractions import Fraction

import pytest

from zonocert import (certify_second_voronoi, compute_edge_set, dv_zonotope,
                      jsonio, lattice_of_dicing)
from zonocert.errors import SchemaError

from conftest import CHECKER, HEXAGONAL, RHOMBIC, normal_set


# ---------------------------------------------------------------------------
# rational strings


def test_rational_strings_omit_unit_denominators():
    assert jsonio.rational_to_str(Fraction(4)) == "4"
    assert jsonio.rational_to_str(Fraction(-2, 3)) == "-2/3"
    assert jsonio.rational_to_str(Fraction(0)) == "0"


def test_rational_parsing_normalizes():
    assert jsonio.parse_rational("-4/6", "x") == Fraction(-2, 3)
    assert jsonio.parse_rational("007", "x") == 7


@pytest.mark.parametrize("text", ["1.5", "", "1e3", "2 / 3", "--1", "1/"])
def test_rational_parsing_rejects_non_rationals(text):
    with pytest.raises(SchemaError):
        jsonio.parse_rational(text, "x")


def test_rational_parsing_rejects_zero_denominator():
    with pytest.raises(SchemaError):
        jsonio.parse_rational("2/0", "x")


# ---------------------------------------------------------------------------
# document round trips


@pytest.mark.parametrize("rows", [HEXAGONAL, CHECKER, RHOMBIC])
def test_normal_set_round_trip(rows):
    ns = normal_set(rows, weights=[Fraction(i + 1, 3)
                                   for i in range(len(rows))])
    doc = jsonio.normal_set_to_json(ns)
    assert doc["schema"] == "v1"
    assert jsonio.parse_normal_set(doc) == ns


@pytest.mark.parametrize("rows", [HEXAGONAL, CHECKER, RHOMBIC])
def test_edge_set_round_trip(rows):
    es = compute_edge_set(normal_set(rows))
    doc = jsonio.edge_set_to_json(es)
    assert jsonio.parse_edge_set(doc) == es


@pytest.mark.parametrize("rows", [HEXAGONAL, RHOMBIC])
def test_zonotope_round_trip(rows):
    z = dv_zonotope(normal_set(rows))
    doc = jsonio.zonotope_to_json(z)
    assert jsonio.parse_zonotope(doc) == z


@pytest.mark.parametrize("rows", [HEXAGONAL, CHECKER])
def test_lattice_round_trip(rows):
    lat = lattice_of_dicing(normal_set(rows))
    doc = jsonio.lattice_to_json(lat)
    assert jsonio.parse_lattice(doc).basis == lat.basis


@pytest.mark.parametrize("rows", [HEXAGONAL, CHECKER, RHOMBIC])
def test_certificate_round_trip(rows):
    cert = certify_second_voronoi(normal_set(rows))
    doc = jsonio.certificate_to_json(cert, verified=True)
    assert doc["schema"] == "v1"
    parsed, verified = jsonio.parse_certificate(doc)
    assert parsed == cert
    assert verified is True


def test_certificate_verified_flag_round_trips_false():
    cert = certify_second_voronoi(normal_set(HEXAGONAL))
    doc = jsonio.certificate_to_json(cert, verified=False)
    assert jsonio.parse_certificate(doc)[1] is False


def test_dumps_is_byte_deterministic():
    cert = certify_second_voronoi(normal_set(HEXAGONAL))
    one = jsonio.dumps(jsonio.certificate_to_json(cert, verified=True))
    two = jsonio.dumps(jsonio.certificate_to_json(
        certify_second_voronoi(normal_set(HEXAGONAL)), verified=True))
    assert one == two
    assert one.endswith("\n")
    assert json.loads(one)["det"] == "1"


def test_schema_field_is_optional_on_parse():
    doc = jsonio.normal_set_to_json(normal_set(HEXAGONAL))
    del doc["schema"]
    assert jsonio.parse_normal_set(doc) == normal_set(HEXAGONAL)


# ---------------------------------------------------------------------------
# schema errors carry dotted locations


def test_error_location_for_bad_entry():
    doc = {"dim": 2, "normals": [["1", "0"], ["x", "1"]],
           "weights": ["1", "1"]}
    with pytest.raises(SchemaError) as info:
        jsonio.parse_normal_set(doc)
    assert info.value.location == "$.normals[1][0]"


def test_error_location_for_short_vector():
    doc = {"dim": 2, "normals": [["1", "0"], ["1"]], "weights": ["1", "1"]}
    with pytest.raises(SchemaError) as info:
        jsonio.parse_normal_set(doc)
    assert info.value.location == "$.normals[1]"


def test_error_for_unknown_schema_version():
    doc = jsonio.normal_set_to_json(normal_set(HEXAGONAL))
    doc["schema"] = "v2"
    with pytest.raises(SchemaError) as info:
        jsonio.parse_normal_set(doc)
    assert info.value.location == "$.schema"


def test_error_for_missing_field():
    with pytest.raises(SchemaError) as info:
        jsonio.parse_normal_set({"dim": 2, "normals": [["1", "0"],
                                                       ["0", "1"]]})
    assert info.value.location == "$.weights"


def test_error_for_non_object():
    with pytest.raises(SchemaError):
        jsonio.parse_normal_set([])


# ---------------------------------------------------------------------------
# payload detection


def test_detect_payload_kinds():
    ns = normal_set(HEXAGONAL)
    cert = certify_second_voronoi(ns)
    assert jsonio.detect_payload(jsonio.normal_set_to_json(ns)) == "normal_set"
    assert jsonio.detect_payload(
        jsonio.edge_set_to_json(compute_edge_set(ns))) == "edge_set"
    assert jsonio.detect_payload(
        jsonio.zonotope_to_json(dv_zonotope(ns))) == "zonotope"
    assert jsonio.detect_payload(
        jsonio.lattice_to_json(lattice_of_dicing(ns))) == "lattice"
    assert jsonio.detect_payload(
        jsonio.certificate_to_json(cert, verified=False)) == "certificate"
