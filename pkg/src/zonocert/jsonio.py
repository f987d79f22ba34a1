"""JSON serialization for library types.

Rationals travel as strings "p/q" (the "/q" part omitted for integers),
so no float ever enters or leaves a document.  Every top-level document
carries a "schema" version field; emission is deterministic, so equal
values produce byte-identical output.  Parsers raise SchemaError naming
the offending field by a dotted location path.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .dicing import EdgeSet, NormalSet
from .errors import SchemaError
from .parallelohedron import FacetVectorSet, VoronoiCertificate
from .ratgeom import LatticeBasis, RatMatrix, RatVector
from .zonotope import Zonotope

SCHEMA_VERSION = "v1"

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


# ---------------------------------------------------------------------------
# scalars and vectors


def rational_to_str(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(obj, location: str) -> Fraction:
    if not isinstance(obj, str) or not _RATIONAL_RE.match(obj):
        raise SchemaError(location, f"expected a rational string 'p/q', got {obj!r}")
    num, _, den = obj.partition("/")
    if den == "":
        return Fraction(int(num))
    if int(den) == 0:
        raise SchemaError(location, "zero denominator")
    return Fraction(int(num), int(den))


def vector_to_json(v: RatVector) -> list[str]:
    return [rational_to_str(e) for e in v.entries]


def parse_vector(obj, location: str, dim: int | None = None) -> RatVector:
    if not isinstance(obj, list):
        raise SchemaError(location, "expected a list of rational strings")
    if dim is not None and len(obj) != dim:
        raise SchemaError(location, f"expected {dim} entries, got {len(obj)}")
    return RatVector(parse_rational(e, f"{location}[{k}]")
                     for k, e in enumerate(obj))


def _expect_object(obj, location: str) -> dict:
    if not isinstance(obj, dict):
        raise SchemaError(location, "expected a JSON object")
    return obj


def _expect_list(obj, location: str) -> list:
    if not isinstance(obj, list):
        raise SchemaError(location, "expected a JSON array")
    return obj


def _field(doc: dict, key: str, location: str):
    if key not in doc:
        raise SchemaError(f"{location}.{key}", "missing field")
    return doc[key]


def _parse_dim(doc: dict, location: str) -> int:
    dim = _field(doc, "dim", location)
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SchemaError(f"{location}.dim", "expected a positive integer")
    return dim


def _check_schema(doc: dict, location: str):
    if "schema" in doc and doc["schema"] != SCHEMA_VERSION:
        raise SchemaError(f"{location}.schema",
                          f"unsupported schema {doc['schema']!r}, "
                          f"expected {SCHEMA_VERSION!r}")


def dumps(doc) -> str:
    """Deterministic serialization: fixed indentation, insertion order."""
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# library types


def normal_set_to_json(ns: NormalSet) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "dim": ns.dimension,
        "normals": [vector_to_json(v) for v in ns.normals],
        "weights": [rational_to_str(w) for w in ns.weights],
    }


def parse_normal_set(doc, location: str = "$") -> NormalSet:
    doc = _expect_object(doc, location)
    _check_schema(doc, location)
    dim = _parse_dim(doc, location)
    normals_raw = _expect_list(_field(doc, "normals", location),
                               f"{location}.normals")
    normals = [parse_vector(v, f"{location}.normals[{k}]", dim)
               for k, v in enumerate(normals_raw)]
    weights_raw = _expect_list(_field(doc, "weights", location),
                               f"{location}.weights")
    weights = [parse_rational(w, f"{location}.weights[{k}]")
               for k, w in enumerate(weights_raw)]
    return NormalSet(dim, normals, weights)


def edge_set_to_json(es: EdgeSet) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "dim": es.dimension,
        "edges": [vector_to_json(v) for v in es.edges],
        "provenance": [list(p) for p in es.provenance],
    }


def parse_edge_set(doc, location: str = "$") -> EdgeSet:
    doc = _expect_object(doc, location)
    _check_schema(doc, location)
    dim = _parse_dim(doc, location)
    edges_raw = _expect_list(_field(doc, "edges", location), f"{location}.edges")
    edges = [parse_vector(v, f"{location}.edges[{k}]", dim)
             for k, v in enumerate(edges_raw)]
    prov_raw = _expect_list(_field(doc, "provenance", location),
                            f"{location}.provenance")
    provenance = []
    for k, sub in enumerate(prov_raw):
        sub = _expect_list(sub, f"{location}.provenance[{k}]")
        for i in sub:
            if not isinstance(i, int) or isinstance(i, bool):
                raise SchemaError(f"{location}.provenance[{k}]",
                                  "expected integer indices")
        provenance.append(tuple(sub))
    return EdgeSet(dim, edges, provenance)


def zonotope_to_json(z: Zonotope) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "dim": z.dimension,
        "generators": [vector_to_json(v) for v in z.generators],
    }


def parse_zonotope(doc, location: str = "$") -> Zonotope:
    doc = _expect_object(doc, location)
    _check_schema(doc, location)
    dim = _parse_dim(doc, location)
    gens_raw = _expect_list(_field(doc, "generators", location),
                            f"{location}.generators")
    gens = [parse_vector(v, f"{location}.generators[{k}]", dim)
            for k, v in enumerate(gens_raw)]
    return Zonotope(dim, gens)


def lattice_to_json(lat: LatticeBasis) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "dim": lat.dimension,
        "basis": [vector_to_json(v) for v in lat.vectors],
    }


def parse_lattice(doc, location: str = "$") -> LatticeBasis:
    doc = _expect_object(doc, location)
    _check_schema(doc, location)
    dim = _parse_dim(doc, location)
    basis_raw = _expect_list(_field(doc, "basis", location), f"{location}.basis")
    if len(basis_raw) != dim:
        raise SchemaError(f"{location}.basis",
                          f"expected {dim} basis vectors, got {len(basis_raw)}")
    cols = [parse_vector(v, f"{location}.basis[{k}]", dim)
            for k, v in enumerate(basis_raw)]
    return LatticeBasis(RatMatrix.from_columns(cols))


def certificate_to_json(cert: VoronoiCertificate, verified: bool) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "dim": cert.normal_set.dimension,
        "normal_set": normal_set_to_json(cert.normal_set),
        "edge_set": edge_set_to_json(cert.edge_set),
        "zonotope": zonotope_to_json(cert.zonotope),
        "facet_vectors": {
            "vectors": [vector_to_json(v) for v in cert.facet_vectors.vectors],
            "facet_link": list(cert.facet_vectors.facet_link),
        },
        "ne_bijection": [{"edge": i, "vector": j, "sign": s}
                         for i, j, s in cert.ne_bijection],
        "lattice": lattice_to_json(cert.lattice),
        "basis_indices": list(cert.basis_indices),
        "det": rational_to_str(cert.lattice_coordinate_det),
        "verified": bool(verified),
    }


def parse_certificate(doc, location: str = "$") -> tuple[VoronoiCertificate, bool]:
    doc = _expect_object(doc, location)
    _check_schema(doc, location)
    dim = _parse_dim(doc, location)
    ns = parse_normal_set(_field(doc, "normal_set", location),
                          f"{location}.normal_set")
    es = parse_edge_set(_field(doc, "edge_set", location), f"{location}.edge_set")
    z = parse_zonotope(_field(doc, "zonotope", location), f"{location}.zonotope")
    fv_doc = _expect_object(_field(doc, "facet_vectors", location),
                            f"{location}.facet_vectors")
    vectors = [parse_vector(v, f"{location}.facet_vectors.vectors[{k}]", dim)
               for k, v in enumerate(
                   _expect_list(_field(fv_doc, "vectors",
                                       f"{location}.facet_vectors"),
                                f"{location}.facet_vectors.vectors"))]
    link_raw = _expect_list(_field(fv_doc, "facet_link",
                                   f"{location}.facet_vectors"),
                            f"{location}.facet_vectors.facet_link")
    fv = FacetVectorSet(tuple(vectors), tuple(int(i) for i in link_raw))
    bij = []
    for k, item in enumerate(_expect_list(_field(doc, "ne_bijection", location),
                                          f"{location}.ne_bijection")):
        item = _expect_object(item, f"{location}.ne_bijection[{k}]")
        try:
            bij.append((int(item["edge"]), int(item["vector"]),
                        int(item["sign"])))
        except (KeyError, TypeError, ValueError):
            raise SchemaError(f"{location}.ne_bijection[{k}]",
                              "expected edge/vector/sign integers")
    lat = parse_lattice(_field(doc, "lattice", location), f"{location}.lattice")
    idx_raw = _expect_list(_field(doc, "basis_indices", location),
                           f"{location}.basis_indices")
    for i in idx_raw:
        if not isinstance(i, int) or isinstance(i, bool):
            raise SchemaError(f"{location}.basis_indices",
                              "expected integer indices")
    determinant = parse_rational(_field(doc, "det", location), f"{location}.det")
    verified = _field(doc, "verified", location)
    if not isinstance(verified, bool):
        raise SchemaError(f"{location}.verified", "expected a boolean")
    cert = VoronoiCertificate(
        normal_set=ns, edge_set=es, zonotope=z, facet_vectors=fv,
        ne_bijection=tuple(bij), lattice=lat,
        basis_indices=tuple(idx_raw), lattice_coordinate_det=determinant)
    return cert, verified


def detect_payload(doc, location: str = "$") -> str:
    """Classify a top-level document by its fields.

    Returns one of "normal_set", "edge_set", "zonotope", "lattice",
    "certificate"; raises SchemaError for unrecognizable documents.
    """
    doc = _expect_object(doc, location)
    if "normals" in doc and "weights" in doc:
        return "normal_set"
    if "edges" in doc:
        return "edge_set"
    if "generators" in doc:
        return "zonotope"
    if "basis" in doc:
        return "lattice"
    if "normal_set" in doc and "facet_vectors" in doc:
        return "certificate"
    raise SchemaError(location, "unrecognizable document; expected one of "
                      "normal_set, edge_set, zonotope, lattice, certificate")
