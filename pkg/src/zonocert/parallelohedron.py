"""Dirichlet-Voronoi cells of dicing lattices and their certification.

The pipeline: a weighted normal set induces a positive definite form Q,
zone vectors generate the candidate cell as a zonotope, each facet is
inverted through the Q-bisector identity to a lattice vector, and the
certificate records that these facet vectors coincide with the dicing
edges up to sign and contain a basis of the lattice with determinant
+-1 in lattice coordinates.  An independent brute-force cell oracle and
a verifier that re-checks certificates from raw fields are included.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .dicing import (EdgeSet, NormalSet, compute_edge_set, first_basis_indices,
                     unimodular_representation)
from .errors import (BasisCheckFailed, CertificationError, DimensionTooLarge,
                     DualityViolation, EnumerationInsufficient, InternalFault,
                     Mismatch, NotInLattice, NotPositiveDefinite, ZonocertError)
from .ratgeom import (LatticeBasis, RatMatrix, RatVector, det,
                      dual_lattice_basis, hnf_lattice_basis, inverse,
                      lattice_contains, rank, same_lattice, zero_vector)
from .zonotope import FacetDescriptor, Zonotope, facets

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric positive definite rational form."""

    matrix: RatMatrix

    def __post_init__(self):
        m = self.matrix
        if m.rows != m.cols:
            raise NotPositiveDefinite("form matrix must be square")
        if m.entries != m.transpose().entries:
            raise NotPositiveDefinite("form matrix must be symmetric")
        for k in range(1, m.rows + 1):
            minor = RatMatrix([row[:k] for row in m.entries[:k]])
            if det(minor) <= 0:
                raise NotPositiveDefinite(
                    f"leading principal minor of order {k} is not positive")

    @property
    def dimension(self) -> int:
        return self.matrix.rows

    def value(self, v: RatVector) -> Fraction:
        return v.dot(self.matrix @ v)

    def pairing(self, u: RatVector, v: RatVector) -> Fraction:
        return u.dot(self.matrix @ v)


def quadratic_form(ns: NormalSet) -> QuadraticForm:
    """Weighted sum of rank one forms, one per hyperplane family."""
    d = ns.dimension
    acc = [[_ZERO] * d for _ in range(d)]
    for v, w in zip(ns.normals, ns.weights):
        for i in range(d):
            for j in range(d):
                acc[i][j] += w * v[i] * v[j]
    return QuadraticForm(RatMatrix(acc))


def zone_vectors(ns: NormalSet) -> tuple[RatVector, ...]:
    """Zone vector per family: the form inverse applied to weight * normal.

    When the form is the identity this reduces to weight * normal.
    """
    q = quadratic_form(ns)
    q_inv = inverse(q.matrix)
    return tuple((q_inv @ v).scale(w) for v, w in zip(ns.normals, ns.weights))


def dv_zonotope(ns: NormalSet) -> Zonotope:
    """The Dirichlet-Voronoi cell of the dicing as a zonotope.

    Requires a valid dicing; NotADicing propagates from the edge set.
    """
    compute_edge_set(ns)
    return Zonotope(ns.dimension, zone_vectors(ns))


# ---------------------------------------------------------------------------
# facet vectors


@dataclass(frozen=True)
class FacetVectorSet:
    """One lattice vector per facet pair; facet_link[k] indexes facets()."""

    vectors: tuple[RatVector, ...]
    facet_link: tuple[int, ...]


def _facet_vectors_from(q: QuadraticForm, lattice: LatticeBasis,
                        facet_list: tuple[FacetDescriptor, ...]) -> FacetVectorSet:
    q_inv = inverse(q.matrix)
    vectors = []
    for f in facet_list:
        w = q_inv @ f.normal
        denom = f.normal.dot(w)
        if denom <= 0:
            raise InternalFault("facet normal has nonpositive inverse-form norm")
        lam = w.scale(2 * f.support / denom)
        # bisector identity: x . Q lam == phi(lam)/2 on the facet plane
        if (2 * f.support / denom) * f.support != q.value(lam) * _HALF:
            raise NotInLattice(
                f"facet with normal {f.normal.entries} is not a point bisector")
        if not lattice_contains(lattice, lam):
            raise NotInLattice(
                f"facet vector {lam.entries} is not a lattice point")
        vectors.append(lam)
    return FacetVectorSet(tuple(vectors), tuple(range(len(facet_list))))


def facet_vectors(ns: NormalSet) -> FacetVectorSet:
    """Facet vectors of the DV cell: lattice points whose bisectors carry
    the facets of the zone vector zonotope."""
    from .dicing import lattice_of_dicing
    q = quadratic_form(ns)
    lat = lattice_of_dicing(ns)
    z = dv_zonotope(ns)
    return _facet_vectors_from(q, lat, facets(z))


def _sign_normalized(v: RatVector) -> RatVector:
    lead = next((e for e in v.entries if e != 0), None)
    if lead is None:
        raise ValueError("zero vector has no sign normal form")
    return -v if lead < 0 else v


def check_n_equals_e(fv: FacetVectorSet, es: EdgeSet) -> tuple[tuple[int, int, int], ...]:
    """Match facet vectors against dicing edges, exactly and up to sign.

    Returns the complete matching as (edge index, vector index, sign)
    triples with edges[i] == sign * vectors[j]; raises Mismatch listing
    unmatched edges and unmatched facet vectors otherwise.
    """
    unmatched = {}
    for i, e in enumerate(es.edges):
        unmatched[e.entries] = i
    pairs = []
    extra = []
    for j, lam in enumerate(fv.vectors):
        key = _sign_normalized(lam).entries
        if key in unmatched:
            i = unmatched.pop(key)
            sign = 1 if lam.entries == key else -1
            pairs.append((i, j, sign))
        else:
            extra.append(lam)
    if unmatched or extra:
        missing = tuple(es.edges[i] for i in sorted(unmatched.values()))
        raise Mismatch(
            f"{len(missing)} edge(s) without facet vector, "
            f"{len(extra)} facet vector(s) without edge",
            missing=missing, extra=tuple(extra))
    return tuple(sorted(pairs))


def extract_basis(ns: NormalSet, es: EdgeSet, fv: FacetVectorSet,
                  bijection: tuple[tuple[int, int, int], ...],
                  lattice: LatticeBasis) -> tuple[tuple[int, ...], Fraction]:
    """Select d facet vectors forming a lattice basis, constructively.

    For each normal b of the first independent basis of normals, the edge
    orthogonal to the other basis normals pairs +-1 with b; its matched
    facet vector, sign-adjusted to pairing +1, joins the candidate basis.
    The candidates must make every facet vector integral and must have
    determinant +-1 in lattice coordinates.
    """
    d = ns.dimension
    b_idx = first_basis_indices(ns)
    edge_to_vector = {i: (j, s) for i, j, s in bijection}
    chosen_indices: list[int] = []
    chosen: list[RatVector] = []
    for bi in b_idx:
        others = [ns.normals[j] for j in b_idx if j != bi]
        edge_i = next(
            (k for k, e in enumerate(es.edges)
             if all(w.dot(e) == 0 for w in others) and ns.normals[bi].dot(e) != 0),
            None)
        if edge_i is None:
            raise BasisCheckFailed(f"no edge is dual to basis normal {bi}")
        j, _ = edge_to_vector[edge_i]
        lam = fv.vectors[j]
        pairing = ns.normals[bi].dot(lam)
        if abs(pairing) != 1:
            raise BasisCheckFailed(
                f"facet vector {j} pairs {pairing} with basis normal {bi}")
        chosen_indices.append(j)
        chosen.append(-lam if pairing < 0 else lam)
    basis_matrix = RatMatrix.from_columns(chosen)
    try:
        basis_inv = inverse(basis_matrix)
    except ZonocertError as err:
        raise BasisCheckFailed(f"selected facet vectors are dependent: {err}")
    for k, v in enumerate(fv.vectors):
        coords = basis_inv @ v
        if any(c.denominator != 1 for c in coords.entries):
            raise BasisCheckFailed(
                f"facet vector {k} is fractional in the extracted basis")
    coord_matrix = inverse(lattice.basis) @ basis_matrix
    determinant = det(coord_matrix)
    if abs(determinant) != 1:
        raise BasisCheckFailed(
            f"extracted basis has determinant {determinant} in lattice coordinates")
    return tuple(chosen_indices), determinant


# ---------------------------------------------------------------------------
# brute-force cell oracle


def _ldl(g: RatMatrix) -> tuple[list[list[Fraction]], list[Fraction]]:
    """G = L D L^T with unit lower triangular L; requires positive D."""
    n = g.rows
    lower = [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]
    diag = [_ZERO] * n
    for j in range(n):
        diag[j] = g.entries[j][j] - sum(
            (diag[k] * lower[j][k] * lower[j][k] for k in range(j)), _ZERO)
        if diag[j] <= 0:
            raise NotPositiveDefinite("Gram matrix is not positive definite")
        for i in range(j + 1, n):
            lower[i][j] = (g.entries[i][j] - sum(
                (diag[k] * lower[i][k] * lower[j][k] for k in range(j)), _ZERO)
            ) / diag[j]
    return lower, diag


def _interval(center: Fraction, bound: Fraction) -> range:
    """Integers k with (k + center)^2 <= bound, by exact comparisons."""
    if bound < 0:
        return range(0)
    spread = math.isqrt(math.floor(bound)) + 2
    hi_cap = math.floor(-center) + spread
    lo = math.ceil(-center) - spread
    while (lo + center) * (lo + center) > bound:
        lo += 1
        if lo > hi_cap:
            return range(0)
    hi = hi_cap
    while (hi + center) * (hi + center) > bound:
        hi -= 1
    return range(lo, hi + 1)


def _short_vectors(lattice: LatticeBasis, q: QuadraticForm,
                   bound: Fraction) -> list[tuple[RatVector, Fraction]]:
    """All nonzero lattice vectors with form value at most the bound.

    Returns (vector, form value) pairs; the value falls out of the LDL^T
    recursion for free.
    """
    b = lattice.basis
    gram = b.transpose() @ (q.matrix @ b)
    lower, diag = _ldl(gram)
    n = lattice.dimension
    coeffs = [0] * n
    found: list[tuple[RatVector, Fraction]] = []

    def descend(level: int, remaining: Fraction):
        if level < 0:
            if any(coeffs):
                found.append((b @ RatVector(coeffs), bound - remaining))
            return
        center = sum((lower[i][level] * coeffs[i]
                      for i in range(level + 1, n)), _ZERO)
        for k in _interval(center, remaining / diag[level]):
            coeffs[level] = k
            step = diag[level] * (k + center) * (k + center)
            descend(level - 1, remaining - step)
        coeffs[level] = 0

    descend(n - 1, bound)
    return found


def _cell_data(lattice: LatticeBasis, q: QuadraticForm,
               radius_multiplier: Fraction) -> tuple[list[RatVector], list[RatVector]]:
    """Vertices of the DV cell plus the enumerated lattice neighbors.

    Enumerates lattice vectors up to a radius, prunes half-space
    constraints that are implied by a two-term decomposition, intersects
    the surviving constraints, and refuses to answer unless the result is
    provably complete: the enumerated set must span, every vertex must be
    equidistant to at least d+1 lattice points, and the enumeration
    radius must cover four times the largest vertex norm, which by the
    Cauchy-Schwarz bound rules out any forgotten constraint.
    """
    d = lattice.dimension
    if d > 3:
        raise DimensionTooLarge("cell oracle supports dimension at most 3")
    if radius_multiplier <= 0:
        raise ValueError("radius multiplier must be positive")
    cols = lattice.vectors
    norms = [q.value(v) for v in cols]
    norms += [q.value(cols[i] + cols[j])
              for i, j in itertools.combinations(range(d), 2)]
    radius = radius_multiplier * max(norms)
    enumerated = _short_vectors(lattice, q, radius)
    if not enumerated or rank(
            RatMatrix.from_rows([v for v, _ in enumerated], cols=d)) < d:
        raise EnumerationInsufficient(
            "enumerated lattice vectors do not span the space")

    # A decomposition lam = mu + nu with phi(mu) + phi(nu) <= phi(lam)
    # always has a member with phi <= phi(lam)/2, so scanning the sorted
    # prefix loses no pruning.
    enumerated.sort(key=lambda item: (item[1], item[0].entries))
    values = {v.entries: phi for v, phi in enumerated}
    kept: list[RatVector] = []
    for lam, phi_lam in enumerated:
        cap = phi_lam * _HALF
        dominated = False
        for mu, phi_mu in enumerated:
            if phi_mu > cap:
                break
            phi_nu = values.get((lam - mu).entries)
            if phi_nu is not None and phi_mu + phi_nu <= phi_lam:
                dominated = True
                break
        if not dominated:
            kept.append(lam)

    constraints = [(q.matrix @ lam, values[lam.entries] * _HALF) for lam in kept]
    candidates: dict[tuple, RatVector] = {}
    for subset in itertools.combinations(range(len(constraints)), d):
        m = RatMatrix.from_rows([constraints[i][0] for i in subset], cols=d)
        try:
            point = inverse(m) @ RatVector([constraints[i][1] for i in subset])
        except ZonocertError:
            continue
        if all(n.dot(point) <= r for n, r in constraints):
            candidates.setdefault(point.entries, point)

    full = [(q.matrix @ lam, phi * _HALF) for lam, phi in enumerated]
    vertices = []
    for point in candidates.values():
        if all(n.dot(point) <= r for n, r in full):
            vertices.append(point)
    if not vertices:
        raise EnumerationInsufficient("no cell vertex found inside the radius")

    peak = max(q.value(x) for x in vertices)
    if 4 * peak > radius:
        raise EnumerationInsufficient(
            "enumeration radius too small to certify the vertex set; "
            "increase the radius multiplier")
    # By Cauchy-Schwarz a lattice point with phi > 4*phi(x) is strictly
    # farther from any vertex x than the origin, so the 4*peak ball holds
    # every point that can tie or beat a vertex, and it is fully
    # enumerated by the guard above.
    near = [(lam, phi) for lam, phi in enumerated if phi <= 4 * peak]
    for x in vertices:
        base_val = q.value(x)
        equidistant = 1  # the origin
        for lam, _ in near:
            diff = q.value(x - lam)
            if diff < base_val:
                raise InternalFault("cell vertex closer to a nonzero lattice point")
            if diff == base_val:
                equidistant += 1
        if equidistant < d + 1:
            raise EnumerationInsufficient(
                f"vertex {x.entries} is equidistant to only {equidistant} "
                "lattice points; increase the radius multiplier")
    vertices.sort(key=lambda v: v.entries)
    return vertices, sorted((lam for lam, _ in near), key=lambda v: v.entries)


def dv_cell_oracle(lattice: LatticeBasis, q: QuadraticForm,
                   radius_multiplier: Fraction = Fraction(4)) -> tuple[RatVector, ...]:
    """Vertices of the Dirichlet-Voronoi cell by half-space enumeration.

    Independent of zonotope combinatorics: works for any lattice basis
    and positive form in dimension at most 3.  The default radius covers
    the form values of the basis vectors and their pairwise sums, scaled
    by the multiplier; if that provably cannot bound the cell the oracle
    raises EnumerationInsufficient rather than guessing.
    """
    vertices, _ = _cell_data(lattice, q, Fraction(radius_multiplier))
    return tuple(vertices)


# ---------------------------------------------------------------------------
# Delone duality


@dataclass(frozen=True)
class VertexDuality:
    """A cell vertex with its equidistant lattice points and radius."""

    vertex: RatVector
    equidistant: tuple[RatVector, ...]
    radius: Fraction


@dataclass(frozen=True)
class DualityReport:
    dimension: int
    entries: tuple[VertexDuality, ...]


def delone_duality_check(ns: NormalSet,
                         radius_multiplier: Fraction = Fraction(4)) -> DualityReport:
    """Check that every cell vertex is a proper Delone center.

    Each vertex of the DV cell must be equidistant, in the dicing form,
    to at least d+1 lattice points that affinely span the space, with no
    lattice point strictly closer, and each such point must lie on a
    hyperplane of every family.  Violations raise DualityViolation.
    """
    from .dicing import lattice_of_dicing
    d = ns.dimension
    if d > 3:
        raise DimensionTooLarge("duality check supports dimension at most 3")
    lat = lattice_of_dicing(ns)
    q = quadratic_form(ns)
    vertices, neighbors = _cell_data(lat, q, Fraction(radius_multiplier))
    out = []
    for x in vertices:
        radius = q.value(x)
        equidistant = [zero_vector(d)]
        for lam in neighbors:
            val = q.value(x - lam)
            if val < radius:
                raise DualityViolation(
                    f"vertex {x.entries} has a closer lattice point {lam.entries}")
            if val == radius:
                equidistant.append(lam)
        if len(equidistant) < d + 1:
            raise DualityViolation(
                f"vertex {x.entries} is equidistant to only "
                f"{len(equidistant)} lattice points")
        diffs = [p - equidistant[0] for p in equidistant[1:]]
        if rank(RatMatrix.from_rows(diffs, cols=d)) != d:
            raise DualityViolation(
                f"equidistant set of vertex {x.entries} does not affinely span")
        for p in equidistant:
            for k, v in enumerate(ns.normals):
                if v.dot(p).denominator != 1:
                    raise DualityViolation(
                        f"equidistant point {p.entries} misses family {k}")
        equidistant.sort(key=lambda v: v.entries)
        out.append(VertexDuality(x, tuple(equidistant), radius))
    return DualityReport(d, tuple(out))


# ---------------------------------------------------------------------------
# certification


@dataclass(frozen=True)
class VoronoiCertificate:
    """Instance certificate: facet vectors equal dicing edges and contain
    a lattice basis with determinant +-1 in lattice coordinates."""

    normal_set: NormalSet
    edge_set: EdgeSet
    zonotope: Zonotope
    facet_vectors: FacetVectorSet
    ne_bijection: tuple[tuple[int, int, int], ...]
    lattice: LatticeBasis
    basis_indices: tuple[int, ...]
    lattice_coordinate_det: Fraction


def _lattice_from(ns: NormalSet, es: EdgeSet) -> LatticeBasis:
    lat = dual_lattice_basis(hnf_lattice_basis(ns.normals))
    for e in es.edges:
        if not lattice_contains(lat, e):
            raise InternalFault(f"edge {e.entries} escapes the dicing lattice")
    return lat


def certify_second_voronoi(ns: NormalSet) -> VoronoiCertificate:
    """Run the full pipeline and assemble the certificate.

    Any domain error is re-raised as CertificationError carrying the
    pipeline stage where it occurred.
    """

    def stage(name, fn, *args):
        try:
            return fn(*args)
        except CertificationError:
            raise
        except ZonocertError as err:
            raise CertificationError(name, err) from err

    es = stage("edge-set", compute_edge_set, ns)
    lat = stage("lattice", _lattice_from, ns, es)
    q = stage("quadratic-form", quadratic_form, ns)
    zv = stage("zone-vectors", zone_vectors, ns)
    z = stage("zonotope", Zonotope, ns.dimension, zv)
    facet_list = stage("facets", facets, z)
    fv = stage("facet-vectors", _facet_vectors_from, q, lat, facet_list)
    bijection = stage("n-equals-e", check_n_equals_e, fv, es)
    indices, determinant = stage("basis", extract_basis, ns, es, fv, bijection, lat)
    stage("unimodular-representation", unimodular_representation, ns, es)
    return VoronoiCertificate(
        normal_set=ns, edge_set=es, zonotope=z, facet_vectors=fv,
        ne_bijection=bijection, lattice=lat, basis_indices=indices,
        lattice_coordinate_det=determinant)


@dataclass(frozen=True)
class CertificateAudit:
    """Verdict of the independent verifier, with reasons on failure."""

    ok: bool
    failures: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(cert: VoronoiCertificate) -> CertificateAudit:
    """Re-check every certificate invariant from the raw fields alone.

    Runs no pipeline code beyond formula evaluation, so a certificate
    forged or corrupted after certification is caught here.
    """
    bad: list[str] = []
    ns, es, fv = cert.normal_set, cert.edge_set, cert.facet_vectors
    d = ns.dimension

    if len(es.edges) != len(fv.vectors):
        bad.append("edge and facet vector counts differ")
    edge_seen = sorted(i for i, _, _ in cert.ne_bijection)
    vec_seen = sorted(j for _, j, _ in cert.ne_bijection)
    if edge_seen != list(range(len(es.edges))) or \
            vec_seen != list(range(len(fv.vectors))):
        bad.append("ne_bijection is not a complete matching")
    else:
        for i, j, s in cert.ne_bijection:
            if s not in (1, -1) or es.edges[i].entries != fv.vectors[j].scale(s).entries:
                bad.append(f"matched pair ({i}, {j}) differs beyond sign")

    for e in es.edges:
        for v in ns.normals:
            p = v.dot(e)
            if p not in (-1, 0, 1):
                bad.append(f"edge {e.entries} pairs {p} with a normal")
                break

    try:
        q = quadratic_form(ns)
        recomputed = zone_vectors(ns)
        if tuple(v.entries for v in recomputed) != \
                tuple(g.entries for g in cert.zonotope.generators):
            bad.append("zonotope generators are not the zone vectors")
        del q
    except ZonocertError as err:
        bad.append(f"quadratic form rejected: {err}")

    if not same_lattice(cert.lattice,
                        dual_lattice_basis(hnf_lattice_basis(ns.normals))):
        bad.append("stored lattice is not the dicing lattice")
    for label, vecs in (("edge", es.edges), ("facet vector", fv.vectors)):
        for v in vecs:
            if not lattice_contains(cert.lattice, v):
                bad.append(f"{label} {v.entries} is outside the lattice")

    idx = cert.basis_indices
    if len(idx) != d or len(set(idx)) != d or \
            any(i < 0 or i >= len(fv.vectors) for i in idx):
        bad.append("basis_indices is not a set of d facet vector indices")
    else:
        chosen = RatMatrix.from_columns([fv.vectors[i] for i in idx])
        try:
            chosen_inv = inverse(chosen)
            for k, v in enumerate(fv.vectors):
                coords = chosen_inv @ v
                if any(c.denominator != 1 for c in coords.entries):
                    bad.append(f"facet vector {k} fractional in the stored basis")
            coord_det = det(inverse(cert.lattice.basis) @ chosen)
            if abs(coord_det) != 1:
                bad.append(f"stored basis has lattice determinant {coord_det}")
            if abs(cert.lattice_coordinate_det) != 1 or \
                    abs(cert.lattice_coordinate_det) != abs(coord_det):
                bad.append("stored determinant disagrees with the basis")
        except ZonocertError:
            bad.append("stored basis vectors are linearly dependent")

    return CertificateAudit(ok=not bad, failures=tuple(bad))
