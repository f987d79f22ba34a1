"""Centered zonotopes with exact facet and ridge combinatorics.

A zonotope here is the set of sums sum t_i v_i with t_i in [-1/2, 1/2],
so it is centrally symmetric about the origin by construction.  Facet
normals come from rank d-1 generator subsets; the independent cross-check
``vertices_oracle`` builds the same body as a plain convex hull of the
2^n signed generator sums, using no zonotope combinatorics at all.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (DimensionTooLarge, DimensionTooSmall, InternalFault,
                     InvalidZonotope, SpanDeficient, ZeroDirection)
from .ratgeom import (RatMatrix, RatVector, canonical_direction, kernel_basis,
                      kernel_line, parallel_ratio, rank, rref)

_ZERO = Fraction(0)
_HALF = Fraction(1, 2)

PARALLELOGRAM = "parallelogram"
HEXAGON = "hexagon"
OTHER = "other"


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Zonotope:
    """Zonotope sum of centered segments [-v/2, v/2].

    Parallel input generators are merged at construction: a later v with
    v == c*g extends the earlier generator g to (1 + |c|)*g, keeping the
    first seen orientation.  Generators must be nonzero and span the
    ambient space.
    """

    dimension: int
    generators: tuple[RatVector, ...]

    def __init__(self, dimension, generators):
        d = int(dimension)
        merged: list[RatVector] = []
        for k, v in enumerate(generators):
            if v.dim != d:
                raise InvalidZonotope(f"generator {k} has dimension {v.dim}, expected {d}")
            if v.is_zero():
                raise InvalidZonotope(f"generator {k} is zero")
            for pos, g in enumerate(merged):
                c = parallel_ratio(v, g)
                if c is not None:
                    merged[pos] = g.scale(1 + abs(c))
                    break
            else:
                merged.append(v)
        if rank(RatMatrix.from_rows(merged, cols=d)) != d:
            raise SpanDeficient("generators do not span the ambient space")
        object.__setattr__(self, "dimension", d)
        object.__setattr__(self, "generators", tuple(merged))


@dataclass(frozen=True)
class FacetDescriptor:
    """One facet of the +- pair with the given outward normal."""

    normal: RatVector
    support: Fraction
    generator_subset: tuple[int, ...]
    center: RatVector


def facets(z: Zonotope) -> tuple[FacetDescriptor, ...]:
    """One descriptor per facet pair, in order of first spanning subset.

    Each rank d-1 subset of generators spans a candidate facet hyperplane;
    the facet support is half the sum of |normal . v| over all generators
    and the facet center is half the signed sum of the generators off the
    hyperplane.
    """
    d = z.dimension
    gens = z.generators
    seen: set[tuple[Fraction, ...]] = set()
    out: list[FacetDescriptor] = []
    for subset in itertools.combinations(range(len(gens)), d - 1):
        m = RatMatrix.from_rows([gens[i] for i in subset], cols=d)
        if rank(m) != d - 1:
            continue
        normal = kernel_line(m)
        if normal.entries in seen:
            continue
        seen.add(normal.entries)
        products = [normal.dot(g) for g in gens]
        support = sum((abs(p) for p in products), _ZERO) * _HALF
        on_facet = tuple(i for i, p in enumerate(products) if p == 0)
        center_coords = [_ZERO] * d
        for g, p in zip(gens, products):
            if p != 0:
                s = _sign(p)
                center_coords = [c + _HALF * s * e
                                 for c, e in zip(center_coords, g.entries)]
        out.append(FacetDescriptor(normal, support, on_facet,
                                   RatVector(center_coords)))
    return tuple(out)


@dataclass(frozen=True)
class RidgeClass:
    """A rank d-2 generator flat and the shape of the ridge figure on it."""

    flat: tuple[int, ...]
    direction_count: int
    classification: str


def ridge_classification(z: Zonotope) -> tuple[RidgeClass, ...]:
    """Classify every ridge flat by its projected generator directions.

    Projecting along a rank d-2 generator flat maps the remaining
    generators to the plane; 2 distinct directions give a parallelogram
    ridge figure, 3 a hexagon, more fall in the catch-all class.
    """
    d = z.dimension
    if d < 2:
        raise DimensionTooSmall("ridges need dimension at least 2")
    gens = z.generators
    seen: set[tuple] = set()
    out: list[RidgeClass] = []
    for subset in itertools.combinations(range(len(gens)), d - 2):
        m = RatMatrix.from_rows([gens[i] for i in subset], cols=d)
        if rank(m) != d - 2:
            continue
        reduced, _ = rref(m)
        key = reduced.entries
        if key in seen:
            continue
        seen.add(key)
        k1, k2 = kernel_basis(m)
        directions: set[tuple[Fraction, ...]] = set()
        for g in gens:
            image = RatVector([k1.dot(g), k2.dot(g)])
            if image.is_zero():
                continue
            directions.add(canonical_direction(image).entries)
        count = len(directions)
        if count < 2:
            raise InternalFault("projected generators collapse to a line")
        shape = PARALLELOGRAM if count == 2 else HEXAGON if count == 3 else OTHER
        out.append(RidgeClass(subset, count, shape))
    return tuple(out)


@dataclass(frozen=True)
class VenkovReport:
    """Outcome of the ridge conditions for space filling by translations."""

    holds: bool
    centrally_symmetric: bool
    facets_centrally_symmetric: bool
    ridges: tuple[RidgeClass, ...]
    witnesses: tuple[RidgeClass, ...]

    def __bool__(self) -> bool:
        return self.holds


def venkov_check(z: Zonotope) -> VenkovReport:
    """Check the conditions for tiling space by translates.

    Central symmetry of the body and of every facet holds for any
    zonotope by construction; what remains is that every ridge figure is
    a parallelogram or a hexagon.  Offending ridges are reported.
    """
    ridges = ridge_classification(z)
    witnesses = tuple(r for r in ridges
                      if r.classification not in (PARALLELOGRAM, HEXAGON))
    return VenkovReport(holds=not witnesses,
                        centrally_symmetric=True,
                        facets_centrally_symmetric=True,
                        ridges=ridges,
                        witnesses=witnesses)


def support_value(z: Zonotope, direction: RatVector) -> Fraction:
    """Support function of the zonotope, half the sum of |direction . v|."""
    if direction.is_zero():
        raise ZeroDirection("support direction must be nonzero")
    return sum((abs(direction.dot(g)) for g in z.generators), _ZERO) * _HALF


# ---------------------------------------------------------------------------
# independent hull oracle


def _cross2(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull2d(points: list[tuple[Fraction, ...]]) -> list[tuple[Fraction, ...]]:
    """Vertices of the 2d convex hull, monotone chain with strict turns."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[tuple[Fraction, ...]] = []
    for p in pts:
        while len(lower) >= 2 and _cross2(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[Fraction, ...]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross2(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _in_convex_hull(p: tuple[Fraction, ...],
                    pts: list[tuple[Fraction, ...]]) -> bool:
    """Exact membership of p in conv(pts) via a phase-1 simplex.

    Feasibility of: lambda >= 0, sum lambda = 1, sum lambda q = p.
    Bland's rule on entering and leaving variables guarantees termination.
    """
    if not pts:
        return False
    d = len(p)
    m = d + 1
    n = len(pts)
    one = Fraction(1)
    tableau: list[list[Fraction]] = []
    for r in range(m):
        if r < d:
            row = [q[r] for q in pts]
            rhs = Fraction(p[r])
        else:
            row = [one] * n
            rhs = one
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        art = [_ZERO] * m
        art[r] = one
        tableau.append(row + art + [rhs])
    ncols = n + m
    basis = list(range(n, n + m))
    cost = [sum(tableau[i][j] for i in range(m)) - (one if j >= n else _ZERO)
            for j in range(ncols)]
    objective = sum(tableau[i][ncols] for i in range(m))
    while True:
        enter = next((j for j in range(ncols) if cost[j] > 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if tableau[i][enter] > 0:
                ratio = tableau[i][ncols] / tableau[i][enter]
                if (best is None or ratio < best
                        or (ratio == best and basis[i] < basis[leave])):
                    best, leave = ratio, i
        if leave is None:
            raise InternalFault("phase-1 simplex is unbounded")
        piv = tableau[leave][enter]
        tableau[leave] = [x / piv for x in tableau[leave]]
        for i in range(m):
            if i != leave and tableau[i][enter] != 0:
                f = tableau[i][enter]
                tableau[i] = [x - f * y
                              for x, y in zip(tableau[i], tableau[leave])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, tableau[leave][:ncols])]
        objective -= f * tableau[leave][ncols]
        basis[leave] = enter
    return objective == 0


def _extreme_points(points: list[tuple[Fraction, ...]]) -> list[tuple[Fraction, ...]]:
    """Extreme points of a 3d point set by exact hull membership tests."""
    pts = sorted(set(points))
    working: list[tuple[Fraction, ...]] = []
    for p in pts:
        if not _in_convex_hull(p, working):
            working.append(p)
    final = []
    for i, p in enumerate(working):
        if not _in_convex_hull(p, working[:i] + working[i + 1:]):
            final.append(p)
    return final


def vertices_oracle(z: Zonotope) -> tuple[RatVector, ...]:
    """Vertex set by brute force, independent of facet combinatorics.

    Enumerates all 2^n signed sums (1/2) sum +-v_i and keeps the extreme
    points of that cloud.  Exponential in the generator count; usable for
    dimension at most 3 at desk scale.
    """
    d = z.dimension
    if d > 3:
        raise DimensionTooLarge("vertex oracle supports dimension at most 3")
    sums: list[tuple[Fraction, ...]] = [tuple([_ZERO] * d)]
    for g in z.generators:
        half = [e * _HALF for e in g.entries]
        nxt = []
        for s in sums:
            nxt.append(tuple(a + b for a, b in zip(s, half)))
            nxt.append(tuple(a - b for a, b in zip(s, half)))
        sums = nxt
    if d == 1:
        pts = sorted(set(sums))
        extreme = [pts[0], pts[-1]]
    elif d == 2:
        extreme = _hull2d(sums)
    else:
        extreme = _extreme_points(sums)
    return tuple(RatVector(p) for p in sorted(set(extreme)))


def hull_facet_planes(points: list[RatVector]) -> tuple[tuple[RatVector, Fraction], ...]:
    """Supporting hyperplanes of conv(points) spanned by d of the points.

    Returns (outward normal, support) pairs with canonical integer
    normals; both members of an opposite facet pair appear.  Intended as
    an independent cross-check against facet enumeration.
    """
    if not points:
        return ()
    d = points[0].dim
    found: dict[tuple, tuple[RatVector, Fraction]] = {}
    for subset in itertools.combinations(points, d):
        diffs = [q - subset[0] for q in subset[1:]]
        m = RatMatrix.from_rows(diffs, cols=d)
        if rank(m) != d - 1:
            continue
        normal = kernel_line(m)
        values = [normal.dot(q) for q in points]
        h = normal.dot(subset[0])
        if max(values) == h:
            found[(normal.entries, h)] = (normal, h)
        if min(values) == h:
            neg = -normal
            found[(neg.entries, -h)] = (neg, -h)
    return tuple(found[k] for k in sorted(found))
