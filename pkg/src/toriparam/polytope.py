"""Lattice polytopes, normal fans, point monomials and primitive collections.

Polytopes are full-dimensional with integer vertices.  Facet data is the
pair (inward primitive normal n_i, offset a_i) presenting the polytope as
the intersection of half-spaces <m, n_i> >= -a_i; the exponent of the i-th
facet variable in a point's monomial is the lattice distance <m, n_i> + a_i.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import (NotFullDimensional, NotInSupport, PointOutsidePolytope,
                     UnsupportedDimension, ZeroVector)
from .linalg import IntMat, determinant, primitive_vector, rank

IntVec = tuple[int, ...]


class Facet(NamedTuple):
    normal: IntVec
    offset: int


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _affine_rank(points: Sequence[IntVec]) -> int:
    if not points:
        return -1
    base = points[0]
    diffs = [tuple(p[i] - base[i] for i in range(len(base))) for p in points[1:]]
    if not diffs:
        return 0
    return rank(IntMat.from_rows(diffs).transpose())


def _hull_2d(points: list[IntVec]) -> list[IntVec]:
    """Monotone chain; returns hull vertices in counterclockwise order."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[IntVec] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[IntVec] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _cross3(a: IntVec, b: IntVec) -> IntVec:
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def _facets_from_points(n: int, points: list[IntVec]) -> list[Facet]:
    """Irredundant primitive facet inequalities of conv(points), n <= 3."""
    facets: set[Facet] = set()
    if n == 1:
        lo = min(p[0] for p in points)
        hi = max(p[0] for p in points)
        facets.add(Facet((1,), -lo))
        facets.add(Facet((-1,), hi))
    elif n == 2:
        hull = _hull_2d(points)
        for i, p in enumerate(hull):
            q = hull[(i + 1) % len(hull)]
            d = (q[0] - p[0], q[1] - p[1])
            normal = primitive_vector((-d[1], d[0]))
            facets.add(Facet(normal, -_dot(p, normal)))
    else:
        for tri in itertools.combinations(points, 3):
            p1, p2, p3 = tri
            normal = _cross3(tuple(p2[i] - p1[i] for i in range(3)),
                             tuple(p3[i] - p1[i] for i in range(3)))
            if all(x == 0 for x in normal):
                continue
            sides = {(_dot(p, normal) - _dot(p1, normal) > 0) -
                     (_dot(p, normal) - _dot(p1, normal) < 0) for p in points}
            if 1 in sides and -1 in sides:
                continue
            if -1 in sides:
                normal = tuple(-x for x in normal)
            normal = primitive_vector(normal)
            facets.add(Facet(normal, -_dot(p1, normal)))
    return sorted(facets)


@dataclass(frozen=True)
class LatticePolytope:
    """Full-dimensional lattice polytope with an explicit facet presentation.

    The facet order fixes the labeling of facet variables; construction via
    ``from_vertices`` sorts facets lexicographically by normal, while direct
    construction keeps the caller's labeling (validated against the hull for
    dimensions up to 3).
    """

    dim: int
    vertices: tuple[IntVec, ...]
    facets: tuple[Facet, ...]

    def __post_init__(self):
        n = self.dim
        if n < 1:
            raise UnsupportedDimension(f"dimension {n}")
        object.__setattr__(self, "vertices",
                           tuple(tuple(int(x) for x in v) for v in self.vertices))
        object.__setattr__(self, "facets",
                           tuple(Facet(tuple(int(x) for x in f[0]), int(f[1]))
                                 for f in self.facets))
        if any(len(v) != n for v in self.vertices):
            raise NotFullDimensional("vertex length does not match dimension")
        if _affine_rank(self.vertices) != n:
            raise NotFullDimensional("vertices do not span the ambient space")
        for normal, offset in self.facets:
            if len(normal) != n:
                raise NotFullDimensional("facet normal length mismatch")
            if primitive_vector(normal) != normal:
                raise ValueError(f"facet normal {normal} is not primitive")
            slacks = [_dot(v, normal) + offset for v in self.vertices]
            if any(s < 0 for s in slacks):
                raise ValueError(f"facet ({normal}, {offset}) cuts off a vertex")
            tight = [v for v, s in zip(self.vertices, slacks) if s == 0]
            if _affine_rank(tight) != n - 1:
                raise ValueError(
                    f"facet ({normal}, {offset}) is not supported by "
                    f"{n} affinely independent vertices")
        if n <= 3:
            expected = set(_facets_from_points(n, list(self.vertices)))
            if set(self.facets) != expected:
                raise ValueError("facet list does not cut out the convex hull "
                                 "of the vertices")

    @property
    def facet_count(self) -> int:
        return len(self.facets)

    def offsets(self) -> IntVec:
        return tuple(f.offset for f in self.facets)

    def contains(self, m: Sequence[int]) -> bool:
        return all(_dot(m, f.normal) + f.offset >= 0 for f in self.facets)

    def tight_facets(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(i for i, f in enumerate(self.facets)
                     if _dot(v, f.normal) + f.offset == 0)

    def face_vertices(self, facet_indices: Iterable[int]) -> tuple[IntVec, ...]:
        """Vertices lying on every one of the given facets."""
        idx = tuple(facet_indices)
        return tuple(v for v in self.vertices
                     if all(_dot(v, self.facets[i].normal) +
                            self.facets[i].offset == 0 for i in idx))

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "vertices": [list(v) for v in self.vertices],
            "facets": [{"normal": list(f.normal), "offset": f.offset}
                       for f in self.facets],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LatticePolytope":
        n = int(data["dim"])
        vertices = [tuple(int(x) for x in v) for v in data["vertices"]]
        if "facets" in data:
            facets = [Facet(tuple(int(x) for x in f["normal"]), int(f["offset"]))
                      for f in data["facets"]]
            return cls(n, tuple(vertices), tuple(facets))
        return polytope_from_vertices(n, vertices)


def polytope_from_vertices(n: int, points: Sequence[Sequence[int]]
                           ) -> LatticePolytope:
    """Convex hull with canonical facet order (lexicographic by normal).

    Supported for n in {1, 2, 3}; higher dimensions must be constructed
    directly from a validated facet presentation.
    """
    if n not in (1, 2, 3):
        raise UnsupportedDimension(
            f"hull computation supports dimensions 1-3, not {n}")
    pts = [tuple(int(x) for x in p) for p in points]
    if any(len(p) != n for p in pts):
        raise NotFullDimensional("point length does not match dimension")
    pts = sorted(set(pts))
    if _affine_rank(pts) != n:
        raise NotFullDimensional("points do not span the ambient space")
    facets = _facets_from_points(n, pts)
    vertices = []
    for p in pts:
        active = [f.normal for f in facets if _dot(p, f.normal) + f.offset == 0]
        if active and rank(IntMat.from_rows(active)) == n:
            vertices.append(p)
    return LatticePolytope(n, tuple(vertices), tuple(facets))


def lattice_points(p: LatticePolytope) -> tuple[IntVec, ...]:
    """All integer points of the polytope, in lexicographic order."""
    lows = [min(v[i] for v in p.vertices) for i in range(p.dim)]
    highs = [max(v[i] for v in p.vertices) for i in range(p.dim)]
    out = []
    for m in itertools.product(*(range(lo, hi + 1)
                                 for lo, hi in zip(lows, highs))):
        if p.contains(m):
            out.append(m)
    return tuple(out)


# -- fans -----------------------------------------------------------------------


@dataclass(frozen=True)
class Cone:
    """A cone of a fan, recorded by the indices of its generating rays."""

    ray_indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(sorted(set(int(i) for i in self.ray_indices)))
        if len(idx) != len(self.ray_indices):
            raise ValueError("duplicate ray indices in a cone")
        object.__setattr__(self, "ray_indices", idx)

    def contains_rays(self, indices: Iterable[int]) -> bool:
        return set(indices) <= set(self.ray_indices)


@dataclass(frozen=True)
class Fan:
    """A complete fan given by primitive ray generators and maximal cones."""

    dim: int
    rays: tuple[IntVec, ...]
    max_cones: tuple[Cone, ...]

    def __post_init__(self):
        object.__setattr__(self, "rays",
                           tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "max_cones", tuple(self.max_cones))
        if len(set(self.rays)) != len(self.rays):
            raise ValueError("duplicate rays")
        for r in self.rays:
            if len(r) != self.dim:
                raise ValueError("ray length does not match dimension")
            if primitive_vector(r) != r:
                raise ValueError(f"ray {r} is not primitive")
        covered = set()
        for cone in self.max_cones:
            if any(i >= len(self.rays) for i in cone.ray_indices):
                raise ValueError("cone references an unknown ray")
            covered.update(cone.ray_indices)
        if covered != set(range(len(self.rays))):
            raise ValueError("every ray must appear in some maximal cone")

    @property
    def ray_count(self) -> int:
        return len(self.rays)

    def ray_matrix(self) -> IntMat:
        return IntMat.from_cols(list(self.rays), self.dim)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c.ray_indices) for c in self.max_cones],
        }


def normal_fan(p: LatticePolytope) -> Fan:
    """Inner normal fan: one ray per facet, one maximal cone per vertex."""
    cones = []
    for v in p.vertices:
        cones.append(Cone(p.tight_facets(v)))
    return Fan(p.dim, tuple(f.normal for f in p.facets), tuple(cones))


def is_smooth(f: Fan) -> tuple[bool, tuple[Cone, ...]]:
    """Check that every maximal cone's rays form a basis of the lattice."""
    bad = []
    for cone in f.max_cones:
        gens = [f.rays[i] for i in cone.ray_indices]
        if len(gens) != f.dim:
            bad.append(cone)
            continue
        if abs(determinant(IntMat.from_cols(gens, f.dim))) != 1:
            bad.append(cone)
    return (not bad, tuple(bad))


def primitive_collections(f: Fan) -> tuple["PrimitiveCollection", ...]:
    """All minimal sets of rays not contained in a single cone.

    Brute-force subset enumeration; fans here are small.  Every proper
    subset of a returned collection lies in some maximal cone.
    """
    r = f.ray_count
    cone_sets = [set(c.ray_indices) for c in f.max_cones]

    def in_some_cone(s: frozenset) -> bool:
        return any(s <= cs for cs in cone_sets)

    found: list[tuple[int, ...]] = []
    for size in range(2, r + 1):
        for combo in itertools.combinations(range(r), size):
            s = frozenset(combo)
            if in_some_cone(s):
                continue
            if any(frozenset(sub) <= s for sub in found):
                continue
            if all(in_some_cone(s - {i}) for i in combo):
                found.append(combo)
    found.sort(key=lambda c: (len(c), c))
    return tuple(PrimitiveCollection(c) for c in found)


@dataclass(frozen=True)
class PrimitiveCollection:
    ray_indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ray_indices",
                           tuple(sorted(int(i) for i in self.ray_indices)))


# -- cone geometry ----------------------------------------------------------------


def _cone_facet_normals(dim: int, gens: list[IntVec]) -> list[IntVec]:
    """Inequality description {x : <w, x> >= 0 for all w} of a full-dim cone."""
    if dim == 1:
        return [primitive_vector(gens[0])]
    if dim == 2:
        out = []
        for i, g in enumerate(gens):
            w = (-g[1], g[0])
            others = [h for j, h in enumerate(gens) if j != i]
            if all(_dot(w, h) >= 0 for h in others):
                out.append(primitive_vector(w))
            elif all(_dot(w, h) <= 0 for h in others):
                out.append(primitive_vector(tuple(-x for x in w)))
        return sorted(set(out))
    out = []
    for a, b in itertools.combinations(gens, 2):
        w = _cross3(a, b)
        if all(x == 0 for x in w):
            continue
        dots = [_dot(w, g) for g in gens]
        if all(d >= 0 for d in dots):
            out.append(primitive_vector(w))
        elif all(d <= 0 for d in dots):
            out.append(primitive_vector(tuple(-x for x in w)))
    return sorted(set(out))


def smallest_containing_cone(f: Fan, v: Sequence[int]) -> Cone:
    """The unique smallest cone of the fan containing v (exact arithmetic)."""
    v = tuple(int(x) for x in v)
    if all(x == 0 for x in v):
        raise ZeroVector("the origin lies in every cone")
    if f.dim > 3:
        raise UnsupportedDimension("cone search supports dimensions 1-3")
    for cone in f.max_cones:
        gens = [f.rays[i] for i in cone.ray_indices]
        walls = _cone_facet_normals(f.dim, gens)
        dots = [_dot(w, v) for w in walls]
        if any(d < 0 for d in dots):
            continue
        active = [w for w, d in zip(walls, dots) if d == 0]
        face = tuple(i for i in cone.ray_indices
                     if all(_dot(w, f.rays[i]) == 0 for w in active))
        return Cone(face)
    raise NotInSupport(f"{v} lies in no cone of the fan")


def monomial_exponents(p: LatticePolytope, m: Sequence[int]) -> IntVec:
    """Exponent vector of the monomial attached to a lattice point.

    Entry i is the lattice distance <m, n_i> + a_i from m to facet i; it
    vanishes exactly when m lies on that facet.
    """
    return frame_of(p).monomial_exponents(m)


# -- coordinate frames ---------------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    """A polytope together with a complete fan refining its normal fan and
    one offset per ray.

    For the plain normal fan the offsets are the facet offsets; a resolved
    fan contributes extra rays whose offsets come from supporting
    hyperplanes.  The frame fixes the homogeneous coordinates used by
    monomials, systems and compositions.
    """

    polytope: LatticePolytope
    fan: Fan
    offsets: IntVec

    def __post_init__(self):
        object.__setattr__(self, "offsets", tuple(int(a) for a in self.offsets))
        if len(self.offsets) != self.fan.ray_count:
            raise ValueError("one offset per ray required")

    @property
    def ray_count(self) -> int:
        return self.fan.ray_count

    def monomial_exponents(self, m: Sequence[int]) -> IntVec:
        m = tuple(int(x) for x in m)
        if len(m) != self.polytope.dim:
            raise PointOutsidePolytope(f"{m} has the wrong dimension")
        if not self.polytope.contains(m):
            raise PointOutsidePolytope(f"{m} is outside the polytope")
        exps = tuple(_dot(m, ray) + a
                     for ray, a in zip(self.fan.rays, self.offsets))
        if any(e < 0 for e in exps):
            raise PointOutsidePolytope(
                f"{m} violates an added supporting hyperplane")
        return exps


def frame_of(p: LatticePolytope) -> Frame:
    return Frame(p, normal_fan(p), p.offsets())


def load_polytope(path_or_data) -> LatticePolytope:
    if isinstance(path_or_data, dict):
        return LatticePolytope.from_json(path_or_data)
    with open(path_or_data, "r", encoding="utf-8") as fh:
        return LatticePolytope.from_json(json.load(fh))
