"""Minimal resolution of complete 2D fans and virtual facet data.

A singular 2D cone is subdivided along the lattice points of the compact
part of the boundary of conv(cone ∩ Z^2 \\ {0}); consecutive boundary
points span unimodular cones, the subdivision is the unique minimal smooth
refinement, and smooth cones pass through unchanged.  Added rays behave
like facets of the polytope through supporting hyperplanes: each gets the
unique offset whose hyperplane touches the polytope along the face cut out
by the smallest original cone containing the ray.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import NotARefinement, UnsupportedDimension
from .polytope import (Cone, Fan, Frame, IntVec, LatticePolytope,
                       normal_fan, smallest_containing_cone)


def _det2(a: IntVec, b: IntVec) -> int:
    return a[0] * b[1] - a[1] * b[0]


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _boundary_points(u: IntVec, w: IntVec) -> list[IntVec]:
    """Lattice points on the compact hull boundary of cone(u, w), u to w.

    Computed as the additively irreducible points of the cone semigroup:
    every candidate lives in the fundamental parallelogram {su + tw :
    0 <= s, t <= 1}, and a point is on the boundary polyline exactly when
    it is not a sum of two nonzero cone points.
    """
    d = _det2(u, w)
    corners = [(0, 0), u, w, (u[0] + w[0], u[1] + w[1])]
    xs = [c[0] for c in corners]
    ys = [c[1] for c in corners]
    candidates = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if (x, y) == (0, 0):
                continue
            # coordinates of (x, y) in the (u, w) basis
            s_num = _det2((x, y), w)
            t_num = _det2(u, (x, y))
            if 0 <= s_num <= d and 0 <= t_num <= d:
                candidates.append((x, y))
    cset = set(candidates)
    irreducible = []
    for p in candidates:
        if any((p[0] - a[0], p[1] - a[1]) in cset for a in candidates
               if a != p):
            continue
        irreducible.append(p)
    # Sweep from u toward w; directions inside a strongly convex cone are
    # totally ordered by the sign of the cross product.
    return sorted(irreducible, key=_AngleKey)


class _AngleKey:
    __slots__ = ("p",)

    def __init__(self, p):
        self.p = p

    def __lt__(self, other):
        return _det2(self.p, other.p) > 0


@dataclass(frozen=True)
class ResolvedFan:
    """A smooth refinement of a fan; original rays keep their indices and
    added rays are appended, each annotated with the smallest original cone
    containing it."""

    fan: Fan
    original_ray_count: int
    origins: tuple[Cone, ...]

    def __post_init__(self):
        added = self.fan.ray_count - self.original_ray_count
        if added != len(self.origins):
            raise ValueError("one origin cone per added ray required")

    @property
    def added_rays(self) -> tuple[IntVec, ...]:
        return self.fan.rays[self.original_ray_count:]

    def to_json(self) -> dict:
        data = self.fan.to_json()
        data["added_rays"] = [
            {"ray": list(ray), "origin_cone": list(origin.ray_indices)}
            for ray, origin in zip(self.added_rays, self.origins)]
        return data


def minimal_resolution(f: Fan) -> ResolvedFan:
    """Unique minimal smooth subdivision of a complete 2D fan.

    Smooth fans are returned unchanged (no added rays).  Dimensions other
    than 2 are rejected: only the surface case has a canonical minimal
    resolution.
    """
    if f.dim != 2:
        raise UnsupportedDimension(
            f"minimal resolution is implemented for dimension 2, not {f.dim}")
    rays: list[IntVec] = list(f.rays)
    index: dict[IntVec, int] = {r: k for k, r in enumerate(rays)}
    new_cones: list[Cone] = []
    origins: list[Cone] = []

    for cone in f.max_cones:
        if len(cone.ray_indices) != 2:
            raise ValueError("maximal cones of a complete 2D fan must have "
                             "exactly two rays")
        i, j = cone.ray_indices
        u, w = f.rays[i], f.rays[j]
        if _det2(u, w) < 0:
            i, j = j, i
            u, w = w, u
        if _det2(u, w) == 1:
            new_cones.append(cone)
            continue
        path = _boundary_points(u, w)
        assert path[0] == u and path[-1] == w
        for p in path[1:-1]:
            if p not in index:
                index[p] = len(rays)
                rays.append(p)
                origins.append(Cone((i, j)))
        for a, b in zip(path, path[1:]):
            new_cones.append(Cone((index[a], index[b])))

    resolved = Fan(2, tuple(rays), tuple(new_cones))
    return ResolvedFan(resolved, f.ray_count, tuple(origins))


@dataclass(frozen=True)
class VirtualFacet:
    """Supporting-hyperplane data for one ray of a resolved fan: the
    inequality <m, normal> + offset >= 0 holds on the polytope and the
    equality locus meets it in ``face_vertices``."""

    normal: IntVec
    offset: int
    face_vertices: tuple[IntVec, ...]

    def to_json(self) -> dict:
        return {"normal": list(self.normal), "offset": self.offset,
                "face_vertices": [list(v) for v in self.face_vertices]}


def virtual_facets(p: LatticePolytope, rf: ResolvedFan
                   ) -> tuple[VirtualFacet, ...]:
    """Offsets for all rays of a resolved fan over the polytope.

    Original rays keep their facet offsets.  Each added ray gets the
    support-function value: the unique offset whose hyperplane touches the
    polytope, necessarily along the face corresponding to the smallest
    original cone containing the ray.
    """
    base = normal_fan(p)
    if (rf.original_ray_count != len(p.facets)
            or rf.fan.rays[:rf.original_ray_count] != base.rays):
        raise NotARefinement(
            "resolved fan does not refine this polytope's normal fan")
    out = []
    for normal, offset in p.facets:
        out.append(VirtualFacet(normal, offset,
                                _facet_vertices(p, normal, offset)))
    for ray, origin in zip(rf.added_rays, rf.origins):
        values = [_dot(v, ray) for v in p.vertices]
        offset = -min(values)
        face = tuple(v for v, val in zip(p.vertices, values)
                     if val + offset == 0)
        smallest = smallest_containing_cone(base, ray)
        if smallest != origin:
            raise NotARefinement(
                f"added ray {ray} is not interior to its recorded cone")
        expected = p.face_vertices(smallest.ray_indices)
        if set(face) != set(expected):
            raise NotARefinement(
                f"support face of {ray} does not match its cone's face")
        out.append(VirtualFacet(ray, offset, face))
    return tuple(out)


def _facet_vertices(p: LatticePolytope, normal: IntVec, offset: int
                    ) -> tuple[IntVec, ...]:
    return tuple(v for v in p.vertices if _dot(v, normal) + offset == 0)


def resolved_frame(p: LatticePolytope, rf: ResolvedFan) -> Frame:
    """Coordinate frame of the resolved fan with virtual facet offsets."""
    facets = virtual_facets(p, rf)
    return Frame(p, rf.fan, tuple(vf.offset for vf in facets))


def resolved_monomial_exponents(p: LatticePolytope, rf: ResolvedFan,
                                m: Sequence[int]) -> IntVec:
    """Exponents of a point's monomial in the resolved coordinates."""
    return resolved_frame(p, rf).monomial_exponents(m)
