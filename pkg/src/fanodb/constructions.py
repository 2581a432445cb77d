"""Products, free sums, skew bipyramids and generalized simplex sums."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from fanodb.equivalence import incidence_canonical_key
from fanodb.polytope import (
    Polytope,
    PolytopeError,
    bounding_box,
    contains_origin_strictly,
    from_vertices,
    lattice_points_in,
    properties,
)


class ConstructionError(ValueError):
    pass


def product(p: Polytope, q: Polytope) -> Polytope:
    """Cartesian product; facets are the embedded facets of both factors."""
    a, b = p.dim, q.dim
    verts = [(1,) + v[1:] + w[1:] for v in p.vertices for w in q.vertices]
    facets = [f + (0,) * b for f in p.facets] + [
        (g[0],) + (0,) * a + tuple(g[1:]) for g in q.facets
    ]
    return Polytope(tuple(verts), tuple(facets))


def free_sum(p: Polytope, q: Polytope) -> Polytope:
    """Convex hull of ``p x {0}`` and ``{0} x q``; both must contain the origin inside."""
    if not (contains_origin_strictly(p) and contains_origin_strictly(q)):
        raise PolytopeError("free sum needs the origin strictly inside both factors")
    a, b = p.dim, q.dim
    pts = [tuple(v) + (0,) * b for v in p.points] + [(0,) * a + tuple(w) for w in q.points]
    return from_vertices(pts)


def fano_simplex(b: int) -> Polytope:
    """``conv(e_1, ..., e_b, -(e_1 + ... + e_b))``."""
    if b < 1:
        raise ConstructionError("simplex dimension must be at least 1")
    pts = [tuple(int(i == j) for j in range(b)) for i in range(b)]
    pts.append(tuple(-1 for _ in range(b)))
    return from_vertices(pts)


def segment() -> Polytope:
    return fano_simplex(1)


def skew_bipyramid(p: Polytope, v: Sequence[int]) -> Polytope:
    """``conv(p x {0}, -e_{d+1}, (v, 1))`` for a vertex ``v`` of ``p``."""
    v = tuple(v)
    if v not in p.points:
        raise ConstructionError(f"{list(v)} is not a vertex")
    d = p.dim
    pts = [tuple(w) + (0,) for w in p.points]
    pts.append((0,) * d + (-1,))
    pts.append(v + (1,))
    return from_vertices(pts)


@dataclass(frozen=True)
class SimplexSumSpec:
    """A free sum ``base + simplex`` with the apex ``e_{a+b}`` moved to ``shifted_vertex``."""

    base: Polytope
    simplex_dim: int
    shifted_vertex: tuple[int, ...]

    def build(self) -> Polytope:
        a, b = self.base.dim, self.simplex_dim
        r = free_sum(self.base, fano_simplex(b))
        apex = (0,) * (a + b - 1) + (1,)
        if self.shifted_vertex[a:] != apex[a:]:
            raise ConstructionError("shifted vertex must stay in the apex hyperplane")
        pts = [w for w in r.points if w != apex] + [self.shifted_vertex]
        return from_vertices(pts)


def shift_region(p: Polytope, b: int):
    """Strict inequalities on ``y`` for placing the apex at ``(y, 0, ..., 0, 1)``.

    Returns ``(rows, lo, hi)`` for :func:`lattice_points_in`. Every facet of
    the free sum avoiding the apex restricts ``y``; since each facet normal
    of the base shows up among them, the region sits inside a dilate of the
    base, whose bounding box is returned.
    """
    a = p.dim
    r = free_sum(p, fano_simplex(b))
    apex = (1,) + (0,) * (a + b - 1) + (1,)
    rows = []
    bounds = {}
    for f in r.facets:
        if sum(x * y for x, y in zip(f, apex)) == 0:
            continue
        # f . (1, y, 0, ..., 0, 1) > 0
        row = (f[0] + f[-1],) + tuple(f[1 : a + 1])
        rows.append(row)
        normal = tuple(-c for c in row[1:])
        if row[0] > 0:
            bounds[normal] = max(bounds.get(normal, row[0]), row[0])
    base_normals = {tuple(-c for c in g[1:]): g[0] for g in p.facets}
    if not set(base_normals) <= set(bounds):
        raise ConstructionError("shift region is not bounded by the base facets")
    # u.y < c_u for all base facets u.y <= 1 puts y inside (max c) * p
    scale = max(bounds[u] for u in base_normals)
    lo, hi = bounding_box([[scale * x for x in q] for q in p.points])
    return rows, lo, hi


def simplex_sums(p: Polytope, b: int) -> list[tuple[tuple[int, ...], Polytope]]:
    """Generalized simplex sums of ``p`` with the ``b``-simplex, with their shifts.

    The apex ``e_{a+b}`` of the free sum moves within its hyperplane by
    ``(y, 0, ..., 0)`` for every lattice point ``y`` strictly inside the
    facets that avoid the apex; placements that change the combinatorial
    type are dropped. The unshifted free sum (``y = 0``) is always first.
    No deduplication happens here.
    """
    if b < 1 or p.dim < 1:
        raise ConstructionError("need a base of dimension >= 1 and b >= 1")
    r = free_sum(p, fano_simplex(b))
    key = incidence_canonical_key(r)
    rows, lo, hi = shift_region(p, b)
    zero = (0,) * p.dim
    out = [(zero, r)]
    tail = (0,) * (b - 1) + (1,)
    for y in lattice_points_in(rows, lo, hi, strict=True):
        if y == zero:
            continue
        cand = SimplexSumSpec(p, b, tuple(y) + tail).build()
        if cand.n_vertices != r.n_vertices or incidence_canonical_key(cand) != key:
            continue
        if not properties(cand).is_smooth:
            raise ConstructionError(
                f"type-preserving shift {list(y)} produced a non-smooth polytope"
            )
        out.append((tuple(y), cand))
    return out


def simplex_sum_candidates(p: Polytope, b: int) -> list[Polytope]:
    """All generalized simplex sums of ``p`` with the ``b``-simplex (see :func:`simplex_sums`)."""
    return [q for _, q in simplex_sums(p, b)]


__all__ = [
    "ConstructionError",
    "SimplexSumSpec",
    "fano_simplex",
    "free_sum",
    "product",
    "segment",
    "shift_region",
    "simplex_sum_candidates",
    "simplex_sums",
    "skew_bipyramid",
]
