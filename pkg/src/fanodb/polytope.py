"""Exact lattice polytopes: V/H conversion, duality and lattice invariants.

Coordinates are homogeneous. A vertex row is ``[1, x1, ..., xd]`` and a facet
row ``[b, -a1, ..., -ad]`` encodes ``b - <a, x> >= 0``, i.e. a facet row dotted
with a homogeneous point is nonnegative on the polytope. Facet rows are
primitive integer vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from fanodb.exact import (
    clear_denominators,
    determinant,
    rank,
    solve_rational,
    to_number,
)


class PolytopeError(ValueError):
    """Invalid polytope input (empty, not full-dimensional, bad precondition)."""


def _dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def _cone_facets(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Extreme rays of ``{y : <y, g> >= 0 for all g}`` by double description.

    ``gens`` must span the whole space; the resulting cone is then pointed.
    """
    n = len(gens[0])
    basis: list[int] = []
    for i, g in enumerate(gens):
        if rank([gens[j] for j in basis] + [g]) > len(basis):
            basis.append(i)
            if len(basis) == n:
                break
    if len(basis) < n:
        raise PolytopeError("point set is not full-dimensional")

    bmat = [gens[i] for i in basis]
    rays: list[tuple[int, ...]] = []
    zeros: list[int] = []
    full = 0
    for i in basis:
        full |= 1 << i
    for j in range(n):
        e = [0] * n
        e[j] = 1
        rays.append(clear_denominators(solve_rational(bmat, e)))
        zeros.append(full & ~(1 << basis[j]))

    need = n - 2
    for i, g in enumerate(gens):
        if i in basis:
            continue
        bit = 1 << i
        vals = [_dot(g, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        if not neg:
            zeros = [z | bit if vals[k] == 0 else z for k, z in enumerate(zeros)]
            continue
        new_rays, new_zeros = [], []
        for k, v in enumerate(vals):
            if v >= 0:
                new_rays.append(rays[k])
                new_zeros.append(zeros[k] | bit if v == 0 else zeros[k])
        for p in pos:
            for q in neg:
                common = zeros[p] & zeros[q]
                if common.bit_count() < need:
                    continue
                if any(
                    k != p and k != q and zeros[k] & common == common
                    for k in range(len(rays))
                ):
                    continue
                vp, vq = vals[p], vals[q]
                ray = [vp * x - vq * y for x, y in zip(rays[q], rays[p])]
                new_rays.append(clear_denominators(ray))
                new_zeros.append(common | bit)
        rays, zeros = new_rays, new_zeros
    return rays


def _homogenize(point: Sequence) -> tuple:
    return (1,) + tuple(to_number(x) for x in point)


@dataclass(frozen=True, eq=False)
class Polytope:
    """A full-dimensional polytope with both representations and incidences.

    Use :func:`from_vertices` to build one from points; the constructor
    trusts its arguments and only sorts rows and fills the incidence.
    """

    vertices: tuple[tuple, ...]
    facets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "facets", tuple(sorted(self.facets)))

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        pts = [list(p) for p in self.points]
        return f"Polytope(dim={self.dim}, vertices={pts})"

    @property
    def dim(self) -> int:
        return len(self.vertices[0]) - 1

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_facets(self) -> int:
        return len(self.facets)

    @property
    def points(self) -> tuple[tuple, ...]:
        """Vertices in affine (non-homogeneous) coordinates."""
        return tuple(v[1:] for v in self.vertices)

    @cached_property
    def facet_vertices(self) -> tuple[frozenset[int], ...]:
        """For each facet, the indices of the vertices lying on it."""
        return tuple(
            frozenset(j for j, v in enumerate(self.vertices) if _dot(f, v) == 0)
            for f in self.facets
        )

    @property
    def incidence(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(
            tuple(j in fv for j in range(self.n_vertices)) for fv in self.facet_vertices
        )

    @cached_property
    def is_lattice(self) -> bool:
        return all(isinstance(x, int) for v in self.vertices for x in v)

    def transform(self, u: Sequence[Sequence[int]]) -> "Polytope":
        """Image under the linear map ``x -> u x`` (``u`` unimodular)."""
        d = self.dim
        uinv = _inverse_columns(u)
        verts = [
            (1,) + tuple(sum(u[i][k] * p[k] for k in range(d)) for i in range(d))
            for p in self.points
        ]
        # b - <a, x> >= 0 becomes b - <a u^-1, y> >= 0
        facets = [
            (f[0],) + tuple(sum(f[1 + k] * uinv[k][i] for k in range(d)) for i in range(d))
            for f in self.facets
        ]
        return Polytope(tuple(verts), tuple(facets))

    def translate(self, shift: Sequence[int]) -> "Polytope":
        verts = [(1,) + tuple(to_number(x + s) for x, s in zip(p, shift)) for p in self.points]
        facets = [(f[0] - _dot(f[1:], shift),) + tuple(f[1:]) for f in self.facets]
        return Polytope(tuple(verts), tuple(facets))


def _inverse_columns(u):
    d = len(u)
    cols = []
    for j in range(d):
        e = [0] * d
        e[j] = 1
        cols.append(solve_rational(u, e))
    inv = [[to_number(cols[j][i]) for j in range(d)] for i in range(d)]
    if any(not isinstance(x, int) for row in inv for x in row):
        raise PolytopeError("transform is not unimodular")
    return inv


def from_vertices(points: Iterable[Sequence]) -> Polytope:
    """Convex hull of integer or rational points (non-homogeneous coordinates)."""
    pts = sorted({tuple(to_number(x) for x in p) for p in points})
    if not pts:
        raise PolytopeError("empty point set")
    if len({len(p) for p in pts}) != 1:
        raise PolytopeError("points of mixed dimension")
    if len(pts[0]) == 0:
        raise PolytopeError("zero-dimensional ambient space")
    homog = [_homogenize(p) for p in pts]
    gens = [clear_denominators(h) for h in homog]
    facets = _cone_facets(gens)
    tight = [frozenset(i for i, f in enumerate(facets) if _dot(f, g) == 0) for g in gens]
    keep = [
        h
        for k, h in enumerate(homog)
        if not any(tight[k] <= tight[m] for m in range(len(homog)) if m != k)
    ]
    return Polytope(tuple(keep), tuple(facets))


def from_homogeneous(rows: Iterable[Sequence]) -> Polytope:
    """Convex hull of points given as homogeneous ``[1, x...]`` rows."""
    pts = []
    for row in rows:
        row = [Fraction(x) for x in row]
        if row[0] != 1:
            raise PolytopeError("homogeneous vertex rows must start with 1")
        pts.append(row[1:])
    return from_vertices(pts)


def polar_dual(p: Polytope) -> Polytope:
    """Polar dual; the origin must lie strictly inside ``p``."""
    if not contains_origin_strictly(p):
        raise PolytopeError("polar dual needs the origin strictly inside")
    verts = [
        (1,) + tuple(to_number(Fraction(-c, f[0])) for c in f[1:]) for f in p.facets
    ]
    facets = [clear_denominators((1,) + tuple(-x for x in v[1:])) for v in p.vertices]
    return Polytope(tuple(verts), tuple(facets))


def contains_origin_strictly(p: Polytope) -> bool:
    return all(f[0] > 0 for f in p.facets)


@dataclass(frozen=True)
class PolytopeProperties:
    is_full_dimensional: bool
    contains_origin_strictly: bool
    is_lattice: bool
    is_reflexive: bool
    is_simplicial: bool
    is_smooth: bool


@lru_cache(maxsize=4096)
def properties(p: Polytope) -> PolytopeProperties:
    d = p.dim
    origin = contains_origin_strictly(p)
    lattice = p.is_lattice
    reflexive = lattice and origin and all(f[0] == 1 for f in p.facets)
    simplicial = all(len(fv) == d for fv in p.facet_vertices)
    smooth = reflexive and simplicial
    if smooth:
        for fv in p.facet_vertices:
            if abs(determinant([p.vertices[j][1:] for j in sorted(fv)])) != 1:
                smooth = False
                break
    return PolytopeProperties(
        is_full_dimensional=True,
        contains_origin_strictly=origin,
        is_lattice=lattice,
        is_reflexive=reflexive,
        is_simplicial=simplicial,
        is_smooth=smooth,
    )


# -- lattice points ---------------------------------------------------------

def bounding_box(points: Iterable[Sequence]) -> tuple[list[int], list[int]]:
    pts = list(points)
    d = len(pts[0])
    lo = [math.floor(min(p[i] for p in pts)) for i in range(d)]
    hi = [math.ceil(max(p[i] for p in pts)) for i in range(d)]
    return lo, hi


def lattice_points_in(
    rows: Sequence[Sequence[int]],
    lo: Sequence[int],
    hi: Sequence[int],
    strict: bool = False,
) -> list[tuple[int, ...]]:
    """Integer points of the box ``[lo, hi]`` with ``row . (1, x) >= 0`` for all rows.

    With ``strict`` the inequalities are strict. Points come out in
    lexicographic order. A prefix is abandoned as soon as some inequality
    cannot be met by any completion inside the box.
    """
    d = len(lo)
    rows = [tuple(r) for r in rows]
    # tail[r][k]: max over the box of sum_{j >= k} c_j x_j for row r
    tail = []
    for r in rows:
        t = [0] * (d + 1)
        for k in range(d - 1, -1, -1):
            c = r[k + 1]
            t[k] = t[k + 1] + max(c * lo[k], c * hi[k])
        tail.append(t)
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def rec(k, partial):
        if k == d:
            if all((v > 0) if strict else (v >= 0) for v in partial):
                out.append(tuple(prefix))
            return
        for x in range(lo[k], hi[k] + 1):
            nxt = [v + r[k + 1] * x for v, r in zip(partial, rows)]
            ok = True
            for v, t in zip(nxt, tail):
                best = v + t[k + 1]
                if best < 0 or (strict and best == 0):
                    ok = False
                    break
            if ok:
                prefix.append(x)
                rec(k + 1, nxt)
                prefix.pop()

    rec(0, [r[0] for r in rows])
    return out


def lattice_points(p: Polytope, interior: bool = False, scale: int = 1) -> list[tuple[int, ...]]:
    """Integer points of ``scale * p`` (strictly interior ones with ``interior``)."""
    lo, hi = bounding_box([[scale * x for x in q] for q in p.points])
    rows = [(scale * f[0],) + tuple(f[1:]) for f in p.facets]
    return lattice_points_in(rows, lo, hi, strict=interior)


@lru_cache(maxsize=4096)
def n_lattice_points(p: Polytope) -> int:
    return len(lattice_points(p))


# -- faces, volume, Ehrhart ---------------------------------------------------

def _affine_dim(p: Polytope, face: frozenset[int]) -> int:
    if not face:
        return -1
    return rank([p.vertices[j] for j in face]) - 1


@lru_cache(maxsize=1024)
def faces(p: Polytope) -> tuple[frozenset[frozenset[int]], ...]:
    """Nonempty proper faces as vertex-index sets, grouped by dimension 0..d-1."""
    d = p.dim
    levels: list[set[frozenset[int]]] = [set() for _ in range(d)]
    levels[d - 1] = set(p.facet_vertices)
    for k in range(d - 1, 0, -1):
        for face in levels[k]:
            for fv in p.facet_vertices:
                sub = face & fv
                if sub != face and sub and _affine_dim(p, sub) == k - 1:
                    levels[k - 1].add(sub)
    return tuple(frozenset(level) for level in levels)


def f_vector(p: Polytope) -> list[int]:
    return [len(level) for level in faces(p)]


def _triangulate(p: Polytope) -> list[tuple[int, ...]]:
    """Pulling triangulation: cone from the smallest vertex over far faces."""
    memo: dict[frozenset[int], list[tuple[int, ...]]] = {}

    def tri(face: frozenset[int], k: int) -> list[tuple[int, ...]]:
        if len(face) == k + 1:
            return [tuple(sorted(face))]
        if face in memo:
            return memo[face]
        apex = min(face)
        subs = set()
        for fv in p.facet_vertices:
            sub = face & fv
            if apex not in sub and sub != face and _affine_dim(p, sub) == k - 1:
                subs.add(sub)
        result = [(apex,) + s for sub in sorted(subs, key=sorted) for s in tri(sub, k - 1)]
        memo[face] = result
        return result

    return tri(frozenset(range(p.n_vertices)), p.dim)


@lru_cache(maxsize=1024)
def volume_and_centroid(p: Polytope) -> tuple[Fraction, int, tuple]:
    """Euclidean volume, normalized lattice volume (d! * vol) and homogeneous centroid."""
    d = p.dim
    total = 0
    moment = [Fraction(0)] * d
    for simplex in _triangulate(p):
        base = p.points[simplex[0]]
        rows = [[Fraction(x) - y for x, y in zip(p.points[j], base)] for j in simplex[1:]]
        vol = abs(_det_rational(rows))
        total += vol
        for i in range(d):
            moment[i] += vol * sum(Fraction(p.points[j][i]) for j in simplex) / (d + 1)
    normalized = to_number(total)
    euclid = Fraction(total, math.factorial(d))
    centroid = (1,) + tuple(to_number(m / total) for m in moment)
    return euclid, normalized, centroid


def _det_rational(rows) -> Fraction:
    lcm = 1
    for row in rows:
        for x in row:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [[int(x * lcm) for x in row] for row in rows]
    return Fraction(determinant(ints), lcm ** len(rows))


@lru_cache(maxsize=1024)
def ehrhart_and_hstar(p: Polytope) -> tuple[list[Fraction], list[int]]:
    """Ehrhart polynomial coefficients (ascending) and the h*-vector."""
    if not p.is_lattice:
        raise PolytopeError("Ehrhart data needs a lattice polytope")
    d = p.dim
    counts = [1] + [len(lattice_points(p, scale=k)) for k in range(1, d + 1)]
    vander = [[k**j for j in range(d + 1)] for k in range(d + 1)]
    coeffs = [to_number(c) for c in solve_rational(vander, counts)]
    hstar = [
        sum((-1) ** i * math.comb(d + 1, i) * counts[j - i] for i in range(j + 1))
        for j in range(d + 1)
    ]
    return coeffs, hstar


def ehrhart_eval(coeffs: Sequence, k: int):
    return to_number(sum(Fraction(c) * k**j for j, c in enumerate(coeffs)))


def dilate_count(p: Polytope, k: int) -> int:
    return len(lattice_points(p, scale=k))


def vertex_sets_equal(p: Polytope, q: Polytope) -> bool:
    return p.vertices == q.vertices and set(p.facets) == set(q.facets)


__all__ = [
    "Polytope",
    "PolytopeError",
    "PolytopeProperties",
    "bounding_box",
    "contains_origin_strictly",
    "dilate_count",
    "ehrhart_and_hstar",
    "ehrhart_eval",
    "f_vector",
    "faces",
    "from_homogeneous",
    "from_vertices",
    "lattice_points",
    "lattice_points_in",
    "n_lattice_points",
    "polar_dual",
    "properties",
    "volume_and_centroid",
]
