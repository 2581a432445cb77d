"""Lattice and combinatorial equivalence of polytopes.

Both canonical forms are built on the same search: find every column order of
a facet-by-vertex matrix that maximizes the matrix read column by column
after its rows are sorted in decreasing order. The search grows column
prefixes one at a time and keeps only the prefixes whose newest sorted column
is maximal, so symmetric inputs are the only expensive ones.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import lru_cache

from fanodb.exact import IntMatrix, hermite_normal_form, transpose
from fanodb.polytope import (
    Polytope,
    PolytopeError,
    contains_origin_strictly,
    f_vector,
    lattice_points,
    n_lattice_points,
    polar_dual,
    properties,
    volume_and_centroid,
)


def _digest(matrix) -> str:
    text = ";".join(",".join(str(x) for x in row) for row in matrix)
    shape = f"{len(matrix)}x{len(matrix[0]) if matrix else 0}:"
    return hashlib.sha256((shape + text).encode()).hexdigest()


def canonical_column_orders(matrix: list[tuple[int, ...]]) -> tuple[tuple, list[tuple[int, ...]]]:
    """Canonical form of ``matrix`` under row and column permutations.

    Returns the canonical matrix (rows sorted decreasingly, columns in a
    maximizing order) and all maximizing column orders.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if matrix else 0
    # each state: (column order so far, row prefixes)
    states = [((), [()] * nrows)]
    for _ in range(ncols):
        best = None
        nxt = []
        for order, prefixes in states:
            used = set(order)
            for c in range(ncols):
                if c in used:
                    continue
                rows = [pre + (matrix[i][c],) for i, pre in enumerate(prefixes)]
                column = tuple(r[-1] for r in sorted(rows, reverse=True))
                if best is None or column > best:
                    best = column
                    nxt = [(order + (c,), rows)]
                elif column == best:
                    nxt.append((order + (c,), rows))
        states = nxt
    orders = [order for order, _ in states]
    canon = tuple(sorted(states[0][1], reverse=True)) if states else ()
    return canon, orders


@dataclass(frozen=True)
class IncidenceCanonicalKey:
    """Canonical vertex-facet incidence matrix; equal iff the face lattices agree."""

    matrix: tuple[tuple[int, ...], ...]

    @property
    def digest(self) -> str:
        return _digest(self.matrix)


@lru_cache(maxsize=8192)
def incidence_canonical_key(p: Polytope) -> IncidenceCanonicalKey:
    inc = [tuple(int(b) for b in row) for row in p.incidence]
    # the smaller side becomes the column set; ties keep vertices as columns
    flip = p.n_vertices > p.n_facets
    if flip:
        inc = [tuple(col) for col in zip(*inc)]
    canon, _ = canonical_column_orders(inc)
    return IncidenceCanonicalKey(((int(flip),),) + canon)


@dataclass(frozen=True)
class NormalForm:
    """Canonical vertex matrix of a lattice polytope up to unimodular maps."""

    canonical_vertex_matrix: IntMatrix

    @property
    def digest(self) -> str:
        return _digest(self.canonical_vertex_matrix)

    @property
    def hexdigest(self) -> str:
        return self.digest


def _center(p: Polytope) -> Polytope:
    if not p.is_lattice:
        raise PolytopeError("normal form needs a lattice polytope")
    if contains_origin_strictly(p) and all(f[0] == 1 for f in p.facets):
        return p  # reflexive: the origin is the only interior lattice point
    inner = lattice_points(p, interior=True)
    if len(inner) != 1:
        raise PolytopeError("normal form needs exactly one interior lattice point")
    if any(inner[0]):
        return p.translate([-x for x in inner[0]])
    return p


def pairing_matrix(p: Polytope) -> list[tuple[int, ...]]:
    """Lattice distance of every vertex from every facet (rows are facets)."""
    return [
        tuple(sum(a * b for a, b in zip(f, v)) for v in p.vertices) for f in p.facets
    ]


@lru_cache(maxsize=8192)
def normal_form(p: Polytope) -> NormalForm:
    """Normal form of a lattice polytope with a unique interior lattice point.

    The polytope is centered at its interior lattice point. Candidate vertex
    orders are the maximizing column orders of the pairing matrix, which is
    invariant under unimodular maps; among them the smallest Hermite normal
    form of the transposed vertex matrix wins.
    """
    q = _center(p)
    pts = q.points
    _, orders = canonical_column_orders(pairing_matrix(q))
    best = None
    for order in orders:
        vt = transpose([pts[j] for j in order])
        h, _ = hermite_normal_form(vt)
        cand = tuple(transpose(h))
        if best is None or cand < best:
            best = cand
    return NormalForm(best)


def lattice_isomorphic(p: Polytope, q: Polytope) -> bool:
    """True iff some affine unimodular map carries ``p`` onto ``q``.

    Cheap invariants are compared first; reflexive pairs are compared on
    whichever side has fewer vertices, since a unimodular map of a polytope
    induces one of its polar.
    """
    if p.dim != q.dim:
        return False
    if p is q or p == q:
        return True
    if (p.n_vertices, p.n_facets) != (q.n_vertices, q.n_facets):
        return False
    if n_lattice_points(p) != n_lattice_points(q):
        return False
    if f_vector(p) != f_vector(q):
        return False
    if volume_and_centroid(p)[1] != volume_and_centroid(q)[1]:
        return False
    if incidence_canonical_key(p) != incidence_canonical_key(q):
        return False
    pp, pq = properties(p), properties(q)
    if pp.is_reflexive and pq.is_reflexive and p.n_facets < p.n_vertices:
        return normal_form(polar_dual(p)) == normal_form(polar_dual(q))
    return normal_form(p) == normal_form(q)


__all__ = [
    "IncidenceCanonicalKey",
    "NormalForm",
    "canonical_column_orders",
    "incidence_canonical_key",
    "lattice_isomorphic",
    "normal_form",
    "pairing_matrix",
]
