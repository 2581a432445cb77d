"""Brute-force classification of smooth Fano polytopes in dimensions 1 to 3.

One facet is fixed to ``conv(e_1, ..., e_d)``. The boundary is then grown
facet by facet: across an open ridge ``R`` of a facet ``R + {v}`` the
neighbouring facet is ``R + {w}`` where ``w`` is a lattice point of the
coordinate box with ``det(R, w) = -det(R, v)``. Each new facet must keep
every known vertex strictly beneath it and every known facet must keep the
new vertex strictly beneath it, so all facets stay unimodular simplices at
lattice distance one. A walk with no open ridge left is a smooth Fano
polytope; classes are deduplicated by normal form.
"""

from __future__ import annotations

import itertools
import logging
import math
from typing import Iterator

from fanodb.equivalence import normal_form
from fanodb.exact import determinant, solve_rational
from fanodb.polytope import Polytope, from_vertices, properties

log = logging.getLogger(__name__)

MAX_DIM = 3


class EnumerationError(ValueError):
    pass


def _normal(facet: tuple[tuple[int, ...], ...]) -> tuple[int, ...]:
    u = solve_rational(facet, [1] * len(facet))
    return tuple(int(x) for x in u)


def _dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def _candidates(d: int, bound: int) -> list[tuple[int, ...]]:
    out = []
    for w in itertools.product(range(-bound, bound + 1), repeat=d):
        if sum(w) > 1 or not any(w):
            continue
        g = 0
        for x in w:
            g = math.gcd(g, x)
        if g == 1:
            out.append(w)
    return out


def _walks(d: int, bound: int, max_vertices: int) -> Iterator[frozenset]:
    cands = _candidates(d, bound)
    start = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))

    facets: dict[frozenset, tuple[int, ...]] = {}
    ridges: dict[frozenset, int] = {}
    vertices: list[tuple[int, ...]] = []

    def add_facet(fs):
        facets[fs] = _normal(tuple(sorted(fs)))
        for r in itertools.combinations(sorted(fs), d - 1):
            key = frozenset(r)
            ridges[key] = ridges.get(key, 0) + 1

    def drop_facet(fs):
        del facets[fs]
        for r in itertools.combinations(sorted(fs), d - 1):
            key = frozenset(r)
            ridges[key] -= 1
            if not ridges[key]:
                del ridges[key]

    def open_ridge():
        best = None
        for r, n in ridges.items():
            if n == 1:
                key = tuple(sorted(r))
                if best is None or key < best[0]:
                    best = (key, r)
        return best

    def rec():
        found = open_ridge()
        if found is None:
            yield frozenset(vertices)
            return
        rkey, ridge = found
        owner = next(f for f in facets if ridge <= f)
        (v,) = owner - ridge
        u_owner = facets[owner]
        target = -determinant(rkey + (v,))
        for w in cands:
            if w in ridge or w == v:
                continue
            if _dot(u_owner, w) >= 1:
                continue
            if determinant(rkey + (w,)) != target:
                continue
            new = ridge | {w}
            if new in facets:
                continue
            if any(
                ridges.get(frozenset(r), 0) >= 2
                for r in itertools.combinations(sorted(new), d - 1)
                if frozenset(r) != ridge
            ):
                continue
            is_new = w not in vertices
            if is_new:
                if len(vertices) >= max_vertices:
                    continue
                if any(_dot(u, w) >= 1 for u in facets.values()):
                    continue
            u_new = _normal(tuple(sorted(new)))
            if any(_dot(u_new, x) >= 1 for x in vertices if x not in new):
                continue
            if is_new:
                vertices.append(w)
            add_facet(new)
            yield from rec()
            drop_facet(new)
            if is_new:
                vertices.pop()

    vertices.extend(start)
    add_facet(frozenset(start))
    yield from rec()


def enumerate_smooth_fano(d: int, coord_bound: int = 2) -> list[Polytope]:
    """One representative per lattice-equivalence class of smooth Fano d-polytopes.

    Vertices are searched in ``[-coord_bound, coord_bound]^d`` in a frame where
    one facet is the standard basis. Partial polytopes with more than ``3d``
    vertices are abandoned, which loses nothing since no smooth Fano
    d-polytope has more. Output is sorted by normal form.
    """
    if not 1 <= d <= MAX_DIM:
        raise EnumerationError(f"dimension must be between 1 and {MAX_DIM}, got {d}")
    if coord_bound < 1:
        raise EnumerationError("coordinate bound must be positive")
    classes: dict = {}
    walks = 0
    for verts in _walks(d, coord_bound, 3 * d):
        walks += 1
        p = from_vertices(verts)
        if p.n_vertices != len(verts) or not properties(p).is_smooth:
            raise EnumerationError(f"walk closed on a non-smooth polytope: {p}")
        nf = normal_form(p)
        classes.setdefault(nf, p)
    log.info("d=%d bound=%d: %d walks, %d classes", d, coord_bound, walks, len(classes))
    return [classes[nf] for nf in sorted(classes, key=lambda nf: nf.canonical_vertex_matrix)]


__all__ = ["EnumerationError", "MAX_DIM", "enumerate_smooth_fano"]
