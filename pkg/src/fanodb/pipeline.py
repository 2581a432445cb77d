"""Build the smooth reflexive collection and decompose its members.

The stored collection follows the database convention: each document holds
the polar dual of a smooth Fano polytope. Constructions run on the Fano side
and are polarized once, right before identification.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from fanodb.constructions import (
    SimplexSumSpec,
    fano_simplex,
    product,
    simplex_sums,
    skew_bipyramid,
)
from fanodb.docstore import DocumentStore
from fanodb.enumerate import MAX_DIM, enumerate_smooth_fano
from fanodb.equivalence import lattice_isomorphic
from fanodb.polytope import (
    Polytope,
    ehrhart_and_hstar,
    f_vector,
    from_homogeneous,
    n_lattice_points,
    polar_dual,
    volume_and_centroid,
)

GROUP = "LatticePolytopes"
COLLECTION = "SmoothReflexive"
INDEXED_FIELDS = ("DIM", "N_VERTICES", "N_FACETS", "N_LATTICE_POINTS")

# number of smooth Fano classes per dimension
CLASS_COUNTS = {1: 1, 2: 5, 3: 18, 4: 124, 5: 866, 6: 7622, 7: 72256, 8: 749892}

GROUP_DESCRIPTION = "This database contains various classes of lattice polytopes."
COLLECTION_DESCRIPTION = (
    "A complete collection of smooth reflexive lattice polytopes in dimensions "
    "up to {max_dim}, up to lattice equivalence."
)


class PolytopeNotFoundError(LookupError):
    """No stored document is lattice isomorphic to the given polytope."""


class DataUnavailableError(RuntimeError):
    """The store does not hold a complete collection for some dimension."""


def polytope_document(p: Polytope, _id: str) -> dict:
    """Document with every field derivable from ``p`` (database side)."""
    coeffs, hstar = ehrhart_and_hstar(p)
    _, lattice_volume, centroid = volume_and_centroid(p)
    return {
        "_id": _id,
        "DIM": p.dim,
        "VERTICES": [list(v) for v in p.vertices],
        "FACETS": [list(f) for f in p.facets],
        "N_VERTICES": p.n_vertices,
        "N_FACETS": p.n_facets,
        "F_VECTOR": f_vector(p),
        "N_LATTICE_POINTS": n_lattice_points(p),
        "LATTICE_VOLUME": lattice_volume,
        "EHRHART_POLYNOMIAL_COEFF": [str(c) for c in coeffs],
        "H_STAR_VECTOR": hstar,
        "CENTROID": [str(c) for c in centroid],
        "polyDB": {
            "creator": "fanodb.pipeline.build_collection",
            "format": "fanodb-polytope-1",
            "convention": "polar dual of a smooth Fano polytope",
        },
    }


def build_collection(store: DocumentStore, max_dim: int = 3, coord_bound: int = 2) -> int:
    """Enumerate smooth Fano classes up to ``max_dim`` and store their duals."""
    if not 1 <= max_dim <= MAX_DIM:
        raise ValueError(f"max_dim must be between 1 and {MAX_DIM}")
    if store.has_collection(GROUP, COLLECTION) and len(store.collection(GROUP, COLLECTION)):
        raise ValueError(f"{GROUP}/{COLLECTION} is already populated")
    if not store.has_collection(GROUP, COLLECTION):
        store.create_collection(
            GROUP,
            COLLECTION,
            COLLECTION_DESCRIPTION.format(max_dim=max_dim),
            indexes=INDEXED_FIELDS,
            type_info={
                "stores_polar_duals": True,
                "fields": [
                    "DIM", "VERTICES", "FACETS", "N_VERTICES", "N_FACETS", "F_VECTOR",
                    "N_LATTICE_POINTS", "LATTICE_VOLUME", "EHRHART_POLYNOMIAL_COEFF",
                    "H_STAR_VECTOR", "CENTROID", "NORMAL", "VERY_AMPLE", "polyDB",
                ],
            },
            group_description=GROUP_DESCRIPTION,
        )
    docs = []
    for d in range(1, max_dim + 1):
        for k, fano in enumerate(enumerate_smooth_fano(d, coord_bound)):
            docs.append(polytope_document(polar_dual(fano), f"F.{d}D.{k}"))
    return store.insert_many(GROUP, COLLECTION, docs)


@lru_cache(maxsize=None)
def _stored_polytope(vertices: tuple) -> Polytope:
    return from_homogeneous(vertices)


def document_polytope(doc: Mapping) -> Polytope:
    """Polytope stored in a document (database side)."""
    return _stored_polytope(tuple(tuple(v) for v in doc["VERTICES"]))


def document_fano(doc: Mapping) -> Polytope:
    """Smooth Fano polytope whose dual a document stores."""
    return polar_dual(document_polytope(doc))


def identify_smooth_fano(p: Polytope, store: DocumentStore) -> str:
    """``_id`` of the stored document lattice isomorphic to ``p`` (database side)."""
    query = {
        "DIM": p.dim,
        "N_VERTICES": p.n_vertices,
        "N_FACETS": p.n_facets,
        "N_LATTICE_POINTS": n_lattice_points(p),
    }
    for doc in store.db_query(query, GROUP, COLLECTION):
        if lattice_isomorphic(document_polytope(doc), p):
            return doc["_id"]
    raise PolytopeNotFoundError("polytope not found")


class _Identifier:
    """Memoized identification for a single pipeline run."""

    def __init__(self, store: DocumentStore):
        self.store = store
        self.memo: dict[Polytope, str] = {}

    def fano(self, q: Polytope) -> str:
        if q not in self.memo:
            self.memo[q] = identify_smooth_fano(polar_dual(q), self.store)
        return self.memo[q]


def _docs_of_dim(store: DocumentStore, d: int) -> list[dict]:
    return store.db_query({"DIM": d}, GROUP, COLLECTION)


def require_complete(store: DocumentStore, dims: Iterable[int]) -> None:
    for d in dims:
        have = len(store.db_query({"DIM": d}, GROUP, COLLECTION))
        want = CLASS_COUNTS.get(d)
        if have != want:
            raise DataUnavailableError(
                f"dimension {d} needs {want} stored polytopes, found {have}"
            )


def _result(found: dict[str, set], splitinfo: bool):
    if splitinfo:
        return found
    return set(found)


def all_free_sums_in_dim(d: int, store: DocumentStore, *, splitinfo: bool = False):
    """Ids of free sums in dimension ``d``, with summand pairs when ``splitinfo``.

    Works on the database side: the product of two stored duals is the dual
    of the free sum.
    """
    require_complete(store, range(1, d + 1))
    found: dict[str, set] = {}
    for n in range(1, d // 2 + 1):
        cur1 = store.db_cursor({"DIM": n}, GROUP, COLLECTION)
        while not cur1.at_end():
            c1 = cur1.next()
            cur2 = store.db_cursor({"DIM": d - n}, GROUP, COLLECTION)
            while not cur2.at_end():
                c2 = cur2.next()
                name = identify_smooth_fano(
                    product(document_polytope(c1), document_polytope(c2)), store
                )
                found.setdefault(name, set()).add((c1["_id"], c2["_id"]))
    return _result(found, splitinfo)


def all_skew_bipyramids_in_dim(d: int, store: DocumentStore, *, _ident: _Identifier | None = None) -> set[str]:
    """Ids of smooth skew bipyramids ``sbip(P, v)`` over (d-1)-dimensional classes."""
    require_complete(store, (d - 1, d))
    ident = _ident or _Identifier(store)
    found = set()
    for doc in _docs_of_dim(store, d - 1):
        base = document_fano(doc)
        for v in base.points:
            found.add(ident.fano(skew_bipyramid(base, v)))
    return found


def simplex_split(base_id: str, b: int, shift) -> tuple[str, str]:
    return (base_id, f"simplex-{b}:{json.dumps(list(shift), separators=(',', ':'))}")


def skew_simplex_sums_in_dim(d: int, b: int, store: DocumentStore, *, splitinfo: bool = False,
                             _ident: _Identifier | None = None):
    """Ids of generalized smooth simplex sums with a ``b``-simplex in dimension ``d``."""
    if not 1 <= b <= d:
        raise ValueError("simplex dimension must be between 1 and d")
    a = d - b
    require_complete(store, [x for x in (a, d) if x >= 1])
    ident = _ident or _Identifier(store)
    found: dict[str, set] = {}
    if a == 0:
        name = ident.fano(fano_simplex(d))
        found[name] = {simplex_split("-", d, [])}
        return _result(found, splitinfo)
    for doc in _docs_of_dim(store, a):
        base = document_fano(doc)
        for shift, cand in simplex_sums(base, b):
            found.setdefault(ident.fano(cand), set()).add(simplex_split(doc["_id"], b, shift))
    return _result(found, splitinfo)


def replay_split(store: DocumentStore, split: tuple[str, str]) -> str:
    """Rebuild the polytope a split record describes and identify it."""
    left, right = split
    m = re.fullmatch(r"simplex-(\d+):(\[.*\])", right)
    if m is None:
        c1 = store.get(GROUP, COLLECTION, left)
        c2 = store.get(GROUP, COLLECTION, right)
        return identify_smooth_fano(product(document_polytope(c1), document_polytope(c2)), store)
    b, shift = int(m.group(1)), json.loads(m.group(2))
    if left == "-":
        return identify_smooth_fano(polar_dual(fano_simplex(b)), store)
    base = document_fano(store.get(GROUP, COLLECTION, left))
    apex_tail = [0] * (b - 1) + [1]
    poly = SimplexSumSpec(base, b, tuple(shift + apex_tail)).build()
    return identify_smooth_fano(polar_dual(poly), store)


ROW_NAMES = ("smooth Fano polytopes", "free sums", "skew bipyramids")


@dataclass
class DecompositionReport:
    dimension: int
    n_polytopes: int
    free_sum_ids: set[str]
    skew_bipyramid_ids: set[str]
    simplex_sum_ids_by_b: dict[int, set[str]]
    splits: dict[str, set[tuple[str, str]]] | None = None
    union_simplex_ids: set[str] = field(init=False)
    total_decomposable_ids: set[str] = field(init=False)

    def __post_init__(self):
        self.union_simplex_ids = set().union(*self.simplex_sum_ids_by_b.values())
        self.total_decomposable_ids = self.free_sum_ids | self.union_simplex_ids

    def rows(self) -> list[tuple[int, str, int]]:
        d = self.dimension
        out = [
            (d, "smooth Fano polytopes", self.n_polytopes),
            (d, "free sums", len(self.free_sum_ids)),
            (d, "skew bipyramids", len(self.skew_bipyramid_ids)),
        ]
        for b in sorted(self.simplex_sum_ids_by_b):
            out.append((d, f"sg simplex-{b} sums", len(self.simplex_sum_ids_by_b[b])))
        out.append((d, "total sg simplex sums", len(self.union_simplex_ids)))
        out.append((d, "total decomposable", len(self.total_decomposable_ids)))
        return out


def decomposition_stats(d: int, store: DocumentStore, *, splitinfo: bool = False) -> DecompositionReport:
    require_complete(store, range(1, d + 1))
    ident = _Identifier(store)
    free = all_free_sums_in_dim(d, store, splitinfo=True)
    sbip = all_skew_bipyramids_in_dim(d, store, _ident=ident) if d >= 2 else set()
    by_b = {}
    splits: dict[str, set] = {k: set(v) for k, v in free.items()}
    for b in range(1, d + 1):
        found = skew_simplex_sums_in_dim(d, b, store, splitinfo=True, _ident=ident)
        by_b[b] = set(found)
        for k, v in found.items():
            splits.setdefault(k, set()).update(v)
    return DecompositionReport(
        dimension=d,
        n_polytopes=len(_docs_of_dim(store, d)),
        free_sum_ids=set(free),
        skew_bipyramid_ids=sbip,
        simplex_sum_ids_by_b=by_b,
        splits=splits if splitinfo else None,
    )


def format_table(reports: Iterable[DecompositionReport]) -> str:
    """Aligned text table with one column per dimension; ``-`` marks empty cells."""
    reports = sorted(reports, key=lambda r: r.dimension)
    dims = [r.dimension for r in reports]
    max_b = max(dims) if dims else 0
    names = list(ROW_NAMES) + [f"sg simplex-{b} sums" for b in range(1, max_b + 1)]
    names += ["total sg simplex sums", "total decomposable"]
    values = {(d, name): count for r in reports for d, name, count in r.rows()}
    header = ["dimension"] + [str(d) for d in dims]
    body = [[name] + [str(values.get((d, name), "-")) for d in dims] for name in names]
    width0 = max(len(row[0]) for row in [header] + body)
    widths = [max(len(row[i]) for row in [header] + body) for i in range(1, len(header))]

    def fmt(row):
        return "  ".join([row[0].ljust(width0)] + [c.rjust(w) for c, w in zip(row[1:], widths)])

    return "\n".join(fmt(r) for r in [header] + body) + "\n"


def parse_table(text: str) -> list[tuple[int, str, int]]:
    """Inverse of :func:`format_table` (empty cells are skipped)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    dims = [int(x) for x in lines[0].split()[1:]]
    rows = []
    for line in lines[1:]:
        parts = line.split()
        cells = parts[-len(dims):]
        name = " ".join(parts[: -len(dims)])
        for d, cell in zip(dims, cells):
            if cell != "-":
                rows.append((d, name, int(cell)))
    return rows


def rows_ndjson(reports: Iterable[DecompositionReport]) -> str:
    out = []
    for r in sorted(reports, key=lambda r: r.dimension):
        for d, name, count in r.rows():
            out.append(json.dumps({"dimension": d, "row": name, "count": count}, sort_keys=True))
    return "\n".join(out) + "\n"


__all__ = [
    "COLLECTION",
    "CLASS_COUNTS",
    "DataUnavailableError",
    "DecompositionReport",
    "GROUP",
    "PolytopeNotFoundError",
    "all_free_sums_in_dim",
    "all_skew_bipyramids_in_dim",
    "build_collection",
    "decomposition_stats",
    "document_fano",
    "document_polytope",
    "format_table",
    "identify_smooth_fano",
    "parse_table",
    "polytope_document",
    "replay_split",
    "require_complete",
    "rows_ndjson",
    "skew_simplex_sums_in_dim",
]
