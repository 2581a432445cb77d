"""Exact lattice polytopes, smooth Fano classification and a small document store."""

from fanodb.polytope import Polytope, from_homogeneous, from_vertices, polar_dual, properties
from fanodb.equivalence import lattice_isomorphic, normal_form

__version__ = "0.1.0"

__all__ = [
    "Polytope",
    "from_homogeneous",
    "from_vertices",
    "lattice_isomorphic",
    "normal_form",
    "polar_dual",
    "properties",
]
