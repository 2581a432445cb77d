"""
Recomputing a stored entry from its vertices
============================================

Every derived field of a database entry follows from the vertex list alone.
"""

from fanodb.pipeline import polytope_document
from fanodb.polytope import from_homogeneous, properties

# vertices in homogeneous coordinates: a leading 1, then the point
vertices = [[1, -1, -1], [1, -1, 1], [1, 0, 1], [1, 1, 0], [1, 1, -1]]
p = from_homogeneous(vertices)

# facets come out as primitive rows [b, -a] meaning a.x <= b
for facet in p.facets:
    print("facet", list(facet))

doc = polytope_document(p, "F.2D.3")
for key in ("F_VECTOR", "N_LATTICE_POINTS", "LATTICE_VOLUME",
            "EHRHART_POLYNOMIAL_COEFF", "H_STAR_VECTOR", "CENTROID"):
    print(f"{key:26s} {doc[key]}")

# reflexive, but its facets are not unimodular; its dual is the smooth one
print(properties(p))
