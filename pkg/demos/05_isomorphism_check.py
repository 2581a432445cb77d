"""
Two vertex lists, one polytope
==============================

Check that two 5-polytopes with different vertex lists are lattice
equivalent, and that moving a single vertex breaks it.
"""

from fanodb.equivalence import lattice_isomorphic, normal_form
from fanodb.polytope import from_homogeneous, polar_dual, properties

P3_EXT = [
    [1, 0, 1, 1, 0, 0], [1, -1, 0, 0, 0, 0], [1, 0, 0, 1, 0, 0],
    [1, 0, -1, 0, 0, 0], [1, 0, 0, -1, 0, 0], [1, 1, 0, -1, 0, 0],
    [1, 0, 0, 0, -1, 0], [1, 0, 0, 0, 0, -1], [1, 0, 0, -2, 1, 1],
]
p3_ext = from_homogeneous(P3_EXT)
p5 = from_homogeneous([
    [1, 0, 0, 0, 0, 1], [1, 0, 0, 1, 0, -1], [1, 0, 0, -1, 0, 0],
    [1, 0, 0, 0, -1, 0], [1, 0, 0, 0, 0, -1], [1, -1, 0, 0, 0, 0],
    [1, 0, -1, 0, 0, 0], [1, 0, 1, 0, 0, 1], [1, 1, 0, 0, 1, 2],
])
print("both smooth:", properties(p3_ext).is_smooth, properties(p5).is_smooth)

a, b = polar_dual(p3_ext), polar_dual(p5)
print("dual vertex counts:", a.n_vertices, b.n_vertices)
print("isomorphic:", lattice_isomorphic(a, b))
print("same normal form:", normal_form(p3_ext) == normal_form(p5))

# undo the shift of the last vertex
control = from_homogeneous(P3_EXT[:-1] + [[1, 0, 0, 0, 1, 1]])
print("control isomorphic:", lattice_isomorphic(polar_dual(control), b))
