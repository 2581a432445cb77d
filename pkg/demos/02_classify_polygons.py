"""
The five smooth Fano polygons
=============================

Enumerate smooth Fano polygons up to lattice equivalence and look at them.
"""

from fanodb.enumerate import enumerate_smooth_fano
from fanodb.equivalence import normal_form
from fanodb.polytope import n_lattice_points, polar_dual

polygons = enumerate_smooth_fano(2)
print(len(polygons), "classes")

for p in polygons:
    q = polar_dual(p)
    print(f"{p.n_vertices} vertices  {[list(v) for v in p.points]}")
    print(f"   dual has {n_lattice_points(q)} lattice points, normal form {normal_form(p).hexdigest[:12]}")

# threefolds take a few seconds
print(len(enumerate_smooth_fano(3)), "classes in dimension 3")
