"""
Linear Jacobi relations
=======================

Along a geodesic with velocity xi, the Jacobi operator R_xi and its covariant
derivatives R^(j) may satisfy a linear relation

    R^(k+1) = sum_j c_j <xi, xi>^((k+1-j)/2) R^(j),   j = k-1, k-3, ...

with constant c_j.  We scan orders until one exists and then look at how the
coefficients move when the metric is rescaled.
"""

from fractions import Fraction

from jacobijets.catalog import build
from jacobijets.jacobi import min_relation_order, osculating_probe, scale_invariant_signature

for ident in ("v1", "v3", "m6"):
    s = build(ident)
    order, rel = min_relation_order(s, 5)
    print(f"{ident:3s} order {order}: {rel.as_equation()}")

# M6: roots of x^2 - c3 x - c1 scale together, so their ratio does not see the metric scale
m6 = build("m6")
_, rel = min_relation_order(m6, 5)
print("root ratio:", scale_invariant_signature(rel))
_, rel3 = min_relation_order(m6.rescaled(3), 5)
print("after g -> 3g:", rel3.coefficients, "ratio", scale_invariant_signature(rel3))

# a geodesic along which R^(0..3) are independent shows the order cannot be lowered
probe = osculating_probe(m6, 4)
print("osculating witness:", [str(t) for t in probe.witness])

# order-2 coefficients come out negative: R^(1) oscillates instead of growing
v3 = build("v3")
_, rel = min_relation_order(v3, 3)
print("v3 c1 =", rel.coefficients[1], " half-metric:", min_relation_order(v3.rescaled(Fraction(1, 2)), 3)[1].coefficients[1])
