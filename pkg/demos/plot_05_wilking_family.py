"""
The family V3 = SO(3) x SU(3) / U(2)
====================================

The metric g_c depends on a positive rational c.  Only one member of the
family is Einstein, and it is also the one with an order-2 relation.
"""

from fractions import Fraction

from jacobijets.catalog import build_v3
from jacobijets.homogeneous import ricci
from jacobijets.jacobi import find_relation
from jacobijets.stabilizer import singer_invariant

for c in (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2)):
    s = build_v3(c)
    _, verdict = ricci(s)
    rel = find_relation(s, 2)
    k_s, chain = singer_invariant(s)
    print(f"c = {str(c):4s} einstein={verdict.einstein!s:5s} order-2 relation:",
          rel.coefficients if rel else None, " k_s", k_s, chain.dims)
