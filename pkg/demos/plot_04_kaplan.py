"""
Kaplan's six dimensional H-type group
=====================================

N6 is a 2-step nilpotent group with 4-dimensional horizontal part and
2-dimensional centre, built from quaternion multiplication.  Here the isotropy
is trivial, so everything about the stabilizer comes from the curvature jets.
"""

import numpy as np

from jacobijets.catalog import build_kaplan
from jacobijets.exactalg import Scalar
from jacobijets.homogeneous import ricci, sectional_curvature
from jacobijets.jacobi import find_relation, sym_jet
from jacobijets.stabilizer import singer_invariant
from jacobijets.tensoralg import vector

s = build_kaplan()
e = [vector([int(i == j) for j in range(6)]) for i in range(6)]
print("K(X1, X2) =", sectional_curvature(s, e[0], e[1]))
print("K(X1, Z1) =", sectional_curvature(s, e[0], e[4]))
print("K(Z1, Z2) =", sectional_curvature(s, e[4], e[5]))
print("Einstein:", ricci(s)[1].einstein)

k_s, chain = singer_invariant(s)
print("chain dims", chain.dims, "k_s =", k_s)

# no constant-coefficient relation through order 5
print([find_relation(s, k) for k in range(6)])

# but for horizontal xi the jets obey R^5 + 5/4 |xi|^2 R^3 + 1/4 |xi|^4 R^1 = 0
jets = {k: sym_jet(s, k) for k in (1, 3, 5)}
for xi in ([1, 2, 0, -1, 0, 0], [1, 0, 0, 0, 1, 0]):
    v = vector(xi)
    g = Scalar(sum(x * x for x in xi))
    res = jets[5].evaluate(v) + jets[3].evaluate(v).scale(g * 5 / 4) + jets[1].evaluate(v).scale(g * g / 4)
    print(xi, "residual zero:", res.is_zero(),
          "max |entry| %.3g" % np.abs(np.vectorize(float)(np.array(res.to_scalars(), dtype=object))).max())
