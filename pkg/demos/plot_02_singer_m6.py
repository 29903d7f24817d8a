"""
The stabilizer chain of SU(3)/T
===============================

The flag manifold M6 = SU(3)/T^2 with its normal metric.  We compute the
algebras g(k) of skew endomorphisms killing R, nabla R, ..., nabla^k R and read
off the Singer invariant: the first k where the chain stops shrinking.
"""

from jacobijets.catalog import build_m6
from jacobijets.homogeneous import ricci
from jacobijets.stabilizer import isotropy_image, singer_invariant, span_equal

s = build_m6()
print(s)

k_s, chain = singer_invariant(s)
print("dims of g(0), g(1), ...:", chain.dims)
print("Singer invariant:", k_s)

# g(0) is a maximal torus of so(6); g(1) shrinks to the isotropy image
for a in chain[0]:
    print([[str(x) for x in row] for row in a.matrix.to_scalars()])
print("g(1) = rho(h):", span_equal(chain[1], isotropy_image(s)))

_, verdict = ricci(s)
print("Einstein constant:", verdict.constant)
