"""
Exact arithmetic in Q(sqrt 2)
=============================

Every number in the engine is an element a + b*sqrt(d) with rational a, b.
Nothing is ever rounded, so "is this zero?" has an honest answer.
"""

from fractions import Fraction

from jacobijets.exactalg import ExactMatrix, Scalar, kernel, parse_scalar, render_scalar

r2 = Scalar(0, 1, 2)
print("(1 + sqrt2)(-1 + sqrt2) =", (1 + r2) * (-1 + r2))
print("1 / (1 + sqrt2)        =", 1 / (1 + r2))

# the textual form used in reports and space files
x = Scalar(Fraction(1, 2), Fraction(-3, 5), 2)
text = render_scalar(x)
print(text, "->", parse_scalar(text) == x)

# sign of an irrational value is decided exactly
print("sign(sqrt2 - 1.414) =", (r2 - Fraction(1414, 1000)).sign())

# kernels are exact too: [1, sqrt2] v = 0
m = ExactMatrix.from_rows([[1, r2]])
(v,) = kernel(m)
print("kernel of [1, sqrt2]:", [render_scalar(c) for c in v.flat_scalars()])
