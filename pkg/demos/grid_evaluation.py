"""Evaluate loop elements at a grid of points and invert the evaluation.

A monomial t^m on a grid of distinct nonzero points is determined by its
values, so X (x) t^m can be recovered modulo the grid ideal.
"""

from fractions import Fraction as Q

from toroidal.algebra import MatrixG, ToroidalAlgebra
from toroidal.evaluation import EvalHom, GridMatrix, PointGrid, phi_apply, phi_preimage
from toroidal.exact import LaurentPoly, laurent_reduce_mod_ideal, q_str

grid = PointGrid([[1, -1], [Q(1, 2), 2, 3]])
gm = GridMatrix(grid)
print("grid sizes", grid.sizes, "N =", grid.N)
print("det X =", q_str(gm.det()), "(from factors:", q_str(gm.det_from_factors()) + ")")
print("factor product equals X:", gm.factor_product() == gm.X)

alg = ToroidalAlgebra(1, 2)
X = MatrixG.unit(2, 1, 2)
hom = EvalHom(grid, 2)
x = alg.loop(X, (3, -2))
values = phi_apply(hom, x)
print("X (x) t^(3,-2) evaluates to the scalars",
      [q_str(v.entries.get((1, 2), 0)) for v in values])

pre = phi_preimage(hom, values)
print("preimage on the exponent box:")
for m, Y in sorted(pre.items()):
    print("  t^%s  coefficient %s" % (m, q_str(Y.entries[(1, 2)])))
red = laurent_reduce_mod_ideal(LaurentPoly.monomial((3, -2)), grid.axes)
print("agrees with the reduction of t^(3,-2) modulo the grid ideal:",
      {m: Y.entries[(1, 2)] for m, Y in pre.items()} == red.terms)
