"""Move the level of a module from K_1 to K_2 with a GL(2, Z) automorphism,
then normalize a vector of central scalars."""

from toroidal.automorphisms import TauAutomorphism, normalize_level_vector, twist_module
from toroidal.evaluation import PointGrid
from toroidal.highest_weight import HighestWeight, PsiFunctional, build_example_42
from toroidal.highest_weight import checks

spec = PsiFunctional(PointGrid([[1]]), [HighestWeight((0,), 1)], 1)
m = build_example_42(spec, 2, 2, 1)
v = m.highest_key()
swap = TauAutomorphism([[0, 1], [1, 0]])
tw = twist_module(m, swap)
print("K scalars before", [str(x) for x in m.central_values(v)], "after", [str(x) for x in tw.central_values(v)])
print("twisted module axiom:", checks.check_module_axiom(tw, tw.op_labels(1))["ok"])

for vec in ([0, 4, 6], [3, -2, 0], [0, 0, 5]):
    A, ell = normalize_level_vector(vec)
    print("scalars", vec, "->", list(A.matrix.T @ tuple(vec)), "via", A.matrix.tolist())
