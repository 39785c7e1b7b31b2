"""Build the two families of toroidal modules and run their checks.

Finite type: tensor products of sl2 modules at grid points, graded by Z^2,
with the center acting trivially.  Affine type: the basic module of affine
sl2 in the variable t_1, where K_1 acts by the level.
"""

from toroidal.evaluation import PointGrid
from toroidal.highest_weight import HighestWeight, PsiFunctional, build_example_41, build_example_42, compute_gamma
from toroidal.highest_weight import checks

spec = PsiFunctional(PointGrid([[1, -1], [1]]), [HighestWeight((1,)), HighestWeight((1,))], 1)
gamma = compute_gamma(spec)
print("Gamma basis", gamma.to_json()["basis"], "index", gamma.index, "periods", gamma.periods)

m = build_example_41(spec, 1)
print("finite type: %d basis vectors in the window" % m.dim)
ax = checks.check_module_axiom(m, m.op_labels(1))
print("  module axiom on %d cases: %s" % (ax["checked"], ax["ok"]))
print("  center acts as zero:", checks.check_center_zero(m, 1)["ok"])
print("  grid ideal annihilates:", checks.check_ideal_annihilation(m, 1)["ok"])
it = checks.check_integrability(m, bound=1)
print("  real root vectors nilpotent: %s (max exponent %d)" % (it["ok"], it["max_exponent"]))
dec = m.decomposition
print("  components", dec.component_count(), "direct sum", dec.direct_sum_ok()["ok"])

aspec = PsiFunctional(PointGrid([[1]]), [HighestWeight((0,), 1)], 1)
a = build_example_42(aspec, 2, 2, 1)
print("affine type: %d basis vectors through depth 2" % a.dim)
rep = checks.check_central_operators(a, 1)
print("  zero-degree K scalars", rep["scalars"])
print("  nonzero central operators", rep["nonzero"], "all invertible:", rep["inverse_ok"])
w = checks.witness_highest_vector(a, "affine", 1)
print("  highest vector", w)
