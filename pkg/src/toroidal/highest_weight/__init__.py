"""Highest weight modules: finite and affine irreducibles, tensor products at a
grid of points, and the graded loop modules on which tau acts."""

from .irreducible import OUT, IrreducibleModule, build_affine_irreducible, build_finite_irreducible
from .kacmoody import HighestWeight, KMAlgebra
from .loop import LoopDecomposition, TauModule, build_example_41, build_example_42, build_loop_module
from .tensor import (DegenerateSpecError, GammaLattice, PreconditionError, PsiFunctional, PsiTable,
                     TensorModule, build_psi, build_tensor_module, compute_gamma)
