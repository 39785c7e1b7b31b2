"""Exact computations with toroidal Lie algebras of type A and their integrable
highest weight modules."""

from .exact import (DimensionError, IntMatrix, InvalidGridError, LaurentPoly, RankError,
                    complete_to_unimodular, hermite_normal_form, laurent_reduce_mod_ideal,
                    smith_normal_form)
from .roots import CoweightVec, RealRoot, ToroidalRootSystem, WeightVec
from .algebra import TauElement, ToroidalAlgebra, bracket
from .evaluation import EvalHom, GridMatrix, PointGrid, phi_apply, phi_preimage, quotient_iso_check
from .automorphisms import (TauAutomorphism, apply, normalize_center_support, normalize_level_vector,
                            twist_module)

__version__ = "0.1.0"
