"""Exact matrix representations of rational surfaces and fiber classification."""

from .errors import (BasePointError, DegenerateParameterizationError, FibratrixError,
                     FittingError, MathError, ParameterizationError, PreimageError,
                     ValidationError)
from .fibers import (FiberReport, ProjPoint, classify, classify_fiber,
                     classify_fiber_bigraded, corank_at, fiber_curve, low_degree_sat_elements,
                     membership, parse_point, pullback_classify, unique_preimage)
from .fields import GF, QQ, Mod, field_from_spec
from .fitting import FittingResult, MinorRequest, fitting_generators, pullback_fitting
from .linalg import Matrix, left_kernel, rank, right_kernel, rref
from .matrep import (DEFAULT_SEED, MatrixRep, Parameterization, SatInfo, build_matrix_rep,
                     compute_nu0, default_index, region_admissible, validate)
from .poly import (IMPLICIT, TENSOR, TRIANGULAR, MultiPoly, format_poly, monomial_basis,
                   multivariate_gcd, parse_poly, substitute)

__version__ = "0.1.0"
