"""Finite-size edge corrections for GUE and LUE: Airy/Painleve machinery, kernels,
Fredholm determinants and the Edgeworth expansion of the largest eigenvalue."""

from .specfun import (AiryValue, ConvergenceError, WeightedPolyValue, airy, airy_contour,
                      hermite_phi, laguerre_phi, laguerre_weighted)
from .painleve import (PainleveTable, build_table, default_table, e_function,
                       solve_hastings_mcleod, tw2_cdf)
from .kernels import (EdgeTransform, EnsembleSpec, airy_kernel, hermite_kernel_exact,
                      hermite_kernel_expansion, laguerre_kernel_exact,
                      laguerre_kernel_expansion, rho1_expansion)
from .fredholm import QuadratureRule, exact_cdf, nystrom_det
from .edgeworth import (ExpansionResult, TunedConstants, convergence_report, edgeworth_cdf,
                        inverse_transform, transform)

__version__ = "0.1.0"
