"""Solitary-wave profiles of the nonlinear Schrodinger equation and
spectra of the operators obtained by linearizing about them."""

from ._kernels import backend_name, set_backend
from .eigen import (SpectrumResult, classify_spectrum, pairing_violations,
                    shift_invert_arnoldi, symmetric_eigs, zero_tolerance)
from .errors import (ConvergenceFailure, InterlacingViolation, InvalidExponent,
                     InvalidMesh, MeshMismatch, NlsSpectraError, NotConverged,
                     OutOfRange, SingularShift, UsageError)
from .groundstate import (GroundStateProfile, SolverOptions, gn_quotient,
                          p_max, pohozaev_check, solve_ground_state)
from .linearized import (apply_mirror_identity_residual, build_cal_L,
                         build_factor_Sj, build_full2d_L, build_H,
                         build_hierarchy_Lj, build_L_plus_minus,
                         build_sector_Lmk, build_sector_LXk, profile_on_mesh)
from .mesh import RadialMesh, build_radial_laplacian, line_mesh, make_mesh
from .operators import BandedOperator, BlockOperator, symmetrize_tridiagonal
from .oracle import (bifurcation_prediction, hierarchy_lower_bound,
                     interlacing_bounds, ladder, ladder_eigenfunction,
                     mu1_lower_bound, mu2_upper_bound, nullspace_catalog,
                     oracle_report, p_critical, predicted_hierarchy_spectrum,
                     resonance_profile, w_functional)

__version__ = "0.1.0"
