"""Exception hierarchy for the nls_spectra package."""


class NlsSpectraError(Exception):
    """Base class for all package-specific errors."""


class InvalidMesh(NlsSpectraError):
    """Mesh parameters violate an invariant (dr <= 0, too few points, ...)."""


class OriginRuleMismatch(NlsSpectraError):
    """Origin rule incompatible with the requested angular index."""


class MeshMismatch(NlsSpectraError):
    """Profile and mesh do not describe the same discretization."""


class DimensionUnsupported(NlsSpectraError):
    """Operation only defined for a different space dimension."""


class UnsupportedProfile(NlsSpectraError):
    """Profile parameters outside the supported family."""


class InvalidExponent(NlsSpectraError):
    """Nonlinearity exponent outside the admissible open range."""


class NotConverged(NlsSpectraError):
    """Fixed-point iteration hit the iteration cap before converging."""

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class ConvergenceFailure(NlsSpectraError):
    """Eigenvalue iteration failed to converge within restart budget."""


class SingularShift(NlsSpectraError):
    """Shift coincides with an eigenvalue (LU pivot breakdown).

    Retry guidance: perturb the shift by 1e-3 * (1 + |shift|).
    """


class OutOfRange(NlsSpectraError):
    """Requested analytic quantity outside its domain of validity."""


class QuadratureFailure(NlsSpectraError):
    """A quadrature-based coefficient is degenerate (near-zero denominator)."""


class NoSignChange(NlsSpectraError):
    """Bisection bracket endpoints classify identically."""


class InterlacingViolation(NlsSpectraError):
    """A computed mu eigenvalue escaped its analytic bracket."""

    def __init__(self, message, margins=None):
        super().__init__(message)
        self.margins = margins or []


class MismatchReport(NlsSpectraError):
    """Cross-validation found unpaired eigenvalues between algorithms."""

    def __init__(self, message, unpaired=None):
        super().__init__(message)
        self.unpaired = unpaired or []


class ProjectionFailure(NlsSpectraError):
    """Eigenvector not orthogonal to the ground state within tolerance."""


class EmptyDataset(NlsSpectraError):
    """Plot or report requested for an empty dataset."""


class UsageError(NlsSpectraError):
    """Invalid command-line or configuration input."""
