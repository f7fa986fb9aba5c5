"""Meshes and discrete Laplacians.

Three uniform grid flavors cover every computation in the package:

* ``line`` (dim 1): nodes x = -r_max + dr, ..., r_max - dr including 0,
  Dirichlet at both ends.  Used for all 1D operator work, where both
  even and odd eigenfunctions are needed.
* ``half`` vertex grid (dim 1, origin_rule ``symmetry_ghost``): nodes
  r_i = i*dr starting at r = 0, with the even ghost point q_{-1} = q_1
  closing the origin row (diagonal 2*n/dr^2).  Used for 1D profile
  solves.
* ``half`` staggered (cell-centered) grid (dim >= 2): nodes
  r_i = (i - 1/2)*dr.  The grid never touches r = 0, so the angular
  term m^2/r^2 stays finite for every angular index and, for n = 2,
  the first-row coupling coefficient of the radial Laplacian vanishes
  identically — no origin boundary rule is needed at all.  For n = 3
  the residual coupling folds into the diagonal by even symmetry.

The staggered grid is what makes the mixed-angular-index sector
operators of the 2D problem well posed near the origin; a vertex grid
with a Dirichlet origin row is also supported (``dirichlet_origin``
without staggering) since it is adequate for a standalone operator
with angular index m >= 1.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidMesh, OriginRuleMismatch
from .operators import BandedOperator

DIRICHLET_OUTER = "dirichlet_outer"
SYMMETRY_GHOST = "symmetry_ghost"
DIRICHLET_ORIGIN = "dirichlet_origin"


@dataclass(frozen=True)
class RadialMesh:
    r_max: float
    dr: float
    n_points: int
    dim: int
    kind: str = "half"  # 'half' or 'line'
    staggered: bool = False
    origin_rule: str = SYMMETRY_GHOST
    boundary: str = DIRICHLET_OUTER
    angular_points: int | None = None

    def __post_init__(self):
        if self.dr <= 0:
            raise InvalidMesh(f"dr must be positive, got {self.dr}")
        if self.n_points < 8:
            raise InvalidMesh(f"n_points must be >= 8, got {self.n_points}")
        if abs(self.r_max - self.n_points * self.dr) > 1e-9 * max(1.0, self.r_max):
            raise InvalidMesh(
                f"r_max={self.r_max} inconsistent with n_points*dr="
                f"{self.n_points * self.dr}"
            )
        if self.kind not in ("half", "line"):
            raise InvalidMesh(f"unknown mesh kind {self.kind!r}")
        if self.kind == "line" and self.dim != 1:
            raise InvalidMesh("line meshes are one-dimensional")
        if self.origin_rule not in (SYMMETRY_GHOST, DIRICHLET_ORIGIN):
            raise InvalidMesh(f"unknown origin rule {self.origin_rule!r}")
        if self.angular_points is not None and self.angular_points % 2 != 0:
            raise InvalidMesh("angular_points must be even")

    def nodes(self):
        """Grid coordinates as a 1D array."""
        N, dr = self.n_points, self.dr
        if self.kind == "line":
            return dr * np.arange(-(N - 1), N)
        if self.staggered:
            return dr * (np.arange(1, N + 1) - 0.5)
        if self.origin_rule == DIRICHLET_ORIGIN:
            return dr * np.arange(1, N)
        return dr * np.arange(N)

    @property
    def size(self):
        """Number of unknowns carried by this mesh."""
        if self.kind == "line":
            return 2 * self.n_points - 1
        if self.staggered:
            return self.n_points
        if self.origin_rule == DIRICHLET_ORIGIN:
            return self.n_points - 1
        return self.n_points

    def theta_nodes(self):
        if self.angular_points is None:
            raise InvalidMesh("mesh has no angular grid")
        T = self.angular_points
        return 2 * np.pi * np.arange(T) / T

    def quad_weights(self):
        """Weights w with sum(w*f) ~ int f r^(dim-1) dr (or int f dx on a line)."""
        r = self.nodes()
        if self.kind == "line":
            return np.full(r.size, self.dr)
        if self.staggered:
            return self.dr * r ** (self.dim - 1)
        w = self.dr * r ** (self.dim - 1) if self.dim > 1 else np.full(r.size, self.dr)
        if self.dim == 1:
            w = w.copy()
            if self.origin_rule == SYMMETRY_GHOST:
                w[0] *= 0.5  # trapezoid end correction at r = 0
        return w

    def integrate(self, f):
        return float(np.dot(self.quad_weights(), np.asarray(f, dtype=float)))

    def compatible_with(self, other):
        return (
            self.dim == other.dim
            and abs(self.dr - other.dr) < 1e-12
            and self.n_points == other.n_points
        )


def make_mesh(n, r_max=30.0, dr=0.01, m=0, kind="half", angular_points=None):
    """Build the standard mesh for dimension ``n`` and angular index ``m``."""
    if dr <= 0:
        raise InvalidMesh(f"dr must be positive, got {dr}")
    n_points = int(round(r_max / dr))
    if kind == "line":
        return RadialMesh(r_max, dr, n_points, 1, kind="line",
                          origin_rule=SYMMETRY_GHOST)
    if n == 1:
        if m != 0:
            raise OriginRuleMismatch("angular index m >= 1 requires n = 2")
        return RadialMesh(r_max, dr, n_points, 1, origin_rule=SYMMETRY_GHOST)
    rule = SYMMETRY_GHOST if m == 0 else DIRICHLET_ORIGIN
    return RadialMesh(r_max, dr, n_points, n, staggered=True, origin_rule=rule,
                      angular_points=angular_points)


def line_mesh(r_max=30.0, dr=0.01):
    return make_mesh(1, r_max=r_max, dr=dr, kind="line")


def build_radial_laplacian(mesh, angular_index=0):
    """Tridiagonal discretization of -d^2/dr^2 - ((n-1)/r) d/dr + m^2/r^2.

    Dirichlet at r = r_max.  For a vertex grid with m = 0 the origin row
    uses the even ghost point q_{-1} = q_1, giving diagonal 2n/dr^2 at
    r = 0.  Raw (nonsymmetric for n >= 2) form; see
    ``operators.symmetrize_tridiagonal`` for the similarity-transformed
    symmetric version.
    """
    m = angular_index
    if m < 0:
        raise InvalidMesh("angular_index must be >= 0")
    if m >= 1 and not mesh.staggered and mesh.origin_rule == SYMMETRY_GHOST:
        raise OriginRuleMismatch(
            "m >= 1 requires dirichlet_origin (or a staggered grid)"
        )
    n, dr = mesh.dim, mesh.dr
    r = mesh.nodes()
    N = r.size

    if mesh.kind == "line":
        main = np.full(N, 2.0 / dr**2)
        off = np.full(N - 1, -1.0 / dr**2)
        if m != 0:
            raise InvalidMesh("angular terms are undefined on a line mesh")
        return BandedOperator.from_diagonals({-1: off, 0: main, 1: off.copy()},
                                             symmetry_tag="symmetric")

    main = np.full(N, 2.0 / dr**2)
    with np.errstate(divide="ignore"):
        drift = (n - 1) / (2.0 * np.where(r > 0, r, np.inf) * dr)
        main = main + m * m / np.where(r > 0, r, np.inf) ** 2
    sub = -1.0 / dr**2 + drift[1:]   # A[i, i-1] at node r_i
    sup = -1.0 / dr**2 - drift[:-1]  # A[i, i+1] at node r_i

    if mesh.staggered:
        # mirror closure across r = 0 for the first cell center; the
        # coefficient is exactly zero when n = 2
        ghost = -1.0 / dr**2 + (n - 1) / (2.0 * r[0] * dr)
        main = main.copy()
        main[0] += ghost
    elif mesh.origin_rule == SYMMETRY_GHOST:
        # node at r = 0: -Delta f ~ 2n (f_0 - f_1)/dr^2 for even f
        main[0] = 2.0 * n / dr**2
        sup = sup.copy()
        sup[0] = -2.0 * n / dr**2
    # dirichlet_origin vertex grid: plain interior formula everywhere

    tag = "symmetric" if (n == 1 and mesh.origin_rule == DIRICHLET_ORIGIN) \
        else "nonsymmetric"
    if n == 1 and not mesh.staggered and mesh.origin_rule == SYMMETRY_GHOST:
        tag = "nonsymmetric"  # ghost row breaks raw symmetry
    return BandedOperator.from_diagonals({-1: sub, 0: main, 1: sup},
                                         symmetry_tag=tag)


def build_full_2d_laplacian(mesh):
    """N*T x N*T polar Laplacian -Delta with periodic theta, Dirichlet outer.

    Unknown ordering is theta-block major: component index = j*N + i for
    theta_j and r_i, keeping the radial second difference in a narrow
    band within each block.  Returned as a scipy sparse matrix wrapped
    in coordinate lists by the caller; the angular index m enters only
    through the potential, not the Laplacian.
    """
    import scipy.sparse as sp

    if mesh.angular_points is None:
        raise InvalidMesh("2D Laplacian requires angular_points")
    T = mesh.angular_points
    r = mesh.nodes()
    N = r.size
    dth = 2 * np.pi / T

    radial = build_radial_laplacian(mesh, angular_index=0).to_sparse()
    inv_r2_dth2 = 1.0 / (r**2 * dth**2)
    # -d^2/dtheta^2 / r^2: (2 f_j - f_{j-1} - f_{j+1}) / (r^2 dth^2)
    diag_ang = sp.diags(2.0 * inv_r2_dth2)
    off_ang = sp.diags(-inv_r2_dth2)

    blocks = [[None] * T for _ in range(T)]
    for j in range(T):
        blocks[j][j] = radial + diag_ang
        blocks[j][(j + 1) % T] = off_ang
        blocks[j][(j - 1) % T] = off_ang
    return sp.bmat(blocks, format="csr")
