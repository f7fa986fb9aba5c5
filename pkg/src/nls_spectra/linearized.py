"""Assembly of the linearized operators.

All builders take a converged profile plus the mesh the operator should
live on and return immutable BandedOperator/BlockOperator instances.
1D operators are assembled on the full line (both parities of
eigenfunctions are needed); radial operators for n >= 2 live on the
staggered half grid and are symmetrized by the similarity transform
diag(d) with d_i the cumulative sqrt ratio of the raw off-diagonals —
this is exactly the diag(r^{(n-1)/2})-style conjugation at the discrete
level, so eigenvalues are untouched while symmetric solvers apply.
"""

import numpy as np

from . import oracle
from .errors import DimensionUnsupported, InvalidMesh, MeshMismatch
from .mesh import build_full_2d_laplacian, build_radial_laplacian
from .operators import BandedOperator, BlockOperator, symmetrize_tridiagonal


# --------------------------------------------------------------- utilities

def profile_on_mesh(profile, mesh):
    """Profile samples transferred to ``mesh`` (reflection for a line)."""
    pm = profile.mesh
    if mesh is pm:
        return profile.values
    if abs(mesh.dr - pm.dr) > 1e-12:
        raise MeshMismatch("profile and operator mesh use different dr")
    if mesh.kind == "line":
        if pm.kind != "half" or pm.staggered:
            raise MeshMismatch("line extension requires a 1D vertex profile")
        if mesh.n_points != pm.n_points:
            raise MeshMismatch("line and profile meshes differ in extent")
        N = pm.n_points
        idx = np.abs(np.arange(-(N - 1), N))
        return profile.values[idx]
    if not mesh.compatible_with(pm):
        raise MeshMismatch("incompatible meshes")
    return profile.values


def _require_1d(profile, mesh):
    if profile.n != 1 or mesh.dim != 1 or mesh.kind != "line":
        raise DimensionUnsupported("this operator is assembled on a 1D line mesh")


def _log_derivative(values, dr):
    return np.gradient(np.log(values), dr, edge_order=2)


def centered_derivative_matrix(mesh):
    """Antisymmetric centered first-difference with Dirichlet ends."""
    n = mesh.size
    off = np.full(n - 1, 1.0 / (2.0 * mesh.dr))
    return BandedOperator.from_diagonals({-1: -off, 0: np.zeros(n), 1: off.copy()})


# ------------------------------------------------------------ L+, L-, cal L

def build_L_plus_minus(profile, mesh, which="plus", raw=False):
    """Schrödinger operator -Delta + 1 - (p or 1) Q^(p-1).

    1D: symmetric tridiagonal on the line.  n >= 2: radial tridiagonal,
    symmetrized via the similarity weight unless ``raw=True``.
    """
    if which not in ("plus", "minus"):
        raise ValueError("which must be 'plus' or 'minus'")
    p = profile.p
    factor = p if which == "plus" else 1.0
    Q = profile_on_mesh(profile, mesh)
    pot = 1.0 - factor * Q ** (p - 1.0)
    lap = build_radial_laplacian(mesh, angular_index=0)
    if mesh.dim >= 2 and not raw:
        lap = symmetrize_tridiagonal(lap)
    return lap.add_diagonal(pot)


def build_cal_L(profile, mesh, factorized=False):
    """Block operator [[0, L-], [-L+, 0]] acting on [u; w].

    With ``factorized=True`` (1D only) the L- block is the exact
    discrete product S^T S, which shares its nonzero mu-spectrum with
    the fourth-order operator from build_H by construction.
    """
    Lp = build_L_plus_minus(profile, mesh, "plus")
    if factorized:
        _require_1d(profile, mesh)
        S = build_factor_Sj(profile, mesh, 1)
        Lm = S.transpose() @ S
    else:
        Lm = build_L_plus_minus(profile, mesh, "minus")
    return BlockOperator([[None, Lm], [(-1.0) * Lp, None]])


def build_factor_Sj(profile, mesh, j):
    """First-order Darboux factor S_j = d/dx - k_j (log Q)'.

    j = 0 gives the factor with L+ - lambda_0 = S_0^T S_0, j = 1 the one
    with L- = S_1^T S_1.
    """
    _require_1d(profile, mesh)
    kj = oracle.k_index(profile.p, j)
    Q = profile_on_mesh(profile, mesh)
    dlog = _log_derivative(Q, mesh.dr)
    D = centered_derivative_matrix(mesh)
    return D.add_diagonal(-kj * dlog)


def build_H(profile, mesh):
    """Fourth-order symmetric operator H = S L+ S^T (1D)."""
    _require_1d(profile, mesh)
    S = build_factor_Sj(profile, mesh, 1)
    Lp = build_L_plus_minus(profile, mesh, "plus")
    H = S @ Lp @ S.transpose()
    return H.symmetrized(force=True)


def build_hierarchy_Lj(profile, mesh, j):
    """L_j = -d^2/dx^2 + 1 - k_{j-1} k_j (2/(p+1)) Q^(p-1); j may be real."""
    _require_1d(profile, mesh)
    p = profile.p
    Q = profile_on_mesh(profile, mesh)
    coeff = oracle.hierarchy_potential_coeff(p, j)
    lap = build_radial_laplacian(mesh, angular_index=0)
    return lap.add_diagonal(1.0 + coeff * Q ** (p - 1.0))


def apply_mirror_identity_residual(profile, mesh, j, v):
    """|| [S_j (L_{j-1} - lam_j) S_j^T - S_j^T (L_{j+2} - lam_j) S_j] v ||_2."""
    _require_1d(profile, mesh)
    lam = oracle.lambda_index(profile.p, j)
    Sj = build_factor_Sj(profile, mesh, j)
    n = mesh.size
    eye = BandedOperator.identity(n)
    A = build_hierarchy_Lj(profile, mesh, j - 1) + (-lam) * eye
    B = build_hierarchy_Lj(profile, mesh, j + 2) + (-lam) * eye
    lhs = Sj @ A @ Sj.transpose()
    rhs = Sj.transpose() @ B @ Sj
    v = np.asarray(v, dtype=float)
    # discrete L2 norm (sqrt(dr) weight) so the value is mesh-size free
    return float(np.sqrt(mesh.dr) * np.linalg.norm(lhs.matvec(v)
                                                   - rhs.matvec(v)))


# ------------------------------------------------------- 2D sector operators

def _radial_block(mesh, angular_sq, extra_diagonal):
    """Symmetrized -Delta_r + angular_sq/r^2 + extra_diagonal."""
    lap = symmetrize_tridiagonal(build_radial_laplacian(mesh, angular_index=0))
    r = mesh.nodes()
    return lap.add_diagonal(angular_sq / r**2 + extra_diagonal)


def _require_sector(profile, mesh):
    if profile.n != 2 or mesh.dim != 2 or not mesh.staggered:
        raise DimensionUnsupported(
            "sector operators require n=2 on the staggered radial grid")
    if not mesh.compatible_with(profile.mesh):
        raise MeshMismatch("sector mesh incompatible with profile mesh")


def build_sector_LXk(profile, mesh, k):
    """Real sector operator on [a1, a2] (k=0) or [a1, a2, b1, b2] (k>0).

    H_{+-k} = -Delta_r + 1 + (m +- k)^2/r^2 - ((p+1)/2) phi^(p-1) and
    V = ((p-1)/2) phi^(p-1).
    """
    _require_sector(profile, mesh)
    if k < 0:
        raise ValueError("sector index k must be >= 0")
    p, m = profile.p, profile.m
    phi = profile_on_mesh(profile, mesh)
    W = phi ** (p - 1.0)
    Vd = 0.5 * (p - 1) * W
    well = 1.0 - 0.5 * (p + 1) * W
    V = BandedOperator.from_diagonals({0: Vd}, symmetry_tag="symmetric")
    Hk = _radial_block(mesh, float((m + k) ** 2), well)
    if k == 0:
        return BlockOperator([[None, Hk + V], [(-1.0) * (Hk - V), None]])
    Hmk = _radial_block(mesh, float((m - k) ** 2), well)
    Z = None
    return BlockOperator([
        [Z, Hk, Z, V],
        [(-1.0) * Hk, Z, V, Z],
        [Z, V, Z, Hmk],
        [V, Z, (-1.0) * Hmk, Z],
    ])


def build_sector_Lmk(profile, mesh, k):
    """Complex sector operator L_{m,k} on [a1, a2]; k may be negative.

    [[-2imk/r^2, -Delta_r + 1 + (m^2+k^2)/r^2 - phi^(p-1)],
     [-(-Delta_r + 1 + (m^2+k^2)/r^2 - p phi^(p-1)), -2imk/r^2]]
    """
    _require_sector(profile, mesh)
    p, m = profile.p, profile.m
    phi = profile_on_mesh(profile, mesh)
    W = phi ** (p - 1.0)
    r = mesh.nodes()
    ang = float(m * m + k * k)
    diag = BandedOperator.from_diagonals(
        {0: -2.0j * m * k / r**2}, symmetry_tag="symmetric")
    A12 = _radial_block(mesh, ang, 1.0 - W)
    A21 = (-1.0) * _radial_block(mesh, ang, 1.0 - p * W)
    return BlockOperator([[diag, A12], [A21, diag]])


def build_full2d_L(profile, mesh2d):
    """Full 2D linearized operator on [Re h; Im h] (scipy sparse).

    [[0, -Delta + 1], [Delta - 1, 0]] plus the theta-dependent potential
    phi^(p-1) [[-(p-1) c s, -c^2 - p s^2], [p c^2 + s^2, (p-1) c s]]
    evaluated at m*theta, with c = cos, s = sin.  Ordering is
    theta-block major within each of the two components.
    """
    import scipy.sparse as sp

    if profile.n != 2:
        raise DimensionUnsupported("full 2D operator requires n=2")
    if mesh2d.angular_points is None:
        raise InvalidMesh("mesh must carry an angular grid")
    if not mesh2d.compatible_with(profile.mesh):
        raise MeshMismatch("2D mesh incompatible with profile mesh")
    p, m = profile.p, profile.m
    phi = profile_on_mesh(profile, mesh2d)
    W = phi ** (p - 1.0)
    theta = mesh2d.theta_nodes()
    c = np.cos(m * theta)
    s = np.sin(m * theta)

    lap = build_full_2d_laplacian(mesh2d)
    NT = lap.shape[0]
    L1 = lap + sp.eye(NT)  # -Delta + 1

    def pot(angular):
        return sp.diags(np.kron(angular, W))

    b11 = pot(-(p - 1) * c * s)
    b12 = L1 + pot(-(c * c) - p * (s * s))
    b21 = -L1 + pot(p * (c * c) + s * s)
    b22 = pot((p - 1) * c * s)
    return sp.bmat([[b11, b12], [b21, b22]], format="csc")
