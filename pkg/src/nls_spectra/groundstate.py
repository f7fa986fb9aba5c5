"""Solitary-wave profile solver.

Normalize-and-iterate scheme: with A the (banded) discrete radial
Laplacian including the angular term, repeat

    (A + I) q_tilde = q_j ** p,      q_{j+1} = q_tilde / ||q_tilde||_2

until the normalization factor stalls, then output
alpha**(1/(p-1)) * q, which solves (A + I) Q = Q**p.  The linear system
is factored once and reused every iteration.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvalidExponent, NotConverged, UnsupportedProfile
from .mesh import RadialMesh, build_radial_laplacian, make_mesh


def p_max(n):
    """Existence threshold 1 + 4/(n-2) for n >= 3, infinity otherwise."""
    return 1.0 + 4.0 / (n - 2) if n >= 3 else np.inf


@dataclass
class SolverOptions:
    alpha_rel_tol: float = 1e-12
    residual_tol: float = 1e-10
    max_iters: int = 10000
    seed: np.ndarray | None = None  # custom positive seed vector


@dataclass
class GroundStateProfile:
    mesh: RadialMesh
    values: np.ndarray
    p: float
    n: int
    m: int
    alpha: float
    residual_inf: float
    iterations: int

    def derivative(self):
        """dQ/dr sampled on the mesh (second-order differences)."""
        return np.gradient(self.values, self.mesh.dr, edge_order=2)


def solve_ground_state(n, p, m=0, mesh=None, opts=None):
    """Compute the positive (m-equivariant for m >= 1) profile.

    Raises InvalidExponent outside 1 < p < p_max(n), UnsupportedProfile
    for m >= 1 with n != 2, NotConverged when the iteration cap is hit.
    """
    if not (1.0 < p < p_max(n)):
        raise InvalidExponent(f"p={p} outside (1, {p_max(n)}) for n={n}")
    if m < 0 or (m >= 1 and n != 2):
        raise UnsupportedProfile(f"angular index m={m} requires n=2")
    if mesh is None:
        mesh = make_mesh(n, m=m)
    opts = opts or SolverOptions()

    A = build_radial_laplacian(mesh, angular_index=m)
    ab = A.lu_storage(shift=-1.0)  # band storage of A + I
    ipiv, info = _kernels.bandlu_factor(ab, A.kl, A.ku)
    if info != 0:
        raise NotConverged(f"(A + I) singular at column {info - 1}")
    Asp = A.to_sparse()

    r = mesh.nodes()
    if opts.seed is not None:
        q = np.asarray(opts.seed, dtype=float).copy()
        if np.any(q[r > 0] <= 0) if m >= 1 else np.any(q <= 0):
            raise UnsupportedProfile("seed must be positive in the interior")
    else:
        q = np.exp(-(r**2)) if m == 0 else r**m * np.exp(-(r**2))
    q /= np.linalg.norm(q)

    alpha_prev = np.inf
    scale_exp = 1.0 / (p - 1.0)
    residual = np.inf
    for it in range(1, opts.max_iters + 1):
        qt = _kernels.bandlu_solve(ab, A.kl, A.ku, ipiv, q**p)
        alpha = 1.0 / np.linalg.norm(qt)
        q = alpha * qt
        if abs(alpha - alpha_prev) <= opts.alpha_rel_tol * alpha:
            Q = alpha**scale_exp * q
            residual = np.abs(Asp @ Q + Q - np.abs(Q) ** p * np.sign(Q)).max()
            if residual <= opts.residual_tol:
                return GroundStateProfile(mesh, Q, p, n, m, alpha, residual, it)
        alpha_prev = alpha

    raise NotConverged(
        f"no convergence in {opts.max_iters} iterations "
        f"(n={n}, p={p}, m={m}, residual={residual:.3e})",
        iterations=opts.max_iters, residual=residual)


def _gradient_sq_integral(profile):
    mesh = profile.mesh
    dq = profile.derivative()
    g = dq**2
    if profile.m >= 1:
        g = g + (profile.m * profile.values / mesh.nodes()) ** 2
    return mesh.integrate(g)


def pohozaev_check(profile):
    """Quadrature ratios of both scaling identities; both should be ~1.

    With a = n(p-1)/4 and b = (n+2-(n-2)p)/4:
      (1/2) int Q^2      = (b/(p+1)) int Q^(p+1)
      (1/2) int |grad Q|^2 = (a/(p+1)) int Q^(p+1)
    """
    n, p = profile.n, profile.p
    a = n * (p - 1) / 4.0
    b = (n + 2 - (n - 2) * p) / 4.0
    mesh = profile.mesh
    mass = mesh.integrate(profile.values**2)
    pot = mesh.integrate(profile.values ** (p + 1))
    grad = _gradient_sq_integral(profile)
    ratio_mass = 0.5 * mass / (b / (p + 1) * pot)
    ratio_grad = 0.5 * grad / (a / (p + 1) * pot)
    return ratio_mass, ratio_grad


def gn_quotient(profile, values=None):
    """Gagliardo-Nirenberg quotient J[u]; minimized by the profile."""
    n, p = profile.n, profile.p
    a = n * (p - 1) / 4.0
    b = (n + 2 - (n - 2) * p) / 4.0
    mesh = profile.mesh
    u = profile.values if values is None else np.asarray(values, dtype=float)
    du = np.gradient(u, mesh.dr, edge_order=2)
    g = du**2
    if profile.m >= 1:
        g = g + (profile.m * u / mesh.nodes()) ** 2
    grad = mesh.integrate(g)
    mass = mesh.integrate(u**2)
    pot = mesh.integrate(np.abs(u) ** (p + 1))
    return grad**a * mass**b / pot


def export_profile_csv(profile, path):
    import contextlib
    import sys

    mesh = profile.mesh
    ctx = (contextlib.nullcontext(sys.stdout) if path == "-"
           else open(path, "w"))
    with ctx as fh:
        fh.write(f"# n = {profile.n}\n# p = {profile.p:.17g}\n"
                 f"# m = {profile.m}\n# dr = {mesh.dr:.17g}\n"
                 f"# r_max = {mesh.r_max:.17g}\n"
                 f"# alpha = {profile.alpha:.17g}\n"
                 f"# residual_inf = {profile.residual_inf:.17g}\n"
                 f"# iterations = {profile.iterations}\n")
        fh.write("r,value\n")
        for r, v in zip(mesh.nodes(), profile.values):
            fh.write(f"{r:.17g},{v:.17g}\n")
