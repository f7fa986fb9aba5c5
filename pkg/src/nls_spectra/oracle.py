"""Closed-form predictions for the 1D spectra and related quantities.

Everything here is exact arithmetic on rational formulas (double
precision, no truncated series): the eigenvalue ladder of the 1D
Schrödinger operators, the Darboux-hierarchy point spectrum and lower
bounds, interlacing brackets for the mu-spectrum, the bifurcation slope
at the critical exponent, nullspace catalogs, and the p=3 resonance
data.  Numerical modules treat this module as the single source of
truth for k_j, lambda_j, p_j.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import OutOfRange, QuadratureFailure


# ----------------------------------------------------------------- ladder

def k_index(p, m):
    """k_m = (p+1)/2 - m(p-1)/2; m may be any real number."""
    return 0.5 * (p + 1) - 0.5 * m * (p - 1)


def lambda_index(p, m):
    """lambda_m = 1 - k_m^2."""
    k = k_index(p, m)
    return 1.0 - k * k


def p_threshold(m):
    """p_m = (m+1)/(m-1) for m > 1, infinity for m <= 1."""
    return (m + 1) / (m - 1) if m > 1 else math.inf


@dataclass(frozen=True)
class LadderEntry:
    m: int
    k: float
    lam: float
    parity: str          # 'even' or 'odd' eigenfunction
    belongs_to: str      # 'Lplus' or 'both'


@dataclass(frozen=True)
class Ladder1D:
    p: float
    M: int
    entries: tuple


def highest_index(p):
    """Largest M with p_{M+1} <= p < p_M."""
    if p <= 1:
        raise OutOfRange("ladder defined for p > 1")
    M = 1
    while p_threshold(M + 1) > p:
        M += 1
    return M


def ladder(p):
    """Full discrete-eigenvalue ladder below the essential spectrum.

    L+ carries lambda_0..lambda_M (one more than L-, which carries
    lambda_1..lambda_M).
    """
    M = highest_index(p)
    entries = tuple(
        LadderEntry(m, k_index(p, m), lambda_index(p, m),
                    "even" if m % 2 == 0 else "odd",
                    "Lplus" if m == 0 else "both")
        for m in range(M + 1)
    )
    return Ladder1D(p, M, entries)


def closed_form_Q(p, x):
    """Q(x) = c_p cosh^(-beta)(x/beta), c_p = ((p+1)/2)^(1/(p-1))."""
    c = (0.5 * (p + 1)) ** (1.0 / (p - 1))
    beta = 2.0 / (p - 1)
    return c * np.cosh(np.asarray(x) / beta) ** (-beta)


# ------------------------------------------------------- hierarchy spectrum

def hierarchy_potential_coeff(p, j):
    """Coefficient of Q^(p-1) in L_j:  -k_{j-1} k_j * 2/(p+1)."""
    return -k_index(p, j - 1) * k_index(p, j) * 2.0 / (p + 1)


def predicted_hierarchy_spectrum(p, j, below=1.0):
    """Point spectrum of L_j: {lambda_k : p < p_k, k >= j, integer}
    union {lambda_k : p > p_k, 0 <= k <= j-1}, restricted below `below`.
    All eigenvalues are simple."""
    eigs = []
    k = max(int(math.ceil(j)), 0)
    while p < p_threshold(k):
        lam = lambda_index(p, k)
        if lam < below:
            eigs.append(lam)
        else:
            break
        k += 1
    for k in range(int(j) - 1, -1, -1):
        if p > p_threshold(k):
            lam = lambda_index(p, k)
            if lam < below:
                eigs.append(lam)
    return sorted(eigs)


def hierarchy_lower_bound(p, j):
    """lambda'_j with L_j >= lambda'_j: lambda_j for p <= p_j, 1 inside
    (p_j, p_{j-1}), lambda_{j-1} for p >= p_{j-1}."""
    pj = p_threshold(j)
    pjm1 = p_threshold(j - 1)
    if p <= pj:
        return lambda_index(p, j)
    if p < pjm1:
        return 1.0
    return lambda_index(p, j - 1)


# ------------------------------------------------------------- interlacing

def interlacing_regime(p):
    """k >= 1 with p_{k+2} <= p < p_{k+1}."""
    if not (1.0 < p < 3.0):
        raise OutOfRange("interlacing regime requires 1 < p < 3 (k >= 1)")
    k = 1
    while p < p_threshold(k + 2):
        k += 1
    return k


@dataclass(frozen=True)
class InterlacingBounds:
    j: int
    lower: float
    upper: float
    upper_inclusive: bool
    sharper_lower: float | None = None


def interlacing_bounds(p, j):
    """Bracket (lambda_{j+1}^2, lambda_{j+2}^2) for mu_{j+1}; for j = k
    the upper end is the band edge 1 (inclusive).  Sharper lower bounds
    for mu_2 and mu_3 are attached where available."""
    k = interlacing_regime(p)
    if not 1 <= j <= k:
        raise OutOfRange(f"j={j} outside 1..{k} at p={p}")
    lo = lambda_index(p, j + 1) ** 2
    if j < k:
        hi, inclusive = lambda_index(p, j + 2) ** 2, False
    else:
        hi, inclusive = 1.0, True
    sharper = None
    if j == 1:
        l2, l3 = lambda_index(p, 2), lambda_index(p, 3)
        sharper = l2 * l3 if p <= 2 else (l2 if p < 5 else None)
    elif j == 2:
        l3, l4 = lambda_index(p, 3), lambda_index(p, 4)
        if p <= 5 / 3:
            sharper = l3 * l4
        elif p <= 2:
            sharper = l3
        else:
            sharper = 1.0
    return InterlacingBounds(j, lo, hi, inclusive, sharper)


def mu1_lower_bound(p):
    """mu_1 >= -(1/16)(p-1)^3 (p-5) for p >= 5."""
    if p < 5:
        raise OutOfRange("mu_1 lower bound stated for p >= 5")
    return -(1.0 / 16.0) * (p - 1) ** 3 * (p - 5)


def _profile_power_integral(p, s):
    """int_R Q^s dx = c_p^s * beta * sqrt(pi) * G(s*beta/2)/G((s*beta+1)/2)."""
    c = (0.5 * (p + 1)) ** (1.0 / (p - 1))
    beta = 2.0 / (p - 1)
    a = s * beta
    return (c**s * beta * math.sqrt(math.pi)
            * math.exp(gammaln(a / 2) - gammaln((a + 1) / 2)))


def _test_quotient(p, k):
    """Rayleigh quotient (f, Hf)/(f, f) for the odd test function f = S Q^k."""
    a = (k - 1) * (2 * k + p + 1) / (p + 1)
    b = 1 - k * k
    c = (k + p) * (2 * k - p - 1) / (p + 1)
    sig = (k + 2 * p - 1) * (2 * k + p - 3) / (p + 1)
    d = 1 - (k + p - 1) ** 2
    J = [_profile_power_integral(p, 2 * k + m * (p - 1)) for m in range(4)]
    num = (a * a * sig * J[3] + a * (a * d + b * c + b * sig) * J[2]
           + b * (a * d + a * b + b * c) * J[1] + b**3 * J[0])
    return num / (a * J[1] + b * J[0])


def mu2_upper_bound(p):
    """Computable C_p with mu_2 <= C_p < 1 for p != 3 (diagnostic only).

    Obtained by minimizing the explicit test-function quotient over
    k in (0, 1].
    """
    from scipy.optimize import minimize_scalar

    res = minimize_scalar(lambda k: _test_quotient(p, k),
                          bounds=(1e-6, 1.0), method="bounded",
                          options={"xatol": 1e-10})
    return float(res.fun)


# ------------------------------------------------------------- bifurcation

def p_critical(n):
    return 1.0 + 4.0 / n


@dataclass(frozen=True)
class BifurcationPrediction:
    n: int
    p_c: float
    a_coeff: float

    def mu_linear(self, p):
        return 8.0 * self.a_coeff * (p - self.p_c)

    def lambda_pair(self, p):
        lam = complex(np.sqrt(complex(-self.mu_linear(p))))
        return lam, -lam


def bifurcation_prediction(n, profile):
    """Slope coefficient a = n (Q1, Q^p) / (4 (Q1, r^2 Q)) < 0 at p = p_c."""
    p = profile.p
    mesh = profile.mesh
    r = mesh.nodes()
    Q = profile.values
    Q1 = 2.0 / (p - 1) * Q + r * profile.derivative()
    inner_qp = mesh.integrate(Q1 * Q**p)
    inner_r2q = mesh.integrate(Q1 * r**2 * Q)
    if abs(inner_r2q) < 1e-12 * max(1.0, abs(inner_qp)):
        raise QuadratureFailure("(Q1, r^2 Q) vanishes; slope undefined")
    return BifurcationPrediction(n, p_critical(n),
                                 n * inner_qp / (4.0 * inner_r2q))


# ---------------------------------------------------------------- resonance

def resonance_profile(mesh):
    """Samples of u_3 = 1 - Q^2 at p = 3 (the lambda = i resonance)."""
    x = mesh.nodes()
    return 1.0 - closed_form_Q(3.0, x) ** 2


def w_functional(f, mesh):
    """sqrt of int (f / sqrt(1 + x^2))^2 dx over the mesh.

    The square root makes this a norm, so renormalizations of the kind
    ||u_p||_w = delta are meaningful.
    """
    x = mesh.nodes()
    w = np.asarray(f) ** 2 / (1.0 + x**2)
    return math.sqrt(mesh.integrate(w))


# ----------------------------------------------------------- eigenfunctions

_CHAINS = {
    # (operator, parity of m): (basis, multiplier coefficient in front of
    # Q^(p-1), number of chain terms as function of m)
    ("plus", 0): ("power", lambda k, p: (k + p) * (2 * k - p - 1) / (p + 1),
                  lambda m: m // 2 + 1),
    ("plus", 1): ("dpower", lambda k, p: (k - 1) * (2 * k + 3 * p - 1) / (p + 1),
                  lambda m: (m + 1) // 2),
    ("minus", 1): ("power", lambda k, p: (k - 1) * (2 * k + p + 1) / (p + 1),
                   lambda m: (m + 1) // 2),
    ("minus", 0): ("dpower", lambda k, p: (k + p) * (2 * k + p - 3) / (p + 1),
                   lambda m: m // 2),
}


def ladder_eigenfunction(p, which, m, x):
    """Discrete samples of the L+/L- eigenfunction for lambda_m.

    Built from the two-term recurrence the conjugation identities
    induce: applying the operator to Q^kappa (or its derivative) returns
    the same object plus a multiple of Q^(kappa+p-1) (or its
    derivative), so the eigenfunction is a finite chain of profile
    powers from kappa = k_m up to the power whose multiplier vanishes.
    Normalized to unit discrete L^2 (trapezoid).
    """
    if which not in ("plus", "minus"):
        raise OutOfRange("which must be 'plus' or 'minus'")
    if m > highest_index(p) or m < 0 or (which == "minus" and m < 1):
        raise OutOfRange(f"no bound state with index m={m} at p={p}")
    basis, coef, nterms = _CHAINS[(which, m % 2)]
    terms = nterms(m)
    km = k_index(p, m)
    kappas = [km + j * (p - 1) for j in range(terms)]
    coeffs = [1.0]
    for j in range(terms - 1):
        kj, kj1 = kappas[j], kappas[j + 1]
        fac = coef(kj, p)
        if basis == "dpower":
            fac *= kj / kj1
        coeffs.append(coeffs[-1] * fac / (kj1 * kj1 - km * km))

    x = np.asarray(x, dtype=float)
    beta = 2.0 / (p - 1)
    Q = closed_form_Q(p, x)
    tanh = np.tanh(x / beta)
    f = np.zeros_like(x)
    for c, kap in zip(coeffs, kappas):
        if basis == "power":
            f += c * Q**kap
        else:
            f += c * (-kap) * Q**kap * tanh  # (Q^kappa)' = -kappa Q^kappa tanh
    dx = x[1] - x[0]
    f /= math.sqrt(np.trapezoid(f * f, dx=dx))
    return f


# ------------------------------------------------------------- nullspaces

@dataclass(frozen=True)
class NullspaceCatalog:
    n: int
    p: float
    expected_dim: int
    entries: tuple = field(default=())  # (name, description) pairs


def is_critical(n, p, tol=1e-12):
    return abs(p - p_critical(n)) <= tol


def nullspace_catalog(n, p, profile=None):
    """Generator list and expected dimension 2n + 2 (+2 at p = p_c)."""
    crit = is_critical(n, p)
    entries = [("iQ", "[0; Q], phase"),
               ("Q1", "[Q1; 0], scaling-adjoint generalized vector")]
    entries += [(f"xQ_{i}", f"[0; x_{i} Q], Galilean") for i in range(1, n + 1)]
    entries += [(f"dQ_{i}", f"[d_{i} Q; 0], translation") for i in range(1, n + 1)]
    if crit:
        entries += [("x2Q", "[0; |x|^2 Q], pseudo-conformal"),
                    ("rho", "[rho; 0], solves L+ rho = |x|^2 Q")]
    expected = 2 * n + 2 + (2 if crit else 0)
    return NullspaceCatalog(n, p, expected, tuple(entries))


# ------------------------------------------------------------------ report

def oracle_report(n, p):
    """JSON-serializable bundle of the analytic predictions for (n, p)."""
    report = {
        "n": n,
        "p": p,
        "p_c": p_critical(n),
        "expected_nullspace_dim": nullspace_catalog(n, p).expected_dim,
    }
    if n == 1:
        lad = ladder(p)
        report["ladder"] = [
            {"m": e.m, "k": e.k, "lambda": e.lam, "parity": e.parity,
             "belongs_to": e.belongs_to}
            for e in lad.entries
        ]
        bounds = []
        if 1.0 < p < 3.0:
            k = interlacing_regime(p)
            for j in range(1, k + 1):
                b = interlacing_bounds(p, j)
                bounds.append({"j": j, "lower": b.lower, "upper": b.upper,
                               "upper_inclusive": b.upper_inclusive,
                               "sharper_lower": b.sharper_lower})
        report["interlacing"] = bounds
        if p >= 5:
            report["mu1_lower_bound"] = mu1_lower_bound(p)
        if p != 3.0:
            report["mu2_upper_bound"] = mu2_upper_bound(p)
    return report
