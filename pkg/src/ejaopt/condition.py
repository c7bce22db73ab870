"""Condition numbers, condition vectors, and their minimization over orbits.

For x in the open symmetric cone (all eigenvalues positive) the condition
number is c(x) = lambda_1(x) / lambda_n(x).  It is Schur-convex but not
strictly so; the condition vector kappa(x) with entries
lambda_i / lambda_{n-i+1}, i <= floor(n/2), repairs this: the norm
|kappa(.)| is strictly Schur-convex on the cone and sandwiches c(x) via

    floor(n/2)^(-1/2) |kappa(x)| <= c(x) <= |kappa(x)|.

Minimizing |kappa(x + a)| over the orbit of b therefore has the closed
form of the general alignment principle with shift -a: pair the largest
eigenvalues of b with the smallest of a, giving |phi(lam(b) - lam(-a))|,
with -a and the optimizer strongly operator commuting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_TOL, Element, eigenvalues, spectral_decompose, synthesize_from_frame
from .majorization import sort_desc
from .orbit import InfeasibleError, Solution, certify
from .schur import DomainError, phi_ratios


@dataclass(frozen=True, eq=False)
class ConditionReport:
    cond: float
    kappa: np.ndarray
    kappa_norm: float
    bounds_ok: bool

    def __post_init__(self):
        k = np.asarray(self.kappa, dtype=float).copy()
        k.flags.writeable = False
        object.__setattr__(self, "kappa", k)


def phi(u) -> np.ndarray:
    """phi(u) = (u_1/u_n, u_2/u_{n-1}, ...) on the sorted vector, length
    floor(n/2); the condition vector of u read as a spectrum."""
    u = np.asarray(u, dtype=float)
    if np.any(u <= 0.0):
        raise DomainError("phi needs strictly positive entries")
    return phi_ratios(u)


def condition_report(x: Element, tol=DEFAULT_TOL) -> ConditionReport:
    """Condition number, condition vector, and the sandwich bounds for x.

    Requires x in the open cone: lambda_n(x) > tol.
    """
    lam = eigenvalues(x)
    if lam[-1] <= tol:
        raise InfeasibleError("element is not in the open symmetric cone")
    kappa = phi(lam)
    cond = float(lam[0] / lam[-1])
    kn = float(np.linalg.norm(kappa))
    half = len(lam) // 2
    slack = 1e-12 * (1.0 + kn)
    bounds_ok = bool(kn / math.sqrt(half) <= cond + slack and cond <= kn + slack)
    return ConditionReport(cond=cond, kappa=kappa, kappa_norm=kn, bounds_ok=bounds_ok)


def minimize_condition_norm_orbit(b: Element, a: Element, tol=DEFAULT_TOL) -> Solution:
    """Closed-form minimum of |kappa(x + a)| over the orbit of b.

    Feasibility uses the sufficient condition lambda_n(b) + lambda_n(a) > tol
    (the smallest eigenvalue of x + a is bounded below by that sum); it is
    not necessary, so borderline instances may be rejected conservatively.
    The optimizer pairs lambda_i(b) with lambda_{n-i+1}(a) on a's frame and
    strongly operator commutes with -a.
    """
    if b.algebra != a.algebra:
        raise InfeasibleError("a and b belong to different algebras")
    dec = spectral_decompose(a)
    lam_a = dec.eigenvalues
    lam_b = eigenvalues(b)
    if lam_b[-1] + lam_a[-1] <= tol:
        raise InfeasibleError(
            "cannot certify [b] + a inside the open cone: "
            f"lambda_n(b) + lambda_n(a) = {lam_b[-1] + lam_a[-1]:.3e}"
        )
    # anti-aligned synthesis: largest of b on the frame member carrying the
    # smallest eigenvalue of a
    x_star = synthesize_from_frame(dec.frame, lam_b[::-1], validate=False)
    shifted = lam_b - sort_desc(-lam_a)  # entries lam_i(b) + lam_{n-i+1}(a)
    value = float(np.linalg.norm(phi(shifted)))
    cert = certify(a, x_star, sense="max", tol=tol)
    return Solution(x_star=x_star, value=value, certificate=cert)
