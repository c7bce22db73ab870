"""Vector majorization predicates and the Lidskii / Ky Fan verifiers.

``u`` is majorized by ``v`` (u < v) when every prefix sum of the sorted
vectors satisfies sum_k u_down <= sum_k v_down and the totals agree;
dropping the total-sum equality gives submajorization.  The verdicts carry
the most-violated prefix margin so property suites can report worst
residuals.  Prefix sums use compensated (Neumaier) summation so verdicts
are reproducible at the tolerance level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_TOL, Element, eigenvalues


@dataclass(frozen=True)
class MajorizationVerdict:
    holds: bool
    strict: bool
    worst_prefix_gap: float  # min over k of (prefix_k(v) - prefix_k(u)); < 0 is a violation
    sum_gap: float  # |sum(u) - sum(v)|


def sort_desc(u) -> np.ndarray:
    """Entries of u in non-increasing order (stable for ties)."""
    u = np.asarray(u, dtype=float)
    return u[np.argsort(-u, kind="stable")]


def _prefix_sums(values) -> np.ndarray:
    out = np.empty(len(values))
    s = 0.0
    comp = 0.0
    for i, v in enumerate(values):
        v = float(v)
        t = s + v
        if abs(s) >= abs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
        out[i] = s + comp
    return out


def _verdict(v, u, tol, require_sum: bool) -> MajorizationVerdict:
    v = np.asarray(v, dtype=float)
    u = np.asarray(u, dtype=float)
    if v.shape != u.shape or v.ndim != 1:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    ud = sort_desc(u)
    vd = sort_desc(v)
    pu = _prefix_sums(ud)
    pv = _prefix_sums(vd)
    gaps = pv - pu
    worst = float(np.min(gaps))
    sum_gap = abs(float(gaps[-1]))
    holds = worst >= -tol and (sum_gap <= tol or not require_sum)
    strict = bool(holds and float(np.max(np.abs(ud - vd))) > tol)
    return MajorizationVerdict(bool(holds), strict, worst, sum_gap)


def majorizes(v, u, tol=DEFAULT_TOL) -> MajorizationVerdict:
    """Verdict for u < v (prefix sums bounded, totals equal within tol)."""
    return _verdict(v, u, tol, require_sum=True)


def submajorizes(v, u, tol=DEFAULT_TOL) -> MajorizationVerdict:
    """Verdict for u <_w v (prefix-sum conditions only)."""
    return _verdict(v, u, tol, require_sum=False)


def t_transform_sample(v, rng) -> np.ndarray:
    """One averaging step: replace (v_i, v_j) by their t-mixtures.

    The result is majorized by v, strictly whenever v_i != v_j and
    t is in the open interval (0, 1).  Compose for deeper strict pairs.
    """
    v = np.asarray(v, dtype=float)
    if len(v) < 2:
        raise ValueError("need length >= 2")
    i, j = rng.choice(len(v), size=2, replace=False)
    t = float(rng.uniform(0.0, 1.0))
    u = v.copy()
    u[i] = t * v[i] + (1.0 - t) * v[j]
    u[j] = (1.0 - t) * v[i] + t * v[j]
    return u


def lidskii_holds(a: Element, b: Element, tol=DEFAULT_TOL) -> MajorizationVerdict:
    """Lidskii's inequality: lambda(a) - lambda(b) < lambda(a - b)."""
    return majorizes(eigenvalues(a - b), eigenvalues(a) - eigenvalues(b), tol=tol)


def kyfan_holds(a: Element, b: Element, tol=DEFAULT_TOL) -> MajorizationVerdict:
    """Ky Fan's inequality: lambda(a + b) < lambda(a) + lambda(b)."""
    return majorizes(eigenvalues(a) + eigenvalues(b), eigenvalues(a + b), tol=tol)
