"""Catalog of symmetric functions and their induced spectral functions.

A :class:`SymmetricFunction` is a permutation-invariant f : R^n -> R with
a domain tag and a convexity-class label.  F(x) = f(lambda(x)) is the
induced spectral function.  The strictness labels are analytic facts; the
randomized checker here is a falsifier, not a prover: it samples strict
majorization pairs and asserts strict decrease.

Built-in names (used by problem files): ``schatten`` (with p),
``squared_norm``, ``cond_number``, ``cond_vector_norm``, ``spread``,
``spread_vector_norm``, ``smoothed_max``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import Element, eigenvalues
from .majorization import majorizes, t_transform_sample

STRICTLY_SCHUR_CONVEX = "strictly_schur_convex"
SCHUR_CONVEX = "schur_convex"
NO_CLASS = "none"


class DomainError(ValueError):
    """Evaluation attempted outside the function's domain."""


def _in_all(U) -> np.ndarray:
    return np.ones(np.asarray(U).shape[:-1], dtype=bool)


def _in_positive(U) -> np.ndarray:
    return np.all(np.asarray(U) > 0.0, axis=-1)


@dataclass(frozen=True)
class SymmetricFunction:
    """Permutation-invariant function on R^arity.

    ``fn`` must accept arrays of shape (..., arity) and act along the last
    axis, which lets brute-force oracles evaluate all permutations at once.
    ``in_domain`` mirrors that shape contract and returns booleans.
    """

    id: str
    arity: int
    domain: str  # "all" | "positive"
    fn: Callable
    declared_class: str
    in_domain: Callable = field(default=None)

    def __post_init__(self):
        if self.in_domain is None:
            chk = _in_positive if self.domain == "positive" else _in_all
            object.__setattr__(self, "in_domain", chk)

    def __call__(self, u) -> float:
        u = np.asarray(u, dtype=float)
        if u.shape != (self.arity,):
            raise ValueError(f"{self.id}: expected a vector of length {self.arity}")
        if not bool(self.in_domain(u)):
            raise DomainError(f"{self.id}: argument outside domain '{self.domain}'")
        return float(self.fn(u))


def eval_spectral(fn: SymmetricFunction, x: Element) -> float:
    """F(x) = f(lambda(x)); invariant under automorphisms of the algebra."""
    if fn.arity != x.algebra.rank:
        raise ValueError(
            f"{fn.id}: arity {fn.arity} does not match algebra rank {x.algebra.rank}"
        )
    return fn(eigenvalues(x))


def _sorted_desc_last(U):
    return -np.sort(-U, axis=-1)


def phi_ratios(U) -> np.ndarray:
    """Half-vector of sorted-entry ratios u_i / u_{n-i+1}, i <= floor(n/2)."""
    U = np.asarray(U, dtype=float)
    if np.any(U <= 0.0):
        raise DomainError("phi needs strictly positive entries")
    n = U.shape[-1]
    half = n // 2
    S = _sorted_desc_last(U)
    return S[..., :half] / S[..., ::-1][..., :half]


def builtin(name: str, arity: int, **params) -> SymmetricFunction:
    """Construct a catalog function by name.

    Raises ValueError for unknown names or invalid parameters.
    """
    if arity < 1:
        raise ValueError("arity must be >= 1")
    half = arity // 2

    if name == "schatten":
        p = float(params.pop("p", 2.0))
        _no_extra(name, params)
        if p < 1.0:
            raise ValueError("schatten needs p >= 1")
        cls = STRICTLY_SCHUR_CONVEX if p > 1.0 else SCHUR_CONVEX
        return SymmetricFunction(
            id=f"schatten_{_fmt_p(p)}",
            arity=arity,
            domain="all",
            fn=lambda U, p=p: np.sum(np.abs(U) ** p, axis=-1) ** (1.0 / p),
            declared_class=cls,
        )
    if name == "squared_norm":
        _no_extra(name, params)
        return SymmetricFunction(
            id="squared_norm",
            arity=arity,
            domain="all",
            fn=lambda U: np.sum(U * U, axis=-1),
            declared_class=STRICTLY_SCHUR_CONVEX,
        )
    if name == "cond_number":
        _no_extra(name, params)
        return SymmetricFunction(
            id="cond_number",
            arity=arity,
            domain="positive",
            fn=lambda U: np.max(U, axis=-1) / np.min(U, axis=-1),
            declared_class=SCHUR_CONVEX,
        )
    if name == "cond_vector_norm":
        _no_extra(name, params)
        return SymmetricFunction(
            id="cond_vector_norm",
            arity=arity,
            domain="positive",
            fn=lambda U: np.sqrt(np.sum(phi_ratios(U) ** 2, axis=-1)),
            declared_class=STRICTLY_SCHUR_CONVEX,
        )
    if name == "spread":
        _no_extra(name, params)
        return SymmetricFunction(
            id="spread",
            arity=arity,
            domain="all",
            fn=lambda U: np.max(U, axis=-1) - np.min(U, axis=-1),
            declared_class=SCHUR_CONVEX,
        )
    if name == "spread_vector_norm":
        _no_extra(name, params)

        def _spread_vec(U, half=half):
            S = _sorted_desc_last(np.asarray(U, dtype=float))
            diffs = S[..., :half] - S[..., ::-1][..., :half]
            return np.sqrt(np.sum(diffs**2, axis=-1))

        return SymmetricFunction(
            id="spread_vector_norm",
            arity=arity,
            domain="all",
            fn=_spread_vec,
            declared_class=STRICTLY_SCHUR_CONVEX,
        )
    if name == "smoothed_max":
        # strictly quasi-convex symmetric representative: max + eps*|u|^2
        eps = float(params.pop("eps", 1e-3))
        _no_extra(name, params)
        if eps <= 0.0:
            raise ValueError("smoothed_max needs eps > 0")
        return SymmetricFunction(
            id=f"smoothed_max_{eps:g}",
            arity=arity,
            domain="all",
            fn=lambda U, eps=eps: np.max(U, axis=-1) + eps * np.sum(U * U, axis=-1),
            declared_class=STRICTLY_SCHUR_CONVEX,
        )
    raise ValueError(f"unknown builtin function {name!r}")


def _fmt_p(p: float) -> str:
    return f"{p:g}".replace(".", "_")


def _no_extra(name, params):
    if params:
        raise ValueError(f"{name}: unexpected parameters {sorted(params)}")


def from_config(cfg: dict, arity: int) -> SymmetricFunction:
    """Build a function from a problem-file entry like {"fn": "schatten", "p": 2}."""
    cfg = dict(cfg)
    try:
        name = cfg.pop("fn")
    except KeyError as exc:
        raise ValueError("function config needs an 'fn' name") from exc
    if name == "affine":
        base = from_config(cfg.pop("base"), arity)
        return affine_compose(base, scale=cfg.pop("scale", 1.0), shift=cfg.pop("shift", 0.0))
    return builtin(name, arity, **cfg)


def affine_compose(base: SymmetricFunction, scale=1.0, shift=0.0) -> SymmetricFunction:
    """g(u) = base(scale*u + shift*1).

    Requires scale > 0, which preserves (strict) Schur-convexity since the
    map is monotone in the majorization order.
    """
    scale = float(scale)
    shift = float(shift)
    if scale <= 0.0:
        raise ValueError("affine_compose needs scale > 0")
    return SymmetricFunction(
        id=f"{base.id}@affine({scale:g},{shift:g})",
        arity=base.arity,
        domain=base.domain,
        fn=lambda U: base.fn(scale * np.asarray(U, dtype=float) + shift),
        declared_class=base.declared_class,
        in_domain=lambda U: base.in_domain(scale * np.asarray(U, dtype=float) + shift),
    )


@dataclass(frozen=True, eq=False)
class StrictnessReport:
    passed: bool
    trials: int
    violations: tuple  # (u, v, f(u), f(v)) where f(u) >= f(v) despite u strictly < v
    min_margin: float  # min over trials of f(v) - f(u)


def _sample_in_domain(fn: SymmetricFunction, rng, cap=100) -> np.ndarray:
    for _ in range(cap):
        if fn.domain == "positive":
            v = np.exp(rng.standard_normal(fn.arity))
        else:
            v = rng.standard_normal(fn.arity)
        if bool(fn.in_domain(v)):
            return v
    raise DomainError(f"{fn.id}: could not sample the domain in {cap} attempts")


def check_strict_schur_convex(fn: SymmetricFunction, rng, trials=1000, max_resample=100) -> StrictnessReport:
    """Falsify strict Schur-convexity on random strict majorization pairs.

    Samples v in the domain, builds u strictly majorized by v via one to
    three composed t-transforms (which stay inside the positive orthant),
    and checks f(u) < f(v).  Domain-escaping or non-strict samples are
    discarded and resampled, with a cap.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    violations = []
    min_margin = np.inf
    for _ in range(trials):
        for _attempt in range(max_resample):
            v = _sample_in_domain(fn, rng)
            u = v
            for _k in range(int(rng.integers(1, 4))):
                u = t_transform_sample(u, rng)
            verdict = majorizes(v, u, tol=1e-12)
            if verdict.strict and bool(fn.in_domain(u)):
                break
        else:
            raise DomainError(f"{fn.id}: could not build a strict in-domain pair")
        margin = fn(v) - fn(u)
        min_margin = min(min_margin, margin)
        if margin <= 0.0:
            violations.append((u, v, fn(u), fn(v)))
    return StrictnessReport(
        passed=not violations,
        trials=trials,
        violations=tuple(violations),
        min_margin=float(min_margin),
    )
