"""Euclidean Jordan algebra kernels.

Three concrete algebra kinds and their finite direct products:

* ``RealDiagonal(n)`` -- R^n with the componentwise product, rank n.
* ``SymMatrix(n)``    -- n x n real symmetric matrices with
  X o Y = (XY + YX)/2, rank n.
* ``SpinFactor(d)``   -- R x R^{d-1} with the spin product
  (x0, xb) o (y0, yb) = (x0*y0 + xb.yb, x0*yb + y0*xb), rank 2.

Elements are flat coordinate vectors.  For ``SymMatrix`` the coordinates
are the diagonal entries followed by the strict upper triangle scaled by
sqrt(2), so the trace inner product tr(x o y) is the plain dot product of
coordinates.  For ``SpinFactor`` the trace inner product is twice the dot
product (both eigenvalues x0 +/- |xb| contribute).  Products concatenate
factor coordinates.

The module provides the spectral machinery (eigenvalues, Jordan frames,
Peirce projections), the two commutation tests (operator commutation via
L-operator matrices, strong commutation via the inner-product identity
<a,b> = <lambda(a),lambda(b)>), and automorphism sampling for
property-style validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

#: Absolute tolerance used by every predicate, scaled by (1 + operand norms).
DEFAULT_TOL = 1e-9

_SQRT2 = math.sqrt(2.0)


class AlgebraError(ValueError):
    """Invalid algebra construction or mismatched operands."""


class ConvergenceError(RuntimeError):
    """Eigensolver exceeded its iteration cap (numerical pathology)."""


# ---------------------------------------------------------------------------
# Algebra descriptors


@dataclass(frozen=True)
class RealDiagonal:
    """R^n with the componentwise product."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise AlgebraError("RealDiagonal needs n >= 1")

    @property
    def rank(self) -> int:
        return self.n

    @property
    def dim(self) -> int:
        return self.n


@dataclass(frozen=True)
class SymMatrix:
    """n x n real symmetric matrices under the symmetrized product."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise AlgebraError("SymMatrix needs n >= 1")

    @property
    def rank(self) -> int:
        return self.n

    @property
    def dim(self) -> int:
        return self.n * (self.n + 1) // 2


@dataclass(frozen=True)
class SpinFactor:
    """Spin factor of ambient dimension d >= 3; always rank 2 and simple."""

    d: int

    def __post_init__(self):
        if self.d < 3:
            raise AlgebraError("SpinFactor needs d >= 3")

    @property
    def rank(self) -> int:
        return 2

    @property
    def dim(self) -> int:
        return self.d


@dataclass(frozen=True)
class ProductAlgebra:
    """Finite direct product of simple-kind factors."""

    factors: tuple

    def __post_init__(self):
        if len(self.factors) < 2:
            raise AlgebraError("ProductAlgebra needs >= 2 factors (use product_algebra)")
        for f in self.factors:
            if isinstance(f, ProductAlgebra):
                raise AlgebraError("nested products must be flattened (use product_algebra)")

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors)

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors)


def product_algebra(*factors):
    """Build a product descriptor, flattening nested products.

    A product of a single factor is normalized away to the factor itself.
    """
    flat = []
    for f in factors:
        if isinstance(f, ProductAlgebra):
            flat.extend(f.factors)
        else:
            flat.append(f)
    if not flat:
        raise AlgebraError("product of zero factors")
    if len(flat) == 1:
        return flat[0]
    return ProductAlgebra(tuple(flat))


def is_simple(alg) -> bool:
    """True when the algebra is not a nontrivial direct product.

    ``RealDiagonal(n)`` is simple only for n = 1; note however that its
    eigenvalue orbits and automorphism orbits coincide for every n, since
    Aut(R^n) is the full permutation group.
    """
    if isinstance(alg, ProductAlgebra):
        return False
    if isinstance(alg, RealDiagonal):
        return alg.n == 1
    return True


def factor_slices(alg):
    """Coordinate slices of the factors (a single full slice if not a product)."""
    if not isinstance(alg, ProductAlgebra):
        return [slice(0, alg.dim)]
    out = []
    off = 0
    for f in alg.factors:
        out.append(slice(off, off + f.dim))
        off += f.dim
    return out


# ---------------------------------------------------------------------------
# Elements


@dataclass(frozen=True, eq=False)
class Element:
    """A point of the algebra, stored as coordinates in the canonical basis."""

    algebra: object
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.shape != (self.algebra.dim,):
            raise AlgebraError(
                f"coords length {c.shape} does not match algebra dim {self.algebra.dim}"
            )
        if not np.all(np.isfinite(c)):
            raise AlgebraError("non-finite coordinates")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    def __add__(self, other):
        _check_same(self, other)
        return Element(self.algebra, self.coords + other.coords)

    def __sub__(self, other):
        _check_same(self, other)
        return Element(self.algebra, self.coords - other.coords)

    def __neg__(self):
        return Element(self.algebra, -self.coords)

    def __mul__(self, scalar):
        return Element(self.algebra, self.coords * float(scalar))

    __rmul__ = __mul__


def _check_same(x: Element, y: Element):
    if x.algebra != y.algebra:
        raise AlgebraError(f"algebra mismatch: {x.algebra} vs {y.algebra}")


def zero(alg) -> Element:
    return Element(alg, np.zeros(alg.dim))


def unit(alg) -> Element:
    """The unit element e (identity for the Jordan product)."""
    if isinstance(alg, RealDiagonal):
        return Element(alg, np.ones(alg.n))
    if isinstance(alg, SymMatrix):
        c = np.zeros(alg.dim)
        c[: alg.n] = 1.0
        return Element(alg, c)
    if isinstance(alg, SpinFactor):
        c = np.zeros(alg.d)
        c[0] = 1.0
        return Element(alg, c)
    return Element(alg, np.concatenate([unit(f).coords for f in alg.factors]))


def split(x: Element):
    """Factor components of a product element (the element itself otherwise)."""
    if not isinstance(x.algebra, ProductAlgebra):
        return [x]
    return [
        Element(f, x.coords[s])
        for f, s in zip(x.algebra.factors, factor_slices(x.algebra))
    ]


def join(alg, parts) -> Element:
    """Assemble a product element from its factor components."""
    if not isinstance(alg, ProductAlgebra):
        (part,) = parts
        if part.algebra != alg:
            raise AlgebraError("factor/algebra mismatch in join")
        return part
    if len(parts) != len(alg.factors):
        raise AlgebraError("wrong number of factors in join")
    for part, f in zip(parts, alg.factors):
        if part.algebra != f:
            raise AlgebraError("factor/algebra mismatch in join")
    return Element(alg, np.concatenate([p.coords for p in parts]))


# ---------------------------------------------------------------------------
# Symmetric-matrix coordinate maps


@lru_cache(maxsize=None)
def _triu_indices(n):
    iu, ju = np.triu_indices(n, k=1)
    iu.flags.writeable = False
    ju.flags.writeable = False
    return iu, ju


def sym_to_matrix(x: Element) -> np.ndarray:
    """Dense symmetric matrix of a SymMatrix element."""
    alg = x.algebra
    if not isinstance(alg, SymMatrix):
        raise AlgebraError("sym_to_matrix needs a SymMatrix element")
    return _mat_from_sym_coords(alg.n, x.coords)


def sym_from_matrix(alg: SymMatrix, mat) -> Element:
    """SymMatrix element from a dense symmetric matrix."""
    mat = np.asarray(mat, dtype=float)
    if mat.shape != (alg.n, alg.n):
        raise AlgebraError(f"matrix shape {mat.shape} does not match n={alg.n}")
    return Element(alg, _sym_coords_from_mat(alg.n, mat))


def _mat_from_sym_coords(n, coords):
    M = np.zeros((n, n))
    M[np.diag_indices(n)] = coords[:n]
    iu, ju = _triu_indices(n)
    off = coords[n:] / _SQRT2
    M[iu, ju] = off
    M[ju, iu] = off
    return M


def _sym_coords_from_mat(n, M):
    c = np.empty(n * (n + 1) // 2)
    c[:n] = np.diagonal(M)
    iu, ju = _triu_indices(n)
    c[n:] = _SQRT2 * M[iu, ju]
    return c


# ---------------------------------------------------------------------------
# Jordan product, inner product, trace


def _product_coords(alg, u, v):
    if isinstance(alg, RealDiagonal):
        return u * v
    if isinstance(alg, SymMatrix):
        M = _mat_from_sym_coords(alg.n, u)
        N = _mat_from_sym_coords(alg.n, v)
        return _sym_coords_from_mat(alg.n, 0.5 * (M @ N + N @ M))
    if isinstance(alg, SpinFactor):
        out = np.empty(alg.d)
        out[0] = u[0] * v[0] + u[1:] @ v[1:]
        out[1:] = u[0] * v[1:] + v[0] * u[1:]
        return out
    return np.concatenate(
        [_product_coords(f, u[s], v[s]) for f, s in zip(alg.factors, factor_slices(alg))]
    )


def jordan_product(x: Element, y: Element) -> Element:
    """The Jordan product x o y (commutative, non-associative)."""
    _check_same(x, y)
    return Element(x.algebra, _product_coords(x.algebra, x.coords, y.coords))


def _inner_coords(alg, u, v) -> float:
    if isinstance(alg, SpinFactor):
        return 2.0 * float(u @ v)
    if isinstance(alg, ProductAlgebra):
        return sum(
            _inner_coords(f, u[s], v[s]) for f, s in zip(alg.factors, factor_slices(alg))
        )
    return float(u @ v)


def inner(x: Element, y: Element) -> float:
    """Trace inner product <x, y> = tr(x o y)."""
    _check_same(x, y)
    return _inner_coords(x.algebra, x.coords, y.coords)


def norm(x: Element) -> float:
    """Norm induced by the trace inner product."""
    return math.sqrt(max(0.0, inner(x, x)))


def trace(x: Element) -> float:
    """tr(x), the sum of the eigenvalues (a linear functional)."""
    alg = x.algebra
    if isinstance(alg, RealDiagonal):
        return float(np.sum(x.coords))
    if isinstance(alg, SymMatrix):
        return float(np.sum(x.coords[: alg.n]))
    if isinstance(alg, SpinFactor):
        return 2.0 * float(x.coords[0])
    return sum(trace(p) for p in split(x))


# ---------------------------------------------------------------------------
# Eigenvalues and spectral decomposition


def _jacobi_symmetric(mat, want_vectors=True, off_tol=1e-13, max_sweeps=100):
    """Cyclic Jacobi diagonalization of a dense symmetric matrix.

    Sweeps rows in cyclic order until the Frobenius mass of the
    off-diagonal part drops below ``off_tol * ||mat||_F``.  Raises
    :class:`ConvergenceError` after ``max_sweeps`` sweeps.
    Returns eigenvalues sorted non-increasing and, when requested, the
    matching orthonormal eigenvector columns.
    """
    A = np.array(mat, dtype=float)
    n = A.shape[0]
    Q = np.eye(n) if want_vectors else None
    scale = float(np.linalg.norm(A))
    if scale == 0.0 or n == 1:
        vals = np.diagonal(A).copy()
        order = np.argsort(-vals, kind="stable")
        return vals[order], (Q[:, order] if want_vectors else None)
    thr = off_tol * scale
    skip = thr / (n * n)
    for _sweep in range(max_sweeps):
        off_sq = 0.0
        for p in range(n - 1):
            row = A[p, p + 1 :]
            off_sq += 2.0 * float(row @ row)
        if math.sqrt(off_sq) <= thr:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= skip:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp = A[:, p].copy()
                cq = A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                A[p, q] = 0.0
                A[q, p] = 0.0
                if want_vectors:
                    qp = Q[:, p].copy()
                    qq = Q[:, q].copy()
                    Q[:, p] = c * qp - s * qq
                    Q[:, q] = s * qp + c * qq
    else:
        raise ConvergenceError(f"Jacobi sweep cap {max_sweeps} exceeded")
    vals = np.diagonal(A).copy()
    order = np.argsort(-vals, kind="stable")
    if want_vectors:
        return vals[order], Q[:, order]
    return vals[order], None


def _spin_eigvals(coords):
    r = float(np.linalg.norm(coords[1:]))
    x0 = float(coords[0])
    return np.array([x0 + r, x0 - r])


def _eigvals_coords(alg, coords):
    if isinstance(alg, RealDiagonal):
        return -np.sort(-coords)
    if isinstance(alg, SymMatrix):
        vals, _ = _jacobi_symmetric(_mat_from_sym_coords(alg.n, coords), want_vectors=False)
        return vals
    if isinstance(alg, SpinFactor):
        return _spin_eigvals(coords)
    parts = [
        _eigvals_coords(f, coords[s]) for f, s in zip(alg.factors, factor_slices(alg))
    ]
    return -np.sort(-np.concatenate(parts))


def eigenvalues(x: Element) -> np.ndarray:
    """Eigenvalue map: the rank eigenvalues of x, sorted non-increasing."""
    return _eigvals_coords(x.algebra, x.coords)


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Sorted eigenvalues plus a Jordan frame realizing them."""

    eigenvalues: np.ndarray
    frame: tuple

    def __post_init__(self):
        vals = np.asarray(self.eigenvalues, dtype=float).copy()
        vals.flags.writeable = False
        object.__setattr__(self, "eigenvalues", vals)
        object.__setattr__(self, "frame", tuple(self.frame))

    @property
    def algebra(self):
        return self.frame[0].algebra


def _spin_frame_direction(coords):
    xbar = coords[1:]
    r = float(np.linalg.norm(xbar))
    if r <= 1e-14:
        # degenerate spectrum: any unit direction realizes a frame
        v = np.zeros(len(xbar))
        v[0] = 1.0
        return v
    return xbar / r


def spectral_decompose(x: Element) -> SpectralDecomposition:
    """Write x = sum_i lambda_i c_i over a Jordan frame {c_i}.

    Eigenvalues come out sorted non-increasing with the frame aligned to
    them; ties keep the eigensolver's order.  Frames are not unique for
    repeated eigenvalues.
    """
    alg = x.algebra
    if isinstance(alg, RealDiagonal):
        order = np.argsort(-x.coords, kind="stable")
        frame = []
        for i in order:
            c = np.zeros(alg.n)
            c[i] = 1.0
            frame.append(Element(alg, c))
        return SpectralDecomposition(x.coords[order], tuple(frame))
    if isinstance(alg, SymMatrix):
        vals, Q = _jacobi_symmetric(_mat_from_sym_coords(alg.n, x.coords))
        frame = tuple(
            Element(alg, _sym_coords_from_mat(alg.n, np.outer(Q[:, i], Q[:, i])))
            for i in range(alg.n)
        )
        return SpectralDecomposition(vals, frame)
    if isinstance(alg, SpinFactor):
        v = _spin_frame_direction(x.coords)
        cplus = np.concatenate([[0.5], 0.5 * v])
        cminus = np.concatenate([[0.5], -0.5 * v])
        return SpectralDecomposition(
            _spin_eigvals(x.coords),
            (Element(alg, cplus), Element(alg, cminus)),
        )
    # product: decompose factors, merge with a stable sort
    parts = split(x)
    decs = [spectral_decompose(p) for p in parts]
    vals = np.concatenate([d.eigenvalues for d in decs])
    slices = factor_slices(alg)
    members = []
    for fi, d in enumerate(decs):
        for c in d.frame:
            coords = np.zeros(alg.dim)
            coords[slices[fi]] = c.coords
            members.append(Element(alg, coords))
    order = np.argsort(-vals, kind="stable")
    return SpectralDecomposition(vals[order], tuple(members[i] for i in order))


def synthesize_from_frame(frame, coeffs, tol=1e-8, validate=True) -> Element:
    """sum_i coeffs[i] * frame[i]; the eigenvalues are the sorted coeffs."""
    frame = tuple(frame)
    alg = frame[0].algebra
    coeffs = np.asarray(coeffs, dtype=float)
    if len(coeffs) != len(frame):
        raise AlgebraError("coeffs length does not match frame size")
    if len(frame) != alg.rank:
        raise AlgebraError("frame size does not match algebra rank")
    if validate:
        validate_frame(frame, tol=tol)
    out = np.zeros(alg.dim)
    for c, member in zip(coeffs, frame):
        out += c * member.coords
    return Element(alg, out)


def validate_frame(frame, tol=1e-8):
    """Check the Jordan-frame invariants; raise AlgebraError on failure."""
    frame = tuple(frame)
    alg = frame[0].algebra
    e = unit(alg)
    total = np.zeros(alg.dim)
    for i, c in enumerate(frame):
        if c.algebra != alg:
            raise AlgebraError("frame members from different algebras")
        sq = _product_coords(alg, c.coords, c.coords)
        if _inner_coords(alg, sq - c.coords, sq - c.coords) > tol**2:
            raise AlgebraError(f"frame member {i} is not idempotent")
        if abs(trace(c) - 1.0) > tol:
            raise AlgebraError(f"frame member {i} is not primitive (trace != 1)")
        total += c.coords
        for j in range(i):
            pr = _product_coords(alg, c.coords, frame[j].coords)
            if _inner_coords(alg, pr, pr) > tol**2:
                raise AlgebraError(f"frame members {j},{i} are not orthogonal")
    if np.max(np.abs(total - e.coords)) > tol:
        raise AlgebraError("frame members do not sum to the unit")


# ---------------------------------------------------------------------------
# L-operator, Peirce decomposition, commutation tests


def l_operator(x: Element) -> np.ndarray:
    """Matrix of L_x : y -> x o y in the canonical coordinates (symmetric)."""
    alg = x.algebra
    d = alg.dim
    L = np.empty((d, d))
    probe = np.zeros(d)
    for i in range(d):
        probe[i] = 1.0
        L[:, i] = _product_coords(alg, x.coords, probe)
        probe[i] = 0.0
    return L


def peirce_project(p: Element, x: Element, tol=1e-8):
    """Peirce projections of x for the idempotent p.

    Returns (x1, x0, xhalf), the components in the eigenspaces of L_p for
    eigenvalues 1, 0, 1/2.  Uses the exact polynomial projections
    2t^2 - t, 1 - 3t + 2t^2, 4t - 4t^2 evaluated on L_p, so no eigensolve
    is involved.
    """
    _check_same(p, x)
    alg = p.algebra
    psq = _product_coords(alg, p.coords, p.coords)
    if math.sqrt(_inner_coords(alg, psq - p.coords, psq - p.coords)) > tol * (
        1.0 + _inner_coords(alg, p.coords, p.coords)
    ):
        raise AlgebraError("p is not an idempotent within tolerance")
    px = _product_coords(alg, p.coords, x.coords)
    ppx = _product_coords(alg, p.coords, px)
    x1 = 2.0 * ppx - px
    xh = 4.0 * (px - ppx)
    x0 = x.coords - x1 - xh
    return Element(alg, x1), Element(alg, x0), Element(alg, xh)


def operator_commutation_residual(a: Element, b: Element) -> float:
    """Frobenius norm of the commutator [L_a, L_b]."""
    _check_same(a, b)
    La = l_operator(a)
    Lb = l_operator(b)
    return float(np.linalg.norm(La @ Lb - Lb @ La))


def operator_commute(a: Element, b: Element, tol=DEFAULT_TOL) -> bool:
    """L_a L_b = L_b L_a, i.e. a and b share some Jordan frame."""
    res = operator_commutation_residual(a, b)
    return res <= tol * (1.0 + norm(a)) * (1.0 + norm(b))


def strong_commutation_gap(a: Element, b: Element) -> float:
    """|<a,b> - <lambda(a), lambda(b)>| (zero iff strong operator commutation)."""
    _check_same(a, b)
    return abs(inner(a, b) - float(eigenvalues(a) @ eigenvalues(b)))


def strongly_operator_commute(a: Element, b: Element, tol=DEFAULT_TOL) -> bool:
    """a, b share a frame with both eigenvalue lists in sorted order.

    Uses the frame-free characterization <a,b> = <lambda(a), lambda(b)>,
    which is robust to repeated eigenvalues.
    """
    gap = strong_commutation_gap(a, b)
    return gap <= tol * (1.0 + norm(a) * norm(b))


def derivation_commute_sym(a: Element, b: Element, tol=DEFAULT_TOL) -> bool:
    """Derivation-space commutation test, symmetric matrices only.

    Der(S^n) consists of commutators with skew-symmetric matrices, so
    <Da, b> = 0 for every derivation D iff the plain matrix commutator
    AB - BA vanishes.  Cross-check for :func:`operator_commute`.
    """
    _check_same(a, b)
    if not isinstance(a.algebra, SymMatrix):
        raise AlgebraError("derivation-space test is implemented for SymMatrix only")
    A = sym_to_matrix(a)
    B = sym_to_matrix(b)
    res = float(np.linalg.norm(A @ B - B @ A))
    return res <= tol * (1.0 + norm(a)) * (1.0 + norm(b))


# ---------------------------------------------------------------------------
# Automorphisms and sampling


@dataclass(frozen=True, eq=False)
class Automorphism:
    """An invertible linear map preserving the Jordan product.

    ``data`` is kind-specific: a permutation of coordinates for
    RealDiagonal, an orthogonal matrix Q acting by x -> QxQ^T for
    SymMatrix, an orthogonal matrix acting on the vector part for
    SpinFactor, and for products a tuple of per-slot factor automorphisms
    together with a source permutation of isomorphic factors.
    """

    algebra: object
    data: object


def identity_automorphism(alg) -> Automorphism:
    if isinstance(alg, RealDiagonal):
        return Automorphism(alg, np.arange(alg.n))
    if isinstance(alg, SymMatrix):
        return Automorphism(alg, np.eye(alg.n))
    if isinstance(alg, SpinFactor):
        return Automorphism(alg, np.eye(alg.d - 1))
    return Automorphism(
        alg,
        (tuple(identity_automorphism(f) for f in alg.factors), tuple(range(len(alg.factors)))),
    )


def apply_automorphism(auto: Automorphism, x: Element) -> Element:
    if auto.algebra != x.algebra:
        raise AlgebraError("automorphism/element algebra mismatch")
    alg = x.algebra
    if isinstance(alg, RealDiagonal):
        return Element(alg, x.coords[auto.data])
    if isinstance(alg, SymMatrix):
        Q = auto.data
        M = _mat_from_sym_coords(alg.n, x.coords)
        return Element(alg, _sym_coords_from_mat(alg.n, Q @ M @ Q.T))
    if isinstance(alg, SpinFactor):
        out = np.empty(alg.d)
        out[0] = x.coords[0]
        out[1:] = auto.data @ x.coords[1:]
        return Element(alg, out)
    factor_autos, src = auto.data
    parts = split(x)
    return join(alg, [apply_automorphism(factor_autos[i], parts[src[i]]) for i in range(len(parts))])


def _haar_orthogonal(n, rng) -> np.ndarray:
    M = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(M)
    return Q * np.sign(np.diagonal(R))


def random_element(alg, rng) -> Element:
    """Element with i.i.d. standard normal coordinates."""
    return Element(alg, rng.standard_normal(alg.dim))


def random_automorphism(alg, rng) -> Automorphism:
    """Sample an automorphism: Haar orthogonal factors, and for products a
    uniformly random permutation of factors with identical descriptors."""
    if isinstance(alg, RealDiagonal):
        return Automorphism(alg, rng.permutation(alg.n))
    if isinstance(alg, SymMatrix):
        return Automorphism(alg, _haar_orthogonal(alg.n, rng))
    if isinstance(alg, SpinFactor):
        return Automorphism(alg, _haar_orthogonal(alg.d - 1, rng))
    m = len(alg.factors)
    src = np.arange(m)
    groups = {}
    for i, f in enumerate(alg.factors):
        groups.setdefault(f, []).append(i)
    for idxs in groups.values():
        perm = rng.permutation(len(idxs))
        idxs = np.array(idxs)
        src[idxs] = idxs[perm]
    autos = tuple(random_automorphism(f, rng) for f in alg.factors)
    return Automorphism(alg, (autos, tuple(int(i) for i in src)))


# ---------------------------------------------------------------------------
# Serialization (JSON-compatible dicts)


def algebra_to_dict(alg) -> dict:
    if isinstance(alg, RealDiagonal):
        return {"kind": "diag", "n": alg.n}
    if isinstance(alg, SymMatrix):
        return {"kind": "sym", "n": alg.n}
    if isinstance(alg, SpinFactor):
        return {"kind": "spin", "d": alg.d}
    return {"kind": "product", "factors": [algebra_to_dict(f) for f in alg.factors]}


def algebra_from_dict(d) -> object:
    try:
        kind = d["kind"]
        if kind == "diag":
            return RealDiagonal(int(d["n"]))
        if kind == "sym":
            return SymMatrix(int(d["n"]))
        if kind == "spin":
            return SpinFactor(int(d["d"]))
        if kind == "product":
            return product_algebra(*(algebra_from_dict(f) for f in d["factors"]))
    except (KeyError, TypeError) as exc:
        raise AlgebraError(f"malformed algebra document: {d!r}") from exc
    raise AlgebraError(f"unknown algebra kind {kind!r}")


def element_to_dict(x: Element) -> dict:
    return {"algebra": algebra_to_dict(x.algebra), "coords": [float(v) for v in x.coords]}


def element_from_dict(d, algebra=None) -> Element:
    """Load an element; symmetric matrices may be given as full square arrays.

    A full matrix is symmetrized with (M + M^T)/2; asymmetry beyond 1e-8
    (relative to the matrix norm) is an error.
    """
    if algebra is None:
        algebra = algebra_from_dict(d["algebra"])
    if "matrix" in d:
        if not isinstance(algebra, SymMatrix):
            raise AlgebraError("'matrix' form is only valid for SymMatrix algebras")
        M = np.asarray(d["matrix"], dtype=float)
        if M.shape != (algebra.n, algebra.n):
            raise AlgebraError(f"matrix shape {M.shape} does not match n={algebra.n}")
        asym = np.linalg.norm(M - M.T)
        if asym > 1e-8 * (1.0 + np.linalg.norm(M)):
            raise AlgebraError(f"matrix asymmetry {asym:.3e} beyond tolerance")
        return sym_from_matrix(algebra, 0.5 * (M + M.T))
    if "coords" not in d:
        raise AlgebraError("element document needs 'coords' or 'matrix'")
    return Element(algebra, np.asarray(d["coords"], dtype=float))
