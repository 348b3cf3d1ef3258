"""Finite Jacobi matrices: construction, spectra, first-kind polynomials,
truncated blocks and the finite-dimensional cyclicity test.

Indices in the public API are 1-based, following the usual convention for
Jacobi matrices (``e_1`` is the first canonical vector, ``J_n^-`` is the
leading ``(n-1) x (n-1)`` block, ``J_n^+`` starts at row ``n+1``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy.linalg import LinAlgError, eigh_tridiagonal
from scipy.linalg.lapack import zgtsv

from .config import DEFAULT, ToleranceConfig
from .errors import (
    ConvergenceFailure,
    IndexOutOfRange,
    LengthMismatch,
    NonPositiveOffDiagonal,
    PoleEvaluation,
)


def _frozen(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class JacobiMatrix:
    """Real symmetric tridiagonal matrix with strictly positive off-diagonal.

    ``q`` holds the diagonal ``q_1..q_N`` and ``b`` the off-diagonal
    ``b_1..b_{N-1}``.
    """

    q: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        q = _frozen(self.q)
        b = _frozen(self.b)
        if q.size < 1:
            raise LengthMismatch("a Jacobi matrix needs at least one diagonal entry")
        if b.size != q.size - 1:
            raise LengthMismatch(f"len(b) must be len(q) - 1, got {b.size} and {q.size}")
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(b))):
            raise ValueError("entries must be finite")
        if np.any(b <= 0):
            k = int(np.argmax(b <= 0)) + 1
            raise NonPositiveOffDiagonal(f"b_{k} = {float(b[k - 1])!r} is not > 0")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "b", b)

    @property
    def N(self) -> int:
        return self.q.size

    def dense(self) -> np.ndarray:
        return np.diag(self.q) + np.diag(self.b, 1) + np.diag(self.b, -1)

    def norm(self) -> float:
        """Cheap upper bound for the 2-norm (max absolute row sum)."""
        rows = np.abs(self.q).copy()
        rows[:-1] += self.b
        rows[1:] += self.b
        return float(rows.max())

    def reversed(self) -> "JacobiMatrix":
        """The same operator in the reversed basis ``e_N, ..., e_1``."""
        return JacobiMatrix(self.q[::-1], self.b[::-1])

    def __eq__(self, other):
        if not isinstance(other, JacobiMatrix):
            return NotImplemented
        return np.array_equal(self.q, other.q) and np.array_equal(self.b, other.b)

    def __hash__(self):
        return hash((self.q.tobytes(), self.b.tobytes()))

    def __repr__(self):
        return f"JacobiMatrix(q={self.q.tolist()}, b={self.b.tolist()})"


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Eigenvalues in increasing order; ``vectors[i]`` pairs with ``values[i]``."""

    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        vectors = np.array(self.vectors, dtype=float).reshape(values.size, values.size)
        vectors.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "vectors", vectors)

    def __eq__(self, other):
        if not isinstance(other, EigenSystem):
            return NotImplemented
        return np.array_equal(self.values, other.values) and np.array_equal(
            self.vectors, other.vectors
        )


def build_jacobi(q: Sequence[float], b: Sequence[float]) -> JacobiMatrix:
    return JacobiMatrix(q, b)


def apply(J: JacobiMatrix, f) -> np.ndarray:
    """Apply the difference expression to a finite sequence ``f``.

    Row 1 is ``q_1 f_1 + b_1 f_2``; the last row drops the missing
    ``b_N f_{N+1}`` term.
    """
    f = np.asarray(f)
    if f.shape[0] != J.N:
        raise LengthMismatch(f"vector has length {f.shape[0]}, matrix is {J.N}x{J.N}")
    out = J.q.reshape((-1,) + (1,) * (f.ndim - 1)) * f
    if J.N > 1:
        b = J.b.reshape((-1,) + (1,) * (f.ndim - 1))
        out = out.astype(np.result_type(out, f), copy=True)
        out[:-1] += b * f[1:]
        out[1:] += b * f[:-1]
    return out


def spectral_scale(values) -> float:
    """Spectral radius used to make ``tol_match`` scale-free (1 for the zero spectrum)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 1.0
    r = float(np.max(np.abs(values)))
    return r if r > 0 else 1.0


def _fix_signs(vectors: np.ndarray, tol: float) -> np.ndarray:
    # columns in, columns out; first entry above tol made positive
    for i in range(vectors.shape[1]):
        col = vectors[:, i]
        big = np.flatnonzero(np.abs(col) > tol)
        k = big[0] if big.size else int(np.argmax(np.abs(col)))
        if col[k] < 0:
            vectors[:, i] = -col
    return vectors


def eigensystem(J: JacobiMatrix, config: ToleranceConfig = DEFAULT) -> EigenSystem:
    """Full eigendecomposition using the symmetric tridiagonal LAPACK drivers."""
    if J.N == 1:
        return EigenSystem(J.q.copy(), np.ones((1, 1)))
    try:
        values, vecs = eigh_tridiagonal(J.q, J.b, lapack_driver="stemr")
    except LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    order = np.argsort(values, kind="stable")
    values, vecs = values[order], vecs[:, order]
    vecs = _fix_signs(np.array(vecs), config.tol_eig)
    resid = np.abs(J.dense() @ vecs - vecs * values).max()
    if resid > config.tol_eig * max(J.norm(), 1.0) * J.N:
        raise ConvergenceFailure(f"eigenpair residual {resid:.3e} above tolerance")
    return EigenSystem(values, vecs.T)


def eigenvalues(J: JacobiMatrix) -> np.ndarray:
    if J.N == 1:
        return J.q.copy()
    try:
        return np.sort(eigh_tridiagonal(J.q, J.b, eigvals_only=True))
    except LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


# --- independent oracle -----------------------------------------------------


def sturm_count(q, b, x: float) -> int:
    """Number of eigenvalues strictly below ``x`` (LDL^T pivot signs)."""
    q = np.asarray(q, dtype=float)
    b = np.asarray(b, dtype=float)
    count = 0
    d = q[0] - x
    tiny = np.sqrt(np.finfo(float).tiny)  # keeps b^2 / d finite
    for k in range(q.size):
        if k > 0:
            if d == 0.0:
                d = tiny
            d = (q[k] - x) - b[k - 1] ** 2 / d
        if d < 0:
            count += 1
    return count


def bisection_eigenvalues(J: JacobiMatrix, tol: float = 1e-14, max_iter: int = 200) -> np.ndarray:
    """Eigenvalues by Sturm-count bisection on Gershgorin brackets.

    Slow and simple on purpose; used as a reference for :func:`eigensystem`.
    """
    radius = J.norm()
    lo0, hi0 = -radius - 1.0, radius + 1.0
    out = np.empty(J.N)
    for i in range(J.N):
        lo, hi = lo0, hi0
        for _ in range(max_iter):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi) or hi - lo <= tol * max(1.0, abs(mid)):
                break
            if sturm_count(J.q, J.b, mid) > i:
                hi = mid
            else:
                lo = mid
        out[i] = 0.5 * (lo + hi)
    return out


# --- first-kind polynomials -----------------------------------------------------


def first_kind_polys(J: JacobiMatrix, z: complex, n: int) -> np.ndarray:
    """``(pi_1(z), ..., pi_n(z))`` from the three-term recurrence with ``pi_1 = 1``."""
    if not 1 <= n <= J.N:
        raise IndexOutOfRange(f"n={n} outside 1..{J.N}")
    out = np.empty(n, dtype=complex)
    out[0] = 1.0
    if n > 1:
        out[1] = (z - J.q[0]) / J.b[0]
    for k in range(2, n):
        # pi_{k+1} = ((z - q_k) pi_k - b_{k-1} pi_{k-1}) / b_k, here 0-based
        out[k] = ((z - J.q[k - 1]) * out[k - 1] - J.b[k - 2] * out[k - 2]) / J.b[k - 1]
    return out


def first_kind_values(J: JacobiMatrix, t, n: int) -> np.ndarray:
    """``pi_n`` evaluated at an array of real points."""
    if not 1 <= n <= J.N:
        raise IndexOutOfRange(f"n={n} outside 1..{J.N}")
    t = np.asarray(t, dtype=float)
    prev, cur = np.zeros_like(t), np.ones_like(t)
    for k in range(1, n):
        bprev = J.b[k - 2] if k >= 2 else 0.0
        prev, cur = cur, ((t - J.q[k - 1]) * cur - bprev * prev) / J.b[k - 1]
    return cur


def first_kind_poly(J: JacobiMatrix, n: int) -> Polynomial:
    """``pi_n`` as a coefficient polynomial (ascending powers)."""
    if not 1 <= n <= J.N:
        raise IndexOutOfRange(f"n={n} outside 1..{J.N}")
    t = Polynomial([0.0, 1.0])
    prev, cur = Polynomial([0.0]), Polynomial([1.0])
    for k in range(1, n):
        bprev = J.b[k - 2] if k >= 2 else 0.0
        prev, cur = cur, ((t - J.q[k - 1]) * cur - bprev * prev) / J.b[k - 1]
    return cur


def first_kind_vectors(J: JacobiMatrix, u=None) -> np.ndarray:
    """Columns ``pi_1(J)u, ..., pi_N(J)u`` (``u = e_1`` by default).

    With ``u = e_1`` the result is the identity in exact arithmetic.
    """
    N = J.N
    if u is None:
        u = np.zeros(N)
        u[0] = 1.0
    u = np.asarray(u, dtype=float)
    out = np.empty((N, N))
    out[:, 0] = u
    for k in range(1, N):
        nxt = apply(J, out[:, k - 1]) - J.q[k - 1] * out[:, k - 1]
        if k >= 2:
            nxt -= J.b[k - 2] * out[:, k - 2]
        out[:, k] = nxt / J.b[k - 1]
    return out


# --- truncations -----------------------------------------------------


def truncate_minus(J: JacobiMatrix, n: int) -> JacobiMatrix:
    """Leading ``(n-1) x (n-1)`` block ``J_n^-`` (requires ``2 <= n <= N``)."""
    if not 2 <= n <= J.N:
        raise IndexOutOfRange(f"J_n^- needs 2 <= n <= {J.N}, got {n}")
    return JacobiMatrix(J.q[: n - 1], J.b[: n - 2])


def truncate_plus(J: JacobiMatrix, n: int) -> JacobiMatrix:
    """Trailing block ``J_n^+`` on rows ``n+1..N`` (requires ``1 <= n < N``)."""
    if not 1 <= n < J.N:
        raise IndexOutOfRange(f"J_n^+ needs 1 <= n < {J.N}, got {n}")
    return JacobiMatrix(J.q[n:], J.b[n:])


def poly_zeros(J: JacobiMatrix, n: int, config: ToleranceConfig = DEFAULT) -> np.ndarray:
    """Zeros of ``pi_n``, computed as the spectrum of ``J_n^-``."""
    return eigensystem(truncate_minus(J, n), config).values


def first_kind_zeros_bisection(J: JacobiMatrix, n: int, tol: float = 1e-14,
                               max_iter: int = 200) -> np.ndarray:
    """Zeros of ``pi_n`` by bisection on sign changes of ``pi_1..pi_n``.

    Reference implementation: the number of sign changes in the sequence
    ``pi_1(x), ..., pi_n(x)`` equals the number of zeros of ``pi_n`` above ``x``.
    All ``n - 1`` zeros are bracketed at once.
    """
    if not 2 <= n <= J.N:
        raise IndexOutOfRange(f"n={n} outside 2..{J.N}")

    def below(x):
        # recurrence on the whole bracket vector, counting sign changes on the fly;
        # a zero entry takes the sign opposite to its predecessor
        prev, cur = np.zeros_like(x), np.ones_like(x)
        sign = np.ones_like(x)
        changes = np.zeros(x.shape, dtype=int)
        for k in range(1, n):
            bprev = J.b[k - 2] if k >= 2 else 0.0
            prev, cur = cur, ((x - J.q[k - 1]) * cur - bprev * prev) / J.b[k - 1]
            s = np.sign(cur)
            s[s == 0] = -sign[s == 0]
            changes += s != sign
            sign = s
        return (n - 1) - changes

    radius = J.norm() + 1.0
    idx = np.arange(n - 1)
    lo = np.full(n - 1, -radius)
    hi = np.full(n - 1, radius)
    for _ in range(max_iter):
        if np.all(hi - lo <= tol * np.maximum(1.0, np.maximum(np.abs(lo), np.abs(hi)))):
            break
        mid = 0.5 * (lo + hi)
        right = below(mid) > idx
        hi = np.where(right, mid, hi)
        lo = np.where(right, lo, mid)
    return 0.5 * (lo + hi)


# --- resolvent -----------------------------------------------------


def resolvent_entry(J: JacobiMatrix, k: int, z, spectrum=None,
                    config: ToleranceConfig = DEFAULT):
    """``<e_k, (J - z)^{-1} e_k>`` by a pivoted tridiagonal solve.

    ``z`` may be a scalar or an array.  Points within ``tol_match`` (relative to
    the spectral radius) of the spectrum raise :class:`PoleEvaluation`.
    """
    if not 1 <= k <= J.N:
        raise IndexOutOfRange(f"k={k} outside 1..{J.N}")
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    near_axis = np.abs(zs.imag) <= config.tol_match * max(J.norm(), 1.0)
    if np.any(near_axis):
        lam = eigenvalues(J) if spectrum is None else np.asarray(spectrum)
        scale = spectral_scale(lam)
        dist = np.abs(zs[near_axis, None] - lam[None, :]).min(axis=1)
        if np.any(dist <= config.tol_match * scale):
            bad = zs[near_axis][np.argmin(dist)]
            raise PoleEvaluation(f"z={bad} lies on the spectrum")
    if J.N == 1:
        diff = J.q[0] - zs
        if np.any(diff == 0):
            raise PoleEvaluation("singular 1x1 system")
        out = 1.0 / diff
        return out[0] if np.ndim(z) == 0 else out.reshape(np.shape(z))
    out = np.empty(zs.shape, dtype=complex)
    dl = J.b.astype(complex)
    rhs = np.zeros((J.N, 1), dtype=complex)
    rhs[k - 1, 0] = 1.0
    for i, zi in enumerate(zs):
        _, _, _, x, info = zgtsv(dl, J.q - zi, dl, rhs)
        if info != 0:
            raise PoleEvaluation(f"singular system at z={zi}")
        out[i] = x[k - 1, 0]
    return out[0] if np.ndim(z) == 0 else out.reshape(np.shape(z))


# --- cyclicity -----------------------------------------------------


@dataclass(frozen=True)
class CyclicResult:
    cyclic: bool
    krylov_rank: int


def as_polynomial(r) -> Polynomial:
    """Accept a numpy ``Polynomial`` or ascending coefficients; trim trailing zeros."""
    p = r if isinstance(r, Polynomial) else Polynomial(np.asarray(r, dtype=float))
    return p.trim()


def poly_apply(J: JacobiMatrix, r, v) -> np.ndarray:
    """``r(J) v`` by Horner's scheme on matrix-vector products."""
    coef = as_polynomial(r).coef
    out = np.zeros(J.N) + coef[-1] * np.asarray(v, dtype=float)
    for c in coef[-2::-1]:
        out = apply(J, out) + c * v
    return out


def cyclic_test(J: JacobiMatrix, r, config: ToleranceConfig = DEFAULT) -> CyclicResult:
    """Whether ``u = r(J) e_1`` is cyclic for ``J``.

    The Krylov space of ``u`` is spanned in the basis ``pi_1(J)u, ...,
    pi_N(J)u``, a triangular recombination of ``u, Ju, ..., J^{N-1}u`` with the
    same span but far better conditioning than raw powers.  Rank is counted
    with singular values above ``tol_rank * s_max``.
    """
    r = as_polynomial(r)
    if not np.any(r.coef):
        raise ValueError("r must not be the zero polynomial")
    e1 = np.zeros(J.N)
    e1[0] = 1.0
    u = poly_apply(J, r, e1)
    K = first_kind_vectors(J, u)
    s = np.linalg.svd(K, compute_uv=False)
    # r(J) vanishing on the whole spectrum leaves only roundoff in u; measure it
    # against the a-priori size of r(J) so noise is not mistaken for a full basis
    bound = np.polynomial.polynomial.polyval(J.norm(), np.abs(r.coef))
    if s[0] <= config.tol_rank * bound:
        return CyclicResult(False, 0)
    rank = int(np.count_nonzero(s > config.tol_rank * s[0]))
    return CyclicResult(rank == J.N, rank)


def zero_on_spectrum(J: JacobiMatrix, r, config: ToleranceConfig = DEFAULT) -> bool:
    """Predicate side of the cyclicity criterion: a root of ``r`` sits on ``sigma(J)``."""
    r = as_polynomial(r)
    if r.degree() < 1:
        return False
    lam = eigenvalues(J)
    scale = spectral_scale(lam)
    roots = r.roots()
    dist = np.abs(roots[:, None] - lam[None, :]) / scale
    return bool(np.any(dist <= config.tol_match))


# --- set helpers -----------------------------------------------------


def match_intersection(a, b, tol: float) -> np.ndarray:
    """Points of ``a`` having a partner in ``b`` within ``tol``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        return np.empty(0)
    keep = np.abs(a[:, None] - b[None, :]).min(axis=1) <= tol
    return a[keep]


def hausdorff(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 and b.size == 0:
        return 0.0
    if a.size == 0 or b.size == 0:
        return float("inf")
    d = np.abs(a[:, None] - b[None, :])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))
