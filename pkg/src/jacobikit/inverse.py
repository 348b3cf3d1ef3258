"""Interior perturbations ``J -> J~(n)`` and the two-spectra inverse problem.

``J~(n)`` rescales the n-th row and column: ``b_{n-1} -> theta b_{n-1}``,
``q_n -> theta^2 (q_n + h)``, ``b_n -> theta b_n``.  In a mass-spring chain
this changes one mass and the springs attached to it.

Given the spectra ``S`` of ``J`` and ``S~`` of ``J~(n)`` plus
``gamma = theta^2 h / (1 - theta^2)``, the n-th Green function is fixed:

    G(z, n) = (M(z) - theta^2) / ((1 - theta^2) (gamma - z)),
    M(z)    = prod(s~ - z) / prod(s - z),   theta^2 = M(gamma).

The ratio ``M`` equals ``det(J~ - z) / det(J - z)``; a Schur complement on
row ``n`` turns that into ``G(z,n) / G~(z,n)``, which gives the formula.
Every matrix with that Green function at site ``n`` and spectrum ``S`` is a
solution; they are produced by :func:`jacobikit.green.green_to_jacobi`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT, ToleranceConfig
from .errors import (
    DegenerateSplit,
    IndexOutOfRange,
    InvalidData,
    JacobiError,
    NonPositiveTheta,
    NoSolution,
    PoleEvaluation,
    ThetaOne,
    UnsupportedCase,
)
from .green import green_to_jacobi, interior_selections, neg_inverse
from .measures import DiscreteMeasure
from .tridiag import JacobiMatrix, eigenvalues, hausdorff, spectral_scale


@dataclass(frozen=True)
class PerturbationParams:
    n: int
    theta: float
    h: float = 0.0

    def __post_init__(self):
        if not self.theta > 0:
            raise NonPositiveTheta(f"theta must be > 0, got {self.theta!r}")
        if self.n < 1:
            raise IndexOutOfRange(f"site n must be >= 1, got {self.n}")


def build_perturbed(J: JacobiMatrix, p: PerturbationParams) -> JacobiMatrix:
    """``J~(n)``; for ``n = 1`` there is no ``b_0`` and the change has rank two."""
    if not 1 <= p.n <= J.N:
        raise IndexOutOfRange(f"site n={p.n} outside 1..{J.N}")
    q = J.q.copy()
    b = J.b.copy()
    k = p.n - 1
    q[k] = p.theta**2 * (q[k] + p.h)
    if k >= 1:
        b[k - 1] *= p.theta
    if k < J.N - 1:
        b[k] *= p.theta
    return JacobiMatrix(q, b)


def gamma_of(theta: float, h: float) -> float:
    denom = 1.0 - theta**2
    if abs(denom) <= 1e-12:
        raise ThetaOne("gamma is undefined for theta = 1")
    return theta**2 * h / denom


def h_from(theta: float, gamma: float) -> float:
    return gamma * (1.0 - theta**2) / theta**2


# --- the spectral ratio -----------------------------------------------------


@dataclass(frozen=True)
class _Reduced:
    """``S`` and ``S~`` with common points removed, plus partial fractions of M."""

    poles: np.ndarray  # S minus common points
    zeros: np.ndarray  # S~ minus common points
    common: np.ndarray
    coeffs: np.ndarray  # M(z) = 1 + sum coeffs_k / (poles_k - z)
    scale: float


def _as_spectrum(values, name) -> np.ndarray:
    arr = np.asarray(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise InvalidData(f"{name} must be finite")
    if np.any(np.diff(arr) <= 0):
        raise InvalidData(f"{name} must be strictly increasing")
    return arr


def _reduce(S, S_tilde, config: ToleranceConfig) -> _Reduced:
    S = _as_spectrum(S, "S")
    St = _as_spectrum(S_tilde, "S_tilde")
    if S.size != St.size:
        raise InvalidData(f"|S|={S.size} differs from |S~|={St.size}")
    scale = max(spectral_scale(S), spectral_scale(St))
    tol = config.tol_match * scale
    keep_s = np.ones(S.size, dtype=bool)
    keep_t = np.ones(St.size, dtype=bool)
    i = j = 0
    while i < S.size and j < St.size:
        if abs(S[i] - St[j]) <= tol:
            keep_s[i] = keep_t[j] = False
            i += 1
            j += 1
        elif S[i] < St[j]:
            i += 1
        else:
            j += 1
    poles, zeros = S[keep_s], St[keep_t]
    coeffs = np.empty(poles.size)
    for k, lam in enumerate(poles):
        others = np.delete(poles, k)
        coeffs[k] = np.prod(zeros - lam) / np.prod(others - lam)
    return _Reduced(poles, zeros, S[~keep_s], coeffs, scale)


def _check_off(red: _Reduced, zs: np.ndarray, config: ToleranceConfig, what="z"):
    if red.poles.size == 0:
        return
    dist = np.abs(zs[:, None] - red.poles[None, :]).min(axis=1)
    if np.any(dist <= config.tol_match * red.scale):
        raise PoleEvaluation(f"{what}={zs[np.argmin(dist)]} is a pole of the spectral ratio")


def m_frak(S, S_tilde, z, config: ToleranceConfig = DEFAULT):
    """Spectral ratio ``prod(s~ - z) / prod(s - z)`` after cancelling common points."""
    red = _reduce(S, S_tilde, config)
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_off(red, zs, config)
    num = np.prod(red.zeros[None, :] - zs[:, None], axis=1)
    den = np.prod(red.poles[None, :] - zs[:, None], axis=1)
    out = num / den
    return out[0] if np.ndim(z) == 0 else out.reshape(np.shape(z))


def _theta_sq(red: _Reduced, gamma: float, config: ToleranceConfig) -> float:
    try:
        _check_off(red, np.array([gamma], dtype=complex), config, "gamma")
    except PoleEvaluation as exc:
        raise UnsupportedCase(f"gamma lies in S but not in S~: {exc}") from None
    m = 1.0 + float(np.sum(red.coeffs / (red.poles - gamma)))
    if m <= 0:
        raise InvalidData(f"M(gamma) = {m!r} <= 0 admits no theta")
    if abs(m - 1.0) <= 1e-12:
        raise ThetaOne("M(gamma) = 1 forces theta = 1")
    return m


def recover_theta(S, S_tilde, gamma: float, config: ToleranceConfig = DEFAULT) -> float:
    """``theta = sqrt(M(gamma))``: G is finite at gamma, so the numerator must vanish there."""
    return math.sqrt(_theta_sq(_reduce(S, S_tilde, config), gamma, config))


def green_from_spectra(S, S_tilde, gamma: float, z, config: ToleranceConfig = DEFAULT):
    """Green function at the perturbation site shared by every solution.

    Written through the partial fractions of M, the difference quotient
    ``(M(z) - M(gamma)) / (gamma - z)`` is ``-sum c_k / ((s_k - z)(s_k - gamma))``,
    which is exact at ``z = gamma`` and free of cancellation near it.
    """
    red = _reduce(S, S_tilde, config)
    th2 = _theta_sq(red, gamma, config)
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_off(red, zs, config)
    terms = red.coeffs[None, :] / ((red.poles[None, :] - zs[:, None]) * (red.poles[None, :] - gamma))
    out = -terms.sum(axis=1) / (1.0 - th2)
    return out[0] if np.ndim(z) == 0 else out.reshape(np.shape(z))


def green_measure_from_spectra(S, S_tilde, gamma: float, config: ToleranceConfig = DEFAULT):
    """Discrete measure of ``G(., n)`` and the common points of ``S`` and ``S~``.

    Common points are eigenvalues shared by both truncated blocks; the Green
    function does not see them.
    """
    red = _reduce(S, S_tilde, config)
    th2 = _theta_sq(red, gamma, config)
    w = -red.coeffs / ((red.poles - gamma) * (1.0 - th2))
    if red.poles.size == 0:
        raise NoSolution("S and S~ coincide: the Green function carries no information")
    if np.any(w <= 0):
        raise NoSolution("Green function residues are not all positive: inconsistent (S, S~, gamma)")
    return DiscreteMeasure(red.poles, w / w.sum()), red.common


# --- the inverse problem -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class InverseProblem:
    S: np.ndarray
    S_tilde: np.ndarray
    n: int
    gamma: float

    def __post_init__(self):
        S = _as_spectrum(self.S, "S")
        St = _as_spectrum(self.S_tilde, "S_tilde")
        if S.size != St.size:
            raise InvalidData(f"|S|={S.size} differs from |S~|={St.size}")
        if not 2 <= int(self.n) <= S.size:
            raise IndexOutOfRange(f"site n={self.n} outside 2..{S.size}")
        S.flags.writeable = False
        St.flags.writeable = False
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "S_tilde", St)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "gamma", float(self.gamma))

    def at_site(self, n: int) -> "InverseProblem":
        return InverseProblem(self.S, self.S_tilde, n, self.gamma)

    def __eq__(self, other):
        if not isinstance(other, InverseProblem):
            return NotImplemented
        return (
            np.array_equal(self.S, other.S)
            and np.array_equal(self.S_tilde, other.S_tilde)
            and self.n == other.n
            and self.gamma == other.gamma
        )


def forward_problem(J: JacobiMatrix, p: PerturbationParams) -> InverseProblem:
    """Spectral data generated by a known ``(J, theta, h)``."""
    return InverseProblem(
        eigenvalues(J), eigenvalues(build_perturbed(J, p)), p.n, gamma_of(p.theta, p.h)
    )


@dataclass(frozen=True)
class VerificationReport:
    spec_err: float
    spec_tilde_err: float
    gamma_err: float
    accepted: bool


@dataclass(frozen=True)
class InverseSolution:
    J: JacobiMatrix
    theta: float
    h: float
    interior_selection: tuple[int, ...]
    report: VerificationReport


def verify_solution(J: JacobiMatrix, theta: float, h: float, n: int, prob: InverseProblem,
                    config: ToleranceConfig = DEFAULT) -> VerificationReport:
    """Hausdorff distances of both spectra and the gamma mismatch; accepted iff all <= tol_accept."""
    gamma_err = abs(gamma_of(theta, h) - prob.gamma)
    if J.N != prob.S.size:
        return VerificationReport(math.inf, math.inf, gamma_err, False)
    spec_err = hausdorff(eigenvalues(J), prob.S)
    Jt = build_perturbed(J, PerturbationParams(n, theta, h))
    spec_tilde_err = hausdorff(eigenvalues(Jt), prob.S_tilde)
    ok = max(spec_err, spec_tilde_err, gamma_err) <= config.tol_accept
    return VerificationReport(spec_err, spec_tilde_err, gamma_err, bool(ok))


def solve_inverse(prob: InverseProblem, fractions=None, cap: int | None = None,
                  workers: int = 1, config: ToleranceConfig = DEFAULT) -> list[InverseSolution]:
    """All verified solutions reachable by splitting the poles of ``-1/G``.

    ``fractions`` gives, for each point common to ``S`` and ``S~`` (in
    increasing order), the share of its residue placed in the leading block;
    a single float applies to all.  Common points must be split to reach the
    full dimension, so without fractions they raise :class:`DegenerateSplit`.
    Interior selections are enumerated in lexicographic order, at most
    ``cap`` of them (a seeded sample when there are more).
    """
    cap = config.enum_cap if cap is None else int(cap)
    red = _reduce(prob.S, prob.S_tilde, config)
    theta = math.sqrt(_theta_sq(red, prob.gamma, config))
    h = h_from(theta, prob.gamma) + 0.0
    G_measure, common = green_measure_from_spectra(prob.S, prob.S_tilde, prob.gamma, config)
    poles = neg_inverse(G_measure, config).poles

    if common.size and fractions is None:
        raise DegenerateSplit(
            f"{common.size} eigenvalue(s) shared by both blocks ({common.tolist()}); pass fractions"
        )
    if common.size:
        fr = np.broadcast_to(np.asarray(fractions, dtype=float), common.shape)
    shared = []
    for lam in common:
        k = int(np.argmin(np.abs(poles - lam))) if poles.size else -1
        if k < 0 or abs(poles[k] - lam) > config.tol_match * red.scale * 10:
            raise NoSolution(f"common point {lam} is not a zero of the Green function")
        shared.append(k)
    split = {k: float(f) for k, f in zip(shared, fr)} if common.size else {}

    k_free = prob.n - 1 - len(shared)
    if k_free < 0:
        raise NoSolution(f"site n={prob.n} cannot host {len(shared)} shared eigenvalue(s)")
    free = [i for i in range(poles.size) if i not in split]
    if k_free > len(free):
        raise NoSolution(f"site n={prob.n} needs more poles than -1/G has")

    def attempt(sel):
        interior = tuple(sorted(set(sel) | set(split)))
        try:
            J = green_to_jacobi(G_measure, prob.n, interior, split, config)
            report = verify_solution(J, theta, h, prob.n, prob, config)
        except JacobiError:
            return None
        return InverseSolution(J, theta, h, interior, report) if report.accepted else None

    candidates = interior_selections(free, k_free, cap, config.enum_seed)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(attempt, candidates))
    else:
        results = [attempt(sel) for sel in candidates]
    found = sorted((r for r in results if r is not None), key=lambda s: s.interior_selection)
    if not found:
        raise NoSolution("no interior selection reproduces both spectra")
    return found
