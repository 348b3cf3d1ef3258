"""Finite discrete measures, their moments and Borel transforms, spectral
measures of Jacobi matrices and the reverse (measure -> matrix) map."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, ToleranceConfig
from .errors import DegenerateMeasure, IndexOutOfRange, InvalidData, PoleEvaluation
from .tridiag import JacobiMatrix, eigensystem, spectral_scale


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """``sum_i weights[i] * delta_{points[i]}`` with strictly increasing points."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        p = np.array(self.points, dtype=float).reshape(-1)
        w = np.array(self.weights, dtype=float).reshape(-1)
        if p.size != w.size:
            raise InvalidData(f"{p.size} points but {w.size} weights")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(w))):
            raise InvalidData("points and weights must be finite")
        if np.any(w <= 0):
            raise InvalidData("weights must be strictly positive")
        if np.any(np.diff(p) <= 0):
            raise InvalidData("points must be strictly increasing")
        p.flags.writeable = False
        w.flags.writeable = False
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "weights", w)

    @classmethod
    def empty(cls) -> "DiscreteMeasure":
        return cls([], [])

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    @property
    def normalized(self) -> bool:
        return abs(self.mass - 1.0) <= 1e-12

    def normalize(self) -> "DiscreteMeasure":
        return DiscreteMeasure(self.points, self.weights / self.mass)

    def __eq__(self, other):
        if not isinstance(other, DiscreteMeasure):
            return NotImplemented
        return np.array_equal(self.points, other.points) and np.array_equal(
            self.weights, other.weights
        )

    def __repr__(self):
        terms = " + ".join(f"{w:.6g}*d({p:.6g})" for p, w in zip(self.points, self.weights))
        return f"DiscreteMeasure({terms or '0'})"


def spectral_measure(J: JacobiMatrix, config: ToleranceConfig = DEFAULT) -> DiscreteMeasure:
    """Spectral measure of ``J`` with respect to ``e_1``."""
    es = eigensystem(J, config)
    return DiscreteMeasure(es.values, es.vectors[:, 0] ** 2)


def moments(rho: DiscreteMeasure, k: int) -> float:
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    return float(np.sum(rho.points**k * rho.weights))


def _check_poles(rho: DiscreteMeasure, zs: np.ndarray, tol: float):
    if rho.size == 0:
        return
    scale = spectral_scale(rho.points)
    dist = np.abs(zs[:, None] - rho.points[None, :]).min(axis=1)
    if np.any(dist <= tol * scale):
        raise PoleEvaluation(f"z={zs[np.argmin(dist)]} lies on the support")


def borel_transform(rho: DiscreteMeasure, z, config: ToleranceConfig = DEFAULT):
    """``sum_i w_i / (t_i - z)``; accepts scalar or array ``z``."""
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_poles(rho, zs, config.tol_match)
    vals = (rho.weights[None, :] / (rho.points[None, :] - zs[:, None])).sum(axis=1)
    return vals[0] if np.ndim(z) == 0 else vals.reshape(np.shape(z))


def borel_derivative(rho: DiscreteMeasure, z):
    """Derivative in ``z``: ``sum_i w_i / (t_i - z)^2``."""
    zs = np.asarray(z, dtype=complex)
    return (rho.weights / (rho.points - zs[..., None]) ** 2).sum(axis=-1)


def merge_close(rho: DiscreteMeasure, tol: float) -> DiscreteMeasure:
    """Merge points closer than ``tol * spectral radius``; weights add, points average."""
    if rho.size < 2:
        return rho
    scale = spectral_scale(rho.points)
    groups = [[0]]
    for i in range(1, rho.size):
        if rho.points[i] - rho.points[groups[-1][-1]] <= tol * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    if len(groups) == rho.size:
        return rho
    w = np.array([rho.weights[g].sum() for g in groups])
    p = np.array([np.average(rho.points[g], weights=rho.weights[g]) for g in groups])
    return DiscreteMeasure(p, w)


def favard(rho: DiscreteMeasure, max_size: int | None = None,
           config: ToleranceConfig = DEFAULT) -> JacobiMatrix:
    """Jacobi matrix whose spectral measure is ``rho``.

    Lanczos on ``diag(points)`` started from ``sqrt(weights)``, with two passes
    of full reorthogonalization per step.  ``max_size`` truncates to the
    leading block of that size.
    """
    if rho.size == 0:
        raise DegenerateMeasure("empty measure")
    if abs(rho.mass - 1.0) > 1e-10:
        raise InvalidData(f"measure must be normalized, mass={rho.mass!r}")
    rho = merge_close(rho, config.tol_match)
    x = rho.points
    M = rho.size if max_size is None else min(int(max_size), rho.size)
    if M < 1:
        raise ValueError("max_size must be positive")
    Q = np.zeros((x.size, M))
    v = np.sqrt(rho.weights)
    Q[:, 0] = v / np.linalg.norm(v)
    q = np.zeros(M)
    b = np.zeros(M - 1)
    floor = config.tol_match * spectral_scale(x)
    for k in range(M):
        u = x * Q[:, k]
        q[k] = Q[:, k] @ u
        u -= q[k] * Q[:, k]
        if k > 0:
            u -= b[k - 1] * Q[:, k - 1]
        basis = Q[:, : k + 1]
        for _ in range(2):
            u -= basis @ (basis.T @ u)
        if k == M - 1:
            break
        beta = np.linalg.norm(u)
        if beta <= floor:
            raise DegenerateMeasure(f"Lanczos breakdown at step {k + 1} (beta={beta:.3e})")
        b[k] = beta
        Q[:, k + 1] = u / beta
    return JacobiMatrix(q, b)


def push_forward_pi_sq(J: JacobiMatrix, n: int, config: ToleranceConfig = DEFAULT) -> DiscreteMeasure:
    """Measure ``pi_n^2 rho`` whose Borel transform is the n-th Green function.

    Weights are read off as squared n-th eigenvector components, which equal
    ``pi_n(lambda_i)^2 rho({lambda_i})`` and avoid evaluating a possibly large
    polynomial.  Weights under ``tol_weight`` are zeros of ``pi_n`` on the
    spectrum (removable points of the Green function) and are dropped.
    """
    if not 1 <= n <= J.N:
        raise IndexOutOfRange(f"n={n} outside 1..{J.N}")
    es = eigensystem(J, config)
    w = es.vectors[:, n - 1] ** 2
    keep = w >= config.tol_weight
    return DiscreteMeasure(es.values[keep], w[keep])


def block_measure(J: JacobiMatrix, coordinate: int, config: ToleranceConfig = DEFAULT) -> DiscreteMeasure:
    """Spectral measure of ``J`` with respect to ``e_coordinate`` (1-based)."""
    if not 1 <= coordinate <= J.N:
        raise IndexOutOfRange(f"coordinate {coordinate} outside 1..{J.N}")
    es = eigensystem(J, config)
    w = es.vectors[:, coordinate - 1] ** 2
    keep = w > 0
    return DiscreteMeasure(es.values[keep], w[keep])
