"""Weyl and Green functions of finite Jacobi matrices, the diagonal-resolvent
decomposition, and rebuilding a Jacobi matrix from a prescribed Green function.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .config import DEFAULT, ToleranceConfig
from .errors import BadSelection, DegenerateMeasure, IndexOutOfRange, InvalidData, PoleEvaluation
from .measures import (
    DiscreteMeasure,
    block_measure,
    borel_derivative,
    borel_transform,
    favard,
    moments,
    push_forward_pi_sq,
)
from .tridiag import (
    JacobiMatrix,
    eigenvalues,
    resolvent_entry,
    spectral_scale,
    truncate_minus,
    truncate_plus,
)


@dataclass(frozen=True, eq=False)
class HerglotzRational:
    """``F(z) = z + shift + sum_k residues[k] / (poles[k] - z)``, all residues > 0."""

    shift: float
    poles: np.ndarray
    residues: np.ndarray

    def __post_init__(self):
        poles = np.array(self.poles, dtype=float).reshape(-1)
        res = np.array(self.residues, dtype=float).reshape(-1)
        if poles.size != res.size:
            raise InvalidData("poles and residues differ in length")
        if np.any(res <= 0):
            raise InvalidData("residues must be positive")
        if np.any(np.diff(poles) <= 0):
            raise InvalidData("poles must be strictly increasing")
        poles.flags.writeable = False
        res.flags.writeable = False
        object.__setattr__(self, "shift", float(self.shift))
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "residues", res)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        tail = (self.residues / (self.poles - z[..., None])).sum(axis=-1)
        return z + self.shift + tail

    def __eq__(self, other):
        if not isinstance(other, HerglotzRational):
            return NotImplemented
        return (
            self.shift == other.shift
            and np.array_equal(self.poles, other.poles)
            and np.array_equal(self.residues, other.residues)
        )


@dataclass(frozen=True)
class GreenDecomposition:
    """Pieces of ``-1/G(z,n) = b_n^2 m_n^+ + b_{n-1}^2 m_n^- + z - q_n``."""

    n: int
    q_n: float
    b_minus_sq: float
    b_plus_sq: float
    mu: DiscreteMeasure
    sigma: DiscreteMeasure

    def neg_inverse(self, z):
        z = np.asarray(z, dtype=complex)
        out = z - self.q_n
        if self.sigma.size:
            out = out + self.b_plus_sq * borel_transform(self.sigma, z)
        if self.mu.size:
            out = out + self.b_minus_sq * borel_transform(self.mu, z)
        return out

    def green(self, z):
        return -1.0 / self.neg_inverse(z)


def _check_index(J: JacobiMatrix, n: int):
    if not 1 <= n <= J.N:
        raise IndexOutOfRange(f"n={n} outside 1..{J.N}")


def green(J: JacobiMatrix, n: int, z, config: ToleranceConfig = DEFAULT):
    """n-th Green function ``<e_n, (J - z)^{-1} e_n>``.

    Points of the spectrum where ``pi_n`` vanishes are removable; there the
    value is taken from the Borel transform of ``pi_n^2 rho``.
    """
    _check_index(J, n)
    try:
        return resolvent_entry(J, n, z, config=config)
    except PoleEvaluation:
        rho_n = push_forward_pi_sq(J, n, config)
        lam = eigenvalues(J)
        zs = np.atleast_1d(np.asarray(z, dtype=complex))
        dist = np.abs(zs[:, None] - lam[None, :]).min(axis=1)
        on_spectrum = dist <= config.tol_match * spectral_scale(lam)
        out = np.empty(zs.shape, dtype=complex)
        # raises again unless every such point was dropped from rho_n
        out[on_spectrum] = borel_transform(rho_n, zs[on_spectrum], config)
        if np.any(~on_spectrum):
            out[~on_spectrum] = resolvent_entry(J, n, zs[~on_spectrum], lam, config)
        return out[0] if np.ndim(z) == 0 else out.reshape(np.shape(z))


def weyl_m(J: JacobiMatrix, z, config: ToleranceConfig = DEFAULT):
    """Weyl function ``<e_1, (J - z)^{-1} e_1>``."""
    return resolvent_entry(J, 1, z, config=config)


def m_plus(J: JacobiMatrix, n: int, z, config: ToleranceConfig = DEFAULT):
    """Weyl function of ``J_n^+`` at its first coordinate ``e_{n+1}``.

    For ``n == N`` the block is empty and the function is identically zero.
    """
    _check_index(J, n)
    if n == J.N:
        return np.zeros(np.shape(z), dtype=complex)[()]
    return resolvent_entry(truncate_plus(J, n), 1, z, config=config)


def m_minus(J: JacobiMatrix, n: int, z, config: ToleranceConfig = DEFAULT):
    """Weyl function of ``J_n^-`` at its LAST coordinate ``e_{n-1}``; zero for ``n == 1``."""
    _check_index(J, n)
    if n == 1:
        return np.zeros(np.shape(z), dtype=complex)[()]
    return resolvent_entry(truncate_minus(J, n), n - 1, z, config=config)


def sigma_mu(J: JacobiMatrix, n: int, config: ToleranceConfig = DEFAULT):
    """Measures of ``m_n^+`` and ``m_n^-`` as ``(sigma_n, mu_n)``; empty at the ends."""
    _check_index(J, n)
    sigma = block_measure(truncate_plus(J, n), 1, config) if n < J.N else DiscreteMeasure.empty()
    mu = block_measure(truncate_minus(J, n), n - 1, config) if n > 1 else DiscreteMeasure.empty()
    return sigma, mu


def decompose(J: JacobiMatrix, n: int, config: ToleranceConfig = DEFAULT) -> GreenDecomposition:
    sigma, mu = sigma_mu(J, n, config)
    b_minus_sq = float(J.b[n - 2] ** 2) if n > 1 else 0.0
    b_plus_sq = float(J.b[n - 1] ** 2) if n < J.N else 0.0
    return GreenDecomposition(n, float(J.q[n - 1]), b_minus_sq, b_plus_sq, mu, sigma)


def verify_gkk(J: JacobiMatrix, n: int, sample_z: Sequence[complex],
               config: ToleranceConfig = DEFAULT) -> float:
    """Max over samples of ``|G(z,n) (b_n^2 m^+ + b_{n-1}^2 m^- + z - q_n) + 1|``.

    G comes from a solve on the whole matrix, ``m^+-`` from solves on the
    blocks, so the identity is checked rather than assumed.
    """
    _check_index(J, n)
    z = np.asarray(sample_z, dtype=complex)
    G = green(J, n, z, config)
    bracket = z - J.q[n - 1]
    if n < J.N:
        bracket = bracket + J.b[n - 1] ** 2 * m_plus(J, n, z, config)
    if n > 1:
        bracket = bracket + J.b[n - 2] ** 2 * m_minus(J, n, z, config)
    return float(np.max(np.abs(G * bracket + 1.0))) if z.size else 0.0


def _bisect_zeros(rho: DiscreteMeasure, config: ToleranceConfig) -> np.ndarray:
    """Zero of the Borel transform in every gap, all gaps bisected together.

    On each gap ``(t_k, t_{k+1})`` the transform increases from -inf to +inf,
    so the sign at the midpoint decides which half keeps the zero.
    """
    w, t = rho.weights, rho.points
    a, c = t[:-1].copy(), t[1:].copy()
    for _ in range(config.max_bisect_iter):
        mid = 0.5 * (a + c)
        live = (c - a > config.tol_bisect) & (mid != a) & (mid != c)
        if not live.any():
            break
        val = (w[None, :] / (t[None, :] - mid[:, None])).sum(axis=1)
        c = np.where(live & (val > 0), mid, c)
        a = np.where(live & (val < 0), mid, a)
        hit = live & (val == 0)
        a[hit] = c[hit] = mid[hit]
    return 0.5 * (a + c)


def neg_inverse(G_measure: DiscreteMeasure, config: ToleranceConfig = DEFAULT) -> HerglotzRational:
    """Partial fractions of ``-1 / Borel(G_measure)``.

    Poles are the zeros of the Borel transform, one per gap between consecutive
    support points; residues are ``1 / Borel'(pole)``; the constant is minus
    the first moment.
    """
    if G_measure.size == 0:
        raise DegenerateMeasure("empty measure")
    if abs(G_measure.mass - 1.0) > 1e-10:
        raise InvalidData(f"measure must be normalized, mass={G_measure.mass!r}")
    t = G_measure.points
    poles = _bisect_zeros(G_measure, config) if t.size > 1 else np.empty(0)
    residues = 1.0 / borel_derivative(G_measure, poles).real if poles.size else np.empty(0)
    return HerglotzRational(-moments(G_measure, 1), poles, residues)


def _validate_selection(npoles: int, l: int, interior, split) -> tuple[list[int], dict[int, float]]:
    interior = sorted(int(i) for i in interior)
    split = {int(k): float(v) for k, v in (split or {}).items()}
    if l < 1:
        raise BadSelection("l must be a positive integer")
    if len(set(interior)) != len(interior) or len(interior) != l - 1:
        raise BadSelection(f"interior selection must hold l-1={l - 1} distinct poles, got {interior}")
    if any(i < 0 or i >= npoles for i in interior):
        raise BadSelection(f"pole index out of range 0..{npoles - 1}")
    for k, frac in split.items():
        if k not in interior:
            raise BadSelection(f"split pole {k} must belong to the interior selection")
        if not 0.0 < frac < 1.0:
            raise BadSelection(f"split fraction for pole {k} must lie in (0, 1), got {frac}")
    return interior, split


def green_to_jacobi(G_measure: DiscreteMeasure, l: int, interior: Sequence[int] = (),
                    split: Mapping[int, float] | None = None,
                    config: ToleranceConfig = DEFAULT) -> JacobiMatrix:
    """A Jacobi matrix whose l-th Green function is ``Borel(G_measure)``.

    ``interior`` selects ``l - 1`` poles of ``-1/G`` (0-based indices into
    ``neg_inverse(G_measure).poles``) to form the leading block; the rest
    form the trailing block.  ``split`` maps an interior pole to the fraction of
    its residue kept in the leading block, the remainder going to the
    trailing block; this is how an eigenvalue shared by both blocks is
    reinstated.  Without splits the output has the size of the support of
    ``G_measure``; each split adds one dimension.
    """
    return jacobi_from_neg_inverse(neg_inverse(G_measure, config), l, interior, split, config)


def jacobi_from_neg_inverse(F: HerglotzRational, l: int, interior: Sequence[int] = (),
                            split: Mapping[int, float] | None = None,
                            config: ToleranceConfig = DEFAULT) -> JacobiMatrix:
    """:func:`green_to_jacobi` starting from the partial fractions of ``-1/G``,
    for callers that enumerate many selections of the same measure."""
    interior, split = _validate_selection(F.poles.size, l, interior, split)
    inner = np.zeros(F.poles.size, dtype=bool)
    inner[interior] = True
    frac_in = np.where(inner, 1.0, 0.0)
    for k, frac in split.items():
        frac_in[k] = frac
    w_in = F.residues * frac_in
    w_out = F.residues * (1.0 - frac_in)
    keep_in = w_in > 0
    keep_out = w_out > 0

    q_l = -F.shift
    q_parts, b_parts = [], []
    if l > 1:
        b_minus_sq = w_in.sum()
        mu = DiscreteMeasure(F.poles[keep_in], w_in[keep_in] / b_minus_sq)
        lead = favard(mu, config=config).reversed()
        q_parts.append(lead.q)
        b_parts += [lead.b, [np.sqrt(b_minus_sq)]]
    q_parts.append([q_l])
    if np.any(keep_out):
        b_plus_sq = w_out.sum()
        sigma = DiscreteMeasure(F.poles[keep_out], w_out[keep_out] / b_plus_sq)
        tail = favard(sigma, config=config)
        b_parts += [[np.sqrt(b_plus_sq)], tail.b]
        q_parts.append(tail.q)
    q = np.concatenate([np.asarray(p, dtype=float) for p in q_parts])
    b = np.concatenate([np.asarray(p, dtype=float) for p in b_parts]) if b_parts else np.empty(0)
    return JacobiMatrix(q, b)


def interior_selections(pool: Sequence[int], k: int, cap: int, seed: int = 0) -> list[tuple[int, ...]]:
    """Size-``k`` subsets of ``pool``: all of them in lexicographic order when
    there are at most ``cap``, otherwise a seeded sample of ``cap`` kept in
    lexicographic order."""
    pool = list(pool)
    total = math.comb(len(pool), k)
    if total <= cap:
        return list(itertools.combinations(pool, k))
    if total > 200_000:
        return list(itertools.islice(itertools.combinations(pool, k), cap))
    every = list(itertools.combinations(pool, k))
    picks = np.random.default_rng(seed).choice(total, size=cap, replace=False)
    return [every[i] for i in sorted(picks)]
