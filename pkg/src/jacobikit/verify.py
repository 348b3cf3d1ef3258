"""Batch invariant suite over a corpus of Jacobi matrices.

Every check compares an implementation route against an independent one
(dense linear algebra, bisection, a second formula) and reports the largest
residual seen.  Checks are deterministic: sample points are fixed and every
random choice is drawn from a seeded PCG64 stream.  Per-item work can run on a
thread pool; aggregation is max/sum, so it does not depend on completion order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from . import determinacy as dc
from .config import DEFAULT, ToleranceConfig
from .corpus import CorpusSpec, generate_corpus
from .errors import JacobiError
from .green import (
    decompose,
    green,
    green_to_jacobi,
    interior_selections,
    jacobi_from_neg_inverse,
    neg_inverse,
    verify_gkk,
    weyl_m,
)
from .inverse import (
    InverseProblem,
    PerturbationParams,
    build_perturbed,
    forward_problem,
    gamma_of,
    green_from_spectra,
    m_frak,
    recover_theta,
    solve_inverse,
)
from .measures import (
    DiscreteMeasure,
    borel_transform,
    favard,
    moments,
    push_forward_pi_sq,
    spectral_measure,
)
from .tridiag import (
    JacobiMatrix,
    bisection_eigenvalues,
    cyclic_test,
    eigensystem,
    first_kind_vectors,
    first_kind_zeros_bisection,
    match_intersection,
    poly_zeros,
    spectral_scale,
    truncate_minus,
    truncate_plus,
    zero_on_spectrum,
)

# 20 fixed non-real sample points, both half-planes
SAMPLE_Z = np.concatenate([
    np.linspace(-4.0, 4.0, 10) + 0.3j,
    np.linspace(-3.5, 4.5, 10) - 1.2j,
])


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_residual: float
    threshold: float
    cases: int
    detail: str = ""

    def to_dict(self) -> dict:
        res = self.max_residual if math.isfinite(self.max_residual) else "inf"
        return {"name": self.name, "passed": self.passed, "max_residual": res,
                "threshold": self.threshold, "cases": self.cases, "detail": self.detail}


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


@dataclass
class _Tally:
    residual: float = 0.0
    cases: int = 0
    failures: int = 0
    notes: list = field(default_factory=list)

    def add(self, residual=0.0, cases=1, ok=True, note=None):
        self.residual = max(self.residual, float(residual))
        self.cases += cases
        self.failures += 0 if ok else 1
        if note is not None and len(self.notes) < 3:
            self.notes.append(note)
        return self


def _merge(tallies: Sequence[_Tally]) -> _Tally:
    out = _Tally()
    for t in tallies:
        out.residual = max(out.residual, t.residual)
        out.cases += t.cases
        out.failures += t.failures
        out.notes.extend(t.notes[: max(0, 3 - len(out.notes))])
    return out


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def _result(name: str, tally: _Tally, threshold: float) -> CheckResult:
    ok = tally.failures == 0 and tally.residual <= threshold
    detail = f"{tally.failures} failing case(s)" if tally.failures else ""
    if tally.notes:
        detail = "; ".join([detail, *tally.notes]).strip("; ")
    return CheckResult(name, bool(ok), tally.residual, threshold, tally.cases, detail)


def _per_item(name, corpus, fn, threshold, workers):
    return _result(name, _merge(_map(fn, list(enumerate(corpus)), workers)), threshold)


def _mirrored(J: JacobiMatrix) -> JacobiMatrix:
    """Odd-size palindromic matrix built from the head of ``J``; its middle site
    has ``sigma(J_n^-) = sigma(J_n^+)`` contained in ``sigma(J)``."""
    m = max(1, J.N // 2)
    q = np.concatenate([J.q[:m], [J.q[m]], J.q[:m][::-1]])
    b = np.concatenate([J.b[:m], J.b[:m][::-1]])
    return JacobiMatrix(q, b)


# --- tridiagonal core -----------------------------------------------------


def check_zeros_vs_spectrum(corpus, config: ToleranceConfig = DEFAULT, workers: int = 1) -> CheckResult:
    """Zeros of ``pi_n`` by sign-change bisection against ``sigma(J_n^-)``; the zeros also lie
    strictly inside ``(min sigma(J), max sigma(J))``."""
    def item(arg):
        _, J = arg
        lam = eigensystem(J, config).values
        t = _Tally()
        for n in range(2, J.N + 1):
            zeros = poly_zeros(J, n, config)
            gap = np.abs(first_kind_zeros_bisection(J, n) - zeros).max()
            t.add(gap, ok=bool(zeros[0] > lam[0] and zeros[-1] < lam[-1]))
        return t
    return _per_item("zeros_vs_spectrum", corpus, item, 1e-9, workers)


def check_unit_vectors(corpus, config: ToleranceConfig = DEFAULT, workers: int = 1) -> CheckResult:
    """``pi_k(J) e_1 = e_k`` for every ``k``."""
    def item(arg):
        _, J = arg
        P = first_kind_vectors(J)
        return _Tally().add(np.linalg.norm(P - np.eye(J.N), axis=0).max(), cases=J.N)
    return _per_item("unit_vectors", corpus, item, config.tol_identity, workers)


def check_eigensystem(corpus, config: ToleranceConfig = DEFAULT, workers: int = 1) -> CheckResult:
    """Eigenvalues against Sturm bisection; residuals, orthonormality and sign convention."""
    def item(arg):
        _, J = arg
        es = eigensystem(J, config)
        scale = spectral_scale(es.values)
        A = J.dense()
        V = es.vectors.T
        oracle = np.abs(es.values - bisection_eigenvalues(J)).max() / scale
        resid = np.linalg.norm(A @ V - V * es.values, axis=0).max() / scale
        ortho = np.abs(V.T @ V - np.eye(J.N)).max()
        signs_ok = bool(np.all(es.vectors[:, 0] > 0))
        return _Tally().add(max(oracle, resid, ortho), ok=signs_ok)
    return _per_item("eigensystem", corpus, item, config.tol_identity, workers)


def check_intersection_identity(corpus, config: ToleranceConfig = DEFAULT, workers: int = 1) -> CheckResult:
    """``sigma(J_n^-) & sigma(J_n^+) = sigma(J_n^-) & sigma(J)`` as sets, and its size equals the
    number of points the Green measure drops.  Mirrored matrices supply nonempty cases."""
    def one(J, t):
        es = eigensystem(J, config)
        tol = config.tol_match * spectral_scale(es.values)
        for n in range(2, J.N + 1):
            minus = eigensystem(truncate_minus(J, n), config).values
            plus = eigensystem(truncate_plus(J, n), config).values if n < J.N else np.empty(0)
            lhs = match_intersection(minus, plus, tol)
            rhs = match_intersection(minus, es.values, tol)
            dropped = J.N - push_forward_pi_sq(J, n, config).size
            same = lhs.size == rhs.size == dropped and (lhs.size == 0 or np.abs(lhs - rhs).max() <= tol)
            t.add(0.0 if lhs.size == 0 or lhs.size != rhs.size else np.abs(lhs - rhs).max(), ok=bool(same),
                  note=None if same else f"N={J.N} n={n}: |lhs|={lhs.size} |rhs|={rhs.size} dropped={dropped}")
        return t

    def item(arg):
        _, J = arg
        t = one(J, _Tally())
        return one(_mirrored(J), t)
    return _per_item("intersection_identity", corpus, item, config.tol_match, workers)


def check_cyclicity(corpus, cases: int = 1000, seed: int = 7, config: ToleranceConfig = DEFAULT) -> CheckResult:
    """Randomized ``(J, r)``: the Krylov rank test agrees with "r vanishes somewhere on sigma(J)".

    ``r`` has simple zeros, some placed exactly on computed eigenvalues.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    t = _Tally()
    for c in range(cases):
        J = corpus[c % len(corpus)]
        lam = eigensystem(J, config).values
        deg = int(rng.integers(0, 5))
        on = int(rng.integers(0, min(deg, J.N) + 1)) if rng.random() < 0.5 else 0
        roots = list(rng.choice(lam, size=on, replace=False))
        R = spectral_scale(lam)
        while len(roots) < deg:
            x = rng.uniform(-1.2 * R, 1.2 * R)
            if np.abs(lam - x).min() > 1e-3 * R and all(abs(x - y) > 1e-3 * R for y in roots):
                roots.append(x)
        lead = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
        r = lead * Polynomial.fromroots(roots) if roots else Polynomial([lead])
        res = cyclic_test(J, r, config)
        pred = zero_on_spectrum(J, r, config)
        agree = res.cyclic == (not pred) and pred == (on > 0)
        t.add(ok=agree, note=None if agree else f"case {c}: rank {res.krylov_rank}/{J.N}, on-spectrum zeros {on}")
    return _result("cyclicity", t, 0.0)


# --- measures -----------------------------------------------------


def check_spectral_measure(corpus, config: ToleranceConfig = DEFAULT, workers: int = 1) -> CheckResult:
    """Weyl function three ways (resolvent solve, Borel transform, dense inverse) and the first moments."""
    def item(arg):
        _, J = arg
        rho = spectral_measure(J, config)
        A = J.dense()
        dense = np.array([np.linalg.inv(A - z * np.eye(J.N))[0, 0] for z in SAMPLE_Z])
        err = max(np.abs(weyl_m(J, SAMPLE_Z, config) - dense).max(),
                  np.abs(borel_transform(rho, SAMPLE_Z, config) - dense).max(),
                  abs(moments(rho, 0) - 1.0), abs(moments(rho, 1) - J.q[0]),
                  abs(moments(rho, 2) - (J.q[0] ** 2 + J.b[0] ** 2)))
        return _Tally().add(err, cases=SAMPLE_Z.size)
    return _per_item("spectral_measure", corpus, item, config.tol_identity, workers)


def check_favard_matrices(corpus, config: ToleranceConfig = DEFAULT, workers: int = 1) -> CheckResult:
    def item(arg):
        _, J = arg
        K = favard(spectral_measure(J, config), config=config)
        err = max(np.abs(K.q - J.q).max(), np.abs(K.b - J.b).max())
        return _Tally().add(err)
    return _per_item("favard_matrices", corpus, item, 1e-8, workers)


def check_favard_measures(corpus, seed: int = 11, config: ToleranceConfig = DEFAULT) -> CheckResult:
    """Random measures (one per corpus item, same size) through favard and back."""
    rng = np.random.Generator(np.random.PCG64(seed))
    t = _Tally()
    for J in corpus:
        while True:
            pts = np.sort(rng.uniform(-3.0, 3.0, size=J.N))
            if np.diff(pts).min() > 1e-3:
                break
        w = rng.dirichlet(np.ones(J.N))
        w = np.maximum(w, 1e-6)
        rho = DiscreteMeasure(pts, w / w.sum())
        back = spectral_measure(favard(rho, config=config), config)
        err = max(np.abs(back.points - rho.points).max(), np.abs(back.weights - rho.weights).max())
        t.add(err)
    return _result("favard_measures", t, 1e-8)


# --- Green functions -----------------------------------------------------


def check_green(corpus, config: ToleranceConfig = DEFAULT, workers: int = 1) -> CheckResult:
    """``G(z,n)``: tridiagonal solve vs Borel transform of ``pi_n^2 rho`` vs dense inverse;
    ``pi_n^2 rho`` has unit mass."""
    def item(arg):
        _, J = arg
        Ainv = [np.linalg.inv(J.dense() - z * np.eye(J.N)) for z in SAMPLE_Z]
        t = _Tally()
        for n in range(1, J.N + 1):
            dense = np.array([M[n - 1, n - 1] for M in Ainv])
            rho_n = push_forward_pi_sq(J, n, config)
            err = max(np.abs(green(J, n, SAMPLE_Z, config) - dense).max(),
                      np.abs(borel_transform(rho_n, SAMPLE_Z, config) - dense).max(),
                      abs(rho_n.mass - 1.0))
            t.add(err, cases=SAMPLE_Z.size)
        return t
    return _per_item("green_three_ways", corpus, item, config.tol_identity, workers)


def check_gkk(corpus, config: ToleranceConfig = DEFAULT, workers: int = 1) -> CheckResult:
    """``-1/G = b_n^2 m_n^+ + b_{n-1}^2 m_n^- + z - q_n`` at the sample points."""
    def item(arg):
        _, J = arg
        t = _Tally()
        for n in range(1, J.N + 1):
            t.add(verify_gkk(J, n, SAMPLE_Z, config), cases=SAMPLE_Z.size)
        return t
    return _per_item("green_decomposition", corpus, item, 1e-8, workers)


def check_asymptotics(corpus, config: ToleranceConfig = DEFAULT, workers: int = 1) -> CheckResult:
    """``|z G(z,n) + 1| <= C/|z|``: C fitted on ``z = 1e3 i``, confirmed within a factor 2 at ``1e4 i``.

    The residual reported is the worst ratio ``C_val / C_fit``.
    """
    z1, z2 = 1e3j, 1e4j

    def item(arg):
        _, J = arg
        t = _Tally()
        for n in range(1, J.N + 1):
            c_fit = abs(z1) * abs(z1 * green(J, n, z1, config) + 1.0)
            c_val = abs(z2) * abs(z2 * green(J, n, z2, config) + 1.0)
            t.add(c_val / c_fit if c_fit > 0 else (0.0 if c_val == 0 else math.inf))
        return t
    return _per_item("green_asymptotics", corpus, item, 2.0, workers)


def check_herglotz(corpus, samples: int = 100, seed: int = 13, config: ToleranceConfig = DEFAULT) -> CheckResult:
    """``Im G(z,n) > 0`` on the upper half-plane at random points; residual is ``max(-Im G)``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    t = _Tally()
    for J in corpus:
        n = int(rng.integers(1, J.N + 1))
        z = rng.uniform(-5, 5, samples) + 1j * 10 ** rng.uniform(-3, 1, samples)
        im = np.imag(green(J, n, z, config))
        t.add(max(0.0, -im.min()), cases=samples, ok=bool(np.all(im > 0)))
    return _result("herglotz", t, 0.0)


def check_neg_inverse(corpus, config: ToleranceConfig = DEFAULT, workers: int = 1) -> CheckResult:
    """``-1/B`` of every Green measure: one pole per gap, positive residues, and the identity
    ``F(z) B(z) = -1`` at the sample points."""
    def item(arg):
        _, J = arg
        t = _Tally()
        for n in range(1, J.N + 1):
            mu = push_forward_pi_sq(J, n, config)
            F = neg_inverse(mu, config)
            interlaced = F.poles.size == mu.size - 1 and np.all(
                (F.poles > mu.points[:-1]) & (F.poles < mu.points[1:]))
            err = np.abs(F(SAMPLE_Z) * borel_transform(mu, SAMPLE_Z, config) + 1.0).max()
            t.add(err, cases=SAMPLE_Z.size, ok=bool(interlaced))
        return t
    return _per_item("neg_inverse", corpus, item, config.tol_identity, workers)


def check_decompose_rebuild(corpus, config: ToleranceConfig = DEFAULT, workers: int = 1) -> CheckResult:
    """The truncated-block measures rebuild ``J`` entrywise: ``favard(mu)`` reversed is
    ``J_n^-`` and ``favard(sigma)`` is ``J_n^+``."""
    def item(arg):
        _, J = arg
        t = _Tally()
        for n in range(2, J.N):
            d = decompose(J, n, config)
            lo = favard(d.mu, config=config).reversed()
            hi = favard(d.sigma, config=config)
            Jm, Jp = truncate_minus(J, n), truncate_plus(J, n)
            err = max(np.abs(lo.q - Jm.q).max(), np.abs(hi.q - Jp.q).max(),
                      np.abs(lo.b - Jm.b).max() if Jm.N > 1 else 0.0,
                      np.abs(hi.b - Jp.b).max() if Jp.N > 1 else 0.0,
                      abs(d.b_minus_sq - J.b[n - 2] ** 2), abs(d.b_plus_sq - J.b[n - 1] ** 2))
            t.add(err)
        return t
    return _per_item("decompose_rebuild", corpus, item, 1e-8, workers)


def check_rebuild(corpus, config: ToleranceConfig = DEFAULT, workers: int = 1) -> CheckResult:
    """Every ``(l, selection)`` up to the cap rebuilds a matrix whose l-th Green function is the
    Borel transform of the input measure (the Green measure of the corpus matrix at its middle site)."""
    def item(arg):
        _, J = arg
        G = push_forward_pi_sq(J, (J.N + 1) // 2, config)
        target = borel_transform(G, SAMPLE_Z, config)
        t = _Tally()
        F = neg_inverse(G, config)
        M = G.size
        for l in range(1, M + 1):
            for sel in interior_selections(range(M - 1), l - 1, config.enum_cap, config.enum_seed):
                K = jacobi_from_neg_inverse(F, l, sel, config=config)
                err = np.abs(green(K, l, SAMPLE_Z, config) - target).max()
                t.add(err, ok=K.N == M, cases=1)
        return t
    return _per_item("green_rebuild", corpus, item, 1e-7, workers)


def nonuniqueness_witness(seed: int = 5, config: ToleranceConfig = DEFAULT):
    """A seeded 5-point Green measure and two selections at ``l = 3`` giving matrices that differ
    by more than 1e-3 somewhere but share the third Green function.  Returns
    ``(entry_gap, green_gap, (J_a, J_b))``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    pts = np.sort(rng.uniform(-2, 2, 5))
    w = rng.uniform(0.5, 1.5, 5)
    G = DiscreteMeasure(pts, w / w.sum())
    Ja = green_to_jacobi(G, 3, (0, 1), config=config)
    Jb = green_to_jacobi(G, 3, (2, 3), config=config)
    entry_gap = max(np.abs(Ja.q - Jb.q).max(), np.abs(Ja.b - Jb.b).max())
    green_gap = np.abs(green(Ja, 3, SAMPLE_Z, config) - green(Jb, 3, SAMPLE_Z, config)).max()
    return float(entry_gap), float(green_gap), (Ja, Jb)


def check_nonuniqueness(config: ToleranceConfig = DEFAULT) -> CheckResult:
    entry_gap, green_gap, _ = nonuniqueness_witness(config=config)
    t = _Tally().add(green_gap, ok=entry_gap > 1e-3, note=f"entry gap {entry_gap:.3e}")
    return _result("rebuild_nonuniqueness", t, 1e-7)


# --- determinacy calculus -----------------------------------------------------


def _position(c: dc.DetClass) -> float:
    """Integer scale used as an oracle: ``DET(k) -> k + 1``, N-extremal ``-> 0``,
    not N-extremal ``-> -inf``."""
    if c.kind is dc.Kind.DET:
        return c.index + 1
    return 0 if c.kind is dc.Kind.INDET_NEXTREMAL else -math.inf


def _from_position(p: float) -> dc.DetClass:
    if p < 0:
        return dc.INDET_NOT_NEXTREMAL
    if p == 0:
        return dc.INDET_NEXTREMAL
    return dc.DetClass.det(dc.INF if p == math.inf else int(p) - 1)


def check_determinacy(kmax: int = 20, lmax: int = 10) -> CheckResult:
    """Exhaustive tables against position arithmetic on the integer scale, plus the
    structural identities of the calculus.  Exact comparison, no tolerance."""
    t = _Tally()
    bases = [dc.DetClass.det(k) for k in range(kmax + 1)] + [
        dc.DetClass.det(dc.INF), dc.INDET_NEXTREMAL, dc.INDET_NOT_NEXTREMAL]

    def expect(ok, note):
        t.add(ok=bool(ok), note=None if ok else note)

    for c in bases:
        for l in range(lmax + 1):
            want = _from_position(_position(c) - l)
            expect(dc.apply_add_masses(c, l) == want, f"add {c} l={l}")
            expect(dc.apply_poly_multiply(c, l) == want, f"poly {c} l={l}")
            tr = dc.transfer_rho_n(c, l)
            expect(tr.consistent and tr.result == want, f"rho_n {c} l={l}")
            if c.is_det and l == 0:
                expect(dc.apply_add_masses(c, l).is_det, f"monotone {c}")
            for l2 in range(lmax + 1):
                expect(dc.apply_add_masses(dc.apply_add_masses(c, l), l2) == dc.apply_add_masses(c, l + l2),
                       f"commute {c} {l},{l2}")
        movable = c == dc.INDET_NEXTREMAL or c.finite_det
        for r in range(lmax + 1):
            for a in range(lmax + 1):
                if not movable:
                    try:
                        dc.apply_move_masses(c, r, a)
                        expect(False, f"move {c} accepted")
                    except dc.PreconditionViolated:
                        expect(True, "")
                    continue
                expect(dc.apply_move_masses(c, r, a) == _from_position(_position(c) + r - a),
                       f"move {c} r={r} a={a}")
        if movable:
            for d in range(lmax + 1):
                back = dc.apply_move_masses(dc.apply_move_masses(c, d, 0), 0, d)
                expect(back == c, f"round trip {c} d={d}")
        expect(dc.apply_change_weights(c) == c and dc.apply_finite_rank(c) == c
               and dc.transfer_sigma_n(c) == c, f"invariance {c}")

    # for an N-extremal base, moving masses gives the same class iff the net count agrees
    base = dc.INDET_NEXTREMAL
    pairs = [(r, a) for r in range(lmax + 1) for a in range(lmax + 1)]
    for r1, a1 in pairs:
        c1 = dc.apply_move_masses(base, r1, a1)
        for r2, a2 in pairs:
            c2 = dc.apply_move_masses(base, r2, a2)
            same_net = (r1 - a1 == r2 - a2)
            # every net count <= -1 lands in the same absorbing class
            same_net = same_net or (r1 - a1 < 0 and r2 - a2 < 0)
            expect((c1 == c2) == same_net, f"move iff ({r1},{a1}) ({r2},{a2})")
    for c in bases:
        ops = (dc.AddMasses(3), dc.RemoveMassAtSupportPoint(), dc.MultiplyPolySq(2), dc.FiniteRankPerturbation())
        if c == dc.DetClass.det(dc.INF):
            expect(dc.classify(dc.MeasureDescriptor(c, ops)).result == c, "absorbing infinity")
        elif _position(c) - 3 >= 0:
            got = dc.classify(dc.MeasureDescriptor(c, ops)).result
            expect(got == _from_position(_position(c) - 3 + 1 - 2), f"classify {c}")
    return _result("determinacy_calculus", t, 0.0)


# --- inverse problem -----------------------------------------------------


@dataclass(frozen=True)
class ForwardInstance:
    J: JacobiMatrix
    params: PerturbationParams
    problem: InverseProblem


def forward_instances(corpus, count: int = 50, seed: int = 17, config: ToleranceConfig = DEFAULT):
    """Seeded forward problems from the first ``count`` corpus matrices:
    ``theta`` in [1.2, 3], ``h`` in [-2, 2], ``gamma`` kept 0.05 away from ``S``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    out = []
    for J in corpus[:count]:
        lam = eigensystem(J, config).values
        n = int(rng.integers(2, J.N + 1))
        while True:
            theta = float(rng.uniform(1.2, 3.0))
            h = float(rng.uniform(-2.0, 2.0))
            if np.abs(lam - gamma_of(theta, h)).min() > 0.05:
                break
        p = PerturbationParams(n, theta, h)
        out.append(ForwardInstance(J, p, forward_problem(J, p)))
    return out


SQRT2_EXAMPLE = InverseProblem([-math.sqrt(2), 0.0, math.sqrt(2)], [-2 * math.sqrt(2), 0.0, 2 * math.sqrt(2)], 2, 0.0)


def check_sqrt2_example(config: ToleranceConfig = DEFAULT) -> CheckResult:
    """Free 3x3 matrix, middle site, theta = 2, h = 0: spectra (-sqrt2, 0, sqrt2) and (-2sqrt2, 0, 2sqrt2)."""
    S, St = SQRT2_EXAMPLE.S, SQRT2_EXAMPLE.S_tilde
    t = _Tally()
    t.add(abs(recover_theta(S, St, 0.0, config) - 2.0))
    t.add(abs(m_frak(S, St, 0.0, config) - 4.0))
    t.add(abs(green_from_spectra(S, St, 0.0, 1j, config) - 1j / 3))
    sols = solve_inverse(SQRT2_EXAMPLE, fractions=0.5, config=config)
    free = JacobiMatrix([0.0, 0.0, 0.0], [1.0, 1.0])
    hit = [s for s in sols if np.allclose(s.J.q, free.q, atol=1e-10) and np.allclose(s.J.b, free.b, atol=1e-10)]
    t.add(ok=bool(hit), note=None if hit else "free matrix not recovered")
    return _result("sqrt2_example", t, 1e-10)


def check_inverse_chain(corpus, count: int = 50, config: ToleranceConfig = DEFAULT,
                        workers: int = 1) -> list[CheckResult]:
    """Forward instances through the spectral ratio and back: theta, the shared Green function,
    verified reconstructions, the two-site witness and the rank of ``J~ - J``."""
    inst = forward_instances(corpus, count, config=config)

    def item(fi: ForwardInstance):
        prob, p, J = fi.problem, fi.params, fi.J
        th = _Tally().add(abs(recover_theta(prob.S, prob.S_tilde, prob.gamma, config) - p.theta))
        g = _Tally().add(np.abs(green_from_spectra(prob.S, prob.S_tilde, prob.gamma, SAMPLE_Z, config)
                                - green(J, p.n, SAMPLE_Z, config)).max(), cases=SAMPLE_Z.size)
        Jt = build_perturbed(J, p)
        ratio = green(J, p.n, SAMPLE_Z, config) / green(Jt, p.n, SAMPLE_Z, config)
        g.add(np.abs(m_frak(prob.S, prob.S_tilde, SAMPLE_Z, config) - ratio).max(), cases=SAMPLE_Z.size)
        rank = np.linalg.matrix_rank(Jt.dense() - J.dense())
        rank_one = np.linalg.matrix_rank(build_perturbed(J, PerturbationParams(p.n, 1.0, p.h)).dense() - J.dense())
        rk = _Tally().add(ok=rank <= 3 and rank_one == 1)
        try:
            sols = solve_inverse(prob, config=config)
        except JacobiError as exc:
            return th, g, _Tally().add(math.inf, ok=False, note=f"{exc.kind}: {exc}"), rk, None
        best = min(max(s.report.spec_err, s.report.spec_tilde_err, s.report.gamma_err) for s in sols)
        sv = _Tally().add(best, ok=bool(sols) and all(s.report.accepted for s in sols))
        shared = green_from_spectra(prob.S, prob.S_tilde, prob.gamma, SAMPLE_Z, config)
        for s_ in sols:
            # every reconstruction carries the Green function fixed by the data
            sv.add(np.abs(green(s_.J, p.n, SAMPLE_Z, config) - shared).max(), cases=0)
        other = None
        for m in range(2, J.N + 1):
            if m == p.n:
                continue
            try:
                if solve_inverse(prob.at_site(m), config=config):
                    other = m
                    break
            except JacobiError:
                continue
        return th, g, sv, rk, other

    rows = _map(item, inst, workers)
    two_site = [(i, fi.params.n, r[4]) for i, (fi, r) in enumerate(zip(inst, rows)) if r[4] is not None]
    witness = _Tally().add(ok=bool(two_site),
                           note=f"instance {two_site[0][0]}: sites {two_site[0][1]} and {two_site[0][2]}"
                           if two_site else "no instance solvable at two sites")
    return [
        _result("inverse_theta", _merge([r[0] for r in rows]), 1e-8),
        _result("inverse_green", _merge([r[1] for r in rows]), 1e-8),
        _result("inverse_solutions", _merge([r[2] for r in rows]), config.tol_accept),
        _result("perturbation_rank", _merge([r[3] for r in rows]), 0.0),
        _result("site_nonidentifiability", witness, 0.0),
    ]


# --- driver -----------------------------------------------------


def run_verification(spec: CorpusSpec = CorpusSpec(), config: ToleranceConfig = DEFAULT,
                     workers: int = 1) -> VerifyReport:
    corpus = generate_corpus(spec)
    checks = [
        check_zeros_vs_spectrum(corpus, config, workers),
        check_unit_vectors(corpus, config, workers),
        check_eigensystem(corpus, config, workers),
        check_intersection_identity(corpus, config, workers),
        check_cyclicity(corpus, config=config),
        check_spectral_measure(corpus, config, workers),
        check_favard_matrices(corpus, config, workers),
        check_favard_measures(corpus, config=config),
        check_green(corpus, config, workers),
        check_gkk(corpus, config, workers),
        check_asymptotics(corpus, config, workers),
        check_herglotz(corpus, config=config),
        check_neg_inverse(corpus, config, workers),
        check_decompose_rebuild(corpus, config, workers),
        check_rebuild(corpus, config, workers),
        check_nonuniqueness(config),
        check_determinacy(),
        check_sqrt2_example(config),
        *check_inverse_chain(corpus, min(50, len(corpus)), config, workers),
    ]
    return VerifyReport(tuple(checks))
