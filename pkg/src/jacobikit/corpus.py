"""Seeded random Jacobi matrices for batch verification.

Matrices come from ``numpy.random.Generator(PCG64(seed))``.  PCG64 and the
``integers``/``uniform`` streams are fixed algorithms, so a seed yields the
same matrices on every platform.  Each matrix draws, in order, its size, then
the diagonal, then the off-diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tridiag import JacobiMatrix


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 42
    count: int = 100
    n_min: int = 4
    n_max: int = 12
    q_range: tuple[float, float] = (-2.0, 2.0)
    b_range: tuple[float, float] = (0.5, 2.0)

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.count < 0:
            raise ValueError("count must be nonnegative")
        if self.n_min < 2 or self.n_max < self.n_min:
            raise ValueError(f"need 2 <= n_min <= n_max, got [{self.n_min}, {self.n_max}]")
        qlo, qhi = self.q_range
        blo, bhi = self.b_range
        if not qlo < qhi:
            raise ValueError("q_range must be nonempty")
        if not 0 < blo < bhi:
            raise ValueError("b_range must be a nonempty interval of positive reals")
        object.__setattr__(self, "q_range", (float(qlo), float(qhi)))
        object.__setattr__(self, "b_range", (float(blo), float(bhi)))


def generate_corpus(spec: CorpusSpec = CorpusSpec()) -> list[JacobiMatrix]:
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    out = []
    for _ in range(spec.count):
        N = int(rng.integers(spec.n_min, spec.n_max + 1))
        q = rng.uniform(*spec.q_range, size=N)
        b = rng.uniform(*spec.b_range, size=N - 1)
        out.append(JacobiMatrix(q, b))
    return out
