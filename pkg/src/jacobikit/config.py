"""Tolerance configuration shared by every numerical routine."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceConfig:
    """Immutable tolerances and iteration caps.

    tol_eig
        Relative eigenpair residual accepted from the eigensolver.
    tol_match
        Absolute distance under which two spectral points are identified,
        measured after rescaling to unit spectral radius.
    tol_rank
        Singular values below ``tol_rank * s_max`` count as zero.
    tol_weight
        Push-forward weights below this are treated as exact zeros.
    tol_identity
        Residual threshold for the structural identity checks.
    """

    tol_eig: float = 1e-12
    tol_match: float = 1e-8
    tol_rank: float = 1e-8
    tol_weight: float = 1e-14
    tol_identity: float = 1e-8
    tol_bisect: float = 1e-13
    tol_accept: float = 1e-7
    max_bisect_iter: int = 400
    enum_cap: int = 64
    enum_seed: int = 0

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name == "enum_seed":
                continue
            if not value > 0:
                raise ValueError(f"{f.name} must be positive, got {value!r}")
        if self.tol_identity < self.tol_eig:
            raise ValueError("tol_identity must be >= tol_eig")

    def replace(self, **changes) -> "ToleranceConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ToleranceConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> "ToleranceConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


DEFAULT = ToleranceConfig()
