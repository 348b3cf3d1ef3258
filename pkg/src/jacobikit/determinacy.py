"""Symbolic calculus for the index of determinacy.

A measure is described by a base classification and a history of finite
modifications.  The rules below only ever look at counts (how many added
points fall outside the support, how many zeros a polynomial factor has off
the support, ...); the numeric side of the toolkit is what supplies those
counts for concrete finite matrices.

Classes are ``DET(k)`` with ``k`` a nonnegative integer or infinity,
``INDET_NEXTREMAL`` and ``INDET_NOT_NEXTREMAL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import ClassVar

from .errors import PreconditionViolated, UnsupportedModification

INF = math.inf


class Kind(str, Enum):
    DET = "DET"
    INDET_NEXTREMAL = "INDET_NEXTREMAL"
    INDET_NOT_NEXTREMAL = "INDET_NOT_NEXTREMAL"


@dataclass(frozen=True)
class DetClass:
    kind: Kind
    index: int | float | None = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is Kind.DET:
            k = self.index
            if k != INF and not (isinstance(k, int) and not isinstance(k, bool) and k >= 0):
                raise ValueError(f"DET index must be a nonnegative int or INF, got {k!r}")
        elif self.index is not None:
            raise ValueError(f"{kind.value} carries no index")

    @classmethod
    def det(cls, k) -> "DetClass":
        return cls(Kind.DET, k)

    @property
    def is_det(self) -> bool:
        return self.kind is Kind.DET

    @property
    def finite_det(self) -> bool:
        return self.kind is Kind.DET and self.index != INF

    @classmethod
    def parse(cls, text: str) -> "DetClass":
        text = text.strip()
        if text.upper().startswith("DET:"):
            raw = text[4:].strip()
            return cls.det(INF if raw.upper() in {"INF", "INFINITY"} else int(raw))
        return cls(Kind(text.upper()))

    def __str__(self):
        if self.kind is Kind.DET:
            return "DET:INF" if self.index == INF else f"DET:{self.index}"
        return self.kind.value


INDET_NEXTREMAL = DetClass(Kind.INDET_NEXTREMAL)
INDET_NOT_NEXTREMAL = DetClass(Kind.INDET_NOT_NEXTREMAL)


def _count(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")
    return value


# --- transition rules -----------------------------------------------------


def _lower(c: DetClass, l: int) -> tuple[DetClass, str]:
    """Shared table for adding ``l`` outside points or a factor with ``l`` outside zeros."""
    l = _count("l", l)
    if l == 0:
        return c, "no new points off the support: class unchanged"
    if c.kind is Kind.DET:
        k = c.index
        if k == INF:
            return c, "infinite index absorbs finitely many points"
        if k >= l:
            return DetClass.det(k - l), f"det index {k} >= l={l}: index drops by l"
        if k == l - 1:
            return INDET_NEXTREMAL, f"det index {k} = l-1: becomes indeterminate N-extremal"
        return INDET_NOT_NEXTREMAL, f"det index {k} < l-1: indeterminate, not N-extremal"
    return INDET_NOT_NEXTREMAL, "indeterminate plus a point off the support: not N-extremal"


def apply_add_masses(c: DetClass, l: int) -> DetClass:
    """Add point masses, ``l`` of them off the current support."""
    return _lower(c, l)[0]


def apply_poly_multiply(c: DetClass, l: int) -> DetClass:
    """Multiply by ``|r|^2`` where ``r`` has simple zeros, ``l`` of them off the support."""
    return _lower(c, l)[0]


def _move(c: DetClass, removed: int, added_outside: int) -> tuple[DetClass, str]:
    removed = _count("removed", removed)
    added_outside = _count("added_outside", added_outside)
    if not (c.kind is Kind.INDET_NEXTREMAL or c.finite_det):
        raise PreconditionViolated(
            f"moving masses needs an indeterminate N-extremal or finite-index measure, got {c}"
        )
    d = removed - added_outside
    if d == 0:
        return c, f"moved {removed} points to {added_outside} new ones: class unchanged"
    if d < 0:
        new, why = _lower(c, -d)
        return new, f"net {-d} points added; {why}"
    if c.kind is Kind.DET:
        return DetClass.det(c.index + d), f"net {d} points removed: det index rises by {d}"
    return DetClass.det(d - 1), f"net {d} points removed from indeterminate N-extremal: det index {d - 1}"


def apply_move_masses(c: DetClass, removed: int, added_outside: int) -> DetClass:
    """Remove ``removed`` support points and add ``added_outside`` new ones."""
    return _move(c, removed, added_outside)[0]


def apply_change_weights(c: DetClass, finite: bool = True) -> DetClass:
    """Change finitely many weights, support fixed: the class is preserved.

    Infinitely many weight changes can move the index in either direction and
    no rule is encoded for them.
    """
    if not finite:
        raise UnsupportedModification("changing infinitely many weights has no determined outcome")
    return c


def apply_finite_rank(c: DetClass) -> DetClass:
    return c


def transfer_sigma_n(c: DetClass) -> DetClass:
    """Class of the measure of the truncated operator ``J_n^+`` from that of ``rho``."""
    return c


@dataclass(frozen=True)
class RhoNTransfer:
    """Class of ``pi_n^2 rho`` together with two independent derivations."""

    result: DetClass
    via_sigma_mu: DetClass
    via_rho_plus_beta: DetClass

    @property
    def consistent(self) -> bool:
        return self.result == self.via_sigma_mu == self.via_rho_plus_beta


def transfer_rho_n(c_rho: DetClass, zeros_outside: int) -> RhoNTransfer:
    """``zeros_outside`` = zeros of ``pi_n`` off the spectrum, i.e. ``|sigma(J_n^-) minus sigma(J)|``.

    * direct: multiply ``rho`` by ``pi_n^2``;
    * via ``sigma_n + mu_n``: ``sigma_n`` shares the class of ``rho`` and
      ``mu_n`` adds exactly the zeros of ``pi_n`` that are not shared with
      ``sigma(J_n^+)``, which are the ones off ``sigma(J)``;
    * via ``rho + beta`` with ``beta`` placing ``zeros_outside`` masses off the support.
    """
    zeros_outside = _count("zeros_outside", zeros_outside)
    direct = apply_poly_multiply(c_rho, zeros_outside)
    via_sm = apply_add_masses(transfer_sigma_n(c_rho), zeros_outside)
    via_beta = apply_add_masses(c_rho, zeros_outside)
    return RhoNTransfer(direct, via_sm, via_beta)


# --- modification records -----------------------------------------------------


@dataclass(frozen=True)
class AddMasses:
    l: int
    kind: ClassVar[str] = "AddMasses"


@dataclass(frozen=True)
class MultiplyPolySq:
    l: int
    simple_zeros: bool = True
    kind: ClassVar[str] = "MultiplyPolySq"


@dataclass(frozen=True)
class MoveMasses:
    removed: int
    added_outside: int
    kind: ClassVar[str] = "MoveMasses"


@dataclass(frozen=True)
class RemoveMassAtSupportPoint:
    kind: ClassVar[str] = "RemoveMassAtSupportPoint"


@dataclass(frozen=True)
class ChangeFinitelyManyWeights:
    finite: bool = True
    kind: ClassVar[str] = "ChangeFinitelyManyWeights"


@dataclass(frozen=True)
class FiniteRankPerturbation:
    kind: ClassVar[str] = "FiniteRankPerturbation"


@dataclass(frozen=True)
class ToSigmaN:
    kind: ClassVar[str] = "ToSigmaN"


@dataclass(frozen=True)
class RhoNFromJ:
    """Pass from ``rho`` to ``pi_n^2 rho``; ``common_count = |sigma(J_n^-) cap sigma(J)|``."""

    common_count: int
    n: int
    kind: ClassVar[str] = "RhoNFromJ"

    @property
    def zeros_outside(self) -> int:
        _count("common_count", self.common_count)
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if self.common_count > self.n - 1:
            raise ValueError("common_count cannot exceed the n-1 zeros of pi_n")
        return self.n - 1 - self.common_count


OP_TYPES = {
    cls.kind: cls
    for cls in (
        AddMasses,
        MultiplyPolySq,
        MoveMasses,
        RemoveMassAtSupportPoint,
        ChangeFinitelyManyWeights,
        FiniteRankPerturbation,
        ToSigmaN,
        RhoNFromJ,
    )
}

# positional field order for the compact "Kind:a:b" syntax
_OP_ARGS = {
    "AddMasses": ("l",),
    "MultiplyPolySq": ("l",),
    "MoveMasses": ("removed", "added_outside"),
    "RemoveMassAtSupportPoint": (),
    "ChangeFinitelyManyWeights": (),
    "FiniteRankPerturbation": (),
    "ToSigmaN": (),
    "RhoNFromJ": ("common_count", "n"),
}


def op_from_dict(data: dict):
    data = dict(data)
    kind = data.pop("kind")
    try:
        cls = OP_TYPES[kind]
    except KeyError:
        raise ValueError(f"unknown modification kind {kind!r}") from None
    return cls(**data)


def op_to_dict(op) -> dict:
    out = {"kind": op.kind}
    out.update({k: v for k, v in vars(op).items()})
    return out


def parse_op(text: str):
    """Compact form ``Kind`` or ``Kind:a[:b]``, e.g. ``MoveMasses:2:0``."""
    kind, *args = text.strip().split(":")
    names = _OP_ARGS.get(kind)
    if names is None:
        raise ValueError(f"unknown modification kind {kind!r}")
    if len(args) != len(names):
        raise ValueError(f"{kind} takes {len(names)} argument(s), got {len(args)}")
    return OP_TYPES[kind](**{n: int(a) for n, a in zip(names, args)})


@dataclass(frozen=True)
class MeasureDescriptor:
    base: DetClass
    ops: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    def to_dict(self) -> dict:
        return {"base": str(self.base), "ops": [op_to_dict(op) for op in self.ops]}

    @classmethod
    def from_dict(cls, data: dict) -> "MeasureDescriptor":
        return cls(DetClass.parse(data["base"]), tuple(op_from_dict(o) for o in data.get("ops", [])))


@dataclass(frozen=True)
class Classification:
    result: DetClass
    trace: tuple[str, ...]


def _step(c: DetClass, op) -> tuple[DetClass, str]:
    name = op.kind
    if isinstance(op, AddMasses):
        new, why = _lower(c, op.l)
    elif isinstance(op, MultiplyPolySq):
        if not op.simple_zeros:
            raise PreconditionViolated("the polynomial factor must have simple zeros")
        new, why = _lower(c, op.l)
    elif isinstance(op, MoveMasses):
        new, why = _move(c, op.removed, op.added_outside)
    elif isinstance(op, RemoveMassAtSupportPoint):
        new, why = _move(c, 1, 0)
    elif isinstance(op, ChangeFinitelyManyWeights):
        new, why = apply_change_weights(c, op.finite), "finitely many weights changed: class unchanged"
    elif isinstance(op, FiniteRankPerturbation):
        new, why = apply_finite_rank(c), "finite-rank perturbation of the operator: class unchanged"
    elif isinstance(op, ToSigmaN):
        new, why = transfer_sigma_n(c), "measure of the truncated operator: same class"
    elif isinstance(op, RhoNFromJ):
        l = op.zeros_outside
        new, why = _lower(c, l)
        why = f"{l} zeros of pi_{op.n} off the spectrum; {why}"
    else:
        raise TypeError(f"not a modification record: {op!r}")
    return new, f"{name}: {why}"


def classify(d: MeasureDescriptor) -> Classification:
    """Fold the modification history over the base class, left to right.

    An infinite index is absorbing for every finite modification, including
    mass removal: removing mass keeps the measure determinate, and adding any
    finite number of points afterwards still cannot make it indeterminate.
    """
    c = d.base
    trace = []
    for op in d.ops:
        if c.kind is Kind.DET and c.index == INF:
            if isinstance(op, ChangeFinitelyManyWeights) and not op.finite:
                raise UnsupportedModification("changing infinitely many weights has no determined outcome")
            if isinstance(op, MultiplyPolySq) and not op.simple_zeros:
                raise PreconditionViolated("the polynomial factor must have simple zeros")
            trace.append(f"{op.kind}: infinite index absorbs finite modifications")
            continue
        c, why = _step(c, op)
        trace.append(why)
    return Classification(c, tuple(trace))
