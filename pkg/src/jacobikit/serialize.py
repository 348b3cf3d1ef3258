"""JSON encoding of the domain types.

Floats are written with Python's shortest round-trip ``repr``, so
``decode(encode(x)) == x`` holds bit for bit.  Complex numbers are
``{"re": x, "im": y}``.  Non-finite floats are rejected rather than written
as the non-standard ``NaN``/``Infinity`` tokens, except inside verification
reports where an infinite error is meaningful.
"""

from __future__ import annotations

import json
from functools import singledispatch

import numpy as np

from .config import ToleranceConfig
from .determinacy import Classification, DetClass, MeasureDescriptor
from .green import GreenDecomposition, HerglotzRational
from .inverse import InverseProblem, InverseSolution, VerificationReport
from .measures import DiscreteMeasure
from .tridiag import CyclicResult, EigenSystem, JacobiMatrix


def complex_to_dict(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def complex_from_dict(d) -> complex:
    return complex(float(d["re"]), float(d["im"]))


def _floats(arr) -> list:
    return [float(x) for x in np.asarray(arr, dtype=float).reshape(-1)]


def _finite(value: float) -> float | str:
    return value if np.isfinite(value) else ("inf" if value > 0 else "-inf" if value < 0 else "nan")


@singledispatch
def to_jsonable(obj):
    raise TypeError(f"no JSON encoding for {type(obj).__name__}")


@to_jsonable.register
def _(obj: JacobiMatrix):
    return {"q": _floats(obj.q), "b": _floats(obj.b)}


@to_jsonable.register
def _(obj: EigenSystem):
    return {"values": _floats(obj.values), "vectors": [_floats(v) for v in obj.vectors]}


@to_jsonable.register
def _(obj: DiscreteMeasure):
    return {"points": _floats(obj.points), "weights": _floats(obj.weights)}


@to_jsonable.register
def _(obj: HerglotzRational):
    return {"shift": float(obj.shift), "poles": _floats(obj.poles), "residues": _floats(obj.residues)}


@to_jsonable.register
def _(obj: GreenDecomposition):
    return {
        "n": obj.n,
        "q_n": float(obj.q_n),
        "b_minus_sq": float(obj.b_minus_sq),
        "b_plus_sq": float(obj.b_plus_sq),
        "mu": to_jsonable(obj.mu),
        "sigma": to_jsonable(obj.sigma),
    }


@to_jsonable.register
def _(obj: InverseProblem):
    return {"S": _floats(obj.S), "S_tilde": _floats(obj.S_tilde), "n": obj.n, "gamma": float(obj.gamma)}


@to_jsonable.register
def _(obj: VerificationReport):
    return {
        "spec_err": _finite(obj.spec_err),
        "spec_tilde_err": _finite(obj.spec_tilde_err),
        "gamma_err": _finite(obj.gamma_err),
        "accepted": obj.accepted,
    }


@to_jsonable.register
def _(obj: InverseSolution):
    return {
        "J": to_jsonable(obj.J),
        "theta": float(obj.theta),
        "h": float(obj.h),
        "interior_selection": list(obj.interior_selection),
        "report": to_jsonable(obj.report),
    }


@to_jsonable.register
def _(obj: MeasureDescriptor):
    return obj.to_dict()


@to_jsonable.register
def _(obj: DetClass):
    return str(obj)


@to_jsonable.register
def _(obj: Classification):
    return {"result": str(obj.result), "trace": list(obj.trace)}


@to_jsonable.register
def _(obj: CyclicResult):
    return {"cyclic": obj.cyclic, "krylov_rank": obj.krylov_rank}


@to_jsonable.register
def _(obj: ToleranceConfig):
    return obj.to_dict()


@to_jsonable.register
def _(obj: complex):
    return complex_to_dict(obj)


@to_jsonable.register(np.complexfloating)
def _(obj):
    return complex_to_dict(obj)


@to_jsonable.register(np.floating)
def _(obj):
    return float(obj)


@to_jsonable.register(np.integer)
def _(obj):
    return int(obj)


@to_jsonable.register(np.bool_)
def _(obj):
    return bool(obj)


@to_jsonable.register(np.ndarray)
def _(obj):
    return [to_jsonable(x) for x in obj.tolist()] if np.iscomplexobj(obj) else obj.tolist()


@to_jsonable.register(list)
@to_jsonable.register(tuple)
def _(obj):
    return [to_jsonable(x) for x in obj]


@to_jsonable.register(dict)
def _(obj):
    return {str(k): to_jsonable(v) for k, v in obj.items()}


for _t in (int, float, str, bool, type(None)):
    to_jsonable.register(_t, lambda obj: obj)


def _num(x) -> float:
    return float("inf") if x == "inf" else float(x)


DECODERS = {
    JacobiMatrix: lambda d: JacobiMatrix(d["q"], d["b"]),
    EigenSystem: lambda d: EigenSystem(np.array(d["values"], dtype=float),
                                       np.array(d["vectors"], dtype=float).reshape(len(d["values"]), -1)),
    DiscreteMeasure: lambda d: DiscreteMeasure(d["points"], d["weights"]),
    HerglotzRational: lambda d: HerglotzRational(float(d["shift"]), d["poles"], d["residues"]),
    GreenDecomposition: lambda d: GreenDecomposition(
        int(d["n"]), float(d["q_n"]), float(d["b_minus_sq"]), float(d["b_plus_sq"]),
        from_jsonable(DiscreteMeasure, d["mu"]), from_jsonable(DiscreteMeasure, d["sigma"])),
    InverseProblem: lambda d: InverseProblem(d["S"], d["S_tilde"], int(d["n"]), float(d["gamma"])),
    VerificationReport: lambda d: VerificationReport(
        _num(d["spec_err"]), _num(d["spec_tilde_err"]), _num(d["gamma_err"]), bool(d["accepted"])),
    InverseSolution: lambda d: InverseSolution(
        from_jsonable(JacobiMatrix, d["J"]), float(d["theta"]), float(d["h"]),
        tuple(int(i) for i in d["interior_selection"]),
        from_jsonable(VerificationReport, d["report"])),
    MeasureDescriptor: MeasureDescriptor.from_dict,
    DetClass: DetClass.parse,
    Classification: lambda d: Classification(DetClass.parse(d["result"]), tuple(d["trace"])),
    CyclicResult: lambda d: CyclicResult(bool(d["cyclic"]), int(d["krylov_rank"])),
    ToleranceConfig: ToleranceConfig.from_dict,
    complex: complex_from_dict,
}


def from_jsonable(cls, data):
    try:
        decode = DECODERS[cls]
    except KeyError:
        raise TypeError(f"no JSON decoding for {cls.__name__}") from None
    return decode(data)


def dumps(obj, indent: int | None = None) -> str:
    return json.dumps(to_jsonable(obj), indent=indent, allow_nan=False)


def loads(cls, text: str):
    return from_jsonable(cls, json.loads(text))


def dump_file(obj, path, indent: int | None = 2):
    with open(path, "w") as fh:
        fh.write(dumps(obj, indent=indent))
        fh.write("\n")


def load_file(cls, path):
    with open(path) as fh:
        return loads(cls, fh.read())
