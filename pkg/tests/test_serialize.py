import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import jacobi_matrices, measures, random_jacobi
from jacobikit.config import DEFAULT, ToleranceConfig
from jacobikit.determinacy import AddMasses, DetClass, MeasureDescriptor, MoveMasses, classify
from jacobikit.green import decompose, neg_inverse
from jacobikit.inverse import InverseProblem, PerturbationParams, forward_problem, solve_inverse
from jacobikit.measures import DiscreteMeasure
from jacobikit.serialize import complex_from_dict, complex_to_dict, dump_file, dumps, load_file, loads
from jacobikit.tridiag import CyclicResult, EigenSystem, JacobiMatrix, eigensystem


def round_trip(obj):
    return loads(type(obj), dumps(obj))


@given(jacobi_matrices())
def test_matrix_and_eigensystem_round_trip(J):
    assert round_trip(J) == J
    es = eigensystem(J)
    assert round_trip(es) == es


@given(measures())
def test_measure_and_rational_round_trip(rho):
    assert round_trip(rho) == rho
    F = neg_inverse(rho)
    assert round_trip(F) == F


@given(st.complex_numbers(allow_nan=False, allow_infinity=False))
def test_complex_round_trip(z):
    assert complex_from_dict(json.loads(json.dumps(complex_to_dict(z)))) == z


def test_domain_round_trips(tmp_path):
    J = random_jacobi(11, 5)
    d = decompose(J, 3)
    assert round_trip(d) == d
    prob = forward_problem(J, PerturbationParams(3, 1.5, 0.7))
    assert round_trip(prob) == prob
    sol = solve_inverse(prob)[0]
    assert round_trip(sol) == sol
    desc = MeasureDescriptor(DetClass.det(2), (AddMasses(1), MoveMasses(2, 1)))
    assert round_trip(desc) == desc
    cls = classify(desc)
    assert round_trip(cls) == cls
    assert round_trip(CyclicResult(True, 3)) == CyclicResult(True, 3)
    cfg = DEFAULT.replace(tol_match=1e-10)
    assert round_trip(cfg) == cfg
    dump_file(J, tmp_path / "J.json")
    assert load_file(JacobiMatrix, tmp_path / "J.json") == J


def test_json_shapes():
    assert json.loads(dumps(JacobiMatrix([0, 0], [1]))) == {"q": [0.0, 0.0], "b": [1.0]}
    assert json.loads(dumps(1 + 2j)) == {"re": 1.0, "im": 2.0}
    prob = InverseProblem([0.0, 1.0], [0.5, 1.5], 2, 0.25)
    assert set(json.loads(dumps(prob))) == {"S", "S_tilde", "n", "gamma"}
    assert json.loads(dumps(DiscreteMeasure([0], [1]))) == {"points": [0.0], "weights": [1.0]}


def test_floats_are_lossless():
    x = 0.1 + 0.2
    J = JacobiMatrix([x, np.nextafter(1.0, 2.0)], [np.pi])
    assert loads(JacobiMatrix, dumps(J)) == J


def test_unknown_type_rejected():
    with pytest.raises(TypeError):
        dumps(object())
    with pytest.raises(ValueError):
        ToleranceConfig.from_dict({"tol_bogus": 1.0})
    with pytest.raises(ValueError):
        ToleranceConfig(tol_identity=1e-14)
