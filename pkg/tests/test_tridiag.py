import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.polynomial import Polynomial

from conftest import SQ2, jacobi_matrices, random_jacobi
from jacobikit.errors import IndexOutOfRange, LengthMismatch, NonPositiveOffDiagonal, PoleEvaluation
from jacobikit.tridiag import (
    JacobiMatrix,
    apply,
    bisection_eigenvalues,
    build_jacobi,
    cyclic_test,
    eigensystem,
    eigenvalues,
    first_kind_poly,
    first_kind_polys,
    first_kind_vectors,
    first_kind_zeros_bisection,
    hausdorff,
    match_intersection,
    poly_zeros,
    resolvent_entry,
    sturm_count,
    truncate_minus,
    truncate_plus,
    zero_on_spectrum,
)


def test_build_small_cases():
    assert build_jacobi([2], []).dense().tolist() == [[2.0]]
    assert build_jacobi([0, 0], [1]).dense().tolist() == [[0, 1], [1, 0]]
    with pytest.raises(NonPositiveOffDiagonal):
        build_jacobi([0, 0], [0])
    with pytest.raises(LengthMismatch):
        build_jacobi([0, 0, 0], [1])
    with pytest.raises(LengthMismatch):
        build_jacobi([], [])


def test_matrix_is_immutable_and_hashable(free3):
    with pytest.raises(ValueError):
        free3.q[0] = 1.0
    assert hash(free3) == hash(JacobiMatrix([0, 0, 0], [1, 1]))
    assert free3.reversed() == free3


def test_apply(swap2, free3):
    assert apply(swap2, [1, 0]).tolist() == [0, 1]
    assert apply(JacobiMatrix([2], []), [3]).tolist() == [6]
    assert apply(free3, [1, 1, 1]).tolist() == [1, 2, 1]
    with pytest.raises(LengthMismatch):
        apply(free3, [1, 1])


def test_eigensystem_examples(swap2, free3):
    es = eigensystem(swap2)
    assert np.allclose(es.values, [-1, 1])
    assert np.allclose(es.vectors, [[1 / SQ2, -1 / SQ2], [1 / SQ2, 1 / SQ2]])
    assert np.allclose(eigensystem(free3).values, [-SQ2, 0, SQ2])
    one = eigensystem(JacobiMatrix([2], []))
    assert one.values.tolist() == [2.0] and one.vectors.tolist() == [[1.0]]


def test_first_kind_polys_examples(free3):
    z = 0.3 - 1.7j
    assert np.allclose(first_kind_polys(free3, z, 3), [1, z, z * z - 1])
    assert first_kind_polys(free3, z, 1).tolist() == [1]
    assert np.allclose(first_kind_polys(JacobiMatrix([1, 0], [2]), 3, 2), [1, 1])
    assert np.allclose(first_kind_poly(free3, 3).coef, [-1, 0, 1])


def test_truncations(free3):
    assert truncate_minus(free3, 2) == JacobiMatrix([0], [])
    assert truncate_plus(free3, 2) == JacobiMatrix([0], [])
    assert truncate_minus(free3, 3) == JacobiMatrix([0, 0], [1])
    J4 = JacobiMatrix([1, 2, 3, 4], [1, 1, 1])
    assert truncate_plus(J4, 2) == JacobiMatrix([3, 4], [1])
    with pytest.raises(IndexOutOfRange):
        truncate_minus(free3, 1)
    with pytest.raises(IndexOutOfRange):
        truncate_plus(free3, 3)


def test_poly_zeros_examples(free3):
    assert np.allclose(poly_zeros(free3, 3), [-1, 1])
    J = random_jacobi(3, 6)
    assert np.allclose(poly_zeros(J, 2), [J.q[0]])
    assert np.abs(poly_zeros(J, 4) - first_kind_zeros_bisection(J, 4)).max() <= 1e-9
    # independent route: roots of the coefficient expansion
    assert np.abs(np.sort(first_kind_poly(J, 4).roots().real) - poly_zeros(J, 4)).max() <= 1e-9


def test_cyclic_examples(free3):
    r = cyclic_test(free3, [-5, 1])
    assert r.cyclic and r.krylov_rank == 3
    r = cyclic_test(free3, [0, 1])
    assert not r.cyclic and r.krylov_rank == 2
    assert cyclic_test(random_jacobi(0, 5), [1]).cyclic


def test_cyclic_annihilating_polynomial(free3):
    # r vanishes on the whole spectrum, so r(J) e_1 = 0
    r = Polynomial.fromroots(eigenvalues(free3))
    res = cyclic_test(free3, r)
    assert not res.cyclic and res.krylov_rank == 0


def test_resolvent_pole(free3):
    with pytest.raises(PoleEvaluation):
        resolvent_entry(free3, 1, SQ2)
    assert resolvent_entry(JacobiMatrix([2], []), 1, 0) == pytest.approx(0.5)


def test_sturm_count(free3):
    assert [sturm_count(free3.q, free3.b, x) for x in (-2, -1, 1, 2)] == [0, 1, 2, 3]


def test_set_helpers():
    assert match_intersection([0, 1, 2], [1 + 1e-12, 5], 1e-9).tolist() == [1]
    assert hausdorff([0, 1], [0, 1.5]) == pytest.approx(0.5)
    assert hausdorff([], []) == 0.0


@given(jacobi_matrices())
def test_eigensystem_properties(J):
    es = eigensystem(J)
    scale = max(1.0, np.abs(es.values).max())
    assert np.all(np.diff(es.values) > 0)
    V = es.vectors.T
    assert np.abs(J.dense() @ V - V * es.values).max() <= 1e-12 * scale * 10
    assert np.abs(V.T @ V - np.eye(J.N)).max() <= 1e-12 * 10
    assert np.abs(es.values - bisection_eigenvalues(J)).max() <= 1e-10 * scale
    assert np.all(es.vectors[:, 0] > 0)


@given(jacobi_matrices(n_min=2))
def test_zeros_equal_leading_block_spectrum(J):
    lam = eigenvalues(J)
    for n in range(2, J.N + 1):
        z = poly_zeros(J, n)
        assert np.abs(z - first_kind_zeros_bisection(J, n)).max() <= 1e-9 * max(1.0, np.abs(z).max())
        assert lam[0] < z[0] and z[-1] < lam[-1]


@given(jacobi_matrices())
def test_unit_vectors_from_polynomials(J):
    assert np.abs(first_kind_vectors(J) - np.eye(J.N)).max() <= 1e-8


@given(jacobi_matrices(), st.floats(-3, 3), st.floats(0.1, 3))
def test_resolvent_matches_dense(J, x, y):
    z = complex(x, y)
    M = np.linalg.inv(J.dense() - z * np.eye(J.N))
    for k in range(1, J.N + 1):
        assert abs(resolvent_entry(J, k, z) - M[k - 1, k - 1]) <= 1e-10


@given(jacobi_matrices(n_min=2, n_max=6), st.data())
def test_cyclic_iff_no_zero_on_spectrum(J, data):
    lam = eigenvalues(J)
    picks = data.draw(st.lists(st.sampled_from(range(J.N)), unique=True, max_size=3))
    extra = data.draw(st.lists(st.floats(5, 9), unique=True, max_size=2))
    roots = [lam[i] for i in picks] + extra
    r = Polynomial.fromroots(roots) if roots else Polynomial([1.0])
    res = cyclic_test(J, r)
    assert res.cyclic == (not zero_on_spectrum(J, r))
    assert res.krylov_rank == J.N - len(picks)
