import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SQ2, jacobi_matrices, measures
from jacobikit.errors import BadSelection, DegenerateMeasure, IndexOutOfRange, PoleEvaluation
from jacobikit.green import (
    HerglotzRational,
    decompose,
    green,
    green_to_jacobi,
    interior_selections,
    m_minus,
    m_plus,
    neg_inverse,
    sigma_mu,
    verify_gkk,
    weyl_m,
)
from jacobikit.measures import DiscreteMeasure, borel_transform, favard, push_forward_pi_sq, spectral_measure
from jacobikit.tridiag import JacobiMatrix, truncate_plus

Z = np.array([0.3 + 1j, -1.5 + 0.2j, 2 - 0.7j, 1j])


def test_weyl_examples(swap2, free3):
    assert weyl_m(JacobiMatrix([2], []), 0) == pytest.approx(0.5)
    assert weyl_m(swap2, 2) == pytest.approx(-2 / 3)
    z = 1j
    want = 0.25 / (-SQ2 - z) + 0.5 / (-z) + 0.25 / (SQ2 - z)
    assert weyl_m(free3, z) == pytest.approx(want)


def test_green_examples(swap2, free3):
    assert green(free3, 2, 1j) == pytest.approx(1j / 3)
    J = JacobiMatrix([0.3, -1, 0.5], [0.7, 1.4])
    assert np.allclose(green(J, 1, Z), weyl_m(J, Z))
    assert np.allclose(green(swap2, 2, Z), Z / (1 - Z * Z))


def test_green_removable_point(free3):
    # pi_2(0) = 0: the pole of the resolvent at 0 cancels in the second entry
    assert abs(green(free3, 2, 0.0)) <= 1e-14
    with pytest.raises(PoleEvaluation):
        green(free3, 1, 0.0)


def test_block_weyl_examples(free3):
    z = 0.7 + 0.4j
    assert m_minus(free3, 2, z) == pytest.approx(-1 / z)
    assert m_plus(free3, 2, z) == pytest.approx(-1 / z)
    assert m_minus(free3, 1, z) == 0
    with pytest.raises(IndexOutOfRange):
        m_plus(free3, 4, z)


def test_gkk_examples(free3):
    assert verify_gkk(free3, 2, [1j]) <= 1e-12
    assert verify_gkk(JacobiMatrix([0.3, -1, 0.5], [0.7, 1.4]), 1, Z) <= 1e-10
    assert verify_gkk(JacobiMatrix([2], []), 1, [0]) == 0


def test_sigma_mu_examples(free3):
    sigma, mu = sigma_mu(free3, 2)
    assert sigma == DiscreteMeasure([0], [1]) and mu == DiscreteMeasure([0], [1])
    J = JacobiMatrix([1, 2, 3, 4], [1, 1, 1])
    sigma, mu = sigma_mu(J, 1)
    assert mu.size == 0 and np.allclose(sigma.points, spectral_measure(truncate_plus(J, 1)).points)
    sigma, _ = sigma_mu(J, 2)
    ref = spectral_measure(JacobiMatrix([3, 4], [1]))
    assert np.allclose(sigma.points, ref.points) and np.allclose(sigma.weights, ref.weights)


def test_decomposition_reassembles(free3):
    d = decompose(free3, 2)
    assert d.b_minus_sq == 1 and d.b_plus_sq == 1 and d.q_n == 0
    assert d.green(1j) == pytest.approx(1j / 3)


def test_neg_inverse_examples():
    F = neg_inverse(DiscreteMeasure([-SQ2, SQ2], [0.5, 0.5]))
    assert F.shift == pytest.approx(0) and np.allclose(F.poles, [0]) and np.allclose(F.residues, [2])
    F = neg_inverse(DiscreteMeasure([2], [1]))
    assert F.shift == -2 and F.poles.size == 0
    F = neg_inverse(DiscreteMeasure([-1, 1], [0.5, 0.5]))
    assert np.allclose([F.shift, *F.poles, *F.residues], [0, 0, 1], atol=1e-12)
    with pytest.raises(DegenerateMeasure):
        neg_inverse(DiscreteMeasure.empty())


def test_herglotz_rational_guard():
    with pytest.raises(ValueError):
        HerglotzRational(0, [0], [-1])


def test_rebuild_examples(free3):
    rho = DiscreteMeasure([-1, 0.5, 2], [0.2, 0.5, 0.3])
    K, ref = green_to_jacobi(rho, 1), favard(rho)
    assert np.allclose(K.q, ref.q, atol=1e-10) and np.allclose(K.b, ref.b, atol=1e-10)
    G = DiscreteMeasure([-SQ2, SQ2], [0.5, 0.5])
    # the eigenvalue 0 is shared by both blocks of the free matrix; splitting
    # the residue at pole 0 evenly reinstates it
    K = green_to_jacobi(G, 2, [0], split={0: 0.5})
    assert K.N == 3 and K.q[1] == pytest.approx(0) and K.b[0] ** 2 + K.b[1] ** 2 == pytest.approx(2)
    assert np.allclose(K.q, free3.q) and np.allclose(K.b, free3.b)
    assert green(K, 2, 1j) == pytest.approx(1j / 3)
    K2 = green_to_jacobi(G, 2, [0])
    assert K2.N == 2 and green(K2, 2, 1j) == pytest.approx(1j / 3)


def test_rebuild_bad_selection():
    G = DiscreteMeasure([-1, 0, 1], [0.3, 0.4, 0.3])
    with pytest.raises(BadSelection):
        green_to_jacobi(G, 2, [])
    with pytest.raises(BadSelection):
        green_to_jacobi(G, 2, [5])
    with pytest.raises(BadSelection):
        green_to_jacobi(G, 3, [0, 0])
    with pytest.raises(BadSelection):
        green_to_jacobi(G, 2, [0], split={1: 0.5})
    with pytest.raises(BadSelection):
        green_to_jacobi(G, 2, [0], split={0: 1.0})


def test_rebuild_all_interior_leaves_empty_trailing_block():
    G = DiscreteMeasure([-1, 0, 1], [0.3, 0.4, 0.3])
    K = green_to_jacobi(G, 3, [0, 1])
    assert K.N == 3 and np.allclose(green(K, 3, Z), borel_transform(G, Z))


def test_nonuniqueness_witness():
    rng = np.random.default_rng(1)
    G = DiscreteMeasure(np.sort(rng.uniform(-2, 2, 5)), np.full(5, 0.2))
    Ja = green_to_jacobi(G, 3, [0, 1])
    Jb = green_to_jacobi(G, 3, [1, 3])
    assert max(np.abs(Ja.q - Jb.q).max(), np.abs(Ja.b - Jb.b).max()) > 1e-3
    assert np.abs(green(Ja, 3, Z) - green(Jb, 3, Z)).max() <= 1e-7


def test_interior_selections_order_and_cap():
    assert interior_selections(range(4), 2, 64) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    capped = interior_selections(range(12), 5, 10, seed=3)
    assert len(capped) == 10 and capped == sorted(capped)
    assert capped == interior_selections(range(12), 5, 10, seed=3)


@given(jacobi_matrices(), st.data())
def test_gkk_identity(J, data):
    n = data.draw(st.integers(1, J.N))
    assert verify_gkk(J, n, Z) <= 1e-8


@given(jacobi_matrices(), st.data())
def test_green_asymptotics(J, data):
    n = data.draw(st.integers(1, J.N))
    c_fit = 1e3 * abs(1e3j * green(J, n, 1e3j) + 1)
    c_val = 1e4 * abs(1e4j * green(J, n, 1e4j) + 1)
    assert c_val <= 2 * c_fit + 1e-9


@given(jacobi_matrices(), st.data())
def test_green_herglotz(J, data):
    n = data.draw(st.integers(1, J.N))
    z = data.draw(st.complex_numbers(max_magnitude=10).filter(lambda w: w.imag > 1e-3))
    assert green(J, n, z).imag > 0


@given(measures(n_min=2))
def test_neg_inverse_interlaces(mu):
    F = neg_inverse(mu)
    assert F.poles.size == mu.size - 1
    assert np.all((F.poles > mu.points[:-1]) & (F.poles < mu.points[1:]))
    assert np.abs(F(Z) * borel_transform(mu, Z) + 1).max() <= 1e-9


@given(measures(n_min=1, n_max=7), st.data())
def test_rebuild_reproduces_green(G, data):
    l = data.draw(st.integers(1, G.size))
    interior = sorted(data.draw(st.lists(st.sampled_from(range(max(G.size - 1, 1))),
                                          min_size=l - 1, max_size=l - 1, unique=True))) if l > 1 else []
    K = green_to_jacobi(G, l, interior)
    assert K.N == G.size
    assert np.abs(green(K, l, Z) - borel_transform(G, Z)).max() <= 1e-7


@given(jacobi_matrices(n_min=2), st.data())
def test_rebuild_from_truncated_blocks(J, data):
    n = data.draw(st.integers(1, J.N))
    d = decompose(J, n)
    assert np.abs(d.green(Z) - green(J, n, Z)).max() <= 1e-9
    G = push_forward_pi_sq(J, n)
    K = green_to_jacobi(G, min(n, G.size), list(range(min(n, G.size) - 1)))
    assert np.abs(green(K, min(n, G.size), Z) - green(J, n, Z)).max() <= 1e-7
