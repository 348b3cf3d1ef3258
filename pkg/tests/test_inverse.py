import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import SQ2, jacobi_matrices, random_jacobi
from jacobikit.errors import (
    DegenerateSplit,
    IndexOutOfRange,
    InvalidData,
    NonPositiveTheta,
    NoSolution,
    ThetaOne,
    UnsupportedCase,
)
from jacobikit.green import green
from jacobikit.inverse import (
    InverseProblem,
    PerturbationParams,
    build_perturbed,
    forward_problem,
    gamma_of,
    green_from_spectra,
    green_measure_from_spectra,
    h_from,
    m_frak,
    recover_theta,
    solve_inverse,
    verify_solution,
)
from jacobikit.tridiag import JacobiMatrix, eigenvalues

S = [-SQ2, 0.0, SQ2]
ST = [-2 * SQ2, 0.0, 2 * SQ2]
Z = np.array([0.3 + 1j, -1.5 + 0.2j, 2 - 0.7j, 1j, 5j])


def test_build_perturbed_examples(free3):
    assert build_perturbed(free3, PerturbationParams(2, 2.0, 0.0)) == JacobiMatrix([0, 0, 0], [2, 2])
    J = random_jacobi(4, 5)
    assert build_perturbed(J, PerturbationParams(3, 1.0, 0.0)) == J
    assert build_perturbed(free3, PerturbationParams(2, 1.0, 5.0)) == JacobiMatrix([0, 5, 0], [1, 1])
    with pytest.raises(NonPositiveTheta):
        PerturbationParams(2, 0.0)
    with pytest.raises(IndexOutOfRange):
        build_perturbed(free3, PerturbationParams(4, 2.0))


def test_gamma_examples():
    assert gamma_of(2, 0) == 0
    assert gamma_of(2, 3) == pytest.approx(-4)
    with pytest.raises(ThetaOne):
        gamma_of(1, 1)
    assert h_from(2.0, gamma_of(2.0, 0.7)) == pytest.approx(0.7)


def test_spectral_ratio_examples():
    z = np.array([0.5 + 1j, 3j, -2 + 0.1j])
    assert np.allclose(m_frak(S, ST, z), (z**2 - 8) / (z**2 - 2))
    assert np.allclose(m_frak(S, S, z), 1)
    assert m_frak(S, ST, 0.0) == pytest.approx(4)


def test_recover_theta_examples():
    assert recover_theta(S, ST, 0.0) == pytest.approx(2, abs=1e-12)
    with pytest.raises(ThetaOne):
        recover_theta(S, S, 0.3)
    J = random_jacobi(11, 5)
    p = PerturbationParams(3, 1.5, 0.7)
    prob = forward_problem(J, p)
    assert abs(recover_theta(prob.S, prob.S_tilde, prob.gamma) - 1.5) <= 1e-8


def test_recover_theta_guards():
    with pytest.raises(InvalidData):
        # the ratio at gamma is negative
        recover_theta([0.0, 2.0], [1.0, 3.0], 0.5)
    with pytest.raises(UnsupportedCase):
        recover_theta([0.0, 2.0], [1.0, 3.0], 2.0)


def test_green_from_spectra_examples(free3):
    assert green_from_spectra(S, ST, 0.0, 1j) == pytest.approx(1j / 3)
    assert green(free3, 2, 1j) == pytest.approx(1j / 3)
    g = green_from_spectra(S, ST, 0.0, 1e3j)
    assert abs(1e3j * g + 1) <= 3e-3


def test_green_from_spectra_at_gamma():
    J = random_jacobi(11, 5)
    p = PerturbationParams(3, 1.5, 0.7)
    prob = forward_problem(J, p)
    at = green_from_spectra(prob.S, prob.S_tilde, prob.gamma, prob.gamma)
    near = green_from_spectra(prob.S, prob.S_tilde, prob.gamma, prob.gamma + np.array([1e-7, -1e-7, 1e-7j]))
    assert np.abs(near - at).max() <= 1e-6
    assert at == pytest.approx(green(J, 3, prob.gamma), abs=1e-10)


def test_green_measure_reports_common_points():
    G, common = green_measure_from_spectra(S, ST, 0.0)
    assert np.allclose(G.points, [-SQ2, SQ2]) and np.allclose(G.weights, [0.5, 0.5])
    assert np.allclose(common, [0.0])


def test_problem_validation():
    with pytest.raises(InvalidData):
        InverseProblem([0, 1], [0, 1, 2], 2, 0.5)
    with pytest.raises(IndexOutOfRange):
        InverseProblem([0, 1], [0.5, 1.5], 3, 0.5)


def test_sqrt2_example_needs_split(free3):
    prob = InverseProblem(S, ST, 2, 0.0)
    with pytest.raises(DegenerateSplit):
        solve_inverse(prob)
    sols = solve_inverse(prob, fractions=0.5)
    assert sols and all(s.report.accepted for s in sols)
    assert any(np.allclose(s.J.q, free3.q) and np.allclose(s.J.b, free3.b) for s in sols)
    assert all(s.theta == pytest.approx(2) and s.h == 0 for s in sols)


def test_seeded_instance_has_several_solutions():
    J = random_jacobi(11, 5)
    prob = forward_problem(J, PerturbationParams(3, 1.5, 0.7))
    sols = solve_inverse(prob)
    assert len({s.interior_selection for s in sols}) >= 2
    assert any(np.allclose(s.J.q, J.q, atol=1e-8) and np.allclose(s.J.b, J.b, atol=1e-8) for s in sols)
    shared = green_from_spectra(prob.S, prob.S_tilde, prob.gamma, Z)
    for s in sols:
        assert s.report.spec_err <= 1e-7 and s.report.spec_tilde_err <= 1e-7
        assert np.abs(green(s.J, 3, Z) - shared).max() <= 1e-7
    assert [s.interior_selection for s in sols] == sorted(s.interior_selection for s in sols)
    assert solve_inverse(prob, workers=4) == sols


def test_inconsistent_data_has_no_solution():
    J = random_jacobi(11, 5)
    prob = forward_problem(J, PerturbationParams(3, 1.5, 0.7))
    with pytest.raises(NoSolution):
        solve_inverse(InverseProblem(prob.S, prob.S_tilde + 10, 3, prob.gamma))


def test_verify_solution():
    J = random_jacobi(11, 5)
    p = PerturbationParams(3, 1.5, 0.7)
    prob = forward_problem(J, p)
    rep = verify_solution(J, p.theta, p.h, p.n, prob)
    assert rep.accepted and max(rep.spec_err, rep.spec_tilde_err, rep.gamma_err) <= 1e-9
    assert verify_solution(J, p.theta + 1e-3, p.h, p.n, prob).gamma_err > 1e-7
    with pytest.raises(ThetaOne):
        verify_solution(J, 1.0, p.h, p.n, prob)


def test_site_is_not_identifiable():
    J = random_jacobi(11, 5)
    prob = forward_problem(J, PerturbationParams(3, 1.5, 0.7))
    assert solve_inverse(prob.at_site(2)) and solve_inverse(prob.at_site(4))


@given(jacobi_matrices(n_min=2, n_max=7), st.data())
def test_forward_backward_consistency(J, data):
    n = data.draw(st.integers(2, J.N))
    theta = data.draw(st.floats(1.2, 3.0))
    h = data.draw(st.floats(-2, 2))
    lam = eigenvalues(J)
    gamma = gamma_of(theta, h)
    scale = max(1.0, np.abs(lam).max())
    p = PerturbationParams(n, theta, h)
    St = eigenvalues(build_perturbed(J, p))
    # keep away from exact or near coincidences, which the data cannot resolve
    if np.abs(lam - gamma).min() < 0.05 or np.abs(lam[:, None] - St[None, :]).min() < 1e-6 * scale:
        return
    assert abs(recover_theta(lam, St, gamma) - theta) <= 1e-8
    assert np.abs(green_from_spectra(lam, St, gamma, Z) - green(J, n, Z)).max() <= 1e-8


@given(jacobi_matrices(n_min=2, n_max=7), st.data())
def test_perturbation_rank(J, data):
    n = data.draw(st.integers(1, J.N))
    theta = data.draw(st.floats(0.2, 3.0))
    h = data.draw(st.floats(-2, 2).filter(lambda x: abs(x) > 1e-3))
    D = build_perturbed(J, PerturbationParams(n, theta, h)).dense() - J.dense()
    assert np.linalg.matrix_rank(D) <= 3
    D1 = build_perturbed(J, PerturbationParams(n, 1.0, h)).dense() - J.dense()
    assert np.linalg.matrix_rank(D1) == 1
    assert math.isfinite(float(D.sum()))
