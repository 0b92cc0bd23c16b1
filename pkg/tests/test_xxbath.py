import numpy as np
import pytest
from hypothesis import given, strategies as st

from cqec.numerics import DimensionError
from cqec.operators import bloch_state, vectorize, pauli_basis
from cqec.xxbath import (
    XXModel,
    asymptotic_d,
    asymptotic_fidelity_xx,
    build_xx_superoperator,
    first_return_time,
    fidelity_xx_1q,
    joint_initial_state,
    propagate_joint_1q,
    reduced_state_1q,
    reference_matrix_1q,
    simulate_xx_code,
    three_qubit_xx_short_time,
    xx_coefficients,
)

GRID = (0.0, 0.5, 1.0, 4.0, 8.0, 8.001, 12.0)
T = np.linspace(0.0, 20.0, 81)


@given(st.floats(0.1, 3), st.floats(0, 5), st.floats(0, 5))
def test_generator_matches_transcribed_matrix(alpha, kappa, eta):
    derived = build_xx_superoperator(XXModel(alpha, kappa, eta))
    assert np.max(np.abs(derived - reference_matrix_1q(alpha, kappa, eta))) <= 1e-13


def test_sparse_and_dense_generators_share_spectrum():
    m = XXModel(1.0, 1.5, 0.5)
    pauli = np.linalg.eigvals(build_xx_superoperator(m))
    comp = np.linalg.eigvals(build_xx_superoperator(m, sparse=True).toarray())
    assert np.max(np.min(np.abs(pauli[:, None] - comp[None, :]), axis=1)) <= 1e-10


@pytest.mark.parametrize("kappa", GRID)
@pytest.mark.parametrize("eta", GRID)
def test_closed_form_reduced_state_vs_oracle(kappa, eta):
    m = XXModel(1.0, kappa, eta)
    start = bloch_state(0.3, -0.4, 0.5)
    oracle = propagate_joint_1q(m, start, T)
    closed = reduced_state_1q(m, vectorize(start, pauli_basis(1)), T)
    assert np.max(np.abs(oracle - closed)) <= 1e-8


@pytest.mark.parametrize("eta", [0.0, 1.0, 4.0])
def test_regime_continuity(eta):
    # F is smooth in kappa across the critical point, so the gap is dF/dkappa * 2 eps
    crit = fidelity_xx_1q(1.0, 8.0, eta, T)
    gaps = []
    for eps in (1e-4, 1e-5, 1e-6):
        lo = fidelity_xx_1q(1.0, 8.0 - eps, eta, T)
        hi = fidelity_xx_1q(1.0, 8.0 + eps, eta, T)
        # the critical branch is the two-sided limit, exact to second order
        assert np.max(np.abs(0.5 * (lo + hi) - crit)) < 1e-10
        gaps.append(np.max(np.abs(lo - hi)))
    assert gaps[2] < 1e-7
    assert gaps[0] / gaps[1] == pytest.approx(10, rel=1e-2)
    lo = fidelity_xx_1q(1.0, 8.0 - 1e-9, eta, T)
    hi = fidelity_xx_1q(1.0, 8.0 + 1e-9, eta, T)
    assert np.max(np.abs(lo - hi)) < 1e-10


@given(st.floats(0.1, 3), st.floats(0, 10), st.floats(0, 10), st.floats(1e-3, 10))
def test_asymptote_increases_with_correction(alpha, kappa, eta, step):
    assert asymptotic_fidelity_xx(alpha, kappa, eta + step) > asymptotic_fidelity_xx(alpha, kappa, eta)


@pytest.mark.parametrize("kappa,eta", [(1.0, 0.5), (12.0, 1.0), (0.0, 2.0)])
def test_long_time_limits(kappa, eta):
    c, d = xx_coefficients(1.0, kappa, eta, 500.0)
    assert abs(c) <= 1e-12
    assert abs(d - asymptotic_d(1.0, kappa, eta)) <= 1e-10
    assert abs(fidelity_xx_1q(1.0, kappa, eta, 500.0) - asymptotic_fidelity_xx(1.0, kappa, eta)) <= 1e-10


def test_regime_label():
    assert XXModel(1.0, 7.9, 0.0).regime == "non-markovian"
    assert XXModel(1.0, 8.0, 0.0).regime == "markovian"


def test_three_qubit_uncorrected_is_cos_sixth():
    t = np.linspace(0, np.pi, 41)
    tr = simulate_xx_code(XXModel(1.0, 0.0, 0.0, n=3), t_grid=t)
    assert np.max(np.abs(tr.fidelity - np.cos(t) ** 6)) <= 1e-8


def test_three_qubit_trace_preserved():
    t = np.linspace(0, 5, 51)
    tr = simulate_xx_code(XXModel(1.0, 1.0, 2.0, n=3), t_grid=t)
    assert np.max(np.abs(tr.trace - 1)) <= 1e-8
    assert np.all(tr.fidelity <= 1 + 1e-9)


@pytest.mark.parametrize("kappa,eta", [(1.0, 0.0), (0.0, 1.0), (2.0, 1.0)])
def test_three_qubit_short_time_series(kappa, eta):
    t = np.linspace(0, 0.02, 21)
    tr = simulate_xx_code(XXModel(1.0, kappa, eta, n=3), t_grid=t, rel_tol=1e-13, abs_tol=1e-15)
    # remaining error is fourth order
    assert np.max(np.abs(tr.fidelity - three_qubit_xx_short_time(1.0, kappa, eta, t))) <= 20 * 0.02**4


def test_first_return_time():
    for alpha in (1.0, 1.7):
        t = first_return_time(XXModel(alpha, 0.0, 0.0, n=3), 0.5 / alpha, 3.6 / alpha)
        assert abs(t - np.pi / alpha) <= 1e-8


def test_one_qubit_joint_integration_matches_exponential():
    from cqec.xxbath import integrate_joint
    from cqec.operators import partial_trace

    m = XXModel(1.0, 1.0, 0.5)
    t = np.linspace(0, 3, 7)
    rhos = integrate_joint(m, joint_initial_state(bloch_state(0, 0, 1)), t)
    z = np.array([np.real(np.trace(np.diag([1, -1]) @ partial_trace(r, [0]))) for r in rhos])
    assert np.allclose(z, propagate_joint_1q(m, bloch_state(0, 0, 1), t)[:, 3] * 2, atol=1e-8)


def test_validation():
    with pytest.raises(ValueError):
        XXModel(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        XXModel(1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        XXModel(1.0, 1.0, 1.0, n=2)
    with pytest.raises(ValueError):
        xx_coefficients(1.0, 1.0, 1.0, -1.0)
    with pytest.raises(DimensionError):
        reduced_state_1q(XXModel(1.0, 1.0, 1.0, n=3), np.zeros(4), 1.0)
