import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dngates import spectral
from dngates.group import GroupError, IrrepLabel, elements, irrep_labels

ORDERS = [4, 8, 16]
BETAS = [0.0, 0.5, 1.0, 2.0]


@pytest.mark.parametrize("N", [2, 4, 8, 16, 32])
def test_fourier_unitary_and_orthogonal_rows(N):
    F = spectral.fourier_matrix(N)
    assert np.max(np.abs(F @ F.conj().T - np.eye(2 * N))) < 1e-12


@pytest.mark.parametrize("N", ORDERS)
def test_trivial_row_is_uniform(N):
    F = spectral.fourier_matrix(N)
    assert np.allclose(F[0], 1 / np.sqrt(2 * N))


@pytest.mark.parametrize("N", ORDERS)
def test_character_sums_vanish(N):
    kp = np.arange(N)
    for l in range(1, N // 2):
        assert abs(np.sum(np.cos(2 * np.pi * l * kp / N))) < 1e-12
        assert abs(np.sum(np.sin(2 * np.pi * l * kp / N))) < 1e-12


@pytest.mark.parametrize("N", ORDERS)
def test_shift_invariance(N):
    kp = np.arange(N)
    for l in range(1, N // 2):
        for sign in (1, -1):
            base = np.sum(np.exp(sign * 2j * np.pi * l * kp / N))
            for k in range(N):
                assert abs(np.sum(np.exp(sign * 2j * np.pi * l * (kp + k) / N)) - base) < 1e-12


@pytest.mark.parametrize("N", [2, 4, 8, 16])
def test_m_matrix_two_ways(N):
    M = spectral.m_matrix(N)
    assert np.max(np.abs(M - spectral.m_matrix_formula(N))) < 1e-12
    assert np.allclose(M, M.T)
    assert np.allclose(np.diag(M), 2)
    assert np.allclose(M[:N, N:], 0) and np.allclose(M[N:, :N], 0)


def test_m_matrix_example():
    assert abs(spectral.m_matrix(4)[0, 1]) < 1e-15


def test_transfer_matrix_examples():
    assert np.allclose(spectral.transfer_matrix(8, 0.0), 1)
    T = spectral.transfer_matrix(4, 1.0)
    assert abs(T[0, 1] - 1) < 1e-15
    assert np.allclose(T, T.T)
    assert T.max() <= np.exp(2) + 1e-12 and T.min() > 0
    with pytest.raises(ValueError):
        spectral.transfer_matrix(4, float("inf"))


@pytest.mark.parametrize("N", ORDERS)
@pytest.mark.parametrize("beta", BETAS)
def test_fourier_diagonalizes_transfer(N, beta):
    d = spectral.diagonalize_via_fourier(N, beta)
    assert d.offdiag_max < 1e-10 * d.scale
    cf = spectral.closed_form_diagonal(N, beta)
    assert np.max(np.abs(d.diagonal - cf)) < 1e-9 * d.scale


@pytest.mark.parametrize("N", [2, 4, 8, 16])
def test_beta_zero_anchor(N):
    expected = np.zeros(2 * N)
    expected[0] = 2 * N
    d = spectral.diagonalize_via_fourier(N, 0.0)
    assert d.offdiag_max < 1e-12
    assert np.max(np.abs(d.diagonal - expected)) < 1e-12
    assert np.max(np.abs(spectral.closed_form_diagonal(N, 0.0) - expected)) < 1e-12


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(ORDERS), st.floats(-3, 3))
def test_closed_form_random_beta(N, beta):
    d = spectral.diagonalize_via_fourier(N, beta)
    assert np.max(np.abs(d.diagonal - spectral.closed_form_diagonal(N, beta))) < 1e-9 * d.scale


@pytest.mark.parametrize("N", ORDERS)
def test_squared_alternating_sum_is_wrong(N):
    """Only the unsquared C/D eigenvalue matches the numerics once beta > 0."""
    d = spectral.diagonalize_via_fourier(N, 1.0)
    sq = spectral.closed_form_diagonal(N, 1.0, squared_cd=True)
    rows = [spectral.label_index(N, IrrepLabel(k)) for k in "CD"]
    # fails the 1e-9 relative acceptance tolerance by orders of magnitude
    assert np.max(np.abs(d.diagonal[rows] - sq[rows])) > 1e-6 * d.scale


@pytest.mark.parametrize("N", [4, 8])
def test_kinetic_step(N):
    assert np.allclose(spectral.kinetic_step(N, 0.0), np.eye(2 * N))
    U = spectral.kinetic_step(N, 0.7)
    assert np.max(np.abs(U.conj().T @ U - np.eye(2 * N))) < 1e-10
    F = spectral.fourier_matrix(N)
    D = F @ U @ F.conj().T
    assert np.max(np.abs(D - np.diag(np.diag(D)))) < 1e-10


def test_kinetic_eigenphases():
    lam = spectral.kinetic_eigenphases(8)
    M = spectral.m_matrix_formula(8)
    assert np.allclose(np.sort(lam), np.sort(np.linalg.eigvalsh(M)))


def test_dense_limit():
    with pytest.raises(GroupError):
        spectral.fourier_matrix(128)


def test_rows_follow_label_order():
    N = 8
    F = spectral.fourier_matrix(N)
    els = list(elements(N))
    lab = irrep_labels(N)[5]  # phi_01 for l = 1
    assert (lab.kind, lab.l, lab.i, lab.j) == ("2d", 1, 0, 1)
    g = els[N + 3]  # s r^3
    phase = np.exp(-2j * np.pi * 3 / N)
    assert abs(F[5, N + 3] - np.sqrt(2 / (2 * N)) * phase) < 1e-12
    assert g.m == 1
