"""Matrix-level oracles built directly from the irreps of D_N.

Rows of the Fourier matrix follow ``group.irrep_labels`` and columns follow
the linear element index ``N*m + k``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .group import (
    GroupError,
    IrrepLabel,
    check_order,
    elements,
    fundamental_rep,
    irrep_entry,
    irrep_labels,
)


class ConsistencyError(RuntimeError):
    """Two independent computations of the same object disagree."""


def _desk_scale(N: int, cap: int = 64) -> int:
    n = check_order(N)
    if N > cap:
        raise GroupError(f"N={N} exceeds the dense limit {cap}")
    return n


def fourier_matrix(N: int) -> np.ndarray:
    """2N x 2N unitary with entry sqrt(d/2N) [rho(g)]_ij at row (rho,i,j), column g."""
    _desk_scale(N)
    labels = irrep_labels(N)
    elems = list(elements(N))
    F = np.empty((2 * N, 2 * N), dtype=complex)
    for r, lab in enumerate(labels):
        scale = np.sqrt(lab.dim / (2 * N))
        for c, g in enumerate(elems):
            F[r, c] = scale * irrep_entry(lab, g)
    return F


def m_matrix(N: int) -> np.ndarray:
    """M[i, j] = Re Tr(D(g_i)^dag D(g_j)) in the fundamental representation."""
    _desk_scale(N)
    reps = [fundamental_rep(g) for g in elements(N)]
    M = np.empty((2 * N, 2 * N))
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            M[i, j] = np.trace(a.conj().T @ b).real
    return M


def m_matrix_formula(N: int) -> np.ndarray:
    """Same matrix from 2 delta(m, m') cos(2 pi (k' - k) / N)."""
    _desk_scale(N)
    m = np.repeat([0, 1], N)
    k = np.tile(np.arange(N), 2)
    same = m[:, None] == m[None, :]
    return np.where(same, 2 * np.cos(2 * np.pi * (k[:, None] - k[None, :]) / N), 0.0)


def transfer_matrix(N: int, beta: float) -> np.ndarray:
    if not np.isfinite(beta):
        raise ValueError("beta must be finite")
    return np.exp(beta * m_matrix_formula(N))


@dataclass(frozen=True)
class Diagonalization:
    diagonal: np.ndarray
    offdiag_max: float
    scale: float  # max |T| entry, used to make tolerances relative


def diagonalize_via_fourier(N: int, beta: float) -> Diagonalization:
    F = fourier_matrix(N)
    T = transfer_matrix(N, beta)
    D = F @ T @ F.conj().T
    off = D - np.diag(np.diag(D))
    return Diagonalization(np.diag(D).copy(), float(np.max(np.abs(off))), float(np.max(np.abs(T))))


def _boltzmann_weights(N: int, beta: float) -> np.ndarray:
    kp = np.arange(N)
    return np.exp(2 * beta * np.cos(2 * np.pi * kp / N))


def closed_form_diagonal(N: int, beta: float, squared_cd: bool = False) -> np.ndarray:
    """Eigenvalues of T in Fourier-row order, from character sums.

    ``squared_cd=True`` squares the alternating sum used for the C and D rows;
    it exists only so the two candidate formulas can be compared.
    """
    _desk_scale(N)
    w = _boltzmann_weights(N, beta)
    kp = np.arange(N)
    total = w.sum()
    alt = np.sum((-1.0) ** kp * w)
    if squared_cd:
        alt = alt ** 2
    out = [total + N, total - N, alt, alt]
    for l in range(1, N // 2):
        plus = np.sum(np.exp(2j * np.pi * l * kp / N) * w)
        minus = np.sum(np.exp(-2j * np.pi * l * kp / N) * w)
        out += [plus, minus, plus, minus]
    return np.asarray(out, dtype=complex)


def kinetic_step(N: int, theta: float, tol: float = 1e-10) -> np.ndarray:
    """exp(i theta M) for one link, returned in its Fourier-diagonal form.

    A dense ``expm`` is computed alongside and the two must agree.
    """
    _desk_scale(N, cap=32)
    M = m_matrix_formula(N)
    F = fourier_matrix(N)
    eig = np.diag(F @ M @ F.conj().T).real
    via_fourier = F.conj().T @ np.diag(np.exp(1j * theta * eig)) @ F
    dense = expm(1j * theta * M)
    err = float(np.max(np.abs(dense - via_fourier)))
    if err > tol:
        raise ConsistencyError(f"kinetic step mismatch {err:.3e} > {tol:g}")
    return via_fourier


def kinetic_eigenphases(N: int) -> np.ndarray:
    """Eigenvalues of M in Fourier-row order (M is diagonal in that basis)."""
    M = m_matrix_formula(N)
    F = fourier_matrix(N)
    return np.diag(F @ M @ F.conj().T).real.copy()


def label_index(N: int, label: IrrepLabel) -> int:
    return irrep_labels(N).index(label)
