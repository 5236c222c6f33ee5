"""Process matrices, fidelities, readout mitigation and bitstring accuracy
under synthetic noise."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .arithmetic import build_multiplication
from .circuit import Circuit
from .group import check_order, group_table
from .noise import Depolarizing, ReadoutConfusion, simulate_density, superoperator

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
CHI_QUBIT_CAP = 3


@lru_cache(maxsize=None)
def pauli_basis(q: int) -> tuple[tuple[str, ...], np.ndarray]:
    """Labels and matrices of all 4^q Pauli products, qubit 0 leftmost."""
    labels, mats = [], []
    for word in itertools.product("IXYZ", repeat=q):
        m = np.ones((1, 1), dtype=complex)
        for c in word:
            m = np.kron(m, _PAULI[c])
        labels.append("".join(word))
        mats.append(m)
    return tuple(labels), np.array(mats)


def chi_from_superoperator(S: np.ndarray) -> np.ndarray:
    """chi[a, b] = Tr((P_a (x) conj(P_b))^dag S) / d^2 for a row-major superoperator."""
    d = int(round(np.sqrt(S.shape[0])))
    q = d.bit_length() - 1
    if q > CHI_QUBIT_CAP:
        raise ValueError(f"chi matrices are limited to {CHI_QUBIT_CAP} qubits")
    _, P = pauli_basis(q)
    # S = sum_ab chi_ab P_a (x) conj(P_b)  =>  S[(i,k),(j,l)] = sum chi_ab P_a[i,j] conj(P_b[k,l])
    S4 = S.reshape(d, d, d, d)
    return np.einsum("aij,bkl,ikjl->ab", P.conj(), P, S4) / d ** 2


def chi_matrix(channel, noise: Depolarizing | None = None) -> np.ndarray:
    """Process matrix of a unitary (ndarray) or a circuit (optionally noisy)."""
    if isinstance(channel, Circuit):
        if channel.qubit_count > CHI_QUBIT_CAP:
            raise ValueError(f"chi matrices are limited to {CHI_QUBIT_CAP} qubits")
        S = superoperator(channel, noise)
    else:
        U = np.asarray(channel, dtype=complex)
        if U.shape[0] > 2 ** CHI_QUBIT_CAP:
            raise ValueError(f"chi matrices are limited to {CHI_QUBIT_CAP} qubits")
        S = np.kron(U, U.conj())
    return chi_from_superoperator(S)


def chi_of_unitary(U: np.ndarray) -> np.ndarray:
    """Independent route: chi = c c^dag with c_a = Tr(P_a U) / d."""
    d = U.shape[0]
    _, P = pauli_basis(d.bit_length() - 1)
    c = np.einsum("aij,ij->a", P.conj(), U) / d
    return np.outer(c, c.conj())


def process_fidelity(chi: np.ndarray, chi_target: np.ndarray) -> float:
    if chi.shape != chi_target.shape:
        raise ValueError("chi matrices differ in size")
    f = float(np.real(np.trace(chi_target.conj().T @ chi)))
    return min(max(f, 0.0), 1.0)


def fidelity_under_depolarizing(circuit: Circuit, p: float, target: np.ndarray | None = None) -> float:
    ideal = chi_matrix(circuit) if target is None else target
    return process_fidelity(chi_matrix(circuit, Depolarizing(p)), ideal)


@dataclass(frozen=True)
class Calibration:
    p: float
    fidelity: float
    target: float


def calibrate_depolarizing(circuit: Circuit, target_fidelity: float, lo: float = 0.0, hi: float = 0.2) -> Calibration:
    """Depolarizing strength per multi-qubit gate giving the requested process fidelity."""
    ideal = chi_matrix(circuit)
    f = lambda p: process_fidelity(chi_matrix(circuit, Depolarizing(p)), ideal) - target_fidelity  # noqa: E731
    if f(lo) < 0 or f(hi) > 0:
        raise ValueError(f"fidelity {target_fidelity} not bracketed by p in [{lo}, {hi}]")
    p = brentq(f, lo, hi, xtol=1e-12)
    return Calibration(float(p), f(p) + target_fidelity, target_fidelity)


# ---------------------------------------------------------------- readout


@dataclass(frozen=True)
class Mitigated:
    distribution: np.ndarray
    condition_number: float


def mitigate_readout(raw: np.ndarray, confusion: ReadoutConfusion | np.ndarray) -> Mitigated:
    """Solve C p = raw, clip negatives and renormalize."""
    C = confusion.matrix if isinstance(confusion, ReadoutConfusion) else np.asarray(confusion, float)
    cond = float(np.linalg.cond(C))
    if not np.isfinite(cond) or cond > 1e12:
        raise np.linalg.LinAlgError(f"confusion matrix is singular (condition number {cond:.3g})")
    p = np.linalg.solve(C, np.asarray(raw, dtype=float))
    p = np.clip(p, 0, None)
    return Mitigated(p / p.sum(), cond)


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


# ---------------------------------------------------------------- multiplication accuracy


@dataclass(frozen=True)
class Accuracy:
    mean: float
    stddev: float
    per_pair: np.ndarray
    majority_mean: float | None = None
    majority_stddev: float | None = None
    majority_per_pair: np.ndarray | None = None


def multiplication_circuit(N: int) -> Circuit:
    """The D_4 case uses the six-qubit circuit; larger groups the generic one."""
    return build_multiplication(N, variant="d4") if N == 4 else build_multiplication(N)


def output_distributions(N: int, noise: Depolarizing | None) -> np.ndarray:
    """Row i: exact output distribution over data bitstrings for input pair i."""
    n = check_order(N)
    circ = multiplication_circuit(N)
    data = 2 * n + 2
    extra = circ.qubit_count - data
    dim = 2 ** circ.qubit_count
    out = np.empty((2 ** data, 2 ** data))
    for i in range(2 ** data):
        rho = np.zeros((dim, dim), dtype=complex)
        rho[i << extra, i << extra] = 1
        probs = np.real(np.diag(simulate_density(circ, rho, noise)))
        out[i] = np.clip(probs.reshape(2 ** data, 2 ** extra).sum(axis=1), 0, None)
        out[i] /= out[i].sum()
    return out


def expected_outputs(N: int) -> np.ndarray:
    n = check_order(N)
    G = 2 * N
    idx = np.arange(G * G)
    g, h = idx >> (n + 1), idx & (G - 1)
    return (g << (n + 1)) | group_table(N)[g, h]


def multiplication_accuracy(
    N: int,
    noise: Depolarizing | None,
    shots: int,
    majority_window: int | None = None,
    seed: int = 0,
    readout: ReadoutConfusion | None = None,
) -> Accuracy:
    """Fraction of correct output bitstrings per input pair, sampled with a
    seeded generator; optionally also scored by plurality vote over
    consecutive windows of ``majority_window`` shots (ties count as wrong)."""
    dist = output_distributions(N, noise)
    if readout is not None:
        dist = (readout.matrix @ dist.T).T
    answers = expected_outputs(N)
    rng = np.random.Generator(np.random.Philox(seed))
    raw = np.empty(len(dist))
    maj = np.empty(len(dist)) if majority_window else None
    for i, p in enumerate(dist):
        samples = rng.choice(len(p), size=shots, p=p)
        raw[i] = np.mean(samples == answers[i])
        if majority_window:
            windows = samples[: shots - shots % majority_window].reshape(-1, majority_window)
            maj[i] = np.mean([_plurality_correct(w, answers[i]) for w in windows])
    if majority_window:
        return Accuracy(raw.mean(), raw.std(), raw, maj.mean(), maj.std(), maj)
    return Accuracy(raw.mean(), raw.std(), raw)


def _plurality_correct(window: np.ndarray, answer: int) -> bool:
    values, counts = np.unique(window, return_counts=True)
    best = counts.max()
    winners = values[counts == best]
    return bool(len(winners) == 1 and winners[0] == answer)
