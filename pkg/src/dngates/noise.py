"""Noise channels and density-matrix simulation of circuits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import QUBIT_CAP, Circuit, CircuitError, ResourceLimitError, _apply_gate_tensor


@dataclass(frozen=True)
class Depolarizing:
    """Depolarizing channel after every multi-qubit gate.

    ``p2`` applies to two-qubit gates and ``p3`` to gates on three or more
    qubits (defaults to ``p2``).  Single-qubit gates are ideal.
    """

    p2: float
    p3: float | None = None

    def __post_init__(self):
        for p in (self.p2, self.p3):
            if p is not None and not 0.0 <= p <= 1.0:
                raise ValueError(f"depolarizing strength {p} outside [0, 1]")

    def strength(self, width: int) -> float:
        if width < 2:
            return 0.0
        if width == 2:
            return self.p2
        return self.p2 if self.p3 is None else self.p3


@dataclass(frozen=True)
class ReadoutConfusion:
    """Column-stochastic C[observed, prepared]."""

    matrix: np.ndarray

    def __post_init__(self):
        C = np.asarray(self.matrix, dtype=float)
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise ValueError("confusion matrix must be square")
        if np.any(C < -1e-15) or np.any(C > 1 + 1e-15):
            raise ValueError("confusion entries must lie in [0, 1]")
        if np.max(np.abs(C.sum(axis=0) - 1)) > 1e-12:
            raise ValueError("confusion matrix columns must sum to 1")
        object.__setattr__(self, "matrix", C)


def symmetric_flip_confusion(q: int, flip: float) -> ReadoutConfusion:
    """Independent bit flips with probability ``flip`` on each of q qubits."""
    one = np.array([[1 - flip, flip], [flip, 1 - flip]])
    C = np.ones((1, 1))
    for _ in range(q):
        C = np.kron(C, one)
    return ReadoutConfusion(C)


def as_density(state: np.ndarray) -> np.ndarray:
    s = np.asarray(state, dtype=complex)
    if s.ndim == 1:
        return np.outer(s, s.conj())
    return s


def depolarize(rho: np.ndarray, qubits, p: float) -> np.ndarray:
    """(1-p) rho + p Tr_S(rho) (x) I_S / 2^|S| on the qubit subset S."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"depolarizing strength {p} outside [0, 1]")
    if p == 0:
        return rho
    dim = rho.shape[0]
    q = dim.bit_length() - 1
    sel = sorted(qubits)
    rest = [j for j in range(q) if j not in sel]
    order = sel + rest
    axes = order + [q + j for j in order]
    dS, dR = 2 ** len(sel), 2 ** len(rest)
    t = rho.reshape((2,) * (2 * q)).transpose(axes).reshape(dS, dR, dS, dR)
    reduced = np.einsum("ajak->jk", t)
    mixed = np.einsum("ab,jk->ajbk", np.eye(dS) / dS, reduced).reshape((2,) * (2 * q))
    mixed = mixed.transpose(np.argsort(axes)).reshape(dim, dim)
    return (1 - p) * rho + p * mixed


def apply_noise(target, model, qubits=None):
    """Apply a noise model.

    * ``Depolarizing``: ``target`` is a state vector or density matrix and the
      channel with strength ``model.p2`` acts on ``qubits`` (default: all).
    * ``ReadoutConfusion``: ``target`` is a probability vector; returns C p.
    """
    if isinstance(model, ReadoutConfusion):
        p = np.asarray(target, dtype=float)
        if p.shape[0] != model.matrix.shape[1]:
            raise ValueError("distribution size does not match the confusion matrix")
        return model.matrix @ p
    if isinstance(model, Depolarizing):
        rho = as_density(target)
        q = rho.shape[0].bit_length() - 1
        return depolarize(rho, range(q) if qubits is None else qubits, model.p2)
    raise TypeError(f"unknown noise model {model!r}")


def _conjugate_gate(rho: np.ndarray, gate, q: int) -> np.ndarray:
    t = rho.reshape((2,) * q + (-1,)).copy()
    _apply_gate_tensor(t, gate, q)
    left = t.reshape(rho.shape)
    t = left.conj().T.reshape((2,) * q + (-1,)).copy()
    _apply_gate_tensor(t, gate, q)
    return t.reshape(rho.shape).conj().T


def simulate_density(circuit: Circuit, rho: np.ndarray, noise: Depolarizing | None = None) -> np.ndarray:
    """Evolve a density matrix gate by gate, depolarizing after multi-qubit gates."""
    q = circuit.qubit_count
    if 2 * q > QUBIT_CAP:
        raise ResourceLimitError(f"density simulation of {q} qubits exceeds the cap")
    rho = as_density(rho)
    if rho.shape != (2 ** q, 2 ** q):
        raise CircuitError("density matrix does not match the circuit width")
    for g in circuit.gates:
        rho = _conjugate_gate(rho, g, q)
        if noise is not None:
            p = noise.strength(g.width)
            if p:
                rho = depolarize(rho, g.qubits, p)
    return rho


def superoperator(circuit: Circuit, noise: Depolarizing | None = None) -> np.ndarray:
    """Row-major superoperator S with vec(E(rho)) = S vec(rho)."""
    d = 2 ** circuit.qubit_count
    S = np.empty((d * d, d * d), dtype=complex)
    for col in range(d * d):
        basis = np.zeros(d * d, dtype=complex)
        basis[col] = 1
        S[:, col] = simulate_density(circuit, basis.reshape(d, d), noise).reshape(-1)
    return S
