"""Oracle checks shared by the test suite and the ``verify-all`` command.

Builders are looked up through their modules at call time, so a patched
builder is what gets checked.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import arithmetic, fourier, spectral, trace
from .circuit import Circuit, ResourceLimitError, basis_map, global_phase_distance, unitary_of
from .group import check_order, group_table, inverse_table, trace_table

VERIFY_MAX_N = 4  # log2 of the largest group checked by verify_all


@dataclass(frozen=True)
class CheckResult:
    name: str
    N: int
    passed: bool
    value: float  # the measured discrepancy
    tol: float

    def row(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28} N={self.N:<3} value={self.value:.3e} tol={self.tol:.0e}"


def data_columns(circuit: Circuit, data_bits: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense columns of the circuit for every data input with ancillas in |0>."""
    extra = circuit.qubit_count - data_bits
    cols = np.arange(2 ** data_bits) << extra
    return cols, unitary_of(circuit, columns=cols)


def permutation_error(circuit: Circuit, data_bits: int, expected: np.ndarray) -> float:
    """max |U[:, in] - e_{out}| over data inputs; zero for an exact match."""
    cols, U = data_columns(circuit, data_bits)
    target = np.zeros_like(U)
    target[cols[np.asarray(expected)], np.arange(len(cols))] = 1
    return float(np.max(np.abs(U - target)))


def inversion_expected(N: int) -> np.ndarray:
    return np.asarray(inverse_table(N))


def multiplication_expected(N: int) -> np.ndarray:
    n = check_order(N)
    G = 2 * N
    idx = np.arange(G * G)
    g, h = idx >> (n + 1), idx & (G - 1)
    return (g << (n + 1)) | group_table(N)[g, h]


def check_inversion(N: int, tol: float = 1e-12) -> CheckResult:
    n = check_order(N)
    err = permutation_error(arithmetic.build_inversion(N), n + 1, inversion_expected(N))
    return CheckResult("inversion", N, err < tol, err, tol)


def check_multiplication(N: int, tol: float = 1e-12) -> CheckResult:
    n = check_order(N)
    err = permutation_error(arithmetic.build_multiplication(N), 2 * n + 2, multiplication_expected(N))
    return CheckResult("multiplication", N, err < tol, err, tol)


def check_trace_direct(N: int, thetas=(0.0, np.pi / 2, 0.3), tol: float = 1e-12) -> CheckResult:
    worst = 0.0
    for th in thetas:
        U = unitary_of(trace.build_trace_direct(N, th))
        worst = max(worst, float(np.max(np.abs(U - np.diag(trace.trace_diagonal(N, th))))))
    return CheckResult("trace_direct", N, worst < tol, worst, tol)


def trace_ancilla_report(N: int, theta: float, b: int) -> dict:
    """Phase error against the exact trace, and whether every ancilla came back clean."""
    c = trace.build_trace_ancilla(N, theta, b)
    n = check_order(N)
    extra = c.qubit_count - (n + 1)
    ins = np.arange(2 * N, dtype=np.int64) << extra
    out, phase = basis_map(c, ins)
    diff = np.angle(np.exp(1j * (phase - theta * np.asarray(trace_table(N)))))
    return {
        "max_phase_error": float(np.max(np.abs(diff))),
        "bound": 2 * abs(theta) * 2.0 ** (1 - b),
        "ancillas_clean": bool(np.array_equal(out, ins)),
        "qubits": c.qubit_count,
    }


def check_trace_ancilla(N: int, theta: float = 0.3, b: int = 10) -> CheckResult:
    rep = trace_ancilla_report(N, theta, b)
    ok = rep["ancillas_clean"] and rep["max_phase_error"] <= rep["bound"]
    return CheckResult("trace_ancilla", N, ok, rep["max_phase_error"], rep["bound"])


def fourier_error(N: int) -> float:
    n = check_order(N)
    c = fourier.build_fourier(N)
    return global_phase_distance(fourier.data_unitary(c, n + 1), fourier.encoded_fourier_matrix(N))


def check_fourier(N: int, tol: float = 1e-10) -> CheckResult:
    err = fourier_error(N)
    return CheckResult("fourier", N, err < tol, err, tol)


def check_diagonalization(N: int, betas=(0.0, 0.5, 1.0, 2.0), tol: float = 1e-9) -> CheckResult:
    worst = 0.0
    for beta in betas:
        d = spectral.diagonalize_via_fourier(N, beta)
        cf = spectral.closed_form_diagonal(N, beta)
        worst = max(worst, d.offdiag_max / d.scale, float(np.max(np.abs(d.diagonal - cf))) / d.scale)
    return CheckResult("fourier_diagonalizes_T", N, worst < tol, worst, tol)


def verify_all(max_n: int) -> list[CheckResult]:
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    if max_n > VERIFY_MAX_N:
        raise ResourceLimitError(
            f"max_n={max_n} exceeds {VERIFY_MAX_N}: exhaustive dense checks beyond N=16 do not fit the simulator cap"
        )
    results = []
    for n in range(1, max_n + 1):
        N = 2 ** n
        results.append(check_inversion(N))
        results.append(check_multiplication(N))
        results.append(check_trace_direct(N))
        if N <= 8:
            results.append(check_trace_ancilla(N))
        results.append(check_fourier(N))
        if N >= 4:
            results.append(check_diagonalization(N))
    return results
