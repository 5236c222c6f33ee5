from __future__ import annotations

import sys

import numpy as np

from dngates import arithmetic, fourier, plaquette, trace
from dngates.circuit import Circuit, basis_map, concat, adjoint
from dngates.group import check_order


def builders(N: int) -> list[tuple[str, Circuit, int]]:
    """(name, circuit, data qubit count) for every gate builder at order N."""
    n = check_order(N)
    out = [
        ("inversion", arithmetic.build_inversion(N), n + 1),
        ("multiplication", arithmetic.build_multiplication(N), 2 * n + 2),
        ("right_multiplication", arithmetic.build_right_multiplication(N), 2 * n + 2),
        ("twos_complement", arithmetic.build_conditional_twos_complement(N), n + 1),
        ("trace_direct", trace.build_trace_direct(N, 0.3), n + 1),
        ("trace_ancilla", trace.build_trace_ancilla(N, 0.3, 10), n + 1),
        ("fourier", fourier.build_fourier(N), n + 1),
        ("plaquette", plaquette.build_plaquette_trace(N, 0.3), 4 * (n + 1)),
    ]
    if N == 4:
        out.append(("inversion_d4", arithmetic.build_inversion(4, "simplified"), 3))
        out.append(("multiplication_d4", arithmetic.build_multiplication(4, variant="d4"), 6))
    if N == 8:
        out.append(("inversion_d8", arithmetic.build_inversion(8, "simplified"), 4))
    return out


def data_inputs(circuit: Circuit, data_bits: int) -> np.ndarray:
    """Basis indices with every data value and the extra qubits at |0>."""
    return np.arange(2 ** data_bits, dtype=np.int64) << (circuit.qubit_count - data_bits)


def roundtrip_error(circuit: Circuit, inputs: np.ndarray) -> float:
    """Distance of C^dag C from identity on basis inputs (monomial circuits)."""
    out, phase = basis_map(concat(circuit, adjoint(circuit)), inputs)
    if not np.array_equal(out, inputs):
        return 1.0
    return float(np.max(np.abs(np.exp(1j * phase) - 1)))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
