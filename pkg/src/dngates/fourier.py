"""Fourier transform over D_N as a circuit.

The cyclic QFT on the rotation register already produces every irrep
amplitude; what remains is a local change of basis.  Write the rotation
register after the QFT as q = p N/2 + x with p its top bit.  The four
one-dimensional irreps live in the x = 0 sector, where a Hadamard on the
reflection qubit separates them.  For x != 0 the two-dimensional entries are
already isolated, and an optional relabelling step moves them onto |ij>|l>.
"""
from __future__ import annotations

import math

import numpy as np

from .arithmetic import build_controlled_negation
from .circuit import (
    PHASE,
    SWAP,
    Circuit,
    CircuitBuilder,
    Gate,
    H,
    unitary_of,
)
from .group import IrrepLabel, check_order, irrep_labels

ENCODINGS = ("block", "momentum")


def build_qft_cyclic(n: int) -> Circuit:
    """|k> -> 2^(-n/2) sum_j exp(2 pi i j k / 2^n) |j>, qubit 0 the MSB.

    Hadamards and controlled phases in textbook order, followed by the
    bit-reversal swaps so input and output share the same bit order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    b = CircuitBuilder(n, f"qft[n={n}]")
    for i in range(n):
        b.add(H(i))
        for j in range(i + 1, n):
            b.add(PHASE(i, 2 * math.pi / 2 ** (j - i + 1), controls=(j,)))
    for i in range(n // 2):
        b.add(SWAP(i, n - 1 - i))
    return b.build()


def dft_matrix(n: int) -> np.ndarray:
    N = 2 ** n
    j = np.arange(N)
    return np.exp(2j * np.pi * np.outer(j, j) / N) / math.sqrt(N)


# ---------------------------------------------------------------- layout


def fourier_layout(N: int) -> dict:
    """Qubit roles: reflection m, top rotation bit p, low bits x, flag, negation work."""
    n = check_order(N)
    x = list(range(2, n + 1))
    flag = n + 1 if n >= 3 else None
    work = list(range(n + 2, n + 2 + max(n - 2, 0))) if n >= 3 else []
    return {"m": 0, "p": 1, "x": x, "flag": flag, "work": work, "qubits": n + 1 + (1 if flag else 0) + len(work)}


def _x_zero(lay: dict) -> tuple[tuple, tuple]:
    """Controls (and polarities) that are active exactly when x == 0."""
    if lay["flag"] is not None:
        return (lay["flag"],), (1,)
    return tuple(lay["x"]), (0,) * len(lay["x"])


def _flag_gate(lay: dict) -> Gate:
    return Gate("X", (lay["flag"],), tuple(lay["x"]), (0,) * len(lay["x"]))


def build_phase_gadget(N: int, angle: float) -> Circuit:
    """exp(i angle) on the states with m = 1, p = 1 and x = 0.

    One CCPHASE between m, p and a flag qubit that records x == 0; the flag is
    computed from the x bits and erased again.  For N <= 4 the flag is
    replaced by direct controls on x.
    """
    lay = fourier_layout(N)
    b = CircuitBuilder(lay["qubits"], f"phase_gadget[N={N}]", ancillas=_ancillas(lay))
    ctrl, pol = _x_zero(lay)
    if lay["flag"] is not None:
        b.add(_flag_gate(lay))
    b.add(Gate("PHASE", (lay["p"],), (lay["m"],) + ctrl, (1,) + pol, theta=angle))
    if lay["flag"] is not None:
        b.add(_flag_gate(lay))
    return b.build()


def _ancillas(lay: dict) -> list[int]:
    return ([lay["flag"]] if lay["flag"] is not None else []) + lay["work"]


def build_change_of_basis(N: int, encoding: str = "block", gadget_angle: float = 0.0) -> Circuit:
    """Local unitary applied after the cyclic QFT.

    On x = 0 it applies the phase gadget and a Hadamard on m.  With
    ``encoding="momentum"`` it is the identity on x != 0; with
    ``encoding="block"`` it also relabels the two-dimensional entries with
    p = 1 (flip m, negate x modulo N/2) so that entry (i, j) of irrep l ends
    on |i>|j>|l>.
    """
    if encoding not in ENCODINGS:
        raise ValueError(f"encoding must be one of {ENCODINGS}")
    n = check_order(N)
    lay = fourier_layout(N)
    b = CircuitBuilder(lay["qubits"], f"change_of_basis[N={N},{encoding}]", ancillas=_ancillas(lay))
    ctrl, pol = _x_zero(lay)
    if lay["flag"] is not None:
        b.begin("flag")
        b.add(_flag_gate(lay))
        b.end("flag")
    if gadget_angle:
        b.begin("phase_gadget")
        b.add(Gate("PHASE", (lay["p"],), (lay["m"],) + ctrl, (1,) + pol, theta=gadget_angle))
        b.end("phase_gadget")
    b.begin("mix")
    b.add(Gate("H", (lay["m"],), ctrl, pol))
    b.end("mix")
    if encoding == "block" and n >= 2:
        b.begin("relabel")
        # flip m when p = 1 and x != 0
        b.add(Gate("X", (lay["m"],), (lay["p"],) + ctrl, (1,) + tuple(1 - v for v in pol)))
        if n >= 3:
            neg = build_controlled_negation(n - 1, polarity=1)
            b.place(neg, [lay["p"]] + lay["x"] + lay["work"])
        b.end("relabel")
    if lay["flag"] is not None:
        b.begin("unflag")
        b.add(_flag_gate(lay))  # -x is zero exactly when x is
        b.end("unflag")
    return b.build()


def build_fourier(N: int, encoding: str = "block", gadget_angle: float | None = None) -> Circuit:
    """Circuit whose unitary is the D_N Fourier matrix with rows placed by
    ``irrep_basis_index`` (up to a global phase, which is 1 here)."""
    n = check_order(N)
    angle = resolved_gadget_angle(N) if gadget_angle is None else gadget_angle
    cob = build_change_of_basis(N, encoding, angle)
    b = CircuitBuilder(cob.qubit_count, f"fourier[N={N},{encoding}]", ancillas=cob.ancillas)
    b.place(build_qft_cyclic(n), list(range(1, n + 1)), section="qft")
    b.place(cob, list(range(cob.qubit_count)), section="change_of_basis")
    return b.build()


# ---------------------------------------------------------------- encoding


def irrep_basis_index(label: IrrepLabel, N: int, encoding: str = "block") -> int:
    """Basis state (over the n + 1 data qubits) that carries a Fourier row."""
    n = check_order(N)
    half = N // 2
    one_dim = {"A": (0, 0), "B": (1, 0), "C": (0, 1), "D": (1, 1)}
    if label.kind in one_dim:
        m, p = one_dim[label.kind]
        return (m << n) | (p * half)
    if encoding == "block":
        return (label.i << n) | (label.j * half) | label.l
    q = label.l if label.j == 0 else N - label.l
    return ((label.i ^ label.j) << n) | q


def encoded_fourier_matrix(N: int, encoding: str = "block") -> np.ndarray:
    """fourier_matrix(N) with its rows moved to their encoded basis states."""
    from .spectral import fourier_matrix

    F = fourier_matrix(N)
    out = np.zeros_like(F)
    for row, lab in enumerate(irrep_labels(N)):
        out[irrep_basis_index(lab, N, encoding)] = F[row]
    return out


def data_unitary(circuit: Circuit, data_qubits: int) -> np.ndarray:
    """Block of the circuit unitary with all ancillas (the trailing qubits) in |0>."""
    extra = circuit.qubit_count - data_qubits
    cols = np.arange(2 ** data_qubits) << extra
    full = unitary_of(circuit, columns=cols)
    return full[cols]


# ---------------------------------------------------------------- gadget phase


GADGET_CANDIDATES = {
    "zero": 0.0,
    "pi": math.pi,
    "half_pi": math.pi / 2,
    "minus_half_pi": -math.pi / 2,
}


def printed_gadget_angle(N: int) -> float:
    """Angle of exp(i pi N / 2) reduced to (-pi, pi]."""
    a = math.remainder(math.pi * N / 2, 2 * math.pi)
    return math.pi if abs(a + math.pi) < 1e-12 else a


def gadget_candidates(N: int) -> dict[str, float]:
    c = dict(GADGET_CANDIDATES)
    c["printed"] = printed_gadget_angle(N)
    return c


def resolve_gadget_phase(N: int, tol: float = 1e-10) -> dict:
    """Try each candidate gadget angle against the Fourier-matrix oracle.

    Returns a report with the error per candidate and the unique angle that
    matches; raises if none or several distinct angles match.
    """
    from .circuit import global_phase_distance

    n = check_order(N)
    target = encoded_fourier_matrix(N)
    errors = {}
    for name, angle in gadget_candidates(N).items():
        circ = build_fourier(N, gadget_angle=angle)
        errors[name] = global_phase_distance(data_unitary(circ, n + 1), target)
    winners = {round(gadget_candidates(N)[k] % (2 * math.pi), 12) for k, e in errors.items() if e < tol}
    if len(winners) != 1:
        raise RuntimeError(f"gadget phase not uniquely resolved for N={N}: {errors}")
    angle = winners.pop()
    return {"N": N, "angle": angle, "errors": errors}


def resolved_gadget_angle(N: int) -> float:
    """Gadget angle fixed by the oracle comparison (see resolve_gadget_phase)."""
    check_order(N)
    return 0.0


