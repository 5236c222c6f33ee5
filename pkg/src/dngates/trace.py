"""Trace gates |g> -> exp(i theta ReTr g) |g>.

Two constructions: an exact one from the Z-string expansion of the diagonal
and an ancilla-assisted one that loads fixed-point sin/cos values, kicks the
phase back bit by bit and unloads them again.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import (
    CNOT,
    PHASE,
    RZ,
    TOFFOLI,
    XOR,
    Circuit,
    CircuitBuilder,
    Gate,
    X,
)
from .group import check_order, trace_table


# ---------------------------------------------------------------- Z strings


def pauli_decompose_diagonal(diagonal, atol: float = 1e-13) -> dict[frozenset, float]:
    """Coefficients a_S with diag = sum_S a_S prod_{q in S} Z_q.

    Subsets hold qubit indices with qubit 0 the most significant bit.  Terms
    below ``atol`` are dropped.
    """
    d = np.asarray(diagonal, dtype=float)
    q = d.size.bit_length() - 1
    if d.size != 2 ** q:
        raise ValueError("diagonal length must be a power of two")
    if q > 12:
        raise ValueError("at most 12 qubits")
    # fast Walsh-Hadamard transform, one tensor axis per qubit
    t = d.reshape((2,) * q) if q else d.copy()
    for axis in range(q):
        a0 = np.take(t, 0, axis=axis)
        a1 = np.take(t, 1, axis=axis)
        t = np.stack([a0 + a1, a0 - a1], axis=axis)
    coeffs = t.reshape(-1) / 2 ** q
    out: dict[frozenset, float] = {}
    for mask, c in enumerate(coeffs):
        if abs(c) > atol:
            subset = frozenset(j for j in range(q) if (mask >> (q - 1 - j)) & 1)
            out[subset] = float(c)
    return out


def reconstruct_diagonal(coeffs: dict[frozenset, float], q: int) -> np.ndarray:
    idx = np.arange(2 ** q)
    out = np.zeros(2 ** q)
    for subset, c in coeffs.items():
        sign = np.ones(2 ** q)
        for j in subset:
            sign *= 1 - 2 * ((idx >> (q - 1 - j)) & 1)
        out += c * sign
    return out


def _z_string_rotation(subset, angle: float, controls=(), polarity=()) -> list[Gate]:
    """exp(i angle Z_S) as a CNOT ladder around one (optionally controlled) RZ."""
    qs = sorted(subset)
    target = qs[-1]
    ladder = [CNOT(a, target) for a in qs[:-1]]
    rot = Gate("RZ", (target,), tuple(controls), tuple(polarity), theta=-2.0 * angle)
    return ladder + [rot] + ladder[::-1]


def build_diagonal_phase(phases, qubits=None, controls=(), polarity=(), label: str = "diag") -> Circuit:
    """exp(i phases[x]) |x> exactly, including the constant term."""
    coeffs = pauli_decompose_diagonal(phases)
    q = int(np.log2(len(phases)))
    qubits = list(range(q)) if qubits is None else list(qubits)
    width = max(qubits + list(controls)) + 1
    b = CircuitBuilder(width, label)
    const = coeffs.pop(frozenset(), 0.0)
    for subset, a in sorted(coeffs.items(), key=lambda kv: sorted(kv[0])):
        b.add(_z_string_rotation([qubits[j] for j in subset], a, controls, polarity))
    if const:
        b.add(_constant_phase(const, qubits[0], controls, polarity))
    return b.build()


def _constant_phase(angle: float, qubit: int, controls=(), polarity=()) -> list[Gate]:
    if controls:
        # a phase on the selected control value, placed on the last control
        c, p = controls[-1], polarity[-1] if polarity else 1
        rest_c, rest_p = tuple(controls[:-1]), tuple(polarity[:-1]) if polarity else ()
        flip = [] if p == 1 else [X(c)]
        return flip + [Gate("PHASE", (c,), rest_c, rest_p, theta=angle)] + flip
    return [PHASE(qubit, angle), X(qubit), PHASE(qubit, angle), X(qubit)]


# ---------------------------------------------------------------- direct


def trace_diagonal(N: int, theta: float) -> np.ndarray:
    """exp(i theta 2(1-m) cos(2 pi k/N)) over the linear element index."""
    m = np.repeat([0, 1], N)
    k = np.tile(np.arange(N), 2)
    return np.exp(1j * theta * 2 * (1 - m) * np.cos(2 * np.pi * k / N))


def build_trace_direct(N: int, theta: float) -> Circuit:
    """Exact trace gate on [m, k]: Z-string rotations of the 2cos(2 pi k/N)
    diagonal, each controlled on m = 0."""
    n = check_order(N)
    cos_diag = 2 * np.cos(2 * np.pi * np.arange(N) / N)
    inner = build_diagonal_phase(
        theta * cos_diag, qubits=list(range(1, n + 1)), controls=(0,), polarity=(0,)
    )
    return Circuit(n + 1, inner.gates, f"trace_direct[N={N},theta={theta:g}]")


# ---------------------------------------------------------------- kickback


def build_phase_kickback(b: int, theta: float) -> Circuit:
    """|x> -> exp(2 i theta x)|x> up to a global phase, for a b-bit fraction x.

    Qubit j-1 holds the bit of weight 2^-j; each gets RZ(theta 2^(1-j)).
    """
    if b < 1:
        raise ValueError("need at least one bit")
    gates = tuple(RZ(j - 1, theta * 2.0 ** (1 - j)) for j in range(1, b + 1))
    return Circuit(b, gates, f"kickback[b={b}]")


# ---------------------------------------------------------------- trig tables


def fixed_point(value: np.ndarray, b: int) -> np.ndarray:
    """floor(v 2^b) as integers, saturating at 2^b - 1 so 1.0 stays in range."""
    v = np.asarray(value, dtype=float)
    if np.any(v < 0) or np.any(v > 1):
        raise ValueError("fixed-point values must lie in [0, 1]")
    return np.minimum(np.floor(v * 2 ** b + 1e-12).astype(np.int64), 2 ** b - 1)


def trig_by_repeated_squaring(angle, R: int) -> tuple[np.ndarray, np.ndarray]:
    """(cos a, sin a) as the real and imaginary parts of (1 + i a/R - (a/R)^2/2)^R.

    R must be a power of two; the power is taken by log2(R) squarings, which
    is the arithmetic a reversible circuit would perform.
    """
    if R < 1 or R & (R - 1):
        raise ValueError("R must be a power of two")
    x = np.asarray(angle, dtype=float) / R
    z = 1 + 1j * x - x * x / 2
    for _ in range(R.bit_length() - 1):
        z = z * z
    return z.real, z.imag


@dataclass(frozen=True)
class TrigTables:
    """Fixed-point first-quadrant cos and sin of 2 pi k'/N for k' < N/4."""

    N: int
    bits: int
    cos: tuple
    sin: tuple
    method: str
    max_error: float  # largest |table value - exact| over both tables


def trig_tables(N: int, b: int, method: str = "exact", R: int = 1024) -> TrigTables:
    n = check_order(N)
    count = 2 ** max(n - 2, 0)
    angle = 2 * np.pi * np.arange(count) / N
    if method == "exact":
        c, s = np.cos(angle), np.sin(angle)
    elif method == "squaring":
        c, s = trig_by_repeated_squaring(angle, R)
        c, s = np.clip(c, 0, 1), np.clip(s, 0, 1)
    else:
        raise ValueError(f"unknown method {method!r}")
    ci, si = fixed_point(c, b), fixed_point(s, b)
    err = max(
        np.max(np.abs(ci / 2 ** b - np.cos(angle))), np.max(np.abs(si / 2 ** b - np.sin(angle)))
    )
    return TrigTables(N, b, tuple(int(x) for x in ci), tuple(int(x) for x in si), method, float(err))


# ---------------------------------------------------------------- ancilla gate


@dataclass(frozen=True)
class AncillaTraceLayout:
    element: tuple[int, ...]  # m, k_{n-1} .. k_0
    cos_reg: tuple[int, ...]
    sin_reg: tuple[int, ...]
    flag_cos: int
    flag_sin: int


def ancilla_trace_layout(N: int, b: int) -> AncillaTraceLayout:
    n = check_order(N)
    e = tuple(range(n + 1))
    cos_reg = tuple(range(n + 1, n + 1 + b))
    sin_reg = tuple(range(n + 1 + b, n + 1 + 2 * b))
    return AncillaTraceLayout(e, cos_reg, sin_reg, n + 1 + 2 * b, n + 2 + 2 * b)


def build_trace_ancilla(N: int, theta: float, b: int, method: str = "exact", R: int = 1024) -> Circuit:
    """Trace gate with fixed-point sin/cos registers.

    Write k = k_{n-1} N/2 + k_{n-2} N/4 + k'.  Then
    2cos(2 pi k/N) = 2 (-1)^{k_{n-1}} * (cos a if k_{n-2} = 0 else -sin a)
    with a = 2 pi k'/N in the first quadrant.  A classical XOR oracle loads
    b-bit cos a and sin a, two flag qubits mark (m = 0, k_{n-2} = 0) and
    (m = 0, k_{n-2} = 1), and controlled phases add 2 theta 2^-j per set bit
    with the sign chosen by k_{n-1}.  Everything but the phases is undone.
    """
    n = check_order(N)
    if b < 2:
        raise ValueError("the ancilla trace gate needs b >= 2 bits")
    lay = ancilla_trace_layout(N, b)
    tables = trig_tables(N, b, method, R)
    q = lay.flag_sin + 1
    anc = lay.cos_reg + lay.sin_reg + (lay.flag_cos, lay.flag_sin)
    circ = CircuitBuilder(q, f"trace_ancilla[N={N},theta={theta:g},b={b}]", ancillas=anc)
    m = 0
    sign_bit = 1  # k_{n-1}
    quad_bit = 2 if n >= 2 else None  # k_{n-2}
    low = tuple(range(3, n + 1))  # k' bits

    circ.begin("compute")
    if low:
        circ.add(XOR(low, lay.cos_reg + lay.sin_reg, [(c << b) | s for c, s in zip(tables.cos, tables.sin)]))
    else:
        # k' = 0: only cos 0 (saturated) and sin 0 are needed
        circ.add(X(r) for j, r in enumerate(lay.cos_reg) if (tables.cos[0] >> (b - 1 - j)) & 1)
        circ.add(X(r) for j, r in enumerate(lay.sin_reg) if (tables.sin[0] >> (b - 1 - j)) & 1)
    if quad_bit is None:
        circ.add(CNOT(m, lay.flag_cos, 0))
    else:
        circ.add(TOFFOLI(m, quad_bit, lay.flag_cos, (0, 0)))
        circ.add(TOFFOLI(m, quad_bit, lay.flag_sin, (0, 1)))
    compute_end = len(circ.gates)
    circ.end("compute")

    circ.begin("kickback")
    for j, r in enumerate(lay.cos_reg, start=1):
        w = 2 * theta * 2.0 ** (-j)
        circ.add(Gate("PHASE", (r,), (lay.flag_cos, sign_bit), (1, 0), theta=w))
        circ.add(Gate("PHASE", (r,), (lay.flag_cos, sign_bit), (1, 1), theta=-w))
    if quad_bit is not None:
        for j, r in enumerate(lay.sin_reg, start=1):
            w = 2 * theta * 2.0 ** (-j)
            circ.add(Gate("PHASE", (r,), (lay.flag_sin, sign_bit), (1, 0), theta=-w))
            circ.add(Gate("PHASE", (r,), (lay.flag_sin, sign_bit), (1, 1), theta=w))
    circ.end("kickback")

    circ.begin("uncompute")
    circ.add(g.inverse() for g in reversed(circ.gates[:compute_end]))
    circ.end("uncompute")
    return circ.build()


def ancilla_trace_values(N: int, b: int, method: str = "exact", R: int = 1024) -> np.ndarray:
    """The truncated ReTr that build_trace_ancilla realizes, per element index."""
    n = check_order(N)
    t = trig_tables(N, b, method, R)
    out = np.zeros(2 * N)
    for k in range(N):
        top = (k >> (n - 1)) & 1
        quad = (k >> (n - 2)) & 1 if n >= 2 else 0
        low = k & (2 ** max(n - 2, 0) - 1)
        val = t.cos[low] / 2 ** b if quad == 0 else -t.sin[low] / 2 ** b
        out[k] = 2 * (-1) ** top * val
    return out


def trace_error_bound(theta: float, b: int) -> float:
    """Largest phase error from b-bit truncation: 2 |theta| 2^-b."""
    return 2 * abs(theta) * 2.0 ** (-b)


def exact_trace_values(N: int) -> np.ndarray:
    return np.asarray(trace_table(N), dtype=float)

