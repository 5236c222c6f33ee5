"""Gate-level IR and a dense state-vector simulator.

Qubit 0 is the most significant bit of every basis label, so a D_N register
laid out as ``[m, k_{n-1}, ..., k_0]`` reads ``|m>|k>`` left to right.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

QUBIT_CAP = 16

BASE_KINDS = ("X", "Z", "H", "RZ", "RX", "PHASE", "SWAP", "XY", "PERM", "DIAG", "XOR")
_ORACLES = ("PERM", "DIAG", "XOR")
_PARAMETRIC = ("RZ", "RX", "PHASE", "XY")
_SELF_INVERSE = ("X", "Z", "H", "SWAP")
_TWO_TARGET = ("SWAP", "XY")


class CircuitError(ValueError):
    pass


class ResourceLimitError(RuntimeError):
    """The requested dense object would exceed the simulator's qubit cap."""


def _is_multiple_of_half_pi(theta: float) -> bool:
    r = theta / (math.pi / 2)
    return abs(r - round(r)) < 1e-12


@dataclass(frozen=True)
class Gate:
    """A base operation on ``targets``, optionally controlled.

    ``polarity[i]`` is the control value (0 or 1) that activates the gate for
    ``controls[i]``.  The ORACLE kinds carry a classical ``table``:

    * ``PERM``: ``table[i]`` is the image of target basis state ``i``;
    * ``DIAG``: one phase angle per target basis state;
    * ``XOR``: the first log2(len(table)) targets are inputs ``a``, the rest
      an output register ``y``, and the gate maps ``|a>|y> -> |a>|y ^ table[a]>``.
    """

    kind: str
    targets: tuple[int, ...]
    controls: tuple[int, ...] = ()
    polarity: tuple[int, ...] = ()
    theta: float | None = None
    table: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "controls", tuple(int(c) for c in self.controls))
        if not self.polarity:
            object.__setattr__(self, "polarity", (1,) * len(self.controls))
        object.__setattr__(self, "polarity", tuple(int(p) for p in self.polarity))
        if self.kind not in BASE_KINDS:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        if len(self.polarity) != len(self.controls) or set(self.polarity) - {0, 1}:
            raise CircuitError("one polarity bit (0 or 1) is required per control")
        qubits = self.targets + self.controls
        if len(set(qubits)) != len(qubits):
            raise CircuitError(f"repeated qubit in {self}")
        if min(qubits, default=0) < 0:
            raise CircuitError("negative qubit index")
        n_t = len(self.targets)
        if self.kind in _TWO_TARGET and n_t != 2:
            raise CircuitError(f"{self.kind} acts on exactly two targets")
        if self.kind not in _TWO_TARGET + _ORACLES and n_t != 1:
            raise CircuitError(f"{self.kind} acts on exactly one target")
        if self.kind in _PARAMETRIC:
            if self.theta is None:
                raise CircuitError(f"{self.kind} needs an angle")
            if self.kind == "RX" and not _is_multiple_of_half_pi(self.theta):
                raise CircuitError("RX angles are restricted to multiples of pi/2")
        if self.kind == "PERM":
            if self.table is None or sorted(self.table) != list(range(2 ** n_t)):
                raise CircuitError("PERM needs a permutation of the target basis")
        if self.kind == "DIAG":
            if self.table is None or len(self.table) != 2 ** n_t:
                raise CircuitError("DIAG needs one phase angle per target basis state")
        if self.kind == "XOR":
            size = len(self.table or ())
            n_in = size.bit_length() - 1
            if size == 0 or size & (size - 1) or n_in >= n_t:
                raise CircuitError("XOR needs a table of length 2**n_in with n_in < len(targets)")
            if min(self.table) < 0 or max(self.table) >= 2 ** (n_t - n_in):
                raise CircuitError("XOR table values do not fit the output register")

    @property
    def qubits(self) -> tuple[int, ...]:
        return self.controls + self.targets

    @property
    def width(self) -> int:
        return len(self.qubits)

    @property
    def is_oracle(self) -> bool:
        return self.kind in _ORACLES

    @property
    def name(self) -> str:
        c = len(self.controls)
        if self.is_oracle:
            return "ORACLE"
        special = {
            ("X", 1): "CNOT",
            ("X", 2): "TOFFOLI",
            ("Z", 1): "CZ",
            ("PHASE", 1): "CPHASE",
            ("PHASE", 2): "CCPHASE",
        }
        if (self.kind, c) in special:
            return special[(self.kind, c)]
        if c == 0:
            return self.kind
        return f"C{c}-{self.kind}" if c > 1 else f"C{self.kind}"

    def permutation(self) -> np.ndarray:
        """Image of each target basis state for the classical (PERM/XOR) kinds."""
        if self.kind == "PERM":
            return np.asarray(self.table, dtype=np.int64)
        if self.kind != "XOR":
            raise CircuitError(f"{self.kind} is not a classical permutation")
        n_out = len(self.targets) - (len(self.table).bit_length() - 1)
        idx = np.arange(2 ** len(self.targets), dtype=np.int64)
        f = np.asarray(self.table, dtype=np.int64)
        return idx ^ f[idx >> n_out]

    def matrix(self) -> np.ndarray:
        """Matrix on the target qubits only (controls excluded)."""
        t = self.theta
        if self.kind == "X":
            return np.array([[0, 1], [1, 0]], dtype=complex)
        if self.kind == "Z":
            return np.diag([1, -1]).astype(complex)
        if self.kind == "H":
            return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
        if self.kind == "RZ":
            return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])
        if self.kind == "RX":
            c, s = math.cos(t / 2), math.sin(t / 2)
            return np.array([[c, -1j * s], [-1j * s, c]])
        if self.kind == "PHASE":
            return np.diag([1, np.exp(1j * t)])
        if self.kind == "SWAP":
            return np.eye(4, dtype=complex)[[0, 2, 1, 3]]
        if self.kind == "XY":
            c, s = math.cos(t / 2), math.sin(t / 2)
            return np.array(
                [[1, 0, 0, 0], [0, c, 1j * s, 0], [0, 1j * s, c, 0], [0, 0, 0, 1]]
            )
        if self.kind in ("PERM", "XOR"):
            perm = self.permutation()
            mat = np.zeros((len(perm), len(perm)), dtype=complex)
            mat[perm, np.arange(len(perm))] = 1
            return mat
        if self.kind == "DIAG":
            return np.diag(np.exp(1j * np.asarray(self.table, dtype=float)))
        raise AssertionError(self.kind)

    def full_matrix(self) -> np.ndarray:
        """Matrix on ``controls + targets`` in that qubit order."""
        u = self.matrix()
        c = len(self.controls)
        dim_t = u.shape[0]
        full = np.eye(2 ** c * dim_t, dtype=complex)
        sel = int("".join(map(str, self.polarity)), 2) if c else 0
        block = slice(sel * dim_t, (sel + 1) * dim_t)
        full[block, block] = u
        return full

    def inverse(self) -> "Gate":
        if self.kind in _SELF_INVERSE + ("XOR",):
            return self
        if self.kind in _PARAMETRIC:
            return replace(self, theta=-self.theta)
        if self.kind == "PERM":
            inv = [0] * len(self.table)
            for i, j in enumerate(self.table):
                inv[j] = i
            return replace(self, table=tuple(inv))
        return replace(self, table=tuple(-float(a) for a in self.table))

    def shifted(self, mapping) -> "Gate":
        """Relabel qubits through ``mapping`` (a sequence or dict)."""
        return replace(
            self,
            targets=tuple(mapping[q] for q in self.targets),
            controls=tuple(mapping[q] for q in self.controls),
        )

    def with_control(self, qubit: int, polarity: int = 1) -> "Gate":
        if qubit in self.qubits:
            raise CircuitError(f"control qubit {qubit} already used by {self.name}")
        return replace(
            self, controls=self.controls + (qubit,), polarity=self.polarity + (polarity,)
        )

    def to_text(self) -> str:
        parts = [self.name if not self.is_oracle else f"ORACLE:{self.kind}"]
        parts += [str(q) for q in self.qubits]
        if self.theta is not None:
            parts.append(f"theta={self.theta!r}")
        if self.controls:
            parts.append("polarity=" + "".join(map(str, self.polarity)))
        if self.table is not None:
            parts.append("table=" + ",".join(repr(x) for x in self.table))
        return " ".join(parts)


# ----------------------------------------------------------- constructors


def X(q, controls=(), polarity=()):
    return Gate("X", (q,), tuple(controls), tuple(polarity))


def CNOT(c, t, polarity=1):
    return Gate("X", (t,), (c,), (polarity,))


def TOFFOLI(c1, c2, t, polarity=(1, 1)):
    return Gate("X", (t,), (c1, c2), tuple(polarity))


def H(q):
    return Gate("H", (q,))


def Z(q):
    return Gate("Z", (q,))


def CZ(a, b):
    return Gate("Z", (b,), (a,))


def RZ(q, theta):
    return Gate("RZ", (q,), theta=float(theta))


def RX(q, theta):
    return Gate("RX", (q,), theta=float(theta))


def PHASE(q, theta, controls=(), polarity=()):
    return Gate("PHASE", (q,), tuple(controls), tuple(polarity), theta=float(theta))


def CPHASE(a, b, theta):
    return Gate("PHASE", (b,), (a,), theta=float(theta))


def CCPHASE(a, b, c, theta):
    return Gate("PHASE", (c,), (a, b), theta=float(theta))


def SWAP(a, b):
    return Gate("SWAP", (a, b))


def XY(a, b, theta):
    return Gate("XY", (a, b), theta=float(theta))


def PERM(targets, table, controls=(), polarity=()):
    return Gate("PERM", tuple(targets), tuple(controls), tuple(polarity), table=tuple(int(x) for x in table))


def XOR(inputs, outputs, table, controls=(), polarity=()):
    if len(table) != 2 ** len(inputs):
        raise CircuitError(f"XOR over {len(inputs)} input bits needs {2 ** len(inputs)} table entries")
    return Gate(
        "XOR", tuple(inputs) + tuple(outputs), tuple(controls), tuple(polarity),
        table=tuple(int(x) for x in table),
    )


def DIAG(targets, phases, controls=(), polarity=()):
    return Gate("DIAG", tuple(targets), tuple(controls), tuple(polarity), table=tuple(float(x) for x in phases))


# ----------------------------------------------------------------- circuit


@dataclass(frozen=True)
class Circuit:
    qubit_count: int
    gates: tuple[Gate, ...] = ()
    label: str = ""
    # named half-open gate-index ranges, e.g. ("adder", 3, 40)
    sections: tuple[tuple[str, int, int], ...] = field(default=(), compare=False)
    # work qubits that must start and end in |0>
    ancillas: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.qubit_count:
                raise CircuitError(
                    f"{g.name} on qubits {g.qubits} exceeds qubit_count={self.qubit_count}"
                )

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def section(self, name: str) -> "Circuit":
        for sec, lo, hi in self.sections:
            if sec == name:
                return Circuit(
                    self.qubit_count, self.gates[lo:hi], f"{self.label}:{name}", (), self.ancillas
                )
        raise KeyError(name)

    def section_names(self) -> list[str]:
        return [s for s, _, _ in self.sections]

    def to_text(self) -> str:
        head = [f"# qubits={self.qubit_count} label={self.label}"]
        if self.ancillas:
            head.append("# ancillas " + " ".join(map(str, self.ancillas)))
        for name, lo, hi in self.sections:
            head.append(f"# section {name} {lo} {hi}")
        return "\n".join(head + [g.to_text() for g in self.gates]) + "\n"


class CircuitBuilder:
    """Mutable helper used by the builders; ``build()`` freezes the result."""

    def __init__(self, qubit_count: int, label: str = "", ancillas: Sequence[int] = ()):
        self.qubit_count = qubit_count
        self.label = label
        self.ancillas = tuple(ancillas)
        self.gates: list[Gate] = []
        self._sections: list[tuple[str, int, int]] = []
        self._open: dict[str, int] = {}

    def add(self, *items) -> "CircuitBuilder":
        for item in items:
            if isinstance(item, Gate):
                self.gates.append(item)
            elif isinstance(item, Circuit):
                self.gates.extend(item.gates)
            else:
                for sub in item:
                    self.add(sub)
        return self

    def place(self, circuit: Circuit, qubits: Sequence[int], section: str | None = None):
        """Append ``circuit`` with its qubit i mapped onto ``qubits[i]``."""
        if len(qubits) != circuit.qubit_count:
            raise CircuitError(
                f"placing a {circuit.qubit_count}-qubit circuit on {len(qubits)} qubits"
            )
        start = len(self.gates)
        self.gates.extend(g.shifted(qubits) for g in circuit.gates)
        for name, lo, hi in circuit.sections:
            self._sections.append((name, start + lo, start + hi))
        if section:
            self._sections.append((section, start, len(self.gates)))
        return self

    def begin(self, name: str):
        self._open[name] = len(self.gates)

    def end(self, name: str):
        self._sections.append((name, self._open.pop(name), len(self.gates)))

    def build(self) -> Circuit:
        return Circuit(
            self.qubit_count, tuple(self.gates), self.label, tuple(self._sections), self.ancillas
        )


def concat(*circuits: Circuit, label: str = "") -> Circuit:
    q = max(c.qubit_count for c in circuits)
    b = CircuitBuilder(q, label)
    for c in circuits:
        b.place(c, list(range(c.qubit_count)))
    return b.build()


def adjoint(circuit: Circuit) -> Circuit:
    """Reverse the gate list and invert each gate."""
    n = len(circuit.gates)
    sections = tuple((name, n - hi, n - lo) for name, lo, hi in circuit.sections)
    return Circuit(
        circuit.qubit_count,
        tuple(g.inverse() for g in reversed(circuit.gates)),
        circuit.label + "^dag" if not circuit.label.endswith("^dag") else circuit.label[:-4],
        sections,
        circuit.ancillas,
    )


def controlled(item: Gate | Circuit, control: int, polarity: int = 1) -> Circuit:
    """Add ``control`` to every gate; the result is block-diagonal in the control."""
    if isinstance(item, Gate):
        q = max(max(item.qubits), control) + 1
        return Circuit(q, (item.with_control(control, polarity),), f"C{item.name}")
    q = max(item.qubit_count, control + 1)
    gates = tuple(g.with_control(control, polarity) for g in item.gates)
    if control in item.ancillas:
        raise CircuitError(f"control qubit {control} is an ancilla of {item.label}")
    return Circuit(q, gates, f"ctrl({item.label})", item.sections, item.ancillas)


def compile_toffoli(style: str = "ccphase-native", c1=0, c2=1, t=2, polarity=(1, 1)) -> Circuit:
    """Toffoli network on qubits (c1, c2, t).

    ``ccphase-native`` is H . CCPHASE(pi) . H on the target; ``cnot-decomposition``
    is the textbook 6-CNOT network with T = PHASE(pi/4); ``abstract`` keeps the
    TOFFOLI gate itself.  Controls with polarity 0 are conjugated by X.
    """
    q = max(c1, c2, t) + 1
    flips = [X(c) for c, p in zip((c1, c2), polarity) if p == 0]
    if style == "abstract":
        body = [TOFFOLI(c1, c2, t)]
    elif style == "ccphase-native":
        body = [H(t), CCPHASE(c1, c2, t, math.pi), H(t)]
    elif style == "cnot-decomposition":
        T = lambda q_: PHASE(q_, math.pi / 4)  # noqa: E731
        Tdg = lambda q_: PHASE(q_, -math.pi / 4)  # noqa: E731
        body = [
            H(t), CNOT(c2, t), Tdg(t), CNOT(c1, t), T(t), CNOT(c2, t), Tdg(t),
            CNOT(c1, t), T(c2), T(t), H(t), CNOT(c1, c2), T(c1), Tdg(c2), CNOT(c1, c2),
        ]
    else:
        raise CircuitError(f"unknown toffoli style {style!r}")
    return Circuit(q, tuple(flips + body + flips), f"toffoli[{style}]")


def lower_toffolis(circuit: Circuit, style: str) -> Circuit:
    """Rewrite every TOFFOLI gate with ``compile_toffoli(style)``; sections are kept."""
    if style == "abstract":
        return circuit
    gates: list[Gate] = []
    index_map = [0]
    for g in circuit.gates:
        if g.name == "TOFFOLI":
            (c1, c2), (t,) = g.controls, g.targets
            gates.extend(compile_toffoli(style, c1, c2, t, g.polarity).gates)
        else:
            gates.append(g)
        index_map.append(len(gates))
    sections = tuple((n, index_map[lo], index_map[hi]) for n, lo, hi in circuit.sections)
    return Circuit(circuit.qubit_count, tuple(gates), circuit.label, sections, circuit.ancillas)


# --------------------------------------------------------------- simulator


def _check_cap(q: int):
    if q > QUBIT_CAP:
        raise ResourceLimitError(f"{q} qubits exceeds the dense simulator cap of {QUBIT_CAP}")


def _apply_gate_tensor(psi: np.ndarray, gate: Gate, q: int) -> None:
    """In-place application on a tensor of shape (2,)*q + (batch,)."""
    idx: list = [slice(None)] * (q + 1)
    for c, p in zip(gate.controls, gate.polarity):
        idx[c] = p
    idx = tuple(idx)
    sub = psi[idx]
    ctrl = sorted(gate.controls)
    tpos = [t - sum(1 for c in ctrl if c < t) for t in gate.targets]
    nt = len(tpos)
    moved = np.moveaxis(sub, tpos, list(range(nt)))
    shape = moved.shape
    flat = moved.reshape(2 ** nt, -1)
    if gate.kind == "DIAG":
        out = np.exp(1j * np.asarray(gate.table))[:, None] * flat
    elif gate.kind in ("PERM", "XOR"):
        out = np.empty_like(flat)
        out[gate.permutation()] = flat
    elif gate.kind in ("PHASE", "Z", "RZ"):
        out = np.diag(gate.matrix())[:, None] * flat
    else:
        out = gate.matrix() @ flat
    psi[idx] = np.moveaxis(out.reshape(shape), list(range(nt)), tpos)


def apply(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    """Apply ``circuit`` to a state vector, or to the columns of a (2**q, B) array."""
    q = circuit.qubit_count
    _check_cap(q)
    state = np.asarray(state, dtype=complex)
    vec = state.ndim == 1
    if state.shape[0] != 2 ** q:
        raise CircuitError(f"state of length {state.shape[0]} does not match {q} qubits")
    psi = state.reshape((2,) * q + (-1,)).copy()
    for g in circuit.gates:
        _apply_gate_tensor(psi, g, q)
    out = psi.reshape(2 ** q, -1)
    return out[:, 0] if vec else out


def basis_state(q: int, index: int) -> np.ndarray:
    psi = np.zeros(2 ** q, dtype=complex)
    psi[index] = 1
    return psi


def unitary_of(circuit: Circuit, columns: Sequence[int] | None = None, batch: int = 512) -> np.ndarray:
    """Dense matrix of the circuit, or only the requested columns."""
    q = circuit.qubit_count
    _check_cap(q)
    dim = 2 ** q
    cols = np.arange(dim) if columns is None else np.asarray(columns)
    out = np.empty((dim, len(cols)), dtype=complex)
    for lo in range(0, len(cols), batch):
        chunk = cols[lo:lo + batch]
        block = np.zeros((dim, len(chunk)), dtype=complex)
        block[chunk, np.arange(len(chunk))] = 1
        out[:, lo:lo + len(chunk)] = apply(circuit, block)
    return out


def is_monomial(circuit: Circuit) -> bool:
    """True when every gate maps basis states to phased basis states."""
    ok = ("X", "Z", "RZ", "PHASE", "SWAP", "PERM", "DIAG", "XOR")
    return all(g.kind in ok for g in circuit.gates)


def basis_map(circuit: Circuit, inputs: Iterable[int]) -> tuple[np.ndarray, np.ndarray]:
    """Track basis inputs through a permutation-and-phase circuit.

    Returns ``(outputs, phases)``: input ``i`` ends as ``exp(1j*phases[i])``
    times basis state ``outputs[i]``.  Works beyond the dense cap because
    nothing of size 2**q is ever formed.
    """
    if not is_monomial(circuit):
        bad = sorted({g.name for g in circuit.gates if g.kind in ("H", "RX", "XY")})
        raise CircuitError(f"basis_map needs a monomial circuit; found {bad}")
    q = circuit.qubit_count
    if q > 62:
        raise ResourceLimitError("basis_map packs states into 64-bit integers")
    state = np.array(list(inputs), dtype=np.int64)
    phase = np.zeros(len(state))
    shift = lambda qubit: q - 1 - qubit  # noqa: E731
    for g in circuit.gates:
        active = np.ones(len(state), dtype=bool)
        for c, p in zip(g.controls, g.polarity):
            active &= ((state >> shift(c)) & 1) == p
        local = np.zeros(len(state), dtype=np.int64)
        for t in g.targets:
            local = (local << 1) | ((state >> shift(t)) & 1)
        if g.kind in ("X", "SWAP", "PERM", "XOR"):
            if g.kind == "X":
                new_local = local ^ 1
            elif g.kind == "SWAP":
                new_local = ((local & 1) << 1) | (local >> 1)
            else:
                new_local = g.permutation()[local]
            new_state = state.copy()
            nt = len(g.targets)
            for pos, t in enumerate(g.targets):
                bit = (new_local >> (nt - 1 - pos)) & 1
                new_state = (new_state & ~(np.int64(1) << shift(t))) | (bit << shift(t))
            state = np.where(active, new_state, state)
        else:
            if g.kind == "DIAG":
                angles = np.asarray(g.table)[local]
            elif g.kind == "Z":
                angles = np.pi * local
            elif g.kind == "PHASE":
                angles = g.theta * local
            else:  # RZ
                angles = g.theta * (local - 0.5)
            phase = phase + np.where(active, angles, 0.0)
    return state, phase


# ----------------------------------------------------------- resources


@dataclass(frozen=True)
class ResourceCount:
    counts: dict
    two_qubit_equivalents: int
    depth: int
    oracle_gates: int = 0
    wide_gates: int = 0

    def as_dict(self) -> dict:
        return {
            "counts": dict(sorted(self.counts.items())),
            "two_qubit_equivalents": self.two_qubit_equivalents,
            "depth": self.depth,
            "oracle_gates": self.oracle_gates,
            "wide_gates": self.wide_gates,
        }


def circuit_depth(gates: Iterable[Gate], qubit_count: int) -> int:
    level = [0] * qubit_count
    depth = 0
    for g in gates:
        layer = max(level[q] for q in g.qubits) + 1
        for q in g.qubits:
            level[q] = layer
        depth = max(depth, layer)
    return depth


def resource_count(circuit: Circuit) -> ResourceCount:
    """Counts per gate name; a three-qubit gate is worth six two-qubit gates.

    Oracle gates and gates on four or more qubits are reported separately and
    never converted into two-qubit equivalents.
    """
    counts = Counter(g.name for g in circuit.gates)
    two = sum(1 for g in circuit.gates if not g.is_oracle and g.width == 2)
    three = sum(1 for g in circuit.gates if not g.is_oracle and g.width == 3)
    oracle = sum(1 for g in circuit.gates if g.is_oracle)
    wide = sum(1 for g in circuit.gates if not g.is_oracle and g.width >= 4)
    return ResourceCount(
        dict(counts), two + 6 * three, circuit_depth(circuit.gates, circuit.qubit_count), oracle, wide
    )


def entangling_count(circuit: Circuit) -> int:
    """Number of non-oracle gates touching two or more qubits."""
    return sum(1 for g in circuit.gates if not g.is_oracle and g.width >= 2)


# -------------------------------------------------------------- equality


def equal_up_to_global_phase(u: np.ndarray, v: np.ndarray, tol: float = 1e-10) -> bool:
    return global_phase_distance(u, v) < tol


def global_phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """max |u - e^{i phi} v| with phi aligning the largest-magnitude entry of v."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise CircuitError(f"shape mismatch {u.shape} vs {v.shape}")
    idx = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    if abs(v[idx]) == 0:
        return float(np.max(np.abs(u)))
    phase = u[idx] / v[idx]
    phase = phase / abs(phase) if abs(phase) > 0 else 1.0
    return float(np.max(np.abs(u - phase * v)))
