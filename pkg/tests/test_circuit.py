import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dngates.circuit import (
    CCPHASE,
    CNOT,
    CPHASE,
    CZ,
    DIAG,
    H,
    PERM,
    PHASE,
    QUBIT_CAP,
    RX,
    RZ,
    SWAP,
    TOFFOLI,
    XOR,
    XY,
    Circuit,
    CircuitBuilder,
    CircuitError,
    Gate,
    ResourceLimitError,
    X,
    Z,
    adjoint,
    apply,
    basis_map,
    basis_state,
    circuit_depth,
    compile_toffoli,
    concat,
    controlled,
    entangling_count,
    global_phase_distance,
    lower_toffolis,
    resource_count,
    unitary_of,
)

I2 = np.eye(2)
XM = np.array([[0, 1], [1, 0]])
HM = np.array([[1, 1], [1, -1]]) / math.sqrt(2)


def on(q, *gates):
    return Circuit(q, gates)


# ---------------------------------------------------------------- gate matrices


def test_qubit_zero_is_most_significant():
    psi = apply(on(2, X(0)), basis_state(2, 0))
    assert psi[0b10] == 1


@pytest.mark.parametrize(
    "gate, expected",
    [
        (X(0), XM),
        (Z(0), np.diag([1, -1])),
        (H(0), HM),
        (RZ(0, 0.7), np.diag([np.exp(-0.35j), np.exp(0.35j)])),
        (RX(0, math.pi), np.array([[0, -1j], [-1j, 0]])),
        (PHASE(0, 0.4), np.diag([1, np.exp(0.4j)])),
    ],
)
def test_single_qubit_matrices(gate, expected):
    assert np.allclose(unitary_of(on(1, gate)), expected, atol=1e-14)


def test_two_and_three_qubit_matrices():
    cnot = np.eye(4)[[0, 1, 3, 2]]
    assert np.allclose(unitary_of(on(2, CNOT(0, 1))), cnot)
    assert np.allclose(unitary_of(on(2, CZ(0, 1))), np.diag([1, 1, 1, -1]))
    assert np.allclose(unitary_of(on(2, CPHASE(0, 1, 0.3))), np.diag([1, 1, 1, np.exp(0.3j)]))
    assert np.allclose(unitary_of(on(2, SWAP(0, 1))), np.eye(4)[[0, 2, 1, 3]])
    c, s = math.cos(0.25), math.sin(0.25)
    xy = np.array([[1, 0, 0, 0], [0, c, 1j * s, 0], [0, 1j * s, c, 0], [0, 0, 0, 1]])
    assert np.allclose(unitary_of(on(2, XY(0, 1, 0.5))), xy)
    tof = np.eye(8)[[0, 1, 2, 3, 4, 5, 7, 6]]
    assert np.allclose(unitary_of(on(3, TOFFOLI(0, 1, 2))), tof)


def test_ccphase_only_on_all_ones():
    U = unitary_of(on(3, CCPHASE(0, 1, 2, math.pi)))
    assert np.allclose(np.diag(U), [1, 1, 1, 1, 1, 1, 1, -1])
    psi = apply(on(3, CCPHASE(0, 1, 2, math.pi)), basis_state(3, 0b110))
    assert psi[0b110] == 1


def test_polarity_zero_control():
    U = unitary_of(on(2, CNOT(0, 1, polarity=0)))
    assert np.allclose(U, np.eye(4)[[1, 0, 2, 3]])


def test_control_order_is_irrelevant():
    a = unitary_of(on(3, Gate("X", (0,), (2, 1), (1, 0))))
    b = unitary_of(on(3, Gate("X", (0,), (1, 2), (0, 1))))
    assert np.allclose(a, b)


def test_oracle_gates():
    U = unitary_of(on(2, PERM((0, 1), [1, 2, 3, 0])))
    assert np.allclose(U @ np.eye(4)[:, 0], np.eye(4)[:, 1])
    D = unitary_of(on(2, DIAG((0, 1), [0, 0.1, 0.2, 0.3])))
    assert np.allclose(np.diag(D), np.exp(1j * np.array([0, 0.1, 0.2, 0.3])))
    # one input bit, two output bits, table f(0)=2, f(1)=3
    U = unitary_of(on(3, XOR((0,), (1, 2), [2, 3])))
    assert U[0b010, 0b000] == 1 and U[0b111 ^ 0b011, 0b111] == 1


@pytest.mark.parametrize(
    "bad",
    [
        lambda: Gate("FOO", (0,)),
        lambda: Gate("X", (0,), (0,)),
        lambda: Gate("SWAP", (0,)),
        lambda: Gate("RZ", (0,)),
        lambda: RX(0, 0.3),
        lambda: PERM((0,), [0, 0]),
        lambda: XOR((0, 1), (2,), [0, 1]),
        lambda: Gate("X", (0,), (1,), (2,)),
        lambda: Circuit(1, (CNOT(0, 1),)),
    ],
)
def test_invalid_gates_rejected(bad):
    with pytest.raises(CircuitError):
        bad()


def test_gate_names():
    assert CNOT(0, 1).name == "CNOT"
    assert TOFFOLI(0, 1, 2).name == "TOFFOLI"
    assert CCPHASE(0, 1, 2, 1.0).name == "CCPHASE"
    assert Gate("H", (0,), (1,)).name == "CH"
    assert Gate("X", (0,), (1, 2, 3)).name == "C3-X"


# ---------------------------------------------------------------- circuits


def random_circuit(draw, q):
    gates = []
    for _ in range(draw(st.integers(1, 12))):
        kind = draw(st.sampled_from(["H", "X", "RZ", "PHASE", "CNOT", "TOFFOLI", "SWAP", "XY", "CPHASE"]))
        qs = draw(st.permutations(list(range(q))))
        theta = draw(st.floats(-3.0, 3.0))
        if kind == "H":
            gates.append(H(qs[0]))
        elif kind == "X":
            gates.append(X(qs[0]))
        elif kind == "RZ":
            gates.append(RZ(qs[0], theta))
        elif kind == "PHASE":
            gates.append(PHASE(qs[0], theta))
        elif kind == "CNOT":
            gates.append(CNOT(qs[0], qs[1], draw(st.integers(0, 1))))
        elif kind == "TOFFOLI":
            gates.append(TOFFOLI(qs[0], qs[1], qs[2], (draw(st.integers(0, 1)), 1)))
        elif kind == "SWAP":
            gates.append(SWAP(qs[0], qs[1]))
        elif kind == "XY":
            gates.append(XY(qs[0], qs[1], theta))
        else:
            gates.append(CPHASE(qs[0], qs[1], theta))
    return Circuit(q, tuple(gates))


circuits = st.composite(lambda draw: random_circuit(draw, 3))()


@settings(max_examples=40)
@given(circuits)
def test_adjoint_inverts(c):
    U = unitary_of(concat(c, adjoint(c)))
    assert np.max(np.abs(U - np.eye(8))) < 1e-10
    assert adjoint(adjoint(c)) == c


@settings(max_examples=40)
@given(circuits)
def test_unitarity(c):
    U = unitary_of(c)
    assert np.max(np.abs(U.conj().T @ U - np.eye(8))) < 1e-10


@settings(max_examples=30)
@given(circuits, st.integers(0, 2 ** 31 - 1))
def test_linearity(c, seed):
    rng = np.random.default_rng(seed)
    s1, s2 = rng.normal(size=(2, 8)) + 1j * rng.normal(size=(2, 8))
    a, b = 0.3 - 0.2j, 1.1 + 0.5j
    lhs = apply(c, a * s1 + b * s2)
    rhs = a * apply(c, s1) + b * apply(c, s2)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


@settings(max_examples=30)
@given(circuits)
def test_state_norm_preserved(c):
    psi = apply(c, np.ones(8) / math.sqrt(8))
    assert abs(np.linalg.norm(psi) - 1) < 1e-12


@settings(max_examples=30)
@given(circuits)
def test_controlled_is_block_diagonal(c):
    U = unitary_of(c)
    for pol in (0, 1):
        C = unitary_of(controlled(c, 3, pol))
        # control is the last qubit, so blocks interleave
        on_block = C[pol::2, pol::2]
        off_block = C[1 - pol::2, 1 - pol::2]
        assert np.allclose(on_block, U, atol=1e-12)
        assert np.allclose(off_block, np.eye(8), atol=1e-12)


def test_adjoint_examples():
    assert adjoint(on(1, RZ(0, 0.4))).gates == (RZ(0, -0.4),)
    assert adjoint(on(2, CNOT(0, 1))).gates == (CNOT(0, 1),)


def test_empty_circuit_is_identity():
    assert np.allclose(unitary_of(Circuit(3)), np.eye(8))
    rc = resource_count(Circuit(3))
    assert rc.counts == {} and rc.two_qubit_equivalents == 0 and rc.depth == 0


def test_controlled_examples():
    assert controlled(X(1), 0).gates == (CNOT(0, 1),)
    U = unitary_of(controlled(RZ(1, 0.5), 0, polarity=0))
    assert np.allclose(U[:2, :2], np.diag([np.exp(-0.25j), np.exp(0.25j)]))
    assert np.allclose(U[2:, 2:], I2)
    twice = controlled(controlled(on(3, X(2)), 0), 1)
    assert np.allclose(unitary_of(twice), unitary_of(on(3, TOFFOLI(0, 1, 2))))


def test_controlled_refuses_ancilla():
    c = Circuit(2, (CNOT(0, 1),), ancillas=(1,))
    with pytest.raises(CircuitError):
        controlled(c, 1)


@pytest.mark.parametrize("style", ["ccphase-native", "cnot-decomposition"])
@pytest.mark.parametrize("polarity", [(1, 1), (0, 1), (1, 0), (0, 0)])
def test_toffoli_styles_agree(style, polarity):
    ref = unitary_of(on(3, TOFFOLI(0, 1, 2, polarity)))
    got = unitary_of(compile_toffoli(style, 0, 1, 2, polarity))
    assert np.max(np.abs(ref - got)) < 1e-12


def test_toffoli_costs():
    assert resource_count(compile_toffoli("cnot-decomposition")).two_qubit_equivalents == 6
    native = resource_count(compile_toffoli("ccphase-native"))
    assert native.counts.get("CCPHASE") == 1 and native.two_qubit_equivalents == 6
    assert resource_count(compile_toffoli("abstract")).two_qubit_equivalents == 6


def test_lower_toffolis_keeps_sections():
    b = CircuitBuilder(3)
    b.add(H(0))
    b.begin("body")
    b.add(TOFFOLI(0, 1, 2), CNOT(0, 1))
    b.end("body")
    c = b.build()
    low = lower_toffolis(c, "cnot-decomposition")
    assert np.allclose(unitary_of(low), unitary_of(c))
    assert "TOFFOLI" not in resource_count(low).counts
    assert len(low.section("body")) == 16


def test_depth_and_counts():
    c = on(4, CNOT(0, 1), CNOT(2, 3))
    assert circuit_depth(c.gates, 4) == 1
    c = on(3, H(0), CNOT(0, 1), TOFFOLI(0, 1, 2), X(2))
    rc = resource_count(c)
    assert rc.counts == {"H": 1, "CNOT": 1, "TOFFOLI": 1, "X": 1}
    assert rc.two_qubit_equivalents == 7 and rc.depth == 4
    assert entangling_count(c) == 2


def test_oracle_and_wide_counted_separately():
    c = on(4, PERM((0, 1), [1, 0, 3, 2]), Gate("X", (3,), (0, 1, 2)))
    rc = resource_count(c)
    assert rc.oracle_gates == 1 and rc.wide_gates == 1 and rc.two_qubit_equivalents == 0


def test_dense_cap():
    big = Circuit(QUBIT_CAP + 1, (X(0),))
    with pytest.raises(ResourceLimitError):
        unitary_of(big)
    with pytest.raises(ResourceLimitError):
        apply(big, np.zeros(2))


def test_basis_map_beyond_cap():
    q = 30
    c = Circuit(q, (X(0), CNOT(0, q - 1), PHASE(q - 1, 0.5), SWAP(1, 2)))
    out, ph = basis_map(c, [0])
    assert out[0] == (1 << (q - 1)) | 1 and abs(ph[0] - 0.5) < 1e-15
    with pytest.raises(CircuitError):
        basis_map(on(1, H(0)), [0])


@settings(max_examples=30)
@given(st.composite(lambda draw: random_circuit(draw, 4))())
def test_basis_map_matches_dense(c):
    mono = Circuit(c.qubit_count, tuple(g for g in c.gates if g.kind not in ("H", "XY")))
    U = unitary_of(mono)
    out, ph = basis_map(mono, range(16))
    assert np.allclose(U[out, np.arange(16)], np.exp(1j * ph), atol=1e-12)


def test_global_phase_distance():
    U = unitary_of(on(2, H(0), CNOT(0, 1)))
    assert global_phase_distance(np.exp(0.7j) * U, U) < 1e-14
    assert global_phase_distance(U, np.eye(4)) > 0.1


def test_builder_place_and_sections():
    inner = CircuitBuilder(2, "inner")
    inner.begin("a")
    inner.add(CNOT(0, 1))
    inner.end("a")
    b = CircuitBuilder(3)
    b.add(H(0))
    b.place(inner.build(), [2, 0], section="outer")
    c = b.build()
    assert c.gates[1] == CNOT(2, 0)
    assert c.section("a").gates == (CNOT(2, 0),)
    assert c.section_names() == ["a", "outer"]
    with pytest.raises(KeyError):
        c.section("missing")
    rev = adjoint(c)
    assert rev.section("outer").gates == (CNOT(2, 0),)
