import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dngates import arithmetic
from dngates.circuit import CircuitBuilder, basis_map, resource_count, unitary_of
from dngates.group import group_table, inverse_table
from dngates.verify import multiplication_expected, permutation_error

from conftest import data_inputs


def run(circuit, value: int, data_bits: int) -> int:
    """Output data value for one basis input, asserting clean ancillas."""
    extra = circuit.qubit_count - data_bits
    out, phase = basis_map(circuit, [value << extra])
    assert out[0] & ((1 << extra) - 1) == 0, "ancilla left dirty"
    assert abs(phase[0]) < 1e-12
    return int(out[0] >> extra)


# ---------------------------------------------------------------- blocks


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_ones_complement(n):
    c = arithmetic.build_controlled_ones_complement(n, polarity=0)
    assert resource_count(c).counts == {"CNOT": n}
    mask = (1 << n) - 1
    for ctrl in (0, 1):
        for k in range(2 ** n):
            out = run(c, (ctrl << n) | k, n + 1)
            assert out == (ctrl << n) | ((k ^ mask) if ctrl == 0 else k)


def test_ones_complement_example():
    c = arithmetic.build_controlled_ones_complement(2, 0)
    assert run(c, 0b001, 3) == 0b010
    assert run(c, 0b101, 3) == 0b101


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("polarity", [0, 1])
def test_increment_exhaustive(n, polarity):
    c = arithmetic.build_controlled_increment(n, polarity)
    for ctrl in (0, 1):
        for k in range(2 ** n):
            out = run(c, (ctrl << n) | k, n + 1)
            want = (k + 1) % 2 ** n if ctrl == polarity else k
            assert out == (ctrl << n) | want


def test_increment_examples():
    c = arithmetic.build_controlled_increment(2, 0)
    assert run(c, 0b011, 3) == 0b000
    assert run(c, 0b101, 3) == 0b101


def test_increment_toffoli_count_is_linear():
    ns = np.arange(2, 7)
    counts = np.array([resource_count(arithmetic.build_controlled_increment(int(n))).counts.get("TOFFOLI", 0) for n in ns])
    coef, res, *_ = np.polyfit(ns, counts, 1, full=True)
    assert (res[0] if len(res) else 0.0) < 1
    assert np.array_equal(counts, 2 * ns - 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_twos_complement(n):
    c = arithmetic.build_conditional_twos_complement(2 ** n)
    for m2 in (0, 1):
        for k in range(2 ** n):
            out = run(c, (m2 << n) | k, n + 1)
            assert out == (m2 << n) | ((-k) % 2 ** n if m2 else k)


def test_twos_complement_examples():
    c = arithmetic.build_conditional_twos_complement(4)
    assert run(c, 0b101, 3) == 0b111
    assert run(c, 0b001, 3) == 0b001
    assert run(c, 0b100, 3) == 0b100


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_adder_exhaustive(n):
    c = arithmetic.build_in_place_adder(n)
    for a in range(2 ** n):
        for b in range(2 ** n):
            assert run(c, (a << n) | b, 2 * n) == (((a + b) % 2 ** n) << n) | b


def test_adder_example():
    assert run(arithmetic.build_in_place_adder(2), 0b0101, 4) == 0b1001


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_adder_cost(n):
    fwd = arithmetic.build_in_place_adder(n).section("adder")
    assert resource_count(fwd).two_qubit_equivalents == arithmetic.adder_cost_formula(n) == 20 * n - 31


# ---------------------------------------------------------------- group gates


@pytest.mark.parametrize("N", [2, 4, 8, 16, 32])
def test_inversion_oracle(N):
    n = N.bit_length() - 1
    c = arithmetic.build_inversion(N)
    ins = data_inputs(c, n + 1)
    out, phase = basis_map(c, ins)
    assert np.array_equal(out >> (c.qubit_count - n - 1), inverse_table(N))
    assert np.array_equal(out & ((1 << (c.qubit_count - n - 1)) - 1), np.zeros_like(out))
    assert np.allclose(phase, 0)


@pytest.mark.parametrize("N", [4, 8])
def test_simplified_inversion(N):
    c = arithmetic.build_inversion(N, "simplified")
    assert c.ancillas == ()
    assert permutation_error(c, c.qubit_count, inverse_table(N)) == 0


def test_simplified_inversion_other_orders():
    with pytest.raises(ValueError):
        arithmetic.build_inversion(16, "simplified")


@pytest.mark.parametrize("N", [2, 4, 8, 16])
def test_inversion_is_involution(N):
    """Squares to the identity on every input with clean ancillas."""
    c = arithmetic.build_inversion(N)
    b = CircuitBuilder(c.qubit_count)
    b.add(c, c)
    ins = data_inputs(c, N.bit_length())
    U2 = unitary_of(b.build(), columns=ins)
    assert np.max(np.abs(U2 - np.eye(2 ** c.qubit_count)[:, ins])) < 1e-12


@pytest.mark.parametrize("N", [4, 8])
def test_simplified_inversion_is_involution_everywhere(N):
    U = unitary_of(arithmetic.build_inversion(N, "simplified"))
    assert np.max(np.abs(U @ U - np.eye(len(U)))) < 1e-12


@pytest.mark.parametrize("N", [2, 4, 8, 16])
def test_multiplication_oracle(N):
    n = N.bit_length() - 1
    c = arithmetic.build_multiplication(N)
    ins = data_inputs(c, 2 * n + 2)
    out, phase = basis_map(c, ins)
    extra = c.qubit_count - 2 * n - 2
    assert np.array_equal(out >> extra, multiplication_expected(N))
    assert not np.any(out & ((1 << extra) - 1))
    assert np.allclose(phase, 0)


def test_multiplication_example():
    c = arithmetic.build_multiplication(4)
    assert run(c, 0b100100, 6) == 0b100000


@pytest.mark.parametrize("style", ["ccphase-native", "cnot-decomposition"])
def test_multiplication_styles(style):
    ref = unitary_of(arithmetic.build_multiplication(4))
    got = unitary_of(arithmetic.build_multiplication(4, style))
    assert np.max(np.abs(ref - got)) < 1e-12


def test_multiplication_d4_variant():
    c = arithmetic.build_multiplication(4, variant="d4")
    assert c.qubit_count == 6 and c.ancillas == ()
    assert permutation_error(c, 6, multiplication_expected(4)) == 0
    assert resource_count(c).counts == {"CNOT": 5, "TOFFOLI": 1}
    with pytest.raises(ValueError):
        arithmetic.build_multiplication(8, variant="d4")


@pytest.mark.parametrize("N", [2, 4, 8])
def test_left_action_by_inverse_undoes(N):
    """Multiplying by g and then by g^-1 returns the second register."""
    n = N.bit_length() - 1
    G = 2 * N
    c = arithmetic.build_multiplication(N)
    inv = inverse_table(N)
    for g in range(G):
        for h in range(G):
            gh = run(c, (g << (n + 1)) | h, 2 * n + 2) & (G - 1)
            back = run(c, (int(inv[g]) << (n + 1)) | gh, 2 * n + 2) & (G - 1)
            assert back == h


@pytest.mark.parametrize("N", [2, 4, 8])
def test_inversion_from_multiplication(N):
    """|g>|e> -> |g>|g> by multiplication, then inverting the first register gives |g^-1>|g>."""
    n = N.bit_length() - 1
    mult = arithmetic.build_multiplication(N)
    inv = arithmetic.build_inversion(N)
    b = CircuitBuilder(mult.qubit_count, ancillas=mult.ancillas)
    b.place(mult, list(range(mult.qubit_count)))
    b.place(inv, list(range(n + 1)) + list(mult.ancillas[: inv.qubit_count - n - 1]))
    c = b.build()
    table = inverse_table(N)
    for g in range(2 * N):
        assert run(c, g << (n + 1), 2 * n + 2) == (int(table[g]) << (n + 1)) | g


@pytest.mark.parametrize("N", [2, 4, 8])
def test_right_multiplication(N):
    n = N.bit_length() - 1
    c = arithmetic.build_right_multiplication(N)
    T = group_table(N)
    for g in range(2 * N):
        for h in range(2 * N):
            out = run(c, (g << (n + 1)) | h, 2 * n + 2)
            assert out == (g << (n + 1)) | T[h, g]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 31), st.integers(0, 31))
def test_multiplication_n16_random(g, h):
    c = _mult16()
    assert run(c, (g << 5) | h, 10) == (g << 5) | group_table(16)[g, h]


_cache = {}


def _mult16():
    if "c" not in _cache:
        _cache["c"] = arithmetic.build_multiplication(16)
    return _cache["c"]


def test_bad_variant():
    with pytest.raises(ValueError):
        arithmetic.build_inversion(4, "fancy")
    with pytest.raises(ValueError):
        arithmetic.build_controlled_increment(0)
