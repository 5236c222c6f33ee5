"""Reversible arithmetic on G-registers: inversion and left multiplication.

Register layout for one group element is ``[m, k_{n-1}, ..., k_0]`` (n + 1
qubits).  Work qubits always come after the data qubits and are listed in
``Circuit.ancillas``.
"""
from __future__ import annotations

from .circuit import (
    CNOT,
    TOFFOLI,
    Circuit,
    CircuitBuilder,
    X,
    adjoint,
    lower_toffolis,
)
from .group import check_order


def _bits(n: int) -> int:
    if n < 1:
        raise ValueError(f"register width must be >= 1, got {n}")
    return n


def build_controlled_ones_complement(n: int, polarity: int = 0) -> Circuit:
    """Flip all n rotation bits when qubit 0 equals ``polarity``; n CNOTs."""
    _bits(n)
    gates = [CNOT(0, 1 + j, polarity) for j in range(n)]
    return Circuit(n + 1, tuple(gates), f"ones_complement[n={n},on-{polarity}]")


def build_controlled_increment(n: int, polarity: int = 0) -> Circuit:
    """|c>|k> -> |c>|k+1 mod 2^n> when c == polarity.

    Qubits: control, k_{n-1} .. k_0, then n-1 clean ancillas a_1 .. a_{n-1}
    holding the running AND  a_j = [c active] k_0 ... k_{j-1}.  The top bit is
    flipped first so every AND can be uncomputed from bits that have not yet
    changed.  Uses 2n - 2 Toffolis and n CNOTs.
    """
    _bits(n)
    q = 2 * n
    k = lambda j: n - j  # noqa: E731  (qubit of rotation bit j)
    a = lambda j: n + j  # noqa: E731  (ancilla a_j, 1 <= j <= n-1)
    b = CircuitBuilder(q, f"increment[n={n},on-{polarity}]", ancillas=range(n + 1, q))

    def and_gate(j: int):
        if j == 1:
            return TOFFOLI(0, k(0), a(1), (polarity, 1))
        return TOFFOLI(a(j - 1), k(j - 1), a(j))

    for j in range(1, n):
        b.add(and_gate(j))
    for j in range(n - 1, 0, -1):
        b.add(CNOT(a(j), k(j)))
        b.add(and_gate(j))
    b.add(CNOT(0, k(0), polarity))
    return b.build()


def build_controlled_negation(n: int, polarity: int = 0) -> Circuit:
    """|c>|k> -> |c>|-k mod 2^n> when c == polarity (ones complement, then +1)."""
    inc = build_controlled_increment(n, polarity)
    b = CircuitBuilder(inc.qubit_count, f"negation[n={n},on-{polarity}]", inc.ancillas)
    b.begin("ones_complement")
    b.add(build_controlled_ones_complement(n, polarity))
    b.end("ones_complement")
    b.place(inc, list(range(inc.qubit_count)), section="increment")
    return b.build()


def build_inversion(N: int, variant: str = "generic") -> Circuit:
    """|g> -> |g^-1>: negate k when m = 0, leave reflections alone.

    ``variant="simplified"`` gives ancilla-free hand-reduced circuits for
    N = 4 and N = 8.
    """
    n = check_order(N)
    if variant == "generic":
        c = build_controlled_negation(n, polarity=0)
        return Circuit(c.qubit_count, c.gates, f"inversion[N={N}]", c.sections, c.ancillas)
    if variant != "simplified":
        raise ValueError(f"unknown inversion variant {variant!r}")
    if N == 4:
        # -k mod 4 keeps k0 and flips k1 when k0 = 1
        gates = (TOFFOLI(0, 2, 1, (0, 1)),)
    elif N == 8:
        # k1 <- k1 ^ k0, k2 <- k2 ^ (k1 | k0), written with bits flipped first
        gates = (
            CNOT(0, 1, 0),
            CNOT(0, 2, 0),
            X(1, controls=(0, 2, 3), polarity=(0, 1, 0)),
            TOFFOLI(0, 3, 2, (0, 0)),
        )
    else:
        raise ValueError("the simplified inversion exists only for N = 4 and N = 8")
    return Circuit(n + 1, gates, f"inversion_simplified[N={N}]")


def build_conditional_twos_complement(N: int) -> Circuit:
    """|m2>|k1> -> |m2>|2^n - k1 mod 2^n> when m2 = 1."""
    n = check_order(N)
    c = build_controlled_negation(n, polarity=1)
    return Circuit(c.qubit_count, c.gates, f"twos_complement[N={N}]", c.sections, c.ancillas)


def build_in_place_adder(n: int) -> Circuit:
    """|A>|B>|0> -> |A+B mod 2^n>|B>|0>.

    Qubits: A (n bits, MSB first), B (n bits), carries c_1 .. c_{n-1}.  The
    ``adder`` section computes every carry from the untouched inputs using the
    Reed-Muller form c_{i+1} = A_i B_i ^ A_i c_i ^ B_i c_i and then writes the
    sums A_i <- A_i ^ B_i ^ c_i.  The ``carry_cleanup`` section restores the
    carries, temporarily recovering each A_i from its sum.
    """
    _bits(n)
    A = lambda i: n - 1 - i  # noqa: E731
    B = lambda i: 2 * n - 1 - i  # noqa: E731
    C = lambda i: 2 * n - 1 + i  # noqa: E731  (carry into bit i, 1 <= i <= n-1)
    q = 3 * n - 1
    b = CircuitBuilder(q, f"adder[n={n}]", ancillas=range(2 * n, q))

    def carry(i: int) -> list:
        # carry into bit i from bit i-1
        if i == 1:
            return [TOFFOLI(A(0), B(0), C(1))]
        return [
            TOFFOLI(A(i - 1), B(i - 1), C(i)),
            TOFFOLI(A(i - 1), C(i - 1), C(i)),
            TOFFOLI(B(i - 1), C(i - 1), C(i)),
        ]

    def sum_bit(i: int) -> list:
        if i == 0:
            return [CNOT(B(0), A(0))]
        return [CNOT(B(i), A(i)), CNOT(C(i), A(i))]

    b.begin("adder")
    for i in range(1, n):
        b.add(carry(i))
    for i in range(n):
        b.add(sum_bit(i))
    b.end("adder")
    b.begin("carry_cleanup")
    for i in range(n - 1, 0, -1):
        b.add(sum_bit(i - 1))  # A_{i-1} is back to its input value
        b.add(carry(i))
        b.add(sum_bit(i - 1))
    b.end("carry_cleanup")
    return b.build()


def adder_cost_formula(n: int) -> int:
    """Two-qubit equivalents of the forward adder (Toffoli counted as 6)."""
    return 20 * n - 31


def build_multiplication(N: int, toffoli_style: str = "abstract", variant: str = "generic") -> Circuit:
    """|g>|h> -> |g>|g.h> for D_N.

    Qubits: [m1, k1 (n), m2, k2 (n)] then n-1 shared ancillas.  The rotation
    part k1 * (-1)^m2 + k2 is done by negating k1 when m2 = 1, adding it into
    k2 and undoing the negation; the reflection bit is a single CNOT.

    ``variant="d4"`` returns the ancilla-free six-qubit circuit for N = 4.
    """
    n = check_order(N)
    if variant == "d4":
        if N != 4:
            raise ValueError("the d4 variant requires N = 4")
        return lower_toffolis(_multiplication_d4(), toffoli_style)
    if variant != "generic":
        raise ValueError(f"unknown multiplication variant {variant!r}")
    m1, m2 = 0, n + 1
    k1 = [1 + j for j in range(n)]
    k2 = [n + 2 + j for j in range(n)]
    anc = list(range(2 * n + 2, 3 * n + 1))
    q = 3 * n + 1
    b = CircuitBuilder(q, f"multiplication[N={N}]", ancillas=anc)
    neg = build_controlled_negation(n, polarity=1)
    neg_wires = [m2] + k1 + anc
    b.place(neg, neg_wires, section="negate")
    b.place(build_in_place_adder(n), k2 + k1 + anc)
    b.place(adjoint(neg), neg_wires, section="unnegate")
    b.begin("reflection")
    b.add(CNOT(m1, m2))
    b.end("reflection")
    return lower_toffolis(b.build(), toffoli_style)


def _multiplication_d4() -> Circuit:
    # qubits a1 b1 c1 a2 b2 c2 = m1 k1_1 k1_0 m2 k2_1 k2_0
    a1, b1, c1, a2, b2, c2 = range(6)
    gates = (
        CNOT(a2, c2),  # c2 ^ m2 selects addition (c1 c2) or subtraction (c1 !c2)
        TOFFOLI(c1, c2, b2),
        CNOT(a2, c2),
        CNOT(b1, b2),
        CNOT(c1, c2),
        CNOT(a1, a2),
    )
    return Circuit(6, gates, "multiplication_d4")


def build_right_multiplication(N: int, toffoli_style: str = "abstract") -> Circuit:
    """|g>|h> -> |g>|h.g>, from two inversions of the second register and the
    adjoint left multiplication:  h -> h^-1 -> g^-1 h^-1 = (h g)^-1 -> h g.
    """
    n = check_order(N)
    mult = build_multiplication(N, toffoli_style)
    inv = build_inversion(N)
    b = CircuitBuilder(mult.qubit_count, f"right_multiplication[N={N}]", mult.ancillas)
    second = list(range(n + 1, 2 * n + 2)) + list(mult.ancillas)
    b.place(inv, second, section="invert_second")
    b.place(adjoint(mult), list(range(mult.qubit_count)), section="inverse_left_multiply")
    b.place(inv, second, section="invert_second_again")
    return b.build()
