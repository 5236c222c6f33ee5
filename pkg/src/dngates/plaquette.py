"""Plaquette trace gate: exp(i theta ReTr(U1 U2 U3^-1 U4^-1)) on four links."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arithmetic import build_inversion, build_multiplication
from .circuit import Circuit, CircuitBuilder, adjoint, lower_toffolis
from .group import check_order, group_table, inverse_table, trace_table
from .trace import build_trace_direct


@dataclass(frozen=True)
class PlaquetteLayout:
    links: tuple[tuple[int, ...], ...]  # four registers of n+1 qubits
    work: tuple[int, ...]  # accumulator, starts and ends as |e>
    ancillas: tuple[int, ...]
    qubit_count: int


def _use_d4_variants(N: int) -> bool:
    return N == 4


def plaquette_layout(N: int) -> PlaquetteLayout:
    n = check_order(N)
    w = n + 1
    links = tuple(tuple(range(i * w, (i + 1) * w)) for i in range(4))
    work = tuple(range(4 * w, 5 * w))
    n_anc = 0 if _use_d4_variants(N) else max(n - 1, 0)
    anc = tuple(range(5 * w, 5 * w + n_anc))
    return PlaquetteLayout(links, work, anc, 5 * w + n_anc)


def build_plaquette_trace(N: int, theta: float, toffoli_style: str = "abstract") -> Circuit:
    """Compute W = U1 U2 U3^-1 U4^-1 into the work register by left
    multiplications, apply the trace gate to W, then run the computation
    backwards.  Links 3 and 4 are inverted in place while W is built.

    For N = 4 the ancilla-free inversion and multiplication circuits keep the
    whole gate at 15 qubits.
    """
    lay = plaquette_layout(N)
    d4 = _use_d4_variants(N)
    inv = build_inversion(N, "simplified" if d4 else "generic")
    mult = build_multiplication(N, variant="d4" if d4 else "generic")
    anc = list(lay.ancillas)

    def inv_wires(link):
        return list(link) + anc[: inv.qubit_count - len(link)]

    def mult_wires(link):
        return list(link) + list(lay.work) + anc

    comp = CircuitBuilder(lay.qubit_count, "plaquette_compute", ancillas=anc)
    comp.place(inv, inv_wires(lay.links[3]))
    comp.place(mult, mult_wires(lay.links[3]))
    comp.place(inv, inv_wires(lay.links[2]))
    comp.place(mult, mult_wires(lay.links[2]))
    comp.place(mult, mult_wires(lay.links[1]))
    comp.place(mult, mult_wires(lay.links[0]))
    compute = comp.build()

    b = CircuitBuilder(
        lay.qubit_count, f"plaquette_trace[N={N},theta={theta:g}]", ancillas=list(lay.work) + anc
    )
    b.place(compute, list(range(lay.qubit_count)), section="compute")
    b.place(build_trace_direct(N, theta), list(lay.work), section="trace")
    b.place(adjoint(compute), list(range(lay.qubit_count)), section="uncompute")
    return lower_toffolis(b.build(), toffoli_style)


def plaquette_trace_values(N: int) -> np.ndarray:
    """ReTr(U1 U2 U3^-1 U4^-1) for every link assignment, link 1 most significant."""
    table = group_table(N)
    inv = inverse_table(N)
    G = 2 * N
    u = np.indices((G, G, G, G)).reshape(4, -1)
    w = table[table[table[u[0], u[1]], inv[u[2]]], inv[u[3]]]
    return np.asarray(trace_table(N))[w]
