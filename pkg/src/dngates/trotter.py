"""Second-order Trotter evolution of one plaquette built from the gate library.

The generator is H = theta_K sum_links M_link + theta_V ReTr(U1 U2 U3^-1 U4^-1),
where M is the single-link matrix of ``spectral.m_matrix``; a step of length
dt approximates exp(i dt H).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .circuit import QUBIT_CAP, Circuit, CircuitBuilder, ResourceLimitError, adjoint, apply
from .fourier import build_fourier, irrep_basis_index
from .group import check_order, irrep_labels
from .plaquette import build_plaquette_trace, plaquette_layout, plaquette_trace_values
from .spectral import kinetic_eigenphases, m_matrix_formula
from .trace import build_diagonal_phase


@dataclass(frozen=True)
class PlaquetteSystem:
    N: int
    theta_k: float
    theta_v: float

    def __post_init__(self):
        check_order(self.N)
        q = plaquette_layout(self.N).qubit_count
        if q > QUBIT_CAP:
            raise ResourceLimitError(f"a D_{self.N} plaquette needs {q} qubits (cap {QUBIT_CAP})")

    @property
    def link_dim(self) -> int:
        return 2 * self.N

    @property
    def physical_dim(self) -> int:
        return self.link_dim ** 4


def build_kinetic_link(N: int, angle: float) -> Circuit:
    """exp(i angle M) on one link: Fourier transform, diagonal phases, inverse."""
    four = build_fourier(N)
    lam = kinetic_eigenphases(N)
    n = check_order(N)
    phases = np.zeros(2 ** (n + 1))
    for row, lab in enumerate(irrep_labels(N)):
        phases[irrep_basis_index(lab, N)] = angle * lam[row]
    diag = build_diagonal_phase(phases, label="kinetic_phases")
    b = CircuitBuilder(four.qubit_count, f"kinetic[N={N}]", ancillas=four.ancillas)
    b.place(four, list(range(four.qubit_count)), section="fourier")
    b.place(diag, list(range(n + 1)), section="phases")
    b.place(adjoint(four), list(range(four.qubit_count)), section="inverse_fourier")
    return b.build()


def trotter_step(system: PlaquetteSystem, dt: float) -> Circuit:
    """Half potential step, kinetic step on every link, half potential step."""
    N = system.N
    lay = plaquette_layout(N)
    half = build_plaquette_trace(N, system.theta_v * dt / 2)
    kin = build_kinetic_link(N, system.theta_k * dt)
    if kin.qubit_count > len(lay.links[0]) + len(lay.ancillas):
        raise ResourceLimitError("kinetic step needs more work qubits than the plaquette provides")
    b = CircuitBuilder(
        lay.qubit_count, f"trotter_step[N={N},dt={dt:g}]", ancillas=lay.work + lay.ancillas
    )
    b.place(half, list(range(lay.qubit_count)), section="potential_half")
    b.begin("kinetic")
    for link in lay.links:
        wires = list(link) + list(lay.ancillas[: kin.qubit_count - len(link)])
        b.place(kin, wires)
    b.end("kinetic")
    b.place(half, list(range(lay.qubit_count)), section="potential_half_2")
    return b.build()


@lru_cache(maxsize=8)
def _hamiltonian(N: int, theta_k: float, theta_v: float) -> sp.csr_matrix:
    G = 2 * N
    M = sp.csr_matrix(m_matrix_formula(N))
    eye = sp.identity(G, format="csr")
    kin = sp.csr_matrix((G ** 4, G ** 4))
    for pos in range(4):
        ops = [eye] * 4
        ops[pos] = M
        term = ops[0]
        for o in ops[1:]:
            term = sp.kron(term, o, format="csr")
        kin = kin + term
    pot = sp.diags(plaquette_trace_values(N))
    return (theta_k * kin + theta_v * pot).tocsr()


def hamiltonian(system: PlaquetteSystem) -> sp.csr_matrix:
    """Generator on the (2N)^4 link space, link 1 most significant."""
    return _hamiltonian(system.N, float(system.theta_k), float(system.theta_v))


def exact_evolve(system: PlaquetteSystem, t: float) -> np.ndarray:
    """Dense exp(i t H) on the physical link space, from an eigendecomposition."""
    H = hamiltonian(system).toarray()
    w, V = np.linalg.eigh(H)
    return (V * np.exp(1j * t * w)) @ V.conj().T


def exact_evolve_states(system: PlaquetteSystem, t: float, states: np.ndarray) -> np.ndarray:
    return expm_multiply(1j * t * hamiltonian(system), np.asarray(states, dtype=complex))


def embed(system: PlaquetteSystem, states: np.ndarray) -> np.ndarray:
    """Link-space states into the full register with work and ancillas in |0>."""
    lay = plaquette_layout(system.N)
    extra = lay.qubit_count - 4 * len(lay.links[0])
    states = np.atleast_2d(np.asarray(states, dtype=complex).T).T
    full = np.zeros((2 ** lay.qubit_count, states.shape[1]), dtype=complex)
    full[np.arange(system.physical_dim) << extra] = states
    return full


def restrict(system: PlaquetteSystem, full: np.ndarray) -> tuple[np.ndarray, float]:
    """Project back onto the physical space; also return the leaked norm."""
    lay = plaquette_layout(system.N)
    extra = lay.qubit_count - 4 * len(lay.links[0])
    idx = np.arange(system.physical_dim) << extra
    phys = full[idx]
    leak = float(np.sqrt(max(np.sum(np.abs(full) ** 2) - np.sum(np.abs(phys) ** 2), 0.0)))
    return phys, leak


def random_states(dim: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(seed))
    psi = rng.normal(size=(dim, count)) + 1j * rng.normal(size=(dim, count))
    return psi / np.linalg.norm(psi, axis=0)


def trotter_error(system: PlaquetteSystem, dt: float, states: np.ndarray) -> float:
    """max over columns of || step(dt) psi - exp(i dt H) psi ||."""
    step = trotter_step(system, dt)
    out, leak = restrict(system, apply(step, embed(system, states)))
    exact = exact_evolve_states(system, dt, states)
    return max(float(np.max(np.linalg.norm(out - exact, axis=0))), leak)


def convergence_table(system: PlaquetteSystem, dts, n_states: int = 4, seed: int = 0) -> list[dict]:
    """Per-step error for each dt and the local slope log2(err(dt) / err(dt/2))
    between consecutive grid points."""
    states = random_states(system.physical_dim, n_states, seed)
    rows = []
    for dt in dts:
        rows.append({"dt": float(dt), "error": trotter_error(system, dt, states)})
    for a, b in zip(rows, rows[1:]):
        b["slope"] = float(np.log(a["error"] / b["error"]) / np.log(a["dt"] / b["dt"]))
    return rows
