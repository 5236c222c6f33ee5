"""Euclidean Metropolis Monte Carlo for D_N gauge fields on periodic lattices.

The action is S = -beta sum_p ReTr U_p with the isotropic plaquette
U_p = U_mu(x) U_nu(x+mu) U_mu(x+nu)^-1 U_nu(x)^-1.  Random numbers come from
numpy's counter-based Philox generator and are passed into the numba kernels
in blocks, so a run is reproducible bit for bit from its seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from .group import check_order, group_table, inverse_table, trace_table

ENUMERATION_BUDGET = 10 ** 8


@dataclass
class LatticeConfig:
    N: int
    dims: tuple[int, ...]
    beta: float
    links: np.ndarray  # (sites, d) element indices
    seed: int = 0
    rng: np.random.Generator = field(default=None, repr=False)

    def __post_init__(self):
        check_order(self.N)
        self.dims = tuple(int(L) for L in self.dims)
        if len(self.dims) < 2 or min(self.dims) < 2:
            raise ValueError("need at least two dimensions of extent >= 2")
        shape = (int(np.prod(self.dims)), len(self.dims))
        self.links = np.ascontiguousarray(self.links, dtype=np.int64)
        if self.links.shape != shape:
            raise ValueError(f"links must have shape {shape}")
        if self.links.min() < 0 or self.links.max() >= 2 * self.N:
            raise ValueError("link index out of range")
        if self.rng is None:
            self.rng = np.random.Generator(np.random.Philox(self.seed))

    @property
    def n_sites(self) -> int:
        return self.links.shape[0]

    @property
    def n_links(self) -> int:
        return self.links.size


def cold_start(N: int, dims, beta: float, seed: int = 0) -> LatticeConfig:
    sites = int(np.prod(dims))
    return LatticeConfig(N, tuple(dims), beta, np.zeros((sites, len(dims)), dtype=np.int64), seed)


def hot_start(N: int, dims, beta: float, seed: int = 0) -> LatticeConfig:
    rng = np.random.Generator(np.random.Philox(seed))
    sites = int(np.prod(dims))
    links = rng.integers(0, 2 * N, size=(sites, len(dims)))
    return LatticeConfig(N, tuple(dims), beta, links, seed, rng)


def neighbor_tables(dims) -> tuple[np.ndarray, np.ndarray]:
    """fwd[x, mu], bwd[x, mu]: site index one step up / down along mu, periodic."""
    dims = tuple(dims)
    coords = np.array(np.unravel_index(np.arange(int(np.prod(dims))), dims)).T
    fwd = np.empty((len(coords), len(dims)), dtype=np.int64)
    bwd = np.empty_like(fwd)
    for mu, L in enumerate(dims):
        up = coords.copy()
        up[:, mu] = (up[:, mu] + 1) % L
        dn = coords.copy()
        dn[:, mu] = (dn[:, mu] - 1) % L
        fwd[:, mu] = np.ravel_multi_index(up.T, dims)
        bwd[:, mu] = np.ravel_multi_index(dn.T, dims)
    return fwd, bwd


@numba.njit(cache=True)
def _plaq(links, fwd, table, inv, x, mu, nu):
    a = links[x, mu]
    b = links[fwd[x, mu], nu]
    c = inv[links[fwd[x, nu], mu]]
    d = inv[links[x, nu]]
    return table[table[table[a, b], c], d]


@numba.njit(cache=True)
def _mean_plaquette(links, fwd, table, inv, tr):
    sites, dim = links.shape
    total = 0.0
    count = 0
    for x in range(sites):
        for mu in range(dim):
            for nu in range(mu + 1, dim):
                total += tr[_plaq(links, fwd, table, inv, x, mu, nu)]
                count += 1
    return total / count


@numba.njit(cache=True)
def _local_trace(links, fwd, bwd, table, inv, tr, x, mu):
    """Sum of ReTr over the plaquettes that contain link (x, mu)."""
    s = 0.0
    dim = links.shape[1]
    for nu in range(dim):
        if nu == mu:
            continue
        s += tr[_plaq(links, fwd, table, inv, x, mu, nu)]
        s += tr[_plaq(links, fwd, table, inv, bwd[x, nu], mu, nu)]
    return s


@numba.njit(cache=True)
def _run_sweeps(links, fwd, bwd, table, inv, tr, beta, proposals, uniforms, measure_out):
    """Sequential Metropolis over all links for each row of ``proposals``."""
    sites, dim = links.shape
    accepted = 0
    for s in range(proposals.shape[0]):
        j = 0
        for x in range(sites):
            for mu in range(dim):
                old = links[x, mu]
                s_old = _local_trace(links, fwd, bwd, table, inv, tr, x, mu)
                links[x, mu] = proposals[s, j]
                s_new = _local_trace(links, fwd, bwd, table, inv, tr, x, mu)
                delta_action = -beta * (s_new - s_old)
                if delta_action <= 0.0 or uniforms[s, j] < np.exp(-delta_action):
                    accepted += 1
                else:
                    links[x, mu] = old
                j += 1
        measure_out[s] = _mean_plaquette(links, fwd, table, inv, tr)
    return accepted


class _Kernel:
    def __init__(self, config: LatticeConfig):
        self.table = np.ascontiguousarray(group_table(config.N))
        self.inv = np.ascontiguousarray(inverse_table(config.N))
        self.tr = np.ascontiguousarray(trace_table(config.N))
        self.fwd, self.bwd = neighbor_tables(config.dims)


def run_chain(config: LatticeConfig, sweeps: int, block: int = 2048) -> tuple[np.ndarray, float]:
    """Advance ``config`` in place; return per-sweep mean plaquette and acceptance rate."""
    k = _Kernel(config)
    out = np.empty(sweeps)
    accepted = 0
    done = 0
    G = 2 * config.N
    while done < sweeps:
        m = min(block, sweeps - done)
        props = config.rng.integers(0, G, size=(m, config.n_links))
        unif = config.rng.random((m, config.n_links))
        accepted += _run_sweeps(
            config.links, k.fwd, k.bwd, k.table, k.inv, k.tr, float(config.beta), props, unif, out[done:done + m]
        )
        done += m
    return out, accepted / max(sweeps * config.n_links, 1)


def metropolis_sweep(config: LatticeConfig) -> LatticeConfig:
    """One full sweep of single-link updates (in place; the config is returned)."""
    run_chain(config, 1)
    return config


def measure_plaquette(config: LatticeConfig) -> float:
    k = _Kernel(config)
    return float(_mean_plaquette(config.links, k.fwd, k.table, k.inv, k.tr))


# ---------------------------------------------------------------- statistics


def jackknife(series: np.ndarray, n_blocks: int = 50) -> tuple[float, float]:
    """Mean and blocked-jackknife standard error."""
    x = np.asarray(series, dtype=float)
    n_blocks = min(n_blocks, len(x))
    usable = len(x) - len(x) % n_blocks
    blocks = x[:usable].reshape(n_blocks, -1).mean(axis=1)
    total = blocks.sum()
    loo = (total - blocks) / (n_blocks - 1)
    err = np.sqrt((n_blocks - 1) / n_blocks * np.sum((loo - loo.mean()) ** 2))
    return float(x[:usable].mean()), float(err)


# ---------------------------------------------------------------- exact oracle


def plaquette_link_lists(dims) -> np.ndarray:
    """(plaquettes, 4, 2) array of (link index, inverted flag) in product order."""
    fwd, _ = neighbor_tables(dims)
    d = len(dims)
    out = []
    for x in range(fwd.shape[0]):
        for mu in range(d):
            for nu in range(mu + 1, d):
                out.append([
                    (x * d + mu, 0),
                    (fwd[x, mu] * d + nu, 0),
                    (fwd[x, nu] * d + mu, 1),
                    (x * d + nu, 1),
                ])
    return np.array(out, dtype=np.int64)


@numba.njit(cache=True)
def _trace_histogram(G, n_links, plaq, table, inv, tr_int, offset, hist):
    cfg = np.zeros(n_links, dtype=np.int64)
    total_configs = G ** n_links
    for _ in range(total_configs):
        t = 0
        for p in range(plaq.shape[0]):
            w = 0  # identity index
            for c in range(4):
                e = cfg[plaq[p, c, 0]]
                if plaq[p, c, 1]:
                    e = inv[e]
                w = table[w, e]
            t += tr_int[w]
        hist[t + offset] += 1
        # mixed-radix increment
        i = 0
        while i < n_links:
            cfg[i] += 1
            if cfg[i] < G:
                break
            cfg[i] = 0
            i += 1


@dataclass(frozen=True)
class TraceHistogram:
    """Number of configurations per value of the summed plaquette trace."""

    values: np.ndarray  # summed ReTr
    counts: np.ndarray
    n_plaquettes: int

    def average(self, beta: float) -> float:
        # shift the exponent for stability
        w = self.counts * np.exp(beta * (self.values - self.values.max()))
        return float(np.sum(w * self.values) / np.sum(w) / self.n_plaquettes)


def trace_histogram(N: int, dims) -> TraceHistogram:
    """Histogram of sum_p ReTr U_p over every configuration (exact enumeration).

    Binning uses integer traces, so only N <= 4 (ReTr in {-2, 0, 2}) is supported.
    """
    check_order(N)
    if N > 4:
        raise ValueError("exact enumeration supports N <= 4")
    G = 2 * N
    plaq = plaquette_link_lists(dims)
    n_links = int(np.prod(dims)) * len(dims)
    if G ** n_links > ENUMERATION_BUDGET:
        raise ValueError(f"{G}^{n_links} configurations exceed the budget {ENUMERATION_BUDGET:.0e}")
    tr_int = np.rint(np.asarray(trace_table(N))).astype(np.int64)
    P = plaq.shape[0]
    offset = 2 * P
    hist = np.zeros(4 * P + 1, dtype=np.int64)
    _trace_histogram(G, n_links, plaq, np.ascontiguousarray(group_table(N)), np.ascontiguousarray(inverse_table(N)), tr_int, offset, hist)
    vals = np.arange(-offset, offset + 1)
    keep = hist > 0
    return TraceHistogram(vals[keep].astype(float), hist[keep].astype(float), P)


def exact_small_lattice_average(N: int, dims, beta: float) -> float:
    """Exact Boltzmann average of the mean plaquette by full enumeration."""
    return trace_histogram(N, dims).average(beta)


# ---------------------------------------------------------------- sweeps


def parse_grid(text: str) -> list[float]:
    """'lo:hi:step' (inclusive of hi within rounding) or a comma list."""
    if ":" in text:
        lo, hi, step = (float(v) for v in text.split(":"))
        if step <= 0:
            raise ValueError("grid step must be positive")
        count = int(np.floor((hi - lo) / step + 1e-9)) + 1
        return [round(lo + i * step, 12) for i in range(count)]
    return [float(v) for v in text.split(",") if v.strip()]


def beta_sweep(
    N: int,
    dims,
    betas,
    sweeps: int,
    thermalization: int,
    seed: int,
    start: str = "cold",
    n_blocks: int = 50,
) -> list[dict]:
    """One independent chain per beta; each gets its own Philox stream derived
    from (seed, index)."""
    rows = []
    for i, beta in enumerate(betas):
        stream = int(np.random.SeedSequence([seed, i]).generate_state(1)[0])
        cfg = (cold_start if start == "cold" else hot_start)(N, dims, beta, stream)
        run_chain(cfg, thermalization)
        series, acc = run_chain(cfg, sweeps)
        mean, err = jackknife(series, n_blocks)
        rows.append({
            "beta": float(beta),
            "plaquette_mean": mean,
            "plaquette_stderr": err,
            "acceptance_rate": acc,
            "e0_normalized": 1.0 - mean / 2.0,
        })
    return rows


# ---------------------------------------------------------------- toy chain


@numba.njit(cache=True)
def _single_link_chain(tr, beta, proposals, uniforms, out):
    cur = 0
    for i in range(proposals.shape[0]):
        new = proposals[i]
        delta_action = -beta * (tr[new] - tr[cur])
        if delta_action <= 0.0 or uniforms[i] < np.exp(-delta_action):
            cur = new
        out[i] = cur


def single_link_chain(N: int, beta: float, samples: int, seed: int = 0) -> np.ndarray:
    """Metropolis chain for the one-link action S = -beta ReTr U (visited indices)."""
    rng = np.random.Generator(np.random.Philox(seed))
    props = rng.integers(0, 2 * N, size=samples)
    unif = rng.random(samples)
    out = np.empty(samples, dtype=np.int64)
    _single_link_chain(np.ascontiguousarray(trace_table(N)), float(beta), props, unif, out)
    return out
