"""Exact algebra and representation theory of the dihedral group D_N, N = 2**n.

Elements are written ``s^m r^k`` with ``m`` in {0, 1} and ``0 <= k < N``; the
linear index of an element is ``N*m + k``.  Everything here is a plain function
over immutable values and serves as the ground truth for the circuit builders.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np


class GroupError(ValueError):
    """Raised for invalid group orders, labels or mixed-N arithmetic."""


def check_order(N: int) -> int:
    """Return log2(N), raising if N is not a power of two >= 2."""
    if not isinstance(N, (int, np.integer)) or N < 2 or (N & (N - 1)):
        raise GroupError(f"N must be a power of two >= 2, got {N!r}")
    return int(N).bit_length() - 1


@dataclass(frozen=True, order=True)
class GroupElement:
    m: int
    k: int
    N: int

    def __post_init__(self):
        check_order(self.N)
        if self.m not in (0, 1):
            raise GroupError(f"reflection exponent must be 0 or 1, got {self.m}")
        if not 0 <= self.k < self.N:
            raise GroupError(f"rotation exponent {self.k} outside [0, {self.N})")

    @property
    def index(self) -> int:
        return self.N * self.m + self.k

    @classmethod
    def from_index(cls, index: int, N: int) -> "GroupElement":
        return cls(index // N, index % N, N)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def __repr__(self):
        return f"s^{self.m} r^{self.k} (D_{self.N})"


def identity(N: int) -> GroupElement:
    check_order(N)
    return GroupElement(0, 0, N)


def elements(N: int) -> Iterator[GroupElement]:
    """All 2N elements in linear-index order."""
    check_order(N)
    for i in range(2 * N):
        yield GroupElement.from_index(i, N)


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    """s^m1 r^k1 . s^m2 r^k2 = s^(m1+m2) r^(N m2 + (-1)^m2 k1 + k2)."""
    if g.N != h.N:
        raise GroupError(f"cannot multiply elements of D_{g.N} and D_{h.N}")
    N = g.N
    sign = -1 if h.m else 1
    return GroupElement((g.m + h.m) % 2, (N * h.m + sign * g.k + h.k) % N, N)


def inverse(g: GroupElement) -> GroupElement:
    N = g.N
    return GroupElement(g.m, ((N - g.k) * (1 - g.m) + g.m * g.k) % N, N)


def fundamental_rep(g: GroupElement) -> np.ndarray:
    """X^m diag(w, conj(w))^k with w = exp(2 pi i / N)."""
    w = np.exp(2j * np.pi / g.N)
    mat = np.diag([w ** g.k, np.conj(w) ** g.k]).astype(complex)
    if g.m:
        mat = mat[::-1].copy()
    return mat


def re_trace(g: GroupElement) -> float:
    return 2.0 * (1 - g.m) * float(np.cos(2 * np.pi * g.k / g.N))


# ---------------------------------------------------------------- irreps


@dataclass(frozen=True)
class IrrepLabel:
    """One row of the Fourier matrix.

    ``kind`` is one of "A", "B", "C", "D" (one-dimensional irreps) or
    "2d"; for "2d" the fields ``l``, ``i``, ``j`` pick the matrix entry.
    """

    kind: str
    l: int = 0
    i: int = 0
    j: int = 0

    def __post_init__(self):
        if self.kind not in ("A", "B", "C", "D", "2d"):
            raise GroupError(f"unknown irrep kind {self.kind!r}")
        if self.kind == "2d":
            if self.l < 1 or self.i not in (0, 1) or self.j not in (0, 1):
                raise GroupError(f"bad two-dimensional label {self}")
        elif (self.l, self.i, self.j) != (0, 0, 0):
            raise GroupError("one-dimensional labels carry no l, i, j")

    @property
    def dim(self) -> int:
        return 2 if self.kind == "2d" else 1

    def __str__(self):
        if self.kind == "2d":
            return f"phi{self.i}{self.j}({self.l})"
        return f"rho_{self.kind}"


def irrep_labels(N: int) -> list[IrrepLabel]:
    """Row order: A, B, C, D, then phi_00, phi_01, phi_10, phi_11 for l = 1 .. N/2 - 1."""
    check_order(N)
    labels = [IrrepLabel(c) for c in "ABCD"]
    for l in range(1, N // 2):
        for i in (0, 1):
            for j in (0, 1):
                labels.append(IrrepLabel("2d", l, i, j))
    return labels


def _check_label(label: IrrepLabel, N: int) -> None:
    if label.kind == "2d" and not 1 <= label.l < N // 2:
        raise GroupError(f"irrep index l={label.l} outside [1, {N // 2}) for D_{N}")


def two_dim_irrep(l: int, g: GroupElement) -> np.ndarray:
    """phi^(l)(s^m r^k) = X^m diag(e^{2 pi i l k/N}, e^{-2 pi i l k/N})."""
    _check_label(IrrepLabel("2d", l, 0, 0), g.N)
    phase = np.exp(2j * np.pi * l * g.k / g.N)
    mat = np.diag([phase, np.conj(phase)])
    if g.m:
        mat = mat[::-1].copy()
    return mat


def one_dim_character(kind: str, g: GroupElement) -> int:
    parity = -1 if g.k % 2 else 1
    if kind == "A":
        return 1
    if kind == "B":
        return -1 if g.m else 1
    if kind == "C":
        return parity
    if kind == "D":
        return parity * (-1 if g.m else 1)
    raise GroupError(f"not a one-dimensional irrep: {kind!r}")


def irrep_value(label: IrrepLabel, g: GroupElement):
    """Character value for 1-d labels, the full 2x2 matrix for 2-d labels."""
    _check_label(label, g.N)
    if label.kind == "2d":
        return two_dim_irrep(label.l, g)
    return one_dim_character(label.kind, g)


def irrep_entry(label: IrrepLabel, g: GroupElement) -> complex:
    """The scalar matrix entry [rho(g)]_ij used as a Fourier-matrix row."""
    value = irrep_value(label, g)
    if label.kind == "2d":
        return complex(value[label.i, label.j])
    return complex(value)


# ---------------------------------------------------------------- encoding


def encode(g: GroupElement) -> str:
    """Reflection bit first, then k in n-bit standard binary (MSB first)."""
    n = check_order(g.N)
    return f"{g.m}{g.k:0{n}b}"


def decode(bits: str, N: int) -> GroupElement:
    n = check_order(N)
    if len(bits) != n + 1 or set(bits) - {"0", "1"}:
        raise GroupError(f"expected {n + 1} binary digits for D_{N}, got {bits!r}")
    return GroupElement(int(bits[0]), int(bits[1:], 2), N)


# ---------------------------------------------------------------- tables


@lru_cache(maxsize=None)
def _tables(N: int):
    check_order(N)
    if N > 64:
        raise GroupError("group tables are limited to N <= 64")
    m = np.repeat([0, 1], N)
    k = np.tile(np.arange(N), 2)
    m1, m2 = m[:, None], m[None, :]
    k1, k2 = k[:, None], k[None, :]
    prod_m = (m1 + m2) % 2
    prod_k = (N * m2 + np.where(m2 == 1, -k1, k1) + k2) % N
    table = (N * prod_m + prod_k).astype(np.int64)
    inv = np.where(m == 1, k, (N - k) % N) + N * m
    tr = 2.0 * (1 - m) * np.cos(2 * np.pi * k / N)
    for arr in (table, inv, tr):
        arr.setflags(write=False)
    return table, inv.astype(np.int64), tr


def group_table(N: int) -> np.ndarray:
    """2N x 2N array with table[i, j] = index(element_i * element_j)."""
    return _tables(N)[0]


def inverse_table(N: int) -> np.ndarray:
    return _tables(N)[1]


def trace_table(N: int) -> np.ndarray:
    """Re Tr of every element in linear-index order."""
    return _tables(N)[2]
