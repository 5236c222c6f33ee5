"""File formats: matrix CSV, circuit text, JSON sidecars and run manifests."""
from __future__ import annotations

import csv
import json
import time
from pathlib import Path

import numpy as np

from . import __version__
from .circuit import BASE_KINDS, Circuit, CircuitError, Gate

_SPECIAL = {
    "CNOT": "X", "TOFFOLI": "X", "CZ": "Z", "CPHASE": "PHASE", "CCPHASE": "PHASE",
}


def write_matrix_csv(path, matrix: np.ndarray) -> Path:
    """Row-major ``row,col,re,im`` with 17 significant digits."""
    path = Path(path)
    A = np.asarray(matrix, dtype=complex)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["row", "col", "re", "im"])
        for (r, c), v in np.ndenumerate(A):
            w.writerow([r, c, f"{v.real:.17g}", f"{v.imag:.17g}"])
    return path


def read_matrix_csv(path) -> np.ndarray:
    with Path(path).open() as fh:
        rows = list(csv.DictReader(fh))
    nr = max(int(r["row"]) for r in rows) + 1
    nc = max(int(r["col"]) for r in rows) + 1
    A = np.zeros((nr, nc), dtype=complex)
    for r in rows:
        A[int(r["row"]), int(r["col"])] = float(r["re"]) + 1j * float(r["im"])
    return A


def write_circuit(path, circuit: Circuit) -> Path:
    path = Path(path)
    path.write_text(circuit.to_text())
    return path


def _kind_of(name: str) -> str:
    if name.startswith("ORACLE:"):
        return name.split(":", 1)[1]
    if name in _SPECIAL:
        return _SPECIAL[name]
    if "-" in name:
        return name.split("-", 1)[1]
    if name in BASE_KINDS:
        return name
    if name.startswith("C") and name[1:] in BASE_KINDS:
        return name[1:]
    raise CircuitError(f"unknown gate name {name!r}")


def parse_gate(line: str) -> Gate:
    parts = line.split()
    name, rest = parts[0], parts[1:]
    qubits, opts = [], {}
    for tok in rest:
        if "=" in tok:
            key, val = tok.split("=", 1)
            opts[key] = val
        else:
            qubits.append(int(tok))
    polarity = tuple(int(c) for c in opts.get("polarity", ""))
    nc = len(polarity)
    theta = float(opts["theta"]) if "theta" in opts else None
    table = None
    if "table" in opts:
        kind = _kind_of(name)
        conv = float if kind == "DIAG" else int
        table = tuple(conv(v) for v in opts["table"].split(","))
    return Gate(_kind_of(name), tuple(qubits[nc:]), tuple(qubits[:nc]), polarity, theta, table)


def parse_circuit(text: str) -> Circuit:
    qubits, label, ancillas, sections, gates = 0, "", (), [], []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("qubits="):
                head, _, lab = body.partition(" label=")
                qubits, label = int(head.split("=")[1]), lab
            elif body.startswith("ancillas"):
                ancillas = tuple(int(v) for v in body.split()[1:])
            elif body.startswith("section"):
                _, name, lo, hi = body.split()
                sections.append((name, int(lo), int(hi)))
            continue
        gates.append(parse_gate(line))
    return Circuit(qubits, tuple(gates), label, tuple(sections), ancillas)


def read_circuit(path) -> Circuit:
    return parse_circuit(Path(path).read_text())


def write_json(path, data) -> Path:
    path = Path(path)
    path.write_text(json.dumps(data, indent=2, sort_keys=True, default=_jsonable) + "\n")
    return path


def _jsonable(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def write_rows_csv(path, rows: list[dict], columns: list[str]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_fmt(r.get(c, "")) for c in columns])
    return path


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.17g}"
    return v


class Manifest:
    """Collects the parameters and outputs of one command run."""

    def __init__(self, command: str, parameters: dict, seed: int | None = None):
        self.command = command
        self.parameters = parameters
        self.seed = seed
        self.artifacts: list[str] = []
        self._start = time.perf_counter()

    def add(self, path) -> Path:
        p = Path(path)
        self.artifacts.append(p.name)
        return p

    def write(self, out_dir) -> Path:
        out = Path(out_dir) / f"{self.command.replace(' ', '_')}.manifest.json"
        data = {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "artifacts": sorted(self.artifacts),
            "version": __version__,
            "wall_clock_seconds": round(time.perf_counter() - self._start, 3),
        }
        return write_json(out, data)
