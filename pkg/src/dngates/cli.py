"""Command-line front end.

Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 resource cap.
Every command writes a ``<command>.manifest.json`` next to its outputs.
"""
from __future__ import annotations

import functools
import sys
from pathlib import Path

import click
import numpy as np

from . import arithmetic, benchmark, fourier, montecarlo, plaquette, spectral, trace, trotter, verify
from .circuit import ResourceLimitError, resource_count
from .group import GroupError, check_order, elements, encode, group_table
from .io import Manifest, write_circuit, write_json, write_matrix_csv, write_rows_csv

EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 1, 2, 3


def _guard(fn):
    """Map library errors onto the exit-code contract."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ResourceLimitError as exc:
            click.echo(f"resource limit: {exc}", err=True)
            sys.exit(EXIT_RESOURCE)
        except (GroupError, ValueError) as exc:
            click.echo(f"usage error: {exc}", err=True)
            sys.exit(EXIT_USAGE)

    return wrapper


def _order_from_log(n: int) -> int:
    if n < 1:
        raise click.BadParameter("--n is log2 of the group order and must be >= 1")
    return 2 ** n


def _out_dir(path: str) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _out_file(path: str) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


@click.group()
@click.version_option(package_name="dngates", message="%(version)s")
def main():
    """Build and verify D_N gauge-theory circuits."""


# ---------------------------------------------------------------- group


@main.group()
def group():
    """Group algebra dumps."""


@group.command("table")
@click.option("--n", "N", type=int, required=True, help="Group order N (a power of two, at most 64).")
@click.option("--out", type=click.Path(file_okay=False), default=".", show_default=True, help="Output directory.")
@_guard
def group_table_cmd(N, out):
    """Write the multiplication table of D_N as CSV."""
    check_order(N)
    out = _out_dir(out)
    man = Manifest("group table", {"N": N})
    table = group_table(N)
    els = list(elements(N))
    rows = [
        {
            "left": i, "right": j, "product": int(table[i, j]),
            "left_bits": encode(els[i]), "right_bits": encode(els[j]), "product_bits": encode(els[int(table[i, j])]),
        }
        for i in range(2 * N)
        for j in range(2 * N)
    ]
    cols = ["left", "right", "product", "left_bits", "right_bits", "product_bits"]
    man.add(write_rows_csv(out / f"group_table_N{N}.csv", rows, cols))
    man.write(out)
    click.echo(f"wrote {len(rows)} products for D_{N}")


# ---------------------------------------------------------------- gate


@main.group()
def gate():
    """Circuit construction."""


GATES = ("inv", "mult", "trace", "fourier", "plaq")


@gate.command("build")
@click.option("--gate", "which", type=click.Choice(GATES), required=True, help="Which primitive to build.")
@click.option("--n", type=int, required=True, help="log2 of the group order N.")
@click.option("--theta", type=float, default=None, help="Angle for trace and plaq gates (radians).")
@click.option("--bits", type=int, default=None, help="Fixed-point bits; selects the ancilla trace gate.")
@click.option(
    "--toffoli-style",
    type=click.Choice(["abstract", "ccphase-native", "cnot-decomposition"]),
    default="abstract",
    show_default=True,
    help="How Toffoli gates are emitted (mult and plaq).",
)
@click.option("--out", type=click.Path(file_okay=False), default=".", show_default=True, help="Output directory.")
@_guard
def gate_build(which, n, theta, bits, toffoli_style, out):
    """Write a circuit in text form plus a resource-count JSON sidecar."""
    N = _order_from_log(n)
    if which in ("trace", "plaq") and theta is None:
        raise click.UsageError(f"--theta is required for --gate {which}")
    if which not in ("trace", "plaq") and theta is not None:
        raise click.UsageError(f"--theta does not apply to --gate {which}")
    if bits is not None and which != "trace":
        raise click.UsageError("--bits only applies to --gate trace")
    if which == "inv":
        circ = arithmetic.build_inversion(N)
    elif which == "mult":
        circ = arithmetic.build_multiplication(N, toffoli_style)
    elif which == "trace":
        circ = trace.build_trace_direct(N, theta) if bits is None else trace.build_trace_ancilla(N, theta, bits)
    elif which == "fourier":
        circ = fourier.build_fourier(N)
    else:
        circ = plaquette.build_plaquette_trace(N, theta, toffoli_style)
    out = _out_dir(out)
    params = {"gate": which, "n": n, "N": N, "theta": theta, "bits": bits, "toffoli_style": toffoli_style}
    man = Manifest("gate build", params)
    stem = f"{which}_N{N}"
    man.add(write_circuit(out / f"{stem}.circuit.txt", circ))
    res = resource_count(circ).as_dict()
    res.update({"qubits": circ.qubit_count, "ancillas": list(circ.ancillas), "gates": len(circ)})
    res["sections"] = {
        name: resource_count(circ.section(name)).as_dict() for name in dict.fromkeys(circ.section_names())
    }
    man.add(write_json(out / f"{stem}.resources.json", res))
    man.write(out)
    click.echo(f"{circ.label}: {circ.qubit_count} qubits, {len(circ)} gates, "
               f"{res['two_qubit_equivalents']} two-qubit equivalents")


# ---------------------------------------------------------------- spectral


@main.group("spectral")
def spectral_grp():
    """Fourier-matrix and transfer-matrix checks."""


@spectral_grp.command("check")
@click.option("--n", type=int, required=True, help="log2 of the group order N.")
@click.option("--beta", type=float, required=True, help="Coupling in the transfer matrix.")
@click.option("--tol", type=float, default=1e-10, show_default=True, help="Relative tolerance (scaled by max |T|).")
@click.option("--dump", is_flag=True, help="Also write F, T and F T F^dag as matrix CSV.")
@click.option("--out", type=click.Path(file_okay=False), default=".", show_default=True, help="Output directory.")
@_guard
def spectral_check(n, beta, tol, dump, out):
    """Check that the Fourier matrix diagonalizes T and matches the closed form."""
    N = _order_from_log(n)
    d = spectral.diagonalize_via_fourier(N, beta)
    cf = spectral.closed_form_diagonal(N, beta)
    closed = float(np.max(np.abs(d.diagonal - cf)))
    click.echo(f"offdiag_max={d.offdiag_max:.3e}")
    click.echo(f"closed_form_max_diff={closed:.3e}")
    click.echo(f"T_max={d.scale:.6g}")
    out = _out_dir(out)
    man = Manifest("spectral check", {"n": n, "N": N, "beta": beta, "tol": tol, "dump": dump})
    if dump:
        F = spectral.fourier_matrix(N)
        T = spectral.transfer_matrix(N, beta)
        man.add(write_matrix_csv(out / f"fourier_N{N}.csv", F))
        man.add(write_matrix_csv(out / f"transfer_N{N}_beta{beta:g}.csv", T))
        man.add(write_matrix_csv(out / f"FTFdag_N{N}_beta{beta:g}.csv", F @ T @ F.conj().T))
    man.add(write_json(out / f"spectral_N{N}.json", {
        "offdiag_max": d.offdiag_max, "closed_form_max_diff": closed, "T_max": d.scale,
        "diagonal_re": d.diagonal.real, "diagonal_im": d.diagonal.imag,
    }))
    man.write(out)
    if d.offdiag_max > tol * d.scale or closed > tol * d.scale:
        click.echo("FAIL")
        sys.exit(EXIT_FAIL)
    click.echo("PASS")


# ---------------------------------------------------------------- mc


@main.group()
def mc():
    """Euclidean Monte Carlo."""


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(v) for v in text.lower().split("x"))
    except ValueError:
        raise click.BadParameter(f"dims must look like 4x4x4, got {text!r}")
    return dims


@mc.command("sweep")
@click.option("--group", "grp", type=click.Choice(["d2", "d4", "d8", "d16"]), required=True, help="Gauge group.")
@click.option("--dims", default="4x4x4", show_default=True, help="Lattice extents, e.g. 4x4x4.")
@click.option("--betas", default="0:4:0.25", show_default=True, help="lo:hi:step or a comma list.")
@click.option("--sweeps", type=int, default=1000, show_default=True, help="Measured sweeps per beta.")
@click.option("--thermalization", type=int, default=200, show_default=True, help="Discarded sweeps per beta.")
@click.option("--start", type=click.Choice(["cold", "hot"]), default="cold", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default="sweep.csv", show_default=True, help="CSV file.")
@_guard
def mc_sweep(grp, dims, betas, sweeps, thermalization, start, seed, out):
    """Plaquette expectation versus beta, one chain per beta."""
    N = int(grp[1:])
    dims_t = _parse_dims(dims)
    grid = montecarlo.parse_grid(betas)
    if sweeps < 2 or thermalization < 0:
        raise click.UsageError("need --sweeps >= 2 and --thermalization >= 0")
    man = Manifest("mc sweep", {
        "N": N, "dims": list(dims_t), "betas": grid, "sweeps": sweeps,
        "thermalization": thermalization, "start": start,
    }, seed)
    rows = montecarlo.beta_sweep(N, dims_t, grid, sweeps, thermalization, seed, start=start)
    out = _out_file(out)
    cols = ["beta", "plaquette_mean", "plaquette_stderr", "acceptance_rate", "e0_normalized"]
    man.add(write_rows_csv(out, rows, cols))
    man.write(out.parent)
    for r in rows:
        click.echo(f"beta={r['beta']:<6g} plaquette={r['plaquette_mean']:.5f} +- {r['plaquette_stderr']:.5f}")


# ---------------------------------------------------------------- trotter


@main.group("trotter")
def trotter_grp():
    """Single-plaquette real-time evolution."""


@trotter_grp.command("converge")
@click.option("--n", "N", type=int, default=4, show_default=True, help="Group order N (2 or 4 fit the qubit cap).")
@click.option("--theta-k", type=float, default=0.25, show_default=True, help="Kinetic coupling.")
@click.option("--theta-v", type=float, default=0.5, show_default=True, help="Plaquette coupling.")
@click.option("--dt-grid", default="0.2,0.1,0.05", show_default=True, help="Comma list of step sizes.")
@click.option("--states", type=int, default=4, show_default=True, help="Random test states.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default="trotter.csv", show_default=True, help="CSV file.")
@_guard
def trotter_converge(N, theta_k, theta_v, dt_grid, states, seed, out):
    """Per-step Trotter error against the exact exponential, with local slopes."""
    system = trotter.PlaquetteSystem(N, theta_k, theta_v)
    dts = montecarlo.parse_grid(dt_grid)
    man = Manifest("trotter converge", {
        "N": N, "theta_k": theta_k, "theta_v": theta_v, "dt_grid": dts, "states": states,
    }, seed)
    rows = trotter.convergence_table(system, dts, states, seed)
    out = _out_file(out)
    man.add(write_rows_csv(out, rows, ["dt", "error", "slope"]))
    man.write(out.parent)
    for r in rows:
        slope = f" slope={r['slope']:.3f}" if "slope" in r else ""
        click.echo(f"dt={r['dt']:<6g} error={r['error']:.3e}{slope}")


# ---------------------------------------------------------------- bench


@main.group()
def bench():
    """Synthetic-noise benchmarks."""


@bench.command("qpt")
@click.option("--gate", "which", type=click.Choice(["fourier", "trace"]), required=True)
@click.option("--n", type=int, default=2, show_default=True, help="log2 of the group order (chi fits 3 qubits).")
@click.option("--p", type=float, default=0.0, show_default=True, help="Depolarizing strength per multi-qubit gate.")
@click.option("--theta", type=float, default=float(np.pi / 2), show_default=True, help="Trace-gate angle.")
@click.option("--target-fidelity", type=float, default=None, help="Find p by bisection instead of using --p.")
@click.option("--out", type=click.Path(dir_okay=False), default="chi.csv", show_default=True, help="CSV file.")
@_guard
def bench_qpt(which, n, p, theta, target_fidelity, out):
    """Process matrix of a noisy primitive gate and its process fidelity."""
    N = _order_from_log(n)
    circ = fourier.build_fourier(N) if which == "fourier" else trace.build_trace_direct(N, theta)
    if circ.qubit_count > benchmark.CHI_QUBIT_CAP:
        raise ResourceLimitError(f"{circ.qubit_count} qubits exceeds the chi cap of {benchmark.CHI_QUBIT_CAP}")
    if not 0 <= p <= 1:
        raise click.BadParameter("--p must lie in [0, 1]")
    if target_fidelity is not None:
        p = benchmark.calibrate_depolarizing(circ, target_fidelity).p
    ideal = benchmark.chi_matrix(circ)
    chi = benchmark.chi_matrix(circ, benchmark.Depolarizing(p))
    f = benchmark.process_fidelity(chi, ideal)
    out = _out_file(out)
    man = Manifest("bench qpt", {"gate": which, "n": n, "N": N, "p": p, "theta": theta,
                                 "target_fidelity": target_fidelity})
    man.add(write_matrix_csv(out, chi))
    man.add(write_json(out.with_suffix(".json"), {"p": p, "process_fidelity": f}))
    man.write(out.parent)
    click.echo(f"p={p:.6g} process_fidelity={f:.6f}")


@bench.command("multacc")
@click.option("--n", type=int, default=2, show_default=True, help="log2 of the group order.")
@click.option("--p", type=float, default=0.0, show_default=True, help="Depolarizing strength per multi-qubit gate.")
@click.option("--shots", type=int, default=10000, show_default=True)
@click.option("--majority", type=int, default=200, show_default=True, help="Majority-vote window (0 disables).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default="acc.csv", show_default=True, help="CSV file.")
@_guard
def bench_multacc(n, p, shots, majority, seed, out):
    """Bitstring accuracy of the noisy multiplication gate over all input pairs."""
    N = _order_from_log(n)
    if not 0 <= p <= 1:
        raise click.BadParameter("--p must lie in [0, 1]")
    if shots < 1 or majority < 0 or (majority and majority > shots):
        raise click.UsageError("need --shots >= 1 and 0 <= --majority <= --shots")
    man = Manifest("bench multacc", {"n": n, "N": N, "p": p, "shots": shots, "majority": majority}, seed)
    acc = benchmark.multiplication_accuracy(N, benchmark.Depolarizing(p), shots, majority or None, seed)
    G = 2 * N
    rows = []
    for i, a in enumerate(acc.per_pair):
        r = {"pair": i, "g": i // G, "h": i % G, "raw_accuracy": float(a)}
        if majority:
            r["majority_accuracy"] = float(acc.majority_per_pair[i])
        rows.append(r)
    out = _out_file(out)
    cols = ["pair", "g", "h", "raw_accuracy"] + (["majority_accuracy"] if majority else [])
    man.add(write_rows_csv(out, rows, cols))
    summary = {"mean_accuracy": acc.mean, "stddev": acc.stddev}
    if majority:
        summary.update({"majority_mean": acc.majority_mean, "majority_stddev": acc.majority_stddev})
    man.add(write_json(out.with_suffix(".json"), summary))
    man.write(out.parent)
    line = f"raw {acc.mean:.4f} ({acc.stddev:.4f})"
    if majority:
        line += f"  majority {acc.majority_mean:.4f} ({acc.majority_stddev:.4f})"
    click.echo(line)


# ---------------------------------------------------------------- verify


@main.command("verify-all")
@click.option("--max-n", type=int, default=3, show_default=True, help="Check N = 2 .. 2^max_n (at most 4).")
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Optional directory for a JSON report.")
@_guard
def verify_all_cmd(max_n, out):
    """Run every oracle check and print a pass/fail table."""
    man = Manifest("verify-all", {"max_n": max_n})
    results = verify.verify_all(max_n)
    for r in results:
        click.echo(r.row())
    ok = all(r.passed for r in results)
    if out is not None:
        out = _out_dir(out)
        man.add(write_json(out / "verify.json", [r.__dict__ for r in results]))
        man.write(out)
    click.echo("ALL PASS" if ok else "FAILURES")
    if not ok:
        sys.exit(EXIT_FAIL)


if __name__ == "__main__":
    main()
