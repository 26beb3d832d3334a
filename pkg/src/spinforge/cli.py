"""Batch command-line front end.

Thin bindings over the library modules: no numerical logic lives here.
Results are written as CSV (traces), JSON (run metadata), and Markdown
(tables).  Exit codes: 0 success, 2 usage, 3 parse error, 4 numerical
failure, 5 I/O error.

Flags with units: --dt and --tau in inverse Hartree, --eps dimensionless
state-preparation error, --threshold dimensionless overlap cutoff.
The SPINFORGE_FIXTURES environment variable overrides the fixture directory.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_NUMERIC = 4
EXIT_IO = 5


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_meta(out: Path, name: str, payload: dict) -> None:
    (out / f"{name}.json").write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")


def cmd_synth(args) -> int:
    from .circuits import decompose, to_text
    from .csf import CsfSpec
    from .synth import SynthesisPlan, csf_circuit

    spec = CsfSpec(
        closed_shell=[int(x) for x in args.closed.split(",") if x],
        open_shell=[int(x) for x in args.open.split(",") if x],
        coupling=args.pattern,
        n_spatial=args.n_spatial,
    )
    circ = csf_circuit(SynthesisPlan(spec))
    if args.connectivity != "none":
        circ = decompose(circ, args.connectivity)
    out = _out_dir(args)
    path = out / "circuit.txt"
    path.write_text(to_text(circ))
    print(f"wrote {path}")
    return 0


def cmd_fidelity(args) -> int:
    from .circuits import count, decompose, run_vector
    from .csf import CsfSpec, csf_state
    from .simulator import basis_state
    from .synth import SynthesisPlan, csf_circuit

    n = args.N
    spec = CsfSpec([], list(range(n)), 1 if args.csf == "pattern1" else 2, n)
    circ = csf_circuit(SynthesisPlan(spec))
    state = run_vector(circ, basis_state(2 * n, 0))
    ref = csf_state(spec)
    fid = abs(np.vdot(ref, state)) ** 2
    print(f"{fid:.12f}")
    out = _out_dir(args)
    _write_meta(out, "fidelity", {"N": n, "pattern": args.csf, "fidelity": fid,
                                  "cnot_all": count(decompose(circ, "all")).cnot})
    return 0


def cmd_resources(args) -> int:
    from . import resources as R

    out = _out_dir(args)
    ns = [int(x) for x in args.N.split(",")] if args.N else sorted(R.PREPARATION_TABLE)
    rows = ["N,c_all,c_planar,c_linear,rotations,b,toffoli,determinants"]
    for n in ns:
        rep = R.csf_cost_report(n, args.eps)
        rows.append(f"{rep.n},{rep.c_all},{rep.c_planar},{rep.c_linear},"
                    f"{rep.rotations},{rep.bits},{rep.toffoli},{rep.determinants}")
    (out / "resources.csv").write_text("\n".join(rows) + "\n")
    (out / "resources.md").write_text(R.preparation_table_markdown(args.eps) + "\n\n"
                                      + R.mps_table_markdown() + "\n")
    _write_meta(out, "resources_meta", {"eps": args.eps, "N": ns,
                                        "planar_appendix_forms": {n: R.planar_appendix_form(n) for n in ns if n > 2},
                                        "flagged_mps_row": list(R.MPS_FLAGGED_ROW)})
    print((out / "resources.csv").read_text().splitlines()[0])
    for line in (out / "resources.csv").read_text().splitlines()[1:]:
        print(line)
    return 0


def cmd_parse_check(args) -> int:
    from .fcidump import FcidumpError, parse_fcidump

    try:
        text = Path(args.path).read_text()
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        m = parse_fcidump(text)
    except FcidumpError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    sym = "ok" if m.check_symmetry() else "violated"
    print(f"norb={m.n_orb} nelec={m.n_elec} ms2={m.ms2} e_core={m.e_core:.12g} symmetry={sym}")
    return 0


def cmd_simulate(args) -> int:
    from .circuits import from_text, run_vector
    from .simulator import basis_state, dump_statevector

    try:
        circ = from_text(Path(args.circuit).read_text())
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    v = run_vector(circ, basis_state(circ.n_qubits, args.input))
    out = _out_dir(args)
    dump_statevector(v, str(out / "state.bin"))
    probs = np.abs(v) ** 2
    top = np.argsort(-probs)[:8]
    for j in top:
        if probs[j] > 1e-12:
            print(f"|{j:0{circ.n_qubits}b}>  p={probs[j]:.6f}")
    return 0


def _load_qsd_inputs(fixture: str):
    from .fcidump import load_fixture
    from .references import n2_reference_states, rhf_determinant

    fx = load_fixture(fixture)
    if fx.integrals.n_orb != 6:
        refs = [rhf_determinant(fx.integrals.n_orb, fx.integrals.n_elec // 2)]
    else:
        refs = [r.vector for r in n2_reference_states()]
    return fx, refs


def cmd_qsd(args) -> int:
    from .references import rhf_determinant
    from .subspace import QsdConfig, rtqsd

    fx, refs = _load_qsd_inputs(args.fixture)
    if args.references == "rhf":
        refs = [rhf_determinant(fx.integrals.n_orb, fx.integrals.n_elec // 2)]
    cfg = QsdConfig(refs, dt=args.dt, n_steps=args.nt, mode=args.mode, threshold=args.threshold)
    try:
        res = rtqsd(fx.hamiltonian(), cfg)
    except ValueError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    out = _out_dir(args)
    n_ev = max(len(t) for t in res.eigenvalue_trace)
    hdr = "n_states," + ",".join(f"E_{k}" for k in range(min(10, n_ev)))
    rows = [hdr]
    for ns, ev in zip(res.n_states, res.eigenvalue_trace):
        vals = ",".join(f"{e:.12f}" for e in ev[:10])
        rows.append(f"{ns},{vals}")
    (out / "qsd_trace.csv").write_text("\n".join(rows) + "\n")
    _write_meta(out, "qsd_meta", {"fixture": args.fixture, "dt": args.dt, "nt": args.nt,
                                  "mode": args.mode, "threshold": args.threshold,
                                  "references": args.references, "seed": args.seed})
    print(f"final ground energy: {res.eigenvalue_trace[-1][0]:.12f}")
    return 0


def cmd_adapt_qsd(args) -> int:
    from .subspace import adapt_qsd, spin_conserving_pool

    fx, refs = _load_qsd_inputs(args.fixture)
    pool = spin_conserving_pool(fx.integrals.n_orb)
    try:
        res = adapt_qsd(fx.hamiltonian(), refs, pool, max_iters=args.iters, threshold=args.threshold)
    except ValueError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    out = _out_dir(args)
    rows = ["iteration,adapt_vqe_energy,adapt_qsd_E0"]
    for k, (e, tr) in enumerate(zip(res.energies, res.qsd_traces)):
        rows.append(f"{k},{e:.12f},{tr[0]:.12f}")
    (out / "adapt_trace.csv").write_text("\n".join(rows) + "\n")
    _write_meta(out, "adapt_meta", {"fixture": args.fixture, "iters": args.iters,
                                    "threshold": args.threshold, "stagnated": res.stagnated,
                                    "picks": res.picks, "seed": args.seed})
    print(f"final subspace ground energy: {res.qsd_traces[-1][0]:.12f}")
    return 0


def _asp_point(task):
    """One (fixture, start, tau) sweep point; module-level for process pools."""
    from .asp import run_asp_sector
    from .fcidump import asp_path, load_fixture
    from .references import build_reference, rhf_determinant

    fixture, start, tau, dt = task
    fx = load_fixture(fixture)
    n_orb = fx.integrals.n_orb
    fx_far = load_fixture("n2_sto3g_4.50")
    if start == "csf":
        path = asp_path(fx_far.integrals, fx.integrals, tau, dt)
        init = build_reference("phi6")
    else:
        path = asp_path(fx.orbital_energies, fx.integrals, tau, dt)
        init = rhf_determinant(n_orb, fx.integrals.n_elec // 2)
    res = run_asp_sector(path, init, n_orb, fx.integrals.n_elec // 2, fx.integrals.n_elec // 2)
    r = fx.meta.get("bond_length_angstrom", float("nan"))
    return (r, start, tau, res.fidelity, res.energy_error)


def cmd_asp(args) -> int:
    fixtures = args.fixtures.split(",")
    taus = [float(t) for t in args.tau.split(",")]
    tasks = [(f, s, t, args.dt) for f in fixtures for s in ("csf", "rhf") for t in taus]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_asp_point, tasks))
    else:
        results = [_asp_point(t) for t in tasks]
    out = _out_dir(args)
    rows = ["R,start,tau,fidelity,energy_error"]
    for r, start, tau, fid, de in results:
        rows.append(f"{r},{start},{tau},{fid:.12f},{de:.12e}")
    (out / "asp_sweep.csv").write_text("\n".join(rows) + "\n")
    _write_meta(out, "asp_meta", {"fixtures": fixtures, "taus": taus, "dt": args.dt,
                                  "discretization": "piecewise-constant, s evaluated at step start",
                                  "seed": args.seed, "jobs": args.jobs})
    for line in rows:
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="spinforge",
        description="Spin-coupled state preparation circuits and subspace quantum algorithms",
    )
    ap.add_argument("--seed", type=int, default=0, help="RNG seed for reproducible outputs (dimensionless)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("synth", help="emit a CSF preparation circuit in text format")
    p.add_argument("--closed", default="", help="comma list of doubly occupied spatial orbitals")
    p.add_argument("--open", required=True, help="comma list of open-shell spatial orbitals")
    p.add_argument("--pattern", type=int, default=1, choices=(1, 2), help="coupling pattern id")
    p.add_argument("--n-spatial", type=int, default=None, help="total spatial orbitals")
    p.add_argument("--connectivity", default="none", choices=("none", "all", "linear"),
                   help="decomposition target topology")
    p.add_argument("--out", default="out", help="output directory")
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("fidelity", help="circuit-vs-oracle squared overlap")
    p.add_argument("--csf", default="pattern1", choices=("pattern1", "pattern2"))
    p.add_argument("--N", type=int, required=True, help="open-shell electron count")
    p.add_argument("--out", default="out")
    p.set_defaults(fn=cmd_fidelity)

    p = sub.add_parser("resources", help="gate-count and Toffoli cost tables")
    p.add_argument("--N", default="", help="comma list of electron counts (default: table rows)")
    p.add_argument("--eps", type=float, default=1e-7, help="state-preparation error budget (dimensionless)")
    p.add_argument("--out", default="out")
    p.set_defaults(fn=cmd_resources)

    p = sub.add_parser("parse-check", help="validate an FCIDUMP file")
    p.add_argument("path")
    p.set_defaults(fn=cmd_parse_check)

    p = sub.add_parser("simulate", help="run a text-format circuit on a basis state")
    p.add_argument("circuit", help="path to circuit text file")
    p.add_argument("--input", type=int, default=0, help="initial basis state as an integer bitmask")
    p.add_argument("--out", default="out")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("qsd", help="real-time-evolution subspace diagonalization")
    p.add_argument("--fixture", required=True, help="fixture name, e.g. n2_sto3g_1.50")
    p.add_argument("--dt", type=float, default=2.0, help="time step (1/Hartree)")
    p.add_argument("--nt", type=int, default=8, help="max number of time steps")
    p.add_argument("--mode", default="exact", choices=("exact", "trotter1"))
    p.add_argument("--threshold", type=float, default=1e-6, help="overlap singular value cutoff")
    p.add_argument("--references", default="csf", choices=("csf", "rhf"))
    p.add_argument("--out", default="out")
    p.set_defaults(fn=cmd_qsd)

    p = sub.add_parser("adapt-qsd", help="subspace diagonalization over ADAPT iterates")
    p.add_argument("--fixture", required=True)
    p.add_argument("--iters", type=int, default=10, help="ADAPT iterations per reference")
    p.add_argument("--threshold", type=float, default=1e-6)
    p.add_argument("--out", default="out")
    p.set_defaults(fn=cmd_adapt_qsd)

    p = sub.add_parser("asp", help="adiabatic state preparation sweep")
    p.add_argument("--fixtures", default="n2_sto3g_1.50,n2_sto3g_2.50,n2_sto3g_4.50",
                   help="comma list of target fixtures")
    p.add_argument("--tau", default="3,30,300", help="comma list of total times (1/Hartree)")
    p.add_argument("--dt", type=float, default=0.1, help="step size (1/Hartree)")
    p.add_argument("--jobs", type=int, default=1, help="parallel sweep workers")
    p.add_argument("--out", default="out")
    p.set_defaults(fn=cmd_asp)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    np.random.seed(args.seed)
    try:
        return args.fn(args)
    except FileNotFoundError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
