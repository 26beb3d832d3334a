"""FCIDUMP parsing, second-quantized Hamiltonian assembly, and adiabatic
interpolation paths.

The parser accepts the usual interchange grammar: a ``&FCI`` header with
NORB/NELEC/MS2 (ORBSYM and ISYM are read and ignored) terminated by ``&END``
or ``/``, then ``value i j k l`` lines with 1-based indices.  ``E 0 0 0 0``
sets the core energy, ``v i j 0 0`` one-electron integrals, and ``v i j k l``
two-electron integrals in chemists' notation with 8-fold permutational
symmetry.
"""
from __future__ import annotations

import json
import os
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from .paulis import FermionOperator, PauliSum, jordan_wigner


class FcidumpError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


@dataclass
class MolecularIntegrals:
    n_orb: int
    n_elec: int
    ms2: int
    e_core: float
    h1: np.ndarray  # (n_orb, n_orb)
    g2: np.ndarray  # (n_orb,)*4, chemists' (ij|kl)

    def check_symmetry(self, tol: float = 1e-10) -> bool:
        ok = np.allclose(self.h1, self.h1.T, atol=tol)
        g = self.g2
        for perm in (
            g.transpose(1, 0, 2, 3),
            g.transpose(0, 1, 3, 2),
            g.transpose(2, 3, 0, 1),
        ):
            ok = ok and np.allclose(g, perm, atol=tol)
        return ok


def parse_fcidump(text: str) -> MolecularIntegrals:
    lines = text.splitlines()
    header = []
    body_start = None
    for ln, raw in enumerate(lines):
        header.append(raw)
        if "&END" in raw.upper() or raw.strip() == "/" or raw.strip().endswith("/"):
            body_start = ln + 1
            break
    if body_start is None:
        raise FcidumpError("missing &END / terminator in header")
    head = " ".join(header).upper()
    if "&FCI" not in head:
        raise FcidumpError("missing &FCI header")

    def field_int(name: str) -> int:
        m = re.search(name + r"\s*=\s*(-?\d+)", head)
        if not m:
            raise FcidumpError(f"missing {name} in header")
        return int(m.group(1))

    n_orb = field_int("NORB")
    n_elec = field_int("NELEC")
    ms2 = field_int("MS2") if re.search(r"MS2\s*=", head) else 0

    h1 = np.zeros((n_orb, n_orb))
    g2 = np.zeros((n_orb,) * 4)
    seen_h1: Dict[Tuple[int, int], bool] = {}
    seen_g2: Dict[Tuple[int, int, int, int], bool] = {}
    e_core = 0.0
    for ln in range(body_start, len(lines)):
        raw = lines[ln].strip()
        if not raw:
            continue
        parts = raw.split()
        if len(parts) != 5:
            raise FcidumpError(f"expected 'value i j k l', got {raw!r}", ln + 1)
        try:
            val = float(parts[0])
            i, j, k, l = (int(p) for p in parts[1:])
        except ValueError as exc:
            raise FcidumpError(f"non-numeric field in {raw!r}", ln + 1) from exc
        for idx in (i, j, k, l):
            if idx < 0 or idx > n_orb:
                raise FcidumpError(f"index {idx} out of range (NORB={n_orb})", ln + 1)
        if i == 0:
            e_core = val
        elif k == 0:
            a, b = i - 1, j - 1
            key = (min(a, b), max(a, b))
            if key in seen_h1 and not np.isclose(h1[a, b], val):
                warnings.warn(f"duplicate h1 entry {key}, last value wins")
            seen_h1[key] = True
            h1[a, b] = h1[b, a] = val
        else:
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            key = _canonical_g2(a, b, c, d)
            if key in seen_g2 and not np.isclose(g2[a, b, c, d], val):
                warnings.warn(f"duplicate g2 entry {key}, last value wins")
            seen_g2[key] = True
            for p, q in ((a, b), (b, a)):
                for r, s in ((c, d), (d, c)):
                    g2[p, q, r, s] = val
                    g2[r, s, p, q] = val
    return MolecularIntegrals(n_orb, n_elec, ms2, e_core, h1, g2)


def _canonical_g2(a, b, c, d):
    ab = (min(a, b), max(a, b))
    cd = (min(c, d), max(c, d))
    return min(ab + cd, cd + ab)


def emit_fcidump(m: MolecularIntegrals, tol: float = 1e-12) -> str:
    n = m.n_orb
    out = [f" &FCI NORB={n:3d},NELEC={m.n_elec:3d},MS2={m.ms2},"]
    out.append("  ORBSYM=" + "1," * n)
    out.append("  ISYM=1,")
    out.append(" &END")
    pairs = [(i, j) for i in range(n) for j in range(i + 1)]
    for ij, (i, j) in enumerate(pairs):
        for kl in range(ij + 1):
            k, l = pairs[kl]
            v = m.g2[i, j, k, l]
            if abs(v) > tol:
                out.append(f" {v:.16g} {i+1:3d} {j+1:3d} {k+1:3d} {l+1:3d}")
    for i in range(n):
        for j in range(i + 1):
            if abs(m.h1[i, j]) > tol:
                out.append(f" {m.h1[i,j]:.16g} {i+1:3d} {j+1:3d}   0   0")
    out.append(f" {m.e_core:.16g}   0   0   0   0")
    return "\n".join(out) + "\n"


def to_qubit_hamiltonian(m: MolecularIntegrals) -> PauliSum:
    """JW image of e_core + sum h_pq a+_p a_q + 1/2 sum (pq|rs) a+_p a+_r a_s a_q.

    Spatial integrals are expanded over interleaved spin-orbitals (alpha of
    orbital i on qubit 2i, beta on 2i+1).
    """
    n = m.n_orb
    op = FermionOperator.zero()
    terms = op.terms
    terms[()] = m.e_core
    for p in range(n):
        for q in range(n):
            if abs(m.h1[p, q]) < 1e-14:
                continue
            for s in (0, 1):
                key = ((2 * p + s, 1), (2 * q + s, 0))
                terms[key] = terms.get(key, 0.0) + m.h1[p, q]
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    v = m.g2[p, q, r, s]
                    if abs(v) < 1e-14:
                        continue
                    for sig in (0, 1):
                        for tau in (0, 1):
                            key = ((2 * p + sig, 1), (2 * r + tau, 1), (2 * s + tau, 0), (2 * q + sig, 0))
                            terms[key] = terms.get(key, 0.0) + 0.5 * v
    h = jordan_wigner(op, n_modes=2 * n)
    h.simplify(1e-12)
    return h


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

@dataclass
class Fixture:
    name: str
    integrals: MolecularIntegrals
    fci_energy: float
    rhf_energy: float
    orbital_energies: List[float]
    localization_pairs: List[List[int]]
    meta: dict = field(default_factory=dict)

    _hamiltonian: Optional[PauliSum] = None

    def hamiltonian(self) -> PauliSum:
        if self._hamiltonian is None:
            self._hamiltonian = to_qubit_hamiltonian(self.integrals)
        return self._hamiltonian

    @property
    def n_qubits(self) -> int:
        return 2 * self.integrals.n_orb


def fixture_dir() -> Path:
    env = os.environ.get("SPINFORGE_FIXTURES")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "fixtures"


def list_fixtures() -> List[str]:
    return sorted(p.stem for p in fixture_dir().glob("*.fcidump"))


def load_fixture(name: str) -> Fixture:
    fpath = fixture_dir() / (name + ".fcidump")
    jpath = fixture_dir() / (name + ".json")
    if not fpath.exists():
        raise FileNotFoundError(f"no fixture named {name!r} in {fixture_dir()}")
    integrals = parse_fcidump(fpath.read_text())
    meta = json.loads(jpath.read_text()) if jpath.exists() else {}
    return Fixture(
        name=name,
        integrals=integrals,
        fci_energy=meta.get("fci_energy", float("nan")),
        rhf_energy=meta.get("rhf_energy", float("nan")),
        orbital_energies=meta.get("orbital_energies", []),
        localization_pairs=meta.get("localization_pairs", []),
        meta=meta,
    )


def n2_fixture_names() -> List[str]:
    return [n for n in list_fixtures() if n.startswith("n2_")]


# ---------------------------------------------------------------------------
# ASP interpolation paths
# ---------------------------------------------------------------------------

@dataclass
class AspPath:
    """Linear interpolation H(s) = (1-s) H0 + s HF with s(t) = t / tau."""

    h0: PauliSum
    hf: PauliSum
    tau: float
    dt: float

    def __post_init__(self):
        if self.tau <= 0 or self.dt <= 0:
            raise ValueError("tau and dt must be positive")

    def schedule(self, t: float) -> float:
        return min(1.0, max(0.0, t / self.tau))

    def hamiltonian_at(self, t: float) -> PauliSum:
        s = self.schedule(t)
        h = self.h0 * (1.0 - s) + self.hf * s
        return h.simplify()


def fock_diagonal_hamiltonian(orbital_energies: List[float]) -> PauliSum:
    """Mean-field one-body start operator sum_p eps_p (n_p_alpha + n_p_beta)."""
    op = FermionOperator.zero()
    for p, eps in enumerate(orbital_energies):
        op = op + FermionOperator.number(2 * p) * eps + FermionOperator.number(2 * p + 1) * eps
    return jordan_wigner(op)


def asp_path(start, end: MolecularIntegrals, tau: float, dt: float) -> AspPath:
    """Build the interpolation path.

    ``start`` is either MolecularIntegrals (CSF-start variant: the full
    Hamiltonian at the dissociated geometry) or a list of orbital energies
    (Fock-start variant: the diagonal mean-field operator).
    """
    hf = to_qubit_hamiltonian(end)
    if isinstance(start, MolecularIntegrals):
        if start.n_orb != end.n_orb:
            raise ValueError("endpoint orbital counts differ")
        h0 = to_qubit_hamiltonian(start)
    else:
        h0 = fock_diagonal_hamiltonian(list(start))
        if h0.n_qubits() > 2 * end.n_orb:
            raise ValueError("endpoint orbital counts differ")
    return AspPath(h0=h0, hf=hf, tau=tau, dt=dt)
