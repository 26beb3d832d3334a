"""Dense statevector engine.

Gate application, overlaps and expectation values, exact time evolution via a
restarted Lanczos action of the matrix exponential, and first-order
Trotterized evolution with analytic Pauli-string exponentials.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .circuits import Circuit, run_vector
from .paulis import PauliSum, pauli_matvec, popcount


@dataclass
class EvolutionConfig:
    dt: float
    n_steps: int
    mode: str = "exact"  # "exact" | "trotter1"
    term_order: str = "canonical"  # "canonical" | "as-parsed"

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.n_steps < 0:
            raise ValueError("n_steps must be nonnegative")
        if self.mode not in ("exact", "trotter1"):
            raise ValueError(f"unknown evolution mode {self.mode}")


def normalize(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def basis_state(n_qubits: int, bits: int) -> np.ndarray:
    v = np.zeros(1 << n_qubits, dtype=complex)
    v[bits] = 1.0
    return v


def apply(circ: Circuit, v: np.ndarray) -> np.ndarray:
    if v.shape[0] != 1 << circ.n_qubits:
        raise ValueError("dimension mismatch between circuit and state")
    return run_vector(circ, v)


def overlap(u: np.ndarray, v: np.ndarray) -> complex:
    if u.shape != v.shape:
        raise ValueError("dimension mismatch")
    return complex(np.vdot(u, v))


def expectation(op: PauliSum, v: np.ndarray) -> complex:
    return complex(np.vdot(v, pauli_matvec(op, v)))


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    return abs(overlap(u, v)) ** 2


# ---------------------------------------------------------------------------
# Exact evolution: Lanczos action of exp(-i H t)
# ---------------------------------------------------------------------------

_CSR_CACHE: dict = {}


def compile_csr(op: PauliSum, n_qubits: int):
    """Sparse matrix of a PauliSum, cached on object identity."""
    import scipy.sparse as sp

    key = (id(op), n_qubits)
    hit = _CSR_CACHE.get(key)
    if hit is not None and hit[0] == len(op.terms):
        return hit[1]
    dim = 1 << n_qubits
    idx = np.arange(dim, dtype=np.int64)
    rows = []
    data = []
    for (x, z), c in op.terms.items():
        signs = 1.0 - 2.0 * (np.bitwise_count(idx.astype(np.uint64) & np.uint64(z)) & 1).astype(np.float64)
        rows.append(idx ^ x)
        data.append((c * (1j ** (popcount(x & z) % 4))) * signs)
    cols = np.tile(idx, len(rows))
    mat = sp.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), cols)), shape=(dim, dim), dtype=complex
    )
    if len(_CSR_CACHE) > 4:
        _CSR_CACHE.clear()
    _CSR_CACHE[key] = (len(op.terms), mat)
    return mat


def lanczos_expm_matvec(matvec, t: float, v: np.ndarray, tol: float = 1e-12, max_krylov: int = 64) -> np.ndarray:
    """One Krylov approximation of exp(-i t A) v for Hermitian A given as matvec."""
    nrm = np.linalg.norm(v)
    if nrm == 0:
        return v.copy()
    qs = [v / nrm]
    alphas: List[float] = []
    betas: List[float] = []
    w = matvec(qs[0])
    a = np.real(np.vdot(qs[0], w))
    alphas.append(a)
    w = w - a * qs[0]
    for j in range(1, max_krylov):
        b = np.linalg.norm(w)
        betas.append(b)
        if b < 1e-14:
            break
        qj = w / b
        # full reorthogonalization keeps 1e-12 accuracy over long evolutions
        for q in qs:
            qj = qj - np.vdot(q, qj) * q
        qj = qj / np.linalg.norm(qj)
        qs.append(qj)
        w = matvec(qj)
        a = np.real(np.vdot(qj, w))
        alphas.append(a)
        w = w - a * qj - betas[-1] * qs[-2]
        # convergence estimate: weight of the last Krylov vector in the exponential
        m = len(alphas)
        tmat = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        e = np.zeros(m)
        e[0] = 1.0
        evals, evecs = np.linalg.eigh(tmat)
        coeff = evecs @ (np.exp(-1j * t * evals) * (evecs.T @ e))
        if abs(coeff[-1]) * abs(betas[-1]) * abs(t) < tol:
            break
    m = len(alphas)
    tmat = np.diag(alphas) + np.diag(np.array(betas)[: m - 1], 1) + np.diag(np.array(betas)[: m - 1], -1)
    evals, evecs = np.linalg.eigh(tmat)
    e = np.zeros(m)
    e[0] = 1.0
    coeff = evecs @ (np.exp(-1j * t * evals) * (evecs.T @ e))
    out = np.zeros_like(v, dtype=complex)
    for cj, qj in zip(coeff, qs):
        out += cj * qj
    return nrm * out


def evolve_exact(
    h: PauliSum,
    t: float,
    v: np.ndarray,
    tol: float = 1e-12,
    max_krylov: int = 64,
) -> np.ndarray:
    """exp(-i H t) v for Hermitian H, restarting on long times.

    The evolution is split into substeps whenever a single Krylov space of
    max_krylov vectors cannot reach the requested tolerance.  Large operators
    on large registers run through a cached sparse matrix.
    """
    if not h.is_hermitian():
        raise ValueError("Hamiltonian must be Hermitian")
    if t == 0 or len(h) == 0:
        return v.copy()
    # crude substep heuristic: keep ||H - <H>|| * dt within the Krylov reach
    shift = float(np.real(expectation(h, normalize(v))))
    hs = h + PauliSum.identity(-shift)
    hs.simplify()
    spread = hs.norm()
    n_sub = max(1, int(np.ceil(abs(t) * spread / (0.5 * max_krylov))))
    dt = t / n_sub
    if v.shape[0] >= 512 and len(hs) >= 48:
        n = v.shape[0].bit_length() - 1
        mat = compile_csr(hs, n)
        matvec = mat.dot
    else:
        matvec = lambda w: pauli_matvec(hs, w)  # noqa: E731
    out = v.copy()
    for _ in range(n_sub):
        out = lanczos_expm_matvec(matvec, dt, out, tol, max_krylov)
    phase = np.exp(-1j * shift * t)
    return phase * out


# ---------------------------------------------------------------------------
# Trotterized evolution
# ---------------------------------------------------------------------------

def _string_exponential(x: int, z: int, coeff: float, dt: float, v: np.ndarray) -> np.ndarray:
    """exp(-i dt * coeff * P(x, z)) v analytically: cos - i sin P."""
    phi = dt * coeff
    pv = pauli_matvec(PauliSum({(x, z): 1.0}), v)
    return np.cos(phi) * v - 1j * np.sin(phi) * pv


def trotter_step(h: PauliSum, dt: float, v: np.ndarray, term_order: str = "canonical") -> np.ndarray:
    terms = h.sorted_terms() if term_order == "canonical" else list(h.terms.items())
    out = v
    for (x, z), c in terms:
        if abs(np.imag(c)) > 1e-12:
            raise ValueError("Trotter evolution requires a Hermitian Hamiltonian")
        out = _string_exponential(x, z, float(np.real(c)), dt, out)
    return out


def evolve_trotter1(h: PauliSum, cfg: EvolutionConfig, v: np.ndarray) -> np.ndarray:
    """n_steps repetitions of the first-order product formula at step cfg.dt."""
    out = v.copy()
    for _ in range(cfg.n_steps):
        out = trotter_step(h, cfg.dt, out, cfg.term_order)
    return out


# ---------------------------------------------------------------------------
# Dense spectra on symmetry sectors
# ---------------------------------------------------------------------------

def sector_basis(n_spatial: int, n_alpha: int, n_beta: int) -> np.ndarray:
    """All determinant integers with the given spin occupations (interleaved)."""
    from itertools import combinations

    out = []
    orbs = range(n_spatial)
    for occ_a in combinations(orbs, n_alpha):
        bits_a = 0
        for i in occ_a:
            bits_a |= 1 << (2 * i)
        for occ_b in combinations(orbs, n_beta):
            bits = bits_a
            for i in occ_b:
                bits |= 1 << (2 * i + 1)
            out.append(bits)
    return np.array(sorted(out), dtype=np.int64)


def sector_matrix(op: PauliSum, basis: np.ndarray, n_qubits: int) -> np.ndarray:
    """Dense matrix of op restricted to the span of the given basis states.

    Basis states must be sorted; vectorized per Pauli term over the whole
    basis at once.
    """
    basis = np.asarray(basis, dtype=np.int64)
    nb = len(basis)
    m = np.zeros((nb, nb), dtype=complex)
    cols = np.arange(nb)
    for (x, z), c in op.terms.items():
        rows_bits = basis ^ x
        pos = np.searchsorted(basis, rows_bits)
        ok = (pos < nb)
        okpos = np.where(ok, pos, 0)
        ok &= basis[okpos] == rows_bits
        signs = 1.0 - 2.0 * (np.bitwise_count(basis.astype(np.uint64) & np.uint64(z)) & 1).astype(np.float64)
        vals = (c * (1j ** (popcount(x & z) % 4))) * signs
        m[okpos[ok], cols[ok]] += vals[ok]
    return m


def sector_eigh(op: PauliSum, basis: np.ndarray, n_qubits: int) -> Tuple[np.ndarray, np.ndarray]:
    """(eigenvalues, eigenvectors as full statevector columns) on a sector."""
    m = sector_matrix(op, basis, n_qubits)
    evals, evecs = np.linalg.eigh(m)
    dim = 1 << n_qubits
    full = np.zeros((dim, len(basis)), dtype=complex)
    for i, b in enumerate(basis):
        full[b, :] = evecs[i, :]
    return evals, full


# ---------------------------------------------------------------------------
# Binary statevector dump
# ---------------------------------------------------------------------------

def dump_statevector(v: np.ndarray, path: str) -> None:
    n = v.shape[0].bit_length() - 1
    with open(path, "wb") as fh:
        fh.write(struct.pack("<q", n))
        inter = np.empty(2 * v.shape[0], dtype="<f8")
        inter[0::2] = np.real(v)
        inter[1::2] = np.imag(v)
        fh.write(inter.tobytes())


def load_statevector(path: str) -> np.ndarray:
    with open(path, "rb") as fh:
        (n,) = struct.unpack("<q", fh.read(8))
        data = np.frombuffer(fh.read(), dtype="<f8")
    return (data[0::2] + 1j * data[1::2]).astype(complex)
