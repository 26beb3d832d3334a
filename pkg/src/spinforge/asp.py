"""Discretized adiabatic evolution driver.

Piecewise-constant first-order discretization of the linear interpolation
H(s) = (1-s) H0 + s HF: over each step [t_k, t_k + dt) the Hamiltonian is
held at s(t_k) and applied with the exact (Krylov) propagator.

Fidelities are measured against the projector onto the target ground space:
the lowest eigenstates of HF that share the spin sector of the initial state
(exact evolution conserves S^2, so only those are reachable), including any
degenerate partners within 1e-9.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .fcidump import AspPath
from .paulis import PauliSum, pauli_matvec, spin_operators
from .simulator import (
    evolve_exact,
    expectation,
    lanczos_expm_matvec,
    sector_basis,
    sector_eigh,
    sector_matrix,
)


@dataclass
class AspResult:
    final_state: np.ndarray
    fidelity: float
    energy_error: float
    trace: List[Tuple[float, float]]  # (s, fidelity) per step


def target_ground_space(
    hf: PauliSum,
    n_spatial: int,
    n_alpha: int,
    n_beta: int,
    spin_s2: float = 0.0,
    degeneracy_tol: float = 1e-9,
) -> Tuple[float, np.ndarray]:
    """(E0, columns spanning the ground space) within the given spin sector."""
    basis = sector_basis(n_spatial, n_alpha, n_beta)
    evals, evecs = sector_eigh(hf, basis, 2 * n_spatial)
    s2op, _, _ = spin_operators(n_spatial)
    s2 = np.array([
        float(np.real(np.vdot(evecs[:, k], pauli_matvec(s2op, evecs[:, k]))))
        for k in range(len(evals))
    ])
    sel = np.where(np.abs(s2 - spin_s2) < 1e-6)[0]
    if len(sel) == 0:
        raise ValueError("no eigenstates with the requested spin in the sector")
    e0 = evals[sel[0]]
    members = [k for k in sel if evals[k] - e0 < degeneracy_tol]
    return float(e0), evecs[:, members]


def run_asp(
    path: AspPath,
    initial: np.ndarray,
    target: Optional[np.ndarray] = None,
    target_energy: Optional[float] = None,
    record_trace: bool = True,
) -> AspResult:
    """Evolve the initial state along the path and score it against the target.

    ``target`` holds ground-space columns; if omitted only the final state is
    returned with fidelity/energy_error set to NaN.
    """
    n_steps = int(round(path.tau / path.dt))
    if abs(n_steps * path.dt - path.tau) > 1e-9:
        raise ValueError("tau must be an integer multiple of dt")
    v = initial / np.linalg.norm(initial)
    trace = []

    def fid(state: np.ndarray) -> float:
        if target is None:
            return float("nan")
        amps = target.conj().T @ state
        return float(np.real(np.vdot(amps, amps)))

    for k in range(n_steps):
        h_k = path.hamiltonian_at(k * path.dt)
        v = evolve_exact(h_k, path.dt, v)
        if record_trace:
            trace.append((path.schedule((k + 1) * path.dt), fid(v)))
    energy = float(np.real(expectation(path.hf, v)))
    e_err = energy - target_energy if target_energy is not None else float("nan")
    return AspResult(final_state=v, fidelity=fid(v), energy_error=e_err, trace=trace)


def run_asp_sector(
    path: AspPath,
    initial: np.ndarray,
    n_spatial: int,
    n_alpha: int,
    n_beta: int,
    spin_s2: float = 0.0,
    record_trace: bool = False,
) -> AspResult:
    """run_asp restricted to the conserved particle-number sector.

    Both interpolation endpoints commute with the spin projection and the
    particle number, so the evolution never leaves the sector of the initial
    state; restricting the propagation to it is exact and much faster.
    Fidelity is measured against the ground space of HF within the spin-S^2
    symmetry sector of the initial state (degenerate partners within 1e-9).
    """
    n_qubits = 2 * n_spatial
    basis = sector_basis(n_spatial, n_alpha, n_beta)
    pos = {int(b): i for i, b in enumerate(basis)}
    h0_d = sector_matrix(path.h0, basis, n_qubits)
    hf_d = sector_matrix(path.hf, basis, n_qubits)

    # targets within the spin sector
    evals, evecs = np.linalg.eigh(hf_d)
    s2op, _, _ = spin_operators(n_spatial)
    s2_d = sector_matrix(s2op, basis, n_qubits)
    s2exp = np.real(np.einsum("ik,ij,jk->k", evecs.conj(), s2_d, evecs))
    sel = np.where(np.abs(s2exp - spin_s2) < 1e-6)[0]
    if len(sel) == 0:
        raise ValueError("no eigenstates with the requested spin in the sector")
    e0 = evals[sel[0]]
    members = [k for k in sel if evals[k] - e0 < 1e-9]
    target = evecs[:, members]

    w = np.zeros(len(basis), dtype=complex)
    for j in np.nonzero(np.abs(initial) > 1e-14)[0]:
        i = pos.get(int(j))
        if i is None:
            raise ValueError("initial state leaves the requested sector")
        w[i] = initial[j]
    w = w / np.linalg.norm(w)

    n_steps = int(round(path.tau / path.dt))
    if abs(n_steps * path.dt - path.tau) > 1e-9:
        raise ValueError("tau must be an integer multiple of dt")
    trace = []
    for k in range(n_steps):
        s = path.schedule(k * path.dt)
        matvec = lambda x: (1.0 - s) * (h0_d @ x) + s * (hf_d @ x)  # noqa: E731
        w = lanczos_expm_matvec(matvec, path.dt, w)
        if record_trace:
            amps = target.conj().T @ w
            trace.append((path.schedule((k + 1) * path.dt), float(np.real(np.vdot(amps, amps)))))
    amps = target.conj().T @ w
    fidelity = float(np.real(np.vdot(amps, amps)))
    energy = float(np.real(np.vdot(w, hf_d @ w)))
    full = np.zeros_like(initial, dtype=complex)
    full[basis] = w
    return AspResult(final_state=full, fidelity=fidelity, energy_error=energy - e0, trace=trace)
