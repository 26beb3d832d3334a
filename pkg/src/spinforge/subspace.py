"""Nonorthogonal subspace methods.

Generalized eigenproblem with singular-value thresholding, real-time-evolution
QSD (multi-reference, Toeplitz-aware), the nonorthogonal VQE energy and
gradient, and ADAPT iterate generation with subspace diagonalization.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla
import scipy.optimize

from .paulis import FermionOperator, PauliSum, jordan_wigner, pauli_matvec
from .simulator import EvolutionConfig, evolve_exact, evolve_trotter1, expectation


# ---------------------------------------------------------------------------
# Generalized eigenproblem with thresholding
# ---------------------------------------------------------------------------

@dataclass
class SubspaceProblem:
    h_mat: np.ndarray
    s_mat: np.ndarray
    threshold: float = 1e-6


def solve_gep(problem: SubspaceProblem) -> Tuple[np.ndarray, np.ndarray]:
    """Project out the overlap null space and solve H v = E S v.

    Returns ascending eigenvalues and eigenvectors in the original basis.
    """
    h, s = np.asarray(problem.h_mat), np.asarray(problem.s_mat)
    if h.shape != s.shape or h.shape[0] != h.shape[1]:
        raise ValueError("H and S must be square and congruent")
    if np.max(np.abs(h - h.conj().T)) > 1e-8 * max(1.0, np.max(np.abs(h))):
        raise ValueError("H must be Hermitian")
    sev, svec = np.linalg.eigh(0.5 * (s + s.conj().T))
    keep = sev > problem.threshold
    if not np.any(keep):
        raise ValueError("all overlap singular values below threshold")
    proj = svec[:, keep] / np.sqrt(sev[keep])
    h_red = proj.conj().T @ h @ proj
    evals, evecs = np.linalg.eigh(0.5 * (h_red + h_red.conj().T))
    return evals, proj @ evecs


# ---------------------------------------------------------------------------
# Real-time-evolution QSD
# ---------------------------------------------------------------------------

@dataclass
class QsdConfig:
    references: List[np.ndarray]
    dt: float
    n_steps: int
    mode: str = "exact"  # "exact" | "trotter1"
    threshold: float = 1e-6
    term_order: str = "canonical"


@dataclass
class QsdResult:
    eigenvalue_trace: List[np.ndarray]  # entry j: spectrum using n_steps = j
    n_states: List[int]
    basis: List[np.ndarray] = field(repr=False, default_factory=list)
    h_mat: np.ndarray | None = None
    s_mat: np.ndarray | None = None


def _evolved_basis(h: PauliSum, cfg: QsdConfig) -> List[List[np.ndarray]]:
    """Per reference, the chain [ref, U ref, U^2 ref, ...] at step cfg.dt."""
    chains = []
    for ref in cfg.references:
        chain = [ref / np.linalg.norm(ref)]
        for _ in range(cfg.n_steps):
            if cfg.mode == "exact":
                chain.append(evolve_exact(h, cfg.dt, chain[-1]))
            else:
                chain.append(
                    evolve_trotter1(h, EvolutionConfig(cfg.dt, 1, "trotter1", cfg.term_order), chain[-1])
                )
        chains.append(chain)
    return chains


def rtqsd(h: PauliSum, cfg: QsdConfig) -> QsdResult:
    """Spectrum trace of the real-time-evolved subspace versus step count.

    For exact single-reference evolution the overlap and Hamiltonian matrices
    are Toeplitz, S_{j,k} = S_{j+1,k+1}, and only one new column is computed
    per step; the general fill is used otherwise.
    """
    chains = _evolved_basis(h, cfg)
    basis = [v for chain in chains for v in chain]
    n_r = len(chains)
    m_tot = len(basis)
    toeplitz = cfg.mode == "exact" and n_r == 1

    s_full = np.zeros((m_tot, m_tot), dtype=complex)
    h_full = np.zeros((m_tot, m_tot), dtype=complex)
    if toeplitz:
        chain = chains[0]
        h0 = pauli_matvec(h, chain[0])
        # row zero: S_{0,k} and H_{0,k}; constants along diagonals
        s_row = np.array([np.vdot(chain[0], chain[k]) for k in range(m_tot)])
        h_row = np.array([np.vdot(h0, chain[k]) for k in range(m_tot)])
        for j in range(m_tot):
            for k in range(m_tot):
                d = k - j
                s_full[j, k] = s_row[d] if d >= 0 else np.conj(s_row[-d])
                h_full[j, k] = h_row[d] if d >= 0 else np.conj(h_row[-d])
    else:
        hv = [pauli_matvec(h, v) for v in basis]
        for j in range(m_tot):
            for k in range(j, m_tot):
                s_full[j, k] = np.vdot(basis[j], basis[k])
                h_full[j, k] = np.vdot(basis[j], hv[k])
                s_full[k, j] = np.conj(s_full[j, k])
                h_full[k, j] = np.conj(h_full[j, k])

    trace = []
    n_states = []
    for steps in range(cfg.n_steps + 1):
        sel = []
        for r in range(n_r):
            base = r * (cfg.n_steps + 1)
            sel.extend(range(base, base + steps + 1))
        sub = SubspaceProblem(h_full[np.ix_(sel, sel)], s_full[np.ix_(sel, sel)], cfg.threshold)
        evals, _ = solve_gep(sub)
        trace.append(evals)
        n_states.append(len(sel))
    return QsdResult(trace, n_states, basis, h_full, s_full)


def toeplitz_check(h: PauliSum, ref: np.ndarray, dt: float, n_steps: int) -> float:
    """Max deviation between brute-force and Toeplitz-filled matrices."""
    cfg1 = QsdConfig([ref], dt, n_steps, "exact")
    res_t = rtqsd(h, cfg1)
    # brute force: fill everything from scratch
    chain = [ref / np.linalg.norm(ref)]
    for _ in range(n_steps):
        chain.append(evolve_exact(h, dt, chain[-1]))
    m = len(chain)
    s_b = np.zeros((m, m), dtype=complex)
    h_b = np.zeros((m, m), dtype=complex)
    hv = [pauli_matvec(h, v) for v in chain]
    for j in range(m):
        for k in range(m):
            s_b[j, k] = np.vdot(chain[j], chain[k])
            h_b[j, k] = np.vdot(chain[j], hv[k])
    return max(float(np.max(np.abs(res_t.s_mat - s_b))), float(np.max(np.abs(res_t.h_mat - h_b))))


# ---------------------------------------------------------------------------
# Nonorthogonal VQE
# ---------------------------------------------------------------------------

@dataclass
class AnsatzState:
    """Reference state with an ordered product of generator exponentials.

    The realized state is prod_i exp(theta_i G_i) |ref> applied right to left
    (G_0 acts first); generators are anti-Hermitian PauliSums.
    """

    reference: np.ndarray
    generators: List[PauliSum]
    thetas: np.ndarray

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=float)
        if len(self.generators) != len(self.thetas):
            raise ValueError("one angle per generator required")


def _apply_exp(g: PauliSum, theta: float, v: np.ndarray) -> np.ndarray:
    """exp(theta G) v for anti-Hermitian G via exact evolution of i G."""
    if theta == 0.0:
        return v.copy()
    herm = 1j * g  # Hermitian; exp(-i (iG) t) = exp(t G)
    herm.simplify()
    return evolve_exact(herm, theta, v)


def realize(state: AnsatzState) -> np.ndarray:
    v = state.reference.copy()
    for g, th in zip(state.generators, state.thetas):
        v = _apply_exp(g, th, v)
    return v


def _realize_prefix(state: AnsatzState) -> List[np.ndarray]:
    """Partial states [ref, U_0 ref, U_1 U_0 ref, ...]."""
    out = [state.reference.copy()]
    for g, th in zip(state.generators, state.thetas):
        out.append(_apply_exp(g, th, out[-1]))
    return out


def derivative_states(state: AnsatzState) -> List[np.ndarray]:
    """d|Psi_I>/d theta_i: insert G_i after U_i at position i."""
    prefix = _realize_prefix(state)
    outs = []
    for i, g in enumerate(state.generators):
        v = pauli_matvec(g, prefix[i + 1])
        for gg, th in zip(state.generators[i + 1 :], state.thetas[i + 1 :]):
            v = _apply_exp(gg, th, v)
        outs.append(v)
    return outs


def adjoint_gradient(state: AnsatzState, residual: np.ndarray) -> np.ndarray:
    """2 Re <residual | d Psi / d theta_i> for all i with one backward sweep.

    Avoids building every derivative state: grad_i = 2 Re <beta_{i+1} | G_i |
    f_{i+1}> where f are the forward partial states and beta the residual
    pulled back through the inverse exponentials.
    """
    n = len(state.generators)
    if n == 0:
        return np.zeros(0)
    prefix = _realize_prefix(state)
    grad = np.zeros(n)
    beta = residual.copy()
    for i in range(n - 1, -1, -1):
        grad[i] = 2.0 * float(np.real(np.vdot(beta, pauli_matvec(state.generators[i], prefix[i + 1]))))
        beta = _apply_exp(state.generators[i], -state.thetas[i], beta)
    return grad


def novqe_energy_gradient(
    h: PauliSum,
    states: Sequence[AnsatzState],
    coeffs: np.ndarray,
) -> Tuple[float, np.ndarray, np.ndarray]:
    """Energy and analytic gradients of sum_I C_I |Psi_I(theta_I)>.

    E = <Psi|H|Psi>/<Psi|Psi>; dE/dx = 2 Re[<d_x Psi|H|Psi> - E <d_x Psi|Psi>]
    / <Psi|Psi> for every parameter (the quotient rule), evaluated with
    derivative states formed by inserting each generator at its position.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if np.linalg.norm(coeffs) < 1e-14:
        raise ValueError("coefficient vector must be nonzero")
    realized = [realize(s) for s in states]
    psi = sum(c * v for c, v in zip(coeffs, realized))
    norm2 = float(np.real(np.vdot(psi, psi)))
    if norm2 < 1e-14:
        raise ValueError("zero-norm combined state")
    hpsi = pauli_matvec(h, psi)
    energy = float(np.real(np.vdot(psi, hpsi))) / norm2

    grad_c = np.zeros_like(coeffs)
    for i, v in enumerate(realized):
        grad_c[i] = 2.0 * float(np.real(np.vdot(v, hpsi) - energy * np.vdot(v, psi))) / norm2

    residual = hpsi - energy * psi
    grads_theta = []
    for st, c in zip(states, coeffs):
        if len(st.generators):
            grads_theta.append((c / norm2) * adjoint_gradient(st, residual))
        else:
            grads_theta.append(np.zeros(0))
    return energy, np.concatenate(grads_theta) if grads_theta else np.zeros(0), grad_c


def novqe_minimize(
    h: PauliSum,
    states: Sequence[AnsatzState],
    coeffs: np.ndarray,
    gtol: float = 1e-6,
    maxiter: int = 500,
) -> Tuple[float, List[AnsatzState], np.ndarray]:
    """Quasi-Newton minimization of the NO-VQE energy over (Theta, C).

    Coefficients are renormalized on every evaluation.
    """
    sizes = [len(s.generators) for s in states]
    n_th = sum(sizes)

    def unpack(x):
        ths = x[:n_th]
        cs = x[n_th:]
        cs = cs / np.linalg.norm(cs)
        new_states = []
        ofs = 0
        for s, k in zip(states, sizes):
            new_states.append(AnsatzState(s.reference, s.generators, ths[ofs : ofs + k]))
            ofs += k
        return new_states, cs

    def fun(x):
        sts, cs = unpack(x)
        e, gth, gc = novqe_energy_gradient(h, sts, cs)
        # project the coefficient gradient onto the normalization sphere
        gc = gc - np.dot(gc, cs) * cs
        return e, np.concatenate([gth, gc])

    x0 = np.concatenate([np.concatenate([s.thetas for s in states]) if n_th else np.zeros(0),
                         np.asarray(coeffs, float) / np.linalg.norm(coeffs)])
    res = scipy.optimize.minimize(fun, x0, jac=True, method="L-BFGS-B",
                                  options={"gtol": gtol, "ftol": 1e-13, "maxiter": maxiter})
    sts, cs = unpack(res.x)
    e, _, _ = novqe_energy_gradient(h, sts, cs)
    return e, sts, cs


# ---------------------------------------------------------------------------
# ADAPT-VQE and ADAPT-QSD
# ---------------------------------------------------------------------------

def spin_conserving_pool(n_spatial: int, n_alpha: int | None = None, n_beta: int | None = None) -> List[PauliSum]:
    """Anti-Hermitian single and double excitation generators (JW mapped).

    Individual spin-orbital excitations a+_P a_Q - h.c. and pair excitations
    a+_P a+_Q a_S a_R - h.c. over the whole active space, restricted to
    spin-projection-conserving index combinations.  These are not total-spin
    preserving, which gives the adaptive ansatz symmetry-breaking directions.
    """
    n_so = 2 * n_spatial

    def sz(p):
        return 0.5 if p % 2 == 0 else -0.5

    pool: List[PauliSum] = []
    for p in range(n_so):
        for q in range(p):
            if sz(p) != sz(q):
                continue
            op = FermionOperator(((p, 1), (q, 0)))
            op = op - op.dagger()
            g = jordan_wigner(op)
            g.simplify()
            if len(g):
                pool.append(g)
    so_pairs = [(p, q) for p in range(n_so) for q in range(p)]
    for a in range(len(so_pairs)):
        for b in range(a):
            (p, q), (r, s) = so_pairs[a], so_pairs[b]
            if sz(p) + sz(q) != sz(r) + sz(s):
                continue
            op = FermionOperator(((p, 1), (q, 1), (s, 0), (r, 0)))
            op = op - op.dagger()
            g = jordan_wigner(op)
            g.simplify()
            if len(g):
                pool.append(g)
    return pool


@dataclass
class AdaptResult:
    energies: List[float]           # variational ADAPT-VQE energy per iteration
    qsd_traces: List[np.ndarray]    # subspace spectrum per iteration
    iterates: List[np.ndarray]      # stored states (iteration 0 = references)
    picks: List[int]
    stagnated: bool = False


def adapt_vqe(
    h: PauliSum,
    reference: np.ndarray,
    pool: Sequence[PauliSum],
    max_iters: int,
    grad_tol: float = 1e-8,
    opt_gtol: float = 1e-6,
    maxeval: int = 500,
) -> Tuple[List[np.ndarray], List[float], List[int], bool]:
    """Single-reference ADAPT-VQE; returns (iterates, energies, picks, stagnated)."""
    ref = reference / np.linalg.norm(reference)
    gens: List[PauliSum] = []
    thetas = np.zeros(0)
    iterates = [ref.copy()]
    energies = [float(np.real(expectation(h, ref)))]
    picks: List[int] = []
    stagnated = False
    for _ in range(max_iters):
        psi = realize(AnsatzState(ref, gens, thetas))
        hpsi = pauli_matvec(h, psi)
        grads = np.array([2.0 * np.real(np.vdot(hpsi, pauli_matvec(g, psi))) for g in pool])
        best = int(np.argmax(np.abs(grads)))
        if np.max(np.abs(grads)) < grad_tol:
            stagnated = True
            break
        gens = gens + [pool[best]]
        picks.append(best)
        x0 = np.concatenate([thetas, [0.0]])

        def fun(x):
            st = AnsatzState(ref, gens, x)
            psi_x = realize(st)
            n2 = float(np.real(np.vdot(psi_x, psi_x)))
            hp = pauli_matvec(h, psi_x)
            e = float(np.real(np.vdot(psi_x, hp))) / n2
            grad = adjoint_gradient(st, hp - e * psi_x) / n2
            return e, grad

        res = scipy.optimize.minimize(fun, x0, jac=True, method="L-BFGS-B",
                                      options={"gtol": opt_gtol, "ftol": 1e-13, "maxfun": maxeval})
        thetas = res.x
        psi = realize(AnsatzState(ref, gens, thetas))
        iterates.append(psi)
        energies.append(float(np.real(expectation(h, psi)) / np.real(np.vdot(psi, psi))))
    return iterates, energies, picks, stagnated


def adapt_qsd(
    h: PauliSum,
    references: Sequence[np.ndarray],
    pool: Sequence[PauliSum],
    max_iters: int,
    threshold: float = 1e-6,
    grad_tol: float = 1e-8,
) -> AdaptResult:
    """ADAPT iterates per reference; combined iterates define the subspace.

    Iteration k diagonalizes H over the union of every reference's first k+1
    ADAPT states (iteration 0 = the bare references).
    """
    runs = [adapt_vqe(h, ref, pool, max_iters, grad_tol) for ref in references]
    stagnated = any(r[3] for r in runs)
    energies = [min(r[1][min(k, len(r[1]) - 1)] for r in runs) for k in range(max_iters + 1)]
    traces = []
    for k in range(max_iters + 1):
        basis = []
        for its, _, _, _ in runs:
            basis.extend(its[: min(k + 1, len(its))])
        m = len(basis)
        s_mat = np.zeros((m, m), dtype=complex)
        h_mat = np.zeros((m, m), dtype=complex)
        hv = [pauli_matvec(h, v) for v in basis]
        for i in range(m):
            for j in range(i, m):
                s_mat[i, j] = np.vdot(basis[i], basis[j])
                h_mat[i, j] = np.vdot(basis[i], hv[j])
                s_mat[j, i] = np.conj(s_mat[i, j])
                h_mat[j, i] = np.conj(h_mat[i, j])
        evals, _ = solve_gep(SubspaceProblem(h_mat, s_mat, threshold))
        traces.append(evals)
    all_iterates = [v for r in runs for v in r[0]]
    picks = [p for r in runs for p in r[2]]
    return AdaptResult(energies, traces, all_iterates, picks, stagnated)
