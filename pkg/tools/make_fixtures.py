"""One-time generator for the FCIDUMP fixtures shipped with spinforge.

Minimal STO-3G quantum chemistry: McMurchie-Davidson gaussian integrals,
closed-shell RHF, frozen-core active-space folding, and a determinant-based
(Slater-Condon) FCI used as the independent energy oracle for the sidecars.

Run from the repository root:  python tools/make_fixtures.py
"""
from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np
from scipy.special import gammainc, gamma

ANGSTROM = 1.0 / 0.529177210903  # bohr per angstrom

# ---------------------------------------------------------------------------
# STO-3G basis data (exponents, contraction coefficients)
# ---------------------------------------------------------------------------

STO3G = {
    "H": [("S", [3.42525091, 0.62391373, 0.16885540],
           [0.15432897, 0.53532814, 0.44463454])],
    "N": [
        ("S", [99.1061690, 18.0523120, 4.88566020],
         [0.15432897, 0.53532814, 0.44463454]),
        ("SP", [3.78045590, 0.87849660, 0.28571440],
         [-0.09996723, 0.39951283, 0.70011547],
         [0.15591627, 0.60768372, 0.39195739]),
    ],
}

CHARGE = {"H": 1, "N": 7}


@dataclass
class Primitive:
    exp: float
    coef: float  # contraction coefficient times primitive normalization


@dataclass
class BasisFunction:
    center: np.ndarray
    lmn: tuple
    prims: list


def _prim_norm(a: float, lmn) -> float:
    l, m, n = lmn
    num = (2 * a / math.pi) ** 0.75 * (4 * a) ** ((l + m + n) / 2)
    den = math.sqrt(
        _df(2 * l - 1) * _df(2 * m - 1) * _df(2 * n - 1)
    )
    return num / den


def _df(n: int) -> float:
    if n <= 0:
        return 1.0
    out = 1.0
    while n > 0:
        out *= n
        n -= 2
    return out


def build_basis(atoms):
    """atoms: list of (symbol, xyz array). Returns list of BasisFunction."""
    fns = []
    for sym, xyz in atoms:
        for shell in STO3G[sym]:
            if shell[0] == "S":
                _, exps, coefs = shell
                prims = [Primitive(a, c * _prim_norm(a, (0, 0, 0))) for a, c in zip(exps, coefs)]
                fns.append(BasisFunction(np.asarray(xyz, float), (0, 0, 0), prims))
            elif shell[0] == "SP":
                _, exps, cs, cp = shell
                prims = [Primitive(a, c * _prim_norm(a, (0, 0, 0))) for a, c in zip(exps, cs)]
                fns.append(BasisFunction(np.asarray(xyz, float), (0, 0, 0), prims))
                for lmn in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
                    prims_p = [Primitive(a, c * _prim_norm(a, lmn)) for a, c in zip(exps, cp)]
                    fns.append(BasisFunction(np.asarray(xyz, float), lmn, prims_p))
    # normalize contracted functions
    for f in fns:
        s = _contracted_overlap(f, f)
        scale = 1.0 / math.sqrt(s)
        for p in f.prims:
            p.coef *= scale
    return fns


# ---------------------------------------------------------------------------
# McMurchie-Davidson machinery
# ---------------------------------------------------------------------------

def _E(i, j, t, Qx, a, b):
    """Hermite expansion coefficients for a 1D gaussian product."""
    p = a + b
    q = a * b / p
    if t < 0 or t > i + j:
        return 0.0
    if i == j == t == 0:
        return math.exp(-q * Qx * Qx)
    if j == 0:
        return (
            (1.0 / (2 * p)) * _E(i - 1, j, t - 1, Qx, a, b)
            - (q * Qx / a) * _E(i - 1, j, t, Qx, a, b)
            + (t + 1) * _E(i - 1, j, t + 1, Qx, a, b)
        )
    return (
        (1.0 / (2 * p)) * _E(i, j - 1, t - 1, Qx, a, b)
        + (q * Qx / b) * _E(i, j - 1, t, Qx, a, b)
        + (t + 1) * _E(i, j - 1, t + 1, Qx, a, b)
    )


def _overlap_prim(a, lmn1, A, b, lmn2, B):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    p = a + b
    pre = (math.pi / p) ** 1.5
    return (
        pre
        * _E(l1, l2, 0, A[0] - B[0], a, b)
        * _E(m1, m2, 0, A[1] - B[1], a, b)
        * _E(n1, n2, 0, A[2] - B[2], a, b)
    )


def _contracted_overlap(f1: BasisFunction, f2: BasisFunction) -> float:
    s = 0.0
    for p1 in f1.prims:
        for p2 in f2.prims:
            s += p1.coef * p2.coef * _overlap_prim(p1.exp, f1.lmn, f1.center, p2.exp, f2.lmn, f2.center)
    return s


def _kinetic_prim(a, lmn1, A, b, lmn2, B):
    l2, m2, n2 = lmn2

    def ov(dl, dm, dn):
        new = (l2 + dl, m2 + dm, n2 + dn)
        if min(new) < 0:
            return 0.0
        return _overlap_prim(a, lmn1, A, b, new, B)

    term0 = b * (2 * (l2 + m2 + n2) + 3) * ov(0, 0, 0)
    term1 = -2 * b * b * (ov(2, 0, 0) + ov(0, 2, 0) + ov(0, 0, 2))
    term2 = -0.5 * (
        l2 * (l2 - 1) * ov(-2, 0, 0)
        + m2 * (m2 - 1) * ov(0, -2, 0)
        + n2 * (n2 - 1) * ov(0, 0, -2)
    )
    return term0 + term1 + term2


def _boys(m, T):
    if T < 1e-12:
        return 1.0 / (2 * m + 1) - T / (2 * m + 3)
    return gammainc(m + 0.5, T) * gamma(m + 0.5) / (2.0 * T ** (m + 0.5))


def _R(t, u, v, n, p, PC, cache):
    key = (t, u, v, n)
    if key in cache:
        return cache[key]
    if t < 0 or u < 0 or v < 0:
        return 0.0
    if t == u == v == 0:
        T = p * (PC[0] ** 2 + PC[1] ** 2 + PC[2] ** 2)
        val = (-2.0 * p) ** n * _boys(n, T)
    elif t > 0:
        val = (t - 1) * _R(t - 2, u, v, n + 1, p, PC, cache) + PC[0] * _R(t - 1, u, v, n + 1, p, PC, cache)
    elif u > 0:
        val = (u - 1) * _R(t, u - 2, v, n + 1, p, PC, cache) + PC[1] * _R(t, u - 1, v, n + 1, p, PC, cache)
    else:
        val = (v - 1) * _R(t, u, v - 2, n + 1, p, PC, cache) + PC[2] * _R(t, u, v - 1, n + 1, p, PC, cache)
    cache[key] = val
    return val


def _nuclear_prim(a, lmn1, A, b, lmn2, B, C):
    l1, m1, n1 = lmn1
    l2, m2, n2 = lmn2
    p = a + b
    P = (a * np.asarray(A) + b * np.asarray(B)) / p
    PC = P - np.asarray(C)
    cache = {}
    val = 0.0
    for t in range(l1 + l2 + 1):
        Ex = _E(l1, l2, t, A[0] - B[0], a, b)
        if Ex == 0.0:
            continue
        for u in range(m1 + m2 + 1):
            Ey = _E(m1, m2, u, A[1] - B[1], a, b)
            if Ey == 0.0:
                continue
            for v in range(n1 + n2 + 1):
                Ez = _E(n1, n2, v, A[2] - B[2], a, b)
                if Ez == 0.0:
                    continue
                val += Ex * Ey * Ez * _R(t, u, v, 0, p, PC, cache)
    return 2.0 * math.pi / p * val


def _eri_prim(a, lmnA, A, b, lmnB, B, c, lmnC, C, d, lmnD, D):
    l1, m1, n1 = lmnA
    l2, m2, n2 = lmnB
    l3, m3, n3 = lmnC
    l4, m4, n4 = lmnD
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    P = (a * np.asarray(A) + b * np.asarray(B)) / p
    Q = (c * np.asarray(C) + d * np.asarray(D)) / q
    PQ = P - Q
    cache = {}
    val = 0.0
    for t in range(l1 + l2 + 1):
        E1x = _E(l1, l2, t, A[0] - B[0], a, b)
        if E1x == 0.0:
            continue
        for u in range(m1 + m2 + 1):
            E1y = _E(m1, m2, u, A[1] - B[1], a, b)
            if E1y == 0.0:
                continue
            for v in range(n1 + n2 + 1):
                E1z = _E(n1, n2, v, A[2] - B[2], a, b)
                if E1z == 0.0:
                    continue
                for tau in range(l3 + l4 + 1):
                    E2x = _E(l3, l4, tau, C[0] - D[0], c, d)
                    if E2x == 0.0:
                        continue
                    for nu in range(m3 + m4 + 1):
                        E2y = _E(m3, m4, nu, C[1] - D[1], c, d)
                        if E2y == 0.0:
                            continue
                        for phi in range(n3 + n4 + 1):
                            E2z = _E(n3, n4, phi, C[2] - D[2], c, d)
                            if E2z == 0.0:
                                continue
                            val += (
                                E1x * E1y * E1z * E2x * E2y * E2z
                                * (-1.0) ** (tau + nu + phi)
                                * _R(t + tau, u + nu, v + phi, 0, alpha, PQ, cache)
                            )
    return 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q)) * val


def integrals(atoms):
    fns = build_basis(atoms)
    n = len(fns)
    S = np.zeros((n, n))
    T = np.zeros((n, n))
    V = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1):
            s = _contracted_overlap(fns[i], fns[j])
            t = sum(
                p1.coef * p2.coef * _kinetic_prim(p1.exp, fns[i].lmn, fns[i].center, p2.exp, fns[j].lmn, fns[j].center)
                for p1 in fns[i].prims for p2 in fns[j].prims
            )
            v = 0.0
            for sym, xyz in atoms:
                v -= CHARGE[sym] * sum(
                    p1.coef * p2.coef * _nuclear_prim(p1.exp, fns[i].lmn, fns[i].center,
                                                      p2.exp, fns[j].lmn, fns[j].center, np.asarray(xyz, float))
                    for p1 in fns[i].prims for p2 in fns[j].prims
                )
            S[i, j] = S[j, i] = s
            T[i, j] = T[j, i] = t
            V[i, j] = V[j, i] = v
    eri = np.zeros((n, n, n, n))
    # unique (ij|kl) with 8-fold symmetry
    pairs = [(i, j) for i in range(n) for j in range(i + 1)]
    for ij, (i, j) in enumerate(pairs):
        for kl in range(ij + 1):
            k, l = pairs[kl]
            val = 0.0
            for p1 in fns[i].prims:
                for p2 in fns[j].prims:
                    for p3 in fns[k].prims:
                        for p4 in fns[l].prims:
                            val += (
                                p1.coef * p2.coef * p3.coef * p4.coef
                                * _eri_prim(p1.exp, fns[i].lmn, fns[i].center,
                                            p2.exp, fns[j].lmn, fns[j].center,
                                            p3.exp, fns[k].lmn, fns[k].center,
                                            p4.exp, fns[l].lmn, fns[l].center)
                            )
            for (a, b) in ((i, j), (j, i)):
                for (c, d) in ((k, l), (l, k)):
                    eri[a, b, c, d] = val
                    eri[c, d, a, b] = val
    e_nuc = 0.0
    for x in range(len(atoms)):
        for y in range(x):
            rx = np.asarray(atoms[x][1], float) - np.asarray(atoms[y][1], float)
            e_nuc += CHARGE[atoms[x][0]] * CHARGE[atoms[y][0]] / np.linalg.norm(rx)
    return S, T + V, eri, e_nuc, fns


# ---------------------------------------------------------------------------
# Closed-shell RHF with DIIS
# ---------------------------------------------------------------------------

def rhf_best(S, hcore, eri, e_nuc, n_occ, C0=None, n_random=4, **kw):
    """Run SCF from the core guess, random guesses, and C0; keep the lowest."""
    best = None
    guesses = [None]
    if C0 is not None:
        guesses.insert(0, C0)
    rng = np.random.default_rng(12345)
    n = S.shape[0]
    for _ in range(n_random):
        guesses.append(np.linalg.qr(rng.normal(size=(n, n)))[0])
    for g0 in guesses:
        try:
            out = rhf(S, hcore, eri, e_nuc, n_occ, C0=g0, **kw)
        except np.linalg.LinAlgError:
            continue
        if best is None or out[0] < best[0] - 1e-10:
            best = out
    return best


def rhf(S, hcore, eri, e_nuc, n_occ, C0=None, max_iter=200, tol=1e-11, level_shift=0.0):
    n = S.shape[0]
    evals, evecs = np.linalg.eigh(S)
    X = evecs @ np.diag(evals ** -0.5) @ evecs.T
    if C0 is None:
        f0 = X.T @ hcore @ X
        _, cc = np.linalg.eigh(f0)
        C = X @ cc
    else:
        C = C0.copy()
    errs, focks = [], []
    e_old = 0.0
    for it in range(max_iter):
        Cocc = C[:, :n_occ]
        D = 2.0 * Cocc @ Cocc.T
        J = np.einsum("pqrs,rs->pq", eri, D)
        K = np.einsum("prqs,rs->pq", eri, D)
        F = hcore + J - 0.5 * K
        E = 0.5 * np.sum(D * (hcore + F)) + e_nuc
        err = X.T @ (F @ D @ S - S @ D @ F) @ X
        errs.append(err.ravel())
        focks.append(F.copy())
        if len(errs) > 8:
            errs.pop(0)
            focks.pop(0)
        if np.max(np.abs(err)) < tol and abs(E - e_old) < tol:
            break
        e_old = E
        if len(errs) > 1:
            m = len(errs)
            B = -np.ones((m + 1, m + 1))
            B[m, m] = 0.0
            for a in range(m):
                for b in range(m):
                    B[a, b] = np.dot(errs[a], errs[b])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                w = np.linalg.solve(B, rhs)[:m]
                F = sum(wi * fi for wi, fi in zip(w, focks))
            except np.linalg.LinAlgError:
                pass
        Fp = X.T @ F @ X
        if level_shift:
            Pv = np.eye(n) - X.T @ S @ (C[:, :n_occ] @ C[:, :n_occ].T) @ S @ X
            Fp = Fp + level_shift * Pv
        eps, cc = np.linalg.eigh(Fp)
        C = X @ cc
    Cocc = C[:, :n_occ]
    D = 2.0 * Cocc @ Cocc.T
    J = np.einsum("pqrs,rs->pq", eri, D)
    K = np.einsum("prqs,rs->pq", eri, D)
    F = hcore + J - 0.5 * K
    E = 0.5 * np.sum(D * (hcore + F)) + e_nuc
    eps = np.diag(C.T @ F @ C).copy()
    return E, C, eps, F


# ---------------------------------------------------------------------------
# MO transforms and frozen-core folding
# ---------------------------------------------------------------------------

def mo_transform(hcore, eri, C):
    h1 = C.T @ hcore @ C
    g = np.einsum("pqrs,pi->iqrs", eri, C, optimize=True)
    g = np.einsum("iqrs,qj->ijrs", g, C, optimize=True)
    g = np.einsum("ijrs,rk->ijks", g, C, optimize=True)
    g = np.einsum("ijks,sl->ijkl", g, C, optimize=True)
    return h1, g


def freeze_core(h1, g, e_nuc, frozen, active):
    e_core = e_nuc
    for i in frozen:
        e_core += 2.0 * h1[i, i]
        for j in frozen:
            e_core += 2.0 * g[i, i, j, j] - g[i, j, j, i]
    na = len(active)
    h_act = np.zeros((na, na))
    for a, p in enumerate(active):
        for b, q in enumerate(active):
            v = h1[p, q]
            for i in frozen:
                v += 2.0 * g[p, q, i, i] - g[p, i, i, q]
            h_act[a, b] = v
    g_act = np.zeros((na, na, na, na))
    for a, p in enumerate(active):
        for b, q in enumerate(active):
            for c, r in enumerate(active):
                for d, s in enumerate(active):
                    g_act[a, b, c, d] = g[p, q, r, s]
    return h_act, g_act, e_core


# ---------------------------------------------------------------------------
# Determinant FCI (Slater-Condon): the independent energy oracle
# ---------------------------------------------------------------------------

def fci_ground_energy(h1, g, e_core, n_elec, n_roots=1):
    """Dense FCI on the Sz=0 (or minimal |Sz|) sector; returns eigenvalues."""
    evals, _, _ = fci_solve(h1, g, e_core, n_elec)
    return evals[:n_roots]


def fci_solve(h1, g, e_core, n_elec):
    """Dense sector FCI returning (eigenvalues, eigenvectors, S^2 expectations)."""
    H, dets, idx = _fci_matrix(h1, g, e_core, n_elec)
    evals, evecs = np.linalg.eigh(H)
    s2mat = _s2_matrix(dets, idx, h1.shape[0])
    s2exp = np.einsum("ik,ij,jk->k", evecs, s2mat, evecs)
    return evals, evecs, s2exp


def _s2_matrix(dets, idx, n):
    """S^2 = Sz(Sz+1) + S- S+ in the determinant basis.

    Determinants are (alpha-string, beta-string) with each string an ordered
    tuple; the operator moves one electron beta->alpha and back, so all
    alpha/beta crossing signs cancel and only the within-string permutation
    signs survive.
    """
    dim = len(dets)
    m = np.zeros((dim, dim))
    for (sa, sb), i in idx.items():
        na, nb = len(sa), len(sb)
        sz = 0.5 * (na - nb)
        m[i, i] += sz * (sz + 1.0) + nb  # diagonal of S-S+ gives n_beta - n_{both}
        sa_set, sb_set = set(sa), set(sb)
        both = sa_set & sb_set
        m[i, i] -= len(both)
        # off-diagonal: exchange p-alpha with q-beta (p != q, p in beta only, q in alpha only)
        for p in sb_set - sa_set:
            for q in sa_set - sb_set:
                new_a = tuple(sorted(sa_set - {q} | {p}))
                new_b = tuple(sorted(sb_set - {p} | {q}))
                j = idx[(new_a, new_b)]
                sgn = _string_sign(sa, q, p) * _string_sign(sb, p, q)
                m[j, i] -= sgn
    return m


def _string_sign(occ, p, q):
    """Permutation sign of a_q^dag a_p on the ordered tuple occ."""
    lo, hi = (p, q) if p < q else (q, p)
    perm = sum(1 for o in occ if lo < o < hi)
    return (-1.0) ** perm


def _fci_matrix(h1, g, e_core, n_elec):
    n = h1.shape[0]
    na = (n_elec + 1) // 2
    nb = n_elec - na
    strings_a = list(combinations(range(n), na))
    strings_b = list(combinations(range(n), nb))
    dets = [(sa, sb) for sa in strings_a for sb in strings_b]
    idx = {d: i for i, d in enumerate(dets)}
    dim = len(dets)
    H = np.zeros((dim, dim))

    def sign_excite(occ, p, q):
        """sign for a_q^dag a_p acting on the ordered occupation tuple occ."""
        lo, hi = (p, q) if p < q else (q, p)
        perm = sum(1 for o in occ if lo < o < hi)
        return (-1.0) ** perm

    def one_body(occ_other, occ, spin_pair_energy):
        pass

    # diagonal
    for (sa, sb), i in idx.items():
        e = e_core
        for p in sa:
            e += h1[p, p]
        for p in sb:
            e += h1[p, p]
        for p in sa:
            for q in sa:
                e += 0.5 * (g[p, p, q, q] - g[p, q, q, p])
        for p in sb:
            for q in sb:
                e += 0.5 * (g[p, p, q, q] - g[p, q, q, p])
        for p in sa:
            for q in sb:
                e += g[p, p, q, q]
        H[i, i] = e

    # single excitations
    for (sa, sb), i in idx.items():
        for spin, occ in ((0, sa), (1, sb)):
            occ_set = set(occ)
            other = sb if spin == 0 else sa
            for p in occ:
                for q in range(n):
                    if q in occ_set:
                        continue
                    new = tuple(sorted(occ_set - {p} | {q}))
                    j = idx[(new, sb) if spin == 0 else (sa, new)]
                    s = sign_excite(occ, p, q)
                    v = h1[q, p]
                    for r in occ:
                        if r != p:
                            v += g[q, p, r, r] - g[q, r, r, p]
                    for r in other:
                        v += g[q, p, r, r]
                    H[j, i] += s * v

    # double excitations, same spin
    for (sa, sb), i in idx.items():
        for spin, occ in ((0, sa), (1, sb)):
            occ_set = set(occ)
            virt = [q for q in range(n) if q not in occ_set]
            for p1, p2 in combinations(occ, 2):
                for q1, q2 in combinations(virt, 2):
                    new = tuple(sorted(occ_set - {p1, p2} | {q1, q2}))
                    j = idx[(new, sb) if spin == 0 else (sa, new)]
                    s = _double_sign(occ, p1, p2, q1, q2)
                    v = g[q1, p1, q2, p2] - g[q2, p1, q1, p2]
                    H[j, i] += s * v

    # double excitations, opposite spin
    for (sa, sb), i in idx.items():
        sa_set, sb_set = set(sa), set(sb)
        virt_a = [q for q in range(n) if q not in sa_set]
        virt_b = [q for q in range(n) if q not in sb_set]
        for pa in sa:
            for qa in virt_a:
                new_a = tuple(sorted(sa_set - {pa} | {qa}))
                s_a = sign_excite(sa, pa, qa)
                for pb in sb:
                    for qb in virt_b:
                        new_b = tuple(sorted(sb_set - {pb} | {qb}))
                        s_b = sign_excite(sb, pb, qb)
                        j = idx[(new_a, new_b)]
                        H[j, i] += s_a * s_b * g[qa, pa, qb, pb]

    return H, dets, idx


def _double_sign(occ, p1, p2, q1, q2):
    """Sign of a_{q2}^dag a_{q1}^dag a_{p2} a_{p1}-type same-spin double."""
    lst = list(occ)
    sign = 1.0
    for p, q in ((p1, q1), (p2, q2)):
        ip = lst.index(p)
        lst.pop(ip)
        sign *= (-1.0) ** ip
        iq = sum(1 for o in lst if o < q)
        lst.insert(iq, q)
        sign *= (-1.0) ** iq
    return sign


# ---------------------------------------------------------------------------
# N2 orbital classification and fixture assembly
# ---------------------------------------------------------------------------

def classify_n2_valence(C, S, fns, atoms):
    """Return canonicalized valence MOs ordered (sg, pux, puy, pgx, pgy, su).

    The valence orbitals come out of SCF arbitrarily mixed inside degenerate
    subspaces (x vs y always, u vs g at stretched geometries), so the six
    columns are re-canonicalized: first split by x / y / sigma character with
    AO-projector discriminators, then by inversion parity within each
    character block.  MO phases are fixed so that (g + u)/sqrt(2) localizes
    on atom A for each bonding/antibonding pair.
    """
    nao = C.shape[0]
    assert nao == 10
    # inversion through the bond center: atom A <-> atom B, p -> -p
    inv = np.zeros((nao, nao))
    for a in range(2):
        b = 1 - a
        inv[5 * b + 0, 5 * a + 0] = 1.0   # 1s
        inv[5 * b + 1, 5 * a + 1] = 1.0   # 2s
        for k in (2, 3, 4):               # 2p
            inv[5 * b + k, 5 * a + k] = -1.0

    def ao_weight_matrix(cols, ao_idx):
        """Symmetric discriminator sum_{mu in ao_idx} (S c_i)_mu (S c_j)_mu."""
        sc = S @ cols
        return sc[ao_idx, :].T @ sc[ao_idx, :]

    cols = C[:, 4:10].copy()
    # step 1: split x / y / sigma via the px- and py-AO weights
    w = ao_weight_matrix(cols, [2, 7]) - ao_weight_matrix(cols, [3, 8])
    evals, U = np.linalg.eigh(w)
    cols = cols @ U
    order = np.argsort(evals)
    y_cols = cols[:, order[:2]]     # most negative: py character
    s_cols = cols[:, order[2:4]]    # near zero: sigma
    x_cols = cols[:, order[4:]]     # most positive: px character

    def parity_split(two_cols):
        p = two_cols.T @ S @ (inv @ two_cols)
        p = 0.5 * (p + p.T)
        pe, pu = np.linalg.eigh(p)
        out = two_cols @ pu
        # columns ordered (gerade, ungerade)
        return out[:, [1, 0]] if pe[1] > pe[0] else out

    sg_su = parity_split(s_cols)
    xg_xu = parity_split(x_cols)
    yg_yu = parity_split(y_cols)
    Cv = np.column_stack([sg_su[:, 0], xg_xu[:, 1], yg_yu[:, 1],
                          xg_xu[:, 0], yg_yu[:, 0], sg_su[:, 1]])
    # phase fixing: make the atom-A blocks of each pair align so that the
    # plus combination localizes on atom A
    pairs = [(0, 5), (1, 3), (2, 4)]
    for i1, i2 in pairs:
        c1, c2 = Cv[:, i1], Cv[:, i2]
        if c1[np.argmax(np.abs(c1))] < 0:
            Cv[:, i1] = -c1
            c1 = Cv[:, i1]
        ovA = float(c1[:5] @ S[:5, :5] @ c2[:5])
        if ovA < 0:
            Cv[:, i2] = -c2
    perm = list(range(4, 10))
    return Cv, perm, pairs


def write_fcidump(path, h1, g, e_core, n_elec, ms2=0, tol=1e-12):
    n = h1.shape[0]
    lines = [f" &FCI NORB={n:3d},NELEC={n_elec:3d},MS2={ms2},"]
    lines.append("  ORBSYM=" + "1," * n)
    lines.append("  ISYM=1,")
    lines.append(" &END")
    pairs = [(i, j) for i in range(n) for j in range(i + 1)]
    for ij, (i, j) in enumerate(pairs):
        for kl in range(ij + 1):
            k, l = pairs[kl]
            v = g[i, j, k, l]
            if abs(v) > tol:
                lines.append(f" {v:.16g} {i+1:3d} {j+1:3d} {k+1:3d} {l+1:3d}")
    for i in range(n):
        for j in range(i + 1):
            if abs(h1[i, j]) > tol:
                lines.append(f" {h1[i,j]:.16g} {i+1:3d} {j+1:3d}   0   0")
    lines.append(f" {e_core:.16g}   0   0   0   0")
    Path(path).write_text("\n".join(lines) + "\n")


def make_h2(outdir: Path, r_angstrom=0.735):
    r = r_angstrom * ANGSTROM
    atoms = [("H", (0.0, 0.0, 0.0)), ("H", (0.0, 0.0, r))]
    S, hcore, eri, e_nuc, fns = integrals(atoms)
    E, C, eps, F = rhf_best(S, hcore, eri, e_nuc, n_occ=1)
    h1, g = mo_transform(hcore, eri, C)
    fci = fci_ground_energy(h1, g, e_nuc, 2)[0]
    write_fcidump(outdir / "h2_sto3g_0.735.fcidump", h1, g, e_nuc, 2)
    sidecar = {
        "system": "H2 STO-3G",
        "bond_length_angstrom": r_angstrom,
        "fci_energy": float(fci),
        "fci_singlet_energy": float(fci),
        "rhf_energy": float(E),
        "orbital_energies": [float(x) for x in eps],
        "localization_pairs": [[0, 1]],
    }
    (outdir / "h2_sto3g_0.735.json").write_text(json.dumps(sidecar, indent=1))
    print(f"H2  R={r_angstrom}: RHF={E:.9f}  FCI={fci:.9f}")


def make_h4(outdir: Path, spacing=1.0):
    r = spacing * ANGSTROM
    atoms = [("H", (0.0, 0.0, i * r)) for i in range(4)]
    S, hcore, eri, e_nuc, fns = integrals(atoms)
    E, C, eps, F = rhf_best(S, hcore, eri, e_nuc, n_occ=2)
    h1, g = mo_transform(hcore, eri, C)
    fci = fci_ground_energy(h1, g, e_nuc, 4)[0]
    write_fcidump(outdir / "h4_linear_1.0.fcidump", h1, g, e_nuc, 4)
    sidecar = {
        "system": "linear H4 STO-3G",
        "spacing_angstrom": spacing,
        "fci_energy": float(fci),
        "fci_singlet_energy": float(fci),
        "rhf_energy": float(E),
        "orbital_energies": [float(x) for x in eps],
        "localization_pairs": [],
    }
    (outdir / "h4_linear_1.0.json").write_text(json.dumps(sidecar, indent=1))
    print(f"H4  a={spacing}: RHF={E:.9f}  FCI={fci:.9f}")


def make_n2(outdir: Path, r_angstrom, C_guess=None):
    r = r_angstrom * ANGSTROM
    atoms = [("N", (0.0, 0.0, 0.0)), ("N", (0.0, 0.0, r))]
    S, hcore, eri, e_nuc, fns = integrals(atoms)
    E, C, eps, F = rhf_best(S, hcore, eri, e_nuc, n_occ=7, C0=C_guess,
                            level_shift=0.3 if r_angstrom > 2.2 else 0.0, max_iter=400)
    Cv, perm, pairs = classify_n2_valence(C, S, fns, atoms)
    Cfull = C.copy()
    Cfull[:, 4:10] = Cv
    h1, g = mo_transform(hcore, eri, Cfull)
    h_act, g_act, e_core = freeze_core(h1, g, e_nuc, frozen=[0, 1, 2, 3], active=list(range(4, 10)))
    evals, evecs, s2 = fci_solve(h_act, g_act, e_core, 6)
    fci = evals[0]
    singlets = np.where(np.abs(s2) < 1e-6)[0]
    fci_singlet = float(evals[singlets[0]])
    eps_v = np.diag(Cv.T @ F @ Cv)
    tag = f"n2_sto3g_{r_angstrom:.2f}"
    write_fcidump(outdir / f"{tag}.fcidump", h_act, g_act, e_core, 6)
    sidecar = {
        "system": "N2 STO-3G valence (6e,6o), frozen 1s/2s",
        "bond_length_angstrom": r_angstrom,
        "fci_energy": float(fci),
        "fci_singlet_energy": fci_singlet,
        "rhf_energy": float(E),
        "orbital_energies": [float(x) for x in eps_v],
        "localization_pairs": [[0, 5], [1, 3], [2, 4]],
    }
    (outdir / f"{tag}.json").write_text(json.dumps(sidecar, indent=1))
    print(f"N2  R={r_angstrom}: RHF={E:.9f}  FCI={fci:.9f}  FCI(S=0)={fci_singlet:.9f}")
    return C


def main():
    outdir = Path(__file__).resolve().parent.parent / "src" / "spinforge" / "fixtures"
    outdir.mkdir(parents=True, exist_ok=True)
    make_h2(outdir)
    make_h4(outdir)
    C = None
    for r in (1.09, 1.5, 2.0, 2.5, 3.0, 4.5):
        C = make_n2(outdir, r, C_guess=C)


if __name__ == "__main__":
    main()
