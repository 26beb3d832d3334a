"""Circuit generators: Dicke unitaries, spin-coupled CSF preparation, geminal
products, controlled and linear-combination variants, and fermionic Givens
basis rotations.

Wire conventions.  Open-shell site s of a plan lives on the alpha/beta wires
of its spatial orbital (interleaved layout: alpha = 2*orb, beta = 2*orb + 1).
For connectivity costing, the pure open-shell circuit can also be emitted in
the blocked layout used by the cost analysis (alpha wires 0..N-1 followed by
beta wires N..2N-1); the Fock-space semantics are identical up to the wire
relabeling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .circuits import Circuit, Gate, Planar
from .csf import CsfSpec

TWO_PI = 2.0 * math.pi


@dataclass
class SynthesisPlan:
    """What to synthesize: orbital layout, coupling pattern, optional rotations."""

    spec: CsfSpec
    basis_rotations: List[Tuple[int, int, float]] = field(default_factory=list)
    layout: str = "interleaved"  # or "blocked" (open-shell-only costing layout)

    @property
    def n_open(self) -> int:
        return len(self.spec.open_shell)


# ---------------------------------------------------------------------------
# Dicke building blocks
# ---------------------------------------------------------------------------

def _block2(circ: Circuit, a: int, b: int, l: int) -> None:
    """Two-qubit split block of M_l:|01> -> sqrt(1/l)|01> + sqrt(1-1/l)|10>."""
    th = 2.0 * math.acos(math.sqrt(1.0 / l))
    circ.add("CX", a, b, tag="dicke2")
    circ.add("CRY", b, a, angle=th, tag="dicke2")
    circ.add("CX", a, b, tag="dicke2")


def _block3(circ: Circuit, i: int, c: int, l_q: int, j: int, l: int) -> None:
    """Three-qubit split block: (0,1,1) -> sqrt(j/l)(011) + sqrt(1-j/l)(110).

    Wires (i, c, l_q) = (top, middle control, bottom); j is the number of
    excitations the block handles inside M_l.
    """
    th = 2.0 * math.acos(math.sqrt(j / l))
    circ.add("CX", i, l_q, tag="dicke3")
    circ.add("CCRY", c, l_q, i, angle=th, tag="dicke3")
    circ.add("CX", i, l_q, tag="dicke3")


def _emit_m_block(circ: Circuit, wires: Sequence[int], l: int, kmax: int) -> None:
    """M_{l, kmax} acting on wires[0..l-1] (kmax = l-1 gives the S_n block)."""
    _block2(circ, wires[l - 2], wires[l - 1], l)
    lo = l - 1 - min(kmax, l - 1)
    for i in range(l - 3, lo - 1, -1):
        j = l - 1 - i
        _block3(circ, wires[i], wires[i + 1], wires[l - 1], j, l)


def emit_dicke_unitary(circ: Circuit, wires: Sequence[int], n: int, k: int) -> None:
    """Gates of U_{n,k} on the given wires (applied to |0^{n-l} 1^l>, l <= k)."""
    if not (1 <= k <= n):
        raise ValueError("need 1 <= k <= n")
    for l in range(n, k, -1):
        _emit_m_block(circ, wires, l, k)
    for l in range(k, 1, -1):
        _emit_m_block(circ, wires, l, l - 1)


def dicke_unitary(n: int, k: int) -> Circuit:
    """Circuit for U_{n,k}: maps |0^{n-l} 1^l> to the Dicke state |D_l^n>, l <= k."""
    circ = Circuit(n)
    emit_dicke_unitary(circ, list(range(n)), n, k)
    return circ


# ---------------------------------------------------------------------------
# Input stage
# ---------------------------------------------------------------------------

def staircase_amplitudes(n: int) -> List[float]:
    """Target amplitudes t_k = (-1)^{n-k}/sqrt(n+1) of |0^{n-k} 1^k> on one half."""
    norm = math.sqrt(n + 1.0)
    return [(-1.0) ** (n - k) / norm for k in range(n + 1)]


def ladder_angles(targets: Sequence[float]) -> List[float]:
    """RY/CRY angles producing the staircase superposition sum_k t_k |0^{n-k} 1^k>.

    Standard conditional-amplitude recurrence with nonnegative residuals; the
    final residual must match the last target, which the alternating-sign
    staircase guarantees (its last amplitude is positive).
    """
    n = len(targets) - 1
    angles = []
    residual = 1.0
    for k in range(n):
        c = min(1.0, max(-1.0, targets[k] / residual))
        th = 2.0 * math.acos(c)
        angles.append(th)
        residual *= math.sin(th / 2.0)
        if residual < 1e-15:
            residual = 1e-15
    if targets[n] < 0:
        raise ValueError("last staircase amplitude must be positive")
    return angles


def _emit_input_stage(
    circ: Circuit,
    lw: Sequence[int],
    rw: Sequence[int],
    control: Optional[int] = None,
) -> None:
    """Prepare sum_k t_k |0^{n-k}1^k>_L |0^k 1^{n-k}>_R on the alpha wires."""
    n = len(lw)
    angles = ladder_angles(staircase_amplitudes(n))
    for w in rw:
        if control is None:
            circ.add("X", w, tag="in")
        else:
            circ.add("CX", control, w, tag="inctl")
    if control is None:
        circ.add("RY", lw[n - 1], angle=angles[0], tag="in")
    else:
        circ.add("CRY", control, lw[n - 1], angle=angles[0], tag="inctl")
    for k in range(1, n):
        circ.add("CRY", lw[n - k], lw[n - k - 1], angle=angles[k], tag="in")
    # CNOT accordion, outermost pair first
    allw = list(lw) + list(rw)
    big = len(allw)
    for i in range(n):
        circ.add("CX", allw[i], allw[big - 1 - i], tag="acc")


def _emit_u_map(circ: Circuit, alpha: Sequence[int], beta: Sequence[int], control: Optional[int] = None) -> None:
    """Spin-to-Fock mapping: flip beta_i when alpha_i is |0>."""
    for aw, bw in zip(alpha, beta):
        if control is None:
            circ.add("CXbar", aw, bw, tag="map")
        else:
            circ.add("CX", control, aw, tag="mapctl")
            circ.add("CX", aw, bw, tag="map")
            circ.add("CX", control, aw, tag="mapctl")


def _wire_maps(plan: SynthesisPlan) -> Tuple[List[int], List[int], int]:
    """(alpha wires per site, beta wires per site, total data qubits)."""
    n_open = plan.n_open
    if plan.layout == "blocked":
        if plan.spec.closed_shell or (plan.spec.n_spatial not in (None, n_open)):
            raise ValueError("blocked layout supports pure open-shell plans only")
        return list(range(n_open)), list(range(n_open, 2 * n_open)), 2 * n_open
    m = plan.spec.n_spatial if plan.spec.n_spatial is not None else n_open
    alpha = [2 * orb for orb in plan.spec.open_shell]
    beta = [2 * orb + 1 for orb in plan.spec.open_shell]
    return alpha, beta, 2 * m


# ---------------------------------------------------------------------------
# CSF circuits
# ---------------------------------------------------------------------------

def _emit_closed_shell(circ: Circuit, spec: CsfSpec, control: Optional[int] = None) -> None:
    for orb in spec.closed_shell:
        for w in (2 * orb, 2 * orb + 1):
            if control is None:
                circ.add("X", w, tag="closed")
            else:
                circ.add("CX", control, w, tag="closedctl")


def _emit_geminal_pairs(circ: Circuit, alpha: Sequence[int], control: Optional[int] = None) -> None:
    """Bell singlet on each consecutive site pair of the alpha register."""
    for j in range(0, len(alpha), 2):
        a1, a2 = alpha[j], alpha[j + 1]
        if control is None:
            circ.add("RY", a2, angle=-math.pi / 2.0, tag="gem")
        else:
            circ.add("CRY", control, a2, angle=-math.pi / 2.0, tag="gemctl")
        circ.add("CXbar", a2, a1, tag="gempair")


def csf_circuit(plan: SynthesisPlan, control: Optional[int] = None, n_total: Optional[int] = None) -> Circuit:
    """State preparation circuit for a CSF plan.

    Pattern 1 (two maximal-spin subsystems) uses the input ladder + parallel
    Dicke unitaries + spin-to-Fock mapping; N = 2 and pattern 2 use the
    compact geminal construction.  Optional basis rotations are appended.
    With ``control`` given, the circuit prepares the CSF when the control is
    |1> and acts as the identity on the all-zero data register otherwise.
    """
    n_open = plan.n_open
    alpha, beta, n_data = _wire_maps(plan)
    circ = Circuit(n_total if n_total is not None else n_data)

    _emit_closed_shell(circ, plan.spec, control)
    if n_open:
        if n_open % 2:
            raise ValueError("open shell must hold an even number of electrons")
        if plan.spec.coupling == 2 or n_open == 2:
            _emit_geminal_pairs(circ, alpha, control)
        elif plan.spec.coupling == 1:
            n = n_open // 2
            _emit_input_stage(circ, alpha[:n], alpha[n:], control)
            emit_dicke_unitary(circ, alpha[:n], n, n)
            emit_dicke_unitary(circ, alpha[n:], n, n)
        else:
            raise ValueError(f"unknown coupling pattern {plan.spec.coupling}")
        _emit_u_map(circ, alpha, beta, control)
    for p, q, th in plan.basis_rotations:
        emit_spatial_rotation(circ, p, q, th)
    return circ


def geminal_circuit(n_open: int) -> Circuit:
    """Bell-pair product state circuit on 2*n_open interleaved qubits."""
    return csf_circuit(SynthesisPlan(CsfSpec([], list(range(n_open)), 2, n_open)))


def controlled_csf(plan: SynthesisPlan, ancilla: int) -> Circuit:
    """Prepare the CSF when the ancilla is |1>, identity on |0...0> otherwise.

    Only the initial flips, the first ladder rotation, and the mapping-layer X
    conjugations are controlled; everything else deactivates on the zero
    register by itself.
    """
    _, _, n_data = _wire_maps(plan)
    if ancilla < n_data:
        raise ValueError("ancilla collides with the data register")
    return csf_circuit(plan, control=ancilla, n_total=ancilla + 1)


def _lift_controlled(body: Circuit, anc: int, work: int, out: Circuit) -> None:
    """Append a fully ancilla-controlled version of ``body`` onto ``out``.

    Exact on arbitrary register states: with the ancilla |0> every emitted
    gate chain acts as the identity, so previously prepared branches of a
    linear combination are untouched.  Controlled CNOTs are realized through
    an AND gadget (CCRY(pi) computing c1*c2 into the clean work qubit).
    """

    def and_cx(c1: int, c2: int, t: int, tag: str) -> None:
        out.add("CCRY", c1, c2, work, angle=math.pi, tag=tag)
        out.add("CX", work, t, tag=tag)
        out.add("CCRY", c1, c2, work, angle=-math.pi, tag=tag)

    for g in body.gates:
        tag = "lc:" + g.tag
        if g.kind == "X":
            out.add("CX", anc, g.qubits[0], tag=tag)
        elif g.kind == "RY":
            out.add("CRY", anc, g.qubits[0], angle=g.angle, tag=tag)
        elif g.kind == "H":
            raise ValueError("H not expected in CSF preparation bodies")
        elif g.kind == "CX":
            and_cx(anc, g.qubits[0], g.qubits[1], tag)
        elif g.kind == "CXbar":
            c, t = g.qubits
            out.add("X", c, tag=tag)
            and_cx(anc, c, t, tag)
            out.add("X", c, tag=tag)
        elif g.kind == "SWAP":
            a, b = g.qubits
            and_cx(anc, a, b, tag)
            and_cx(anc, b, a, tag)
            and_cx(anc, a, b, tag)
        elif g.kind == "CRY":
            out.add("CCRY", anc, g.qubits[0], g.qubits[1], angle=g.angle, tag=tag)
        elif g.kind == "CCRY":
            # V-chain: CRY(c2,t,th/2) CX(c1,c2) CRY(c2,t,-th/2) CX(c1,c2) CRY(c1,t,th/2),
            # every rotation gains the ancilla control; the bare CNOT pair
            # cancels on its own when the ancilla is |0>.
            c1, c2, t = g.qubits
            half = g.angle / 2.0
            out.add("CCRY", anc, c1, t, angle=half, tag=tag)
            out.add("CX", c1, c2, tag=tag)
            out.add("CCRY", anc, c2, t, angle=-half, tag=tag)
            out.add("CX", c1, c2, tag=tag)
            out.add("CCRY", anc, c2, t, angle=half, tag=tag)
        else:
            raise ValueError(f"cannot control gate {g.kind}")


def lc_csf_circuit(plans: Sequence[SynthesisPlan], coeffs: Sequence[float]) -> Circuit:
    """Prepare sum_j c_j |anc_j one-hot> |Phi_j> with a one-hot ancilla register.

    Layout: data wires, then one work wire for the AND gadget, then one
    ancilla wire per plan.  Tracing out or postselecting the ancillas is left
    to the caller.
    """
    if len(plans) != len(coeffs):
        raise ValueError("one coefficient per plan required")
    norm = math.sqrt(sum(c * c for c in coeffs))
    if norm < 1e-15:
        raise ValueError("zero-norm coefficient vector")
    cs = [c / norm for c in coeffs]
    n_data = max(_wire_maps(p)[2] for p in plans)
    n_anc = len(plans)
    work = n_data
    circ = Circuit(n_data + 1 + n_anc)
    anc = [n_data + 1 + j for j in range(n_anc)]

    # one-hot amplitude ladder: |10...0> -> sum_j c_j |e_j>
    circ.add("X", anc[0], tag="lc")
    residual = 1.0
    for j in range(n_anc - 1):
        c = min(1.0, max(-1.0, cs[j] / residual))
        th = 2.0 * math.acos(c)
        circ.add("CRY", anc[j], anc[j + 1], angle=th, tag="lc")
        circ.add("CX", anc[j + 1], anc[j], tag="lc")
        residual = max(residual * math.sin(th / 2.0), 1e-15)
    if cs[-1] < 0:
        # ladder residuals are nonnegative; flip the last branch with Z = HXH
        circ.add("H", anc[-1], tag="lc")
        circ.add("X", anc[-1], tag="lc")
        circ.add("H", anc[-1], tag="lc")
    for j, plan in enumerate(plans):
        body = csf_circuit(plan)
        _lift_controlled(body, anc[j], work, circ)
    return circ


# ---------------------------------------------------------------------------
# Fermionic Givens rotations
# ---------------------------------------------------------------------------

def emit_givens(circ: Circuit, p: int, q: int, theta: float, include_string: bool = True) -> None:
    """Exact circuit for exp(theta (a_p^dag a_q - a_q^dag a_p)) under JW.

    The Z string on the qubits strictly between p and q enters through CZ
    conjugations (one CNOT each).  ``include_string=False`` drops the string
    and keeps only the two-CNOT rotation core, the per-spin-channel form
    whose CNOT count the cost analysis quotes for |p-q| <= 2.
    """
    if p == q:
        raise ValueError("need two distinct spin-orbitals")
    if p < q:
        p, q, theta = q, p, -theta
    mids = list(range(q + 1, p)) if include_string else []
    for m in mids:
        circ.add("H", p, tag="rot")
        circ.add("CX", m, p, tag="rot")
        circ.add("H", p, tag="rot")
    circ.add("RY", p, angle=math.pi / 2.0, tag="rot")
    circ.add("CX", p, q, tag="rot")
    circ.add("RY", q, angle=theta, tag="rot")
    circ.add("RY", p, angle=theta, tag="rot")
    circ.add("CX", p, q, tag="rot")
    circ.add("RY", p, angle=-math.pi / 2.0, tag="rot")
    for m in reversed(mids):
        circ.add("H", p, tag="rot")
        circ.add("CX", m, p, tag="rot")
        circ.add("H", p, tag="rot")


def givens_rotation_circuit(p: int, q: int, theta: float, n_qubits: int | None = None,
                            include_string: bool = True) -> Circuit:
    n = n_qubits if n_qubits is not None else max(p, q) + 1
    circ = Circuit(n)
    emit_givens(circ, p, q, theta, include_string)
    return circ


def emit_spatial_rotation(circ: Circuit, p_orb: int, q_orb: int, theta: float) -> None:
    """Paired alpha+beta Givens rotation between two spatial orbitals."""
    emit_givens(circ, 2 * p_orb, 2 * q_orb, theta)
    emit_givens(circ, 2 * p_orb + 1, 2 * q_orb + 1, theta)


def basis_rotation_circuit(pairs: Sequence[Tuple[int, int]], theta: float, n_spatial: int) -> Circuit:
    """Localization/delocalization circuit: one paired rotation per orbital pair."""
    circ = Circuit(2 * n_spatial)
    for p, q in pairs:
        emit_spatial_rotation(circ, p, q, theta)
    return circ


# ---------------------------------------------------------------------------
# Planar placement used by the cost analysis
# ---------------------------------------------------------------------------

def csf_planar_placement(n_open: int) -> Planar:
    """Four-row grid: beta-left / alpha-left / alpha-right / beta-right rows.

    Blocked-layout wire i maps into the grid so that every alpha wire is
    vertically adjacent to its beta partner (spin-to-Fock mapping is free) and
    each subsystem's alpha wires form one row.
    """
    n = n_open // 2
    place = {}
    for s in range(n_open):
        row = 1 if s < n else 2
        col = s if s < n else s - n
        place[s] = (row, col)            # alpha wires (blocked index s)
        place[n_open + s] = (0 if s < n else 3, col)  # beta wires
    return Planar(4, n, place)
