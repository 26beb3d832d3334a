"""Gate set, circuit container, decomposition passes and exact gate counting.

The gate set is {X, H, RY, CX, CXbar, CRY, CCRY, SWAP}.  All gates are real;
CXbar is a CNOT that fires when its control is |0> (white-dot control).
Decomposition targets the set {X, H, RY, CX}; for linear and planar
connectivity the input-stage CNOT accordion is recompiled into
nearest-neighbor CNOTs with the telescoping cancellations of the accordion,
and spin-to-Fock mapping CNOTs are expanded with the naive nearest-neighbor
ladder (no cancellation).

Dicke-state gate blocks are recognized structurally (by gate tags set by the
synthesis module) and rewritten with fused templates costing 3 CNOTs per
two-qubit block and 5 CNOTs per three-qubit block.  The fused templates agree
with the original blocks on every state the blocks ever receive inside the
Dicke/CSF circuits; outside those circuits the generic CRY/CCRY rewrites are
used instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

_ARITY = {"X": 1, "H": 1, "RY": 1, "CX": 2, "CXbar": 2, "CRY": 2, "CCRY": 3, "SWAP": 2}
_HAS_ANGLE = {"RY", "CRY", "CCRY"}
_ROTATIONS = ("RY", "CRY", "CCRY")


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: Tuple[int, ...]
    angle: Optional[float] = None
    tag: str = ""

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(self.qubits) != _ARITY[self.kind]:
            raise ValueError(f"{self.kind} expects {_ARITY[self.kind]} qubits, got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in {self.kind} {self.qubits}")
        if (self.angle is None) == (self.kind in _HAS_ANGLE):
            raise ValueError(f"angle mismatch for {self.kind}")


@dataclass
class Planar:
    """Rows x cols grid with an explicit qubit placement."""

    rows: int
    cols: int
    place: Dict[int, Tuple[int, int]]

    def adjacent(self, a: int, b: int) -> bool:
        ra, ca = self.place[a]
        rb, cb = self.place[b]
        return abs(ra - rb) + abs(ca - cb) == 1


Connectivity = str  # "all" | "linear" | "planar" (Planar instance allowed too)


@dataclass
class Circuit:
    n_qubits: int
    gates: List[Gate] = field(default_factory=list)
    connectivity: object = "all"

    def add(self, kind: str, *qubits: int, angle: float | None = None, tag: str = "") -> "Circuit":
        g = Gate(kind, tuple(qubits), angle, tag)
        for q in g.qubits:
            if q < 0 or q >= self.n_qubits:
                raise ValueError(f"qubit {q} out of range for {self.n_qubits}-qubit circuit")
        self.gates.append(g)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for g in gates:
            self.add(g.kind, *g.qubits, angle=g.angle, tag=g.tag)
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def copy(self) -> "Circuit":
        return Circuit(self.n_qubits, list(self.gates), self.connectivity)

    def inverse(self) -> "Circuit":
        inv = Circuit(self.n_qubits, connectivity=self.connectivity)
        for g in reversed(self.gates):
            if g.angle is not None:
                inv.add(g.kind, *g.qubits, angle=-g.angle, tag=g.tag)
            else:
                inv.add(g.kind, *g.qubits, tag=g.tag)
        return inv


@dataclass
class GateCounts:
    cnot: int
    rotation: int
    depth: int
    toffoli_equivalent: int


# ---------------------------------------------------------------------------
# Statevector application of single gates (shared with the simulator module)
# ---------------------------------------------------------------------------

def _ry_coeffs(angle: float) -> Tuple[float, float]:
    return math.cos(angle / 2.0), math.sin(angle / 2.0)


def apply_gate(v: np.ndarray, g: Gate) -> np.ndarray:
    """Apply one gate to an amplitude vector (qubit 0 = least-significant bit)."""
    n = v.shape[0].bit_length() - 1
    idx = np.arange(v.shape[0], dtype=np.int64)
    if g.kind == "X":
        return v[idx ^ (1 << g.qubits[0])]
    if g.kind == "H":
        q = g.qubits[0]
        flip = idx ^ (1 << q)
        bit = (idx >> q) & 1
        s = 1.0 - 2.0 * bit
        return (s * v + v[flip]) / math.sqrt(2.0)
    if g.kind == "RY":
        q = g.qubits[0]
        c, s = _ry_coeffs(g.angle)
        flip = idx ^ (1 << q)
        bit = (idx >> q) & 1
        # new[j] = c v[j] + s * (-1)^{bit(j)+1}-pattern: |0> -> c|0>+s|1>, |1> -> -s|0>+c|1>
        sgn = np.where(bit == 1, 1.0, -1.0)
        return c * v + s * sgn * v[flip]
    if g.kind in ("CX", "CXbar"):
        c_q, t_q = g.qubits
        want = 1 if g.kind == "CX" else 0
        sel = ((idx >> c_q) & 1) == want
        out = v.copy()
        out[idx[sel]] = v[idx[sel] ^ (1 << t_q)]
        return out
    if g.kind == "SWAP":
        a, b = g.qubits
        ba = (idx >> a) & 1
        bb = (idx >> b) & 1
        diff = ba ^ bb
        perm = idx ^ (diff << a) ^ (diff << b)
        return v[perm]
    if g.kind == "CRY":
        c_q, t_q = g.qubits
        c, s = _ry_coeffs(g.angle)
        sel = ((idx >> c_q) & 1) == 1
        out = v.copy()
        j = idx[sel]
        bit = (j >> t_q) & 1
        sgn = np.where(bit == 1, 1.0, -1.0)
        out[j] = c * v[j] + s * sgn * v[j ^ (1 << t_q)]
        return out
    if g.kind == "CCRY":
        c1, c2, t_q = g.qubits
        c, s = _ry_coeffs(g.angle)
        sel = (((idx >> c1) & 1) == 1) & (((idx >> c2) & 1) == 1)
        out = v.copy()
        j = idx[sel]
        bit = (j >> t_q) & 1
        sgn = np.where(bit == 1, 1.0, -1.0)
        out[j] = c * v[j] + s * sgn * v[j ^ (1 << t_q)]
        return out
    raise ValueError(f"unsupported gate {g.kind}")


def run_vector(circ: Circuit, v: np.ndarray) -> np.ndarray:
    out = np.asarray(v, dtype=complex)
    for g in circ.gates:
        out = apply_gate(out, g)
    return out


def unitary(circ: Circuit) -> np.ndarray:
    """Exact dense unitary, capped at 12 qubits."""
    if circ.n_qubits > 12:
        raise ValueError("unitary() supports at most 12 qubits")
    dim = 1 << circ.n_qubits
    u = np.eye(dim, dtype=complex)
    for col in range(dim):
        u[:, col] = run_vector(circ, u[:, col].copy())
    return u


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------

def _is_clifford_angle(angle: float, tol: float = 1e-12) -> bool:
    return abs(angle / (math.pi / 2) - round(angle / (math.pi / 2))) < tol


def count(circ: Circuit) -> GateCounts:
    cnot = 0
    rot = 0
    toff = 0
    depth_track = [0] * max(1, circ.n_qubits)
    depth = 0
    for g in circ.gates:
        if g.kind in ("CX", "CXbar"):
            cnot += 1
        elif g.kind == "SWAP":
            cnot += 3
        if g.kind in _ROTATIONS:
            rot += 1
            if not _is_clifford_angle(g.angle):
                toff += 1
        layer = 1 + max(depth_track[q] for q in g.qubits)
        for q in g.qubits:
            depth_track[q] = layer
        depth = max(depth, layer)
    return GateCounts(cnot=cnot, rotation=rot, depth=depth, toffoli_equivalent=toff)


# ---------------------------------------------------------------------------
# Generic gate rewrites
# ---------------------------------------------------------------------------

def _cry_expansion(c: int, t: int, angle: float, tag: str = "") -> List[Gate]:
    """CRY -> 2 CX + 2 RY."""
    return [
        Gate("CX", (c, t), tag=tag),
        Gate("RY", (t,), -angle / 2.0, tag=tag),
        Gate("CX", (c, t), tag=tag),
        Gate("RY", (t,), angle / 2.0, tag=tag),
    ]


def _ccry_expansion(c1: int, c2: int, t: int, angle: float, tag: str = "") -> List[Gate]:
    """Exact doubly-controlled RY via the Gray-code ladder (4 CX + 4 RY)."""
    a = angle / 4.0
    return [
        Gate("RY", (t,), a, tag=tag),
        Gate("CX", (c1, t), tag=tag),
        Gate("RY", (t,), -a, tag=tag),
        Gate("CX", (c2, t), tag=tag),
        Gate("RY", (t,), a, tag=tag),
        Gate("CX", (c1, t), tag=tag),
        Gate("RY", (t,), -a, tag=tag),
        Gate("CX", (c2, t), tag=tag),
    ]


def _dicke2_template(a: int, b: int, angle: float, tag: str) -> List[Gate]:
    """Fused 3-CX form of the two-qubit Dicke block [CX(a,b), CRY(b,a,th), CX(a,b)].

    Equals the block on the states it receives in Dicke/CSF circuits (both
    qubits 0, both 1, or the excitation on b); differs only on the never-
    populated |10> input, where it acts as the reflected completion.
    """
    th = angle
    return [
        Gate("CX", (b, a), tag=tag),
        Gate("RY", (b,), th / 2.0 - math.pi, tag=tag),
        Gate("H", (b,), tag=tag),
        Gate("CX", (a, b), tag=tag),
        Gate("H", (b,), tag=tag),
        Gate("RY", (b,), math.pi - th / 2.0, tag=tag),
        Gate("CX", (b, a), tag=tag),
    ]


def _dicke3_template(i: int, c: int, l: int, angle: float, tag: str) -> List[Gate]:
    """Fused 5-CX form of [CX(i,l), CCRY((c,l),i,th), CX(i,l)].

    The inner Gray ladder uses three CNOTs; completions on inputs that never
    occur inside the Dicke circuits differ from the plain block by signs.
    """
    d = (angle + 2.0 * math.pi) / 4.0
    al, be, ga = -d, d + math.pi / 2.0, -(d + math.pi / 2.0)
    return [
        Gate("CX", (i, l), tag=tag),
        Gate("RY", (i,), al, tag=tag),
        Gate("CX", (c, i), tag=tag),
        Gate("RY", (i,), be, tag=tag),
        Gate("CX", (l, i), tag=tag),
        Gate("RY", (i,), ga, tag=tag),
        Gate("CX", (c, i), tag=tag),
        Gate("RY", (i,), d, tag=tag),
        Gate("CX", (i, l), tag=tag),
    ]


def _long_cx_ladder(c: int, t: int, tag: str = "") -> List[Gate]:
    """Exact nearest-neighbor expansion of CX(c, t), costing 4d-4 CNOTs (d>=2).

    Two commuting parity ladders: one adds the parity of qubits c..t-1 to t,
    the other adds the parity of c+1..t-1, leaving a net CX(c, t).
    """
    step = 1 if t > c else -1
    path = list(range(c, t, step))  # c .. t-step
    if len(path) == 1:
        return [Gate("CX", (c, t), tag=tag)]
    out: List[Gate] = []
    for start in (0, 1):  # full chain then chain without c
        chain = path[start:]
        for j in range(len(chain) - 1):
            out.append(Gate("CX", (chain[j], chain[j + 1]), tag=tag))
        out.append(Gate("CX", (path[-1], t), tag=tag))
        for j in reversed(range(len(chain) - 1)):
            out.append(Gate("CX", (chain[j], chain[j + 1]), tag=tag))
    return out


def _cancel_adjacent_cx(gates: List[Gate]) -> List[Gate]:
    """Remove directly adjacent identical CX pairs, iterated to a fixpoint."""
    stack: List[Gate] = []
    for g in gates:
        if stack and g.kind == "CX" and stack[-1].kind == "CX" and stack[-1].qubits == g.qubits:
            stack.pop()
        else:
            stack.append(g)
    return stack


def accordion_expansion(pairs: Sequence[Tuple[int, int]], tag: str = "acc") -> List[Gate]:
    """Nearest-neighbor recompilation of a CNOT accordion with cancellations.

    pairs must be ordered outermost first; the telescoping of neighboring
    ladders reproduces the closed-form accordion cost N^2/2 - 1.
    """
    raw: List[Gate] = []
    for c, t in pairs:
        raw.extend(_long_cx_ladder(c, t, tag=tag))
    return _cancel_adjacent_cx(raw)


# ---------------------------------------------------------------------------
# Decomposition pass
# ---------------------------------------------------------------------------

def _adjacent(a: int, b: int, topology, planar: Planar | None) -> bool:
    if topology == "linear":
        return abs(a - b) == 1
    if topology == "planar" and planar is not None:
        return planar.adjacent(a, b)
    return True


def decompose(circ: Circuit, target: object = "all") -> Circuit:
    """Rewrite into {X, H, RY, CX}; legalize tagged stages for linear/planar.

    target is "all", "linear", "planar", or a Planar placement.  For linear
    and planar targets the accordion-tagged input CNOTs are recompiled into
    nearest-neighbor ladders with their telescoping cancellations; for linear
    targets the spin-to-Fock mapping CNOTs get the naive ladder expansion.
    Dicke-block gates (tagged by the synthesis module) keep the compact
    nearest-neighbor-free form whose CNOT counts match the closed formulas.
    """
    planar = target if isinstance(target, Planar) else None
    topo = "planar" if planar is not None else target
    if topo not in ("all", "linear", "planar"):
        raise ValueError(f"unknown connectivity target {target!r}")

    out = Circuit(circ.n_qubits, connectivity=target if planar is None else "planar")
    gates = list(circ.gates)
    i = 0
    acc_group: List[Tuple[int, int]] = []

    def flush_accordion():
        nonlocal acc_group
        if acc_group:
            if topo in ("linear", "planar"):
                out.extend(accordion_expansion(acc_group))
            else:
                for c, t in acc_group:
                    out.add("CX", c, t, tag="acc")
            acc_group = []

    while i < len(gates):
        g = gates[i]
        if g.tag == "acc" and g.kind == "CX":
            acc_group.append((g.qubits[0], g.qubits[1]))
            i += 1
            continue
        flush_accordion()

        # fused Dicke blocks: [CX, CRY, CX] and [CX, CCRY, CX] with matching frames
        if (
            g.tag == "dicke2"
            and g.kind == "CX"
            and i + 2 < len(gates)
            and gates[i + 1].kind == "CRY"
            and gates[i + 2].kind == "CX"
            and gates[i + 2].qubits == g.qubits
        ):
            a, b = g.qubits
            out.extend(_dicke2_template(a, b, gates[i + 1].angle, g.tag))
            i += 3
            continue
        if (
            g.tag == "dicke3"
            and g.kind == "CX"
            and i + 2 < len(gates)
            and gates[i + 1].kind == "CCRY"
            and gates[i + 2].kind == "CX"
            and gates[i + 2].qubits == g.qubits
        ):
            qi, ql = g.qubits
            c1, c2, t = gates[i + 1].qubits
            ctrl = c1 if c2 == ql else c2
            out.extend(_dicke3_template(qi, ctrl, ql, gates[i + 1].angle, g.tag))
            i += 3
            continue

        if g.kind in ("X", "H", "RY"):
            out.extend([g])
        elif g.kind == "CX":
            c, t = g.qubits
            if topo == "linear" and abs(c - t) > 1 and g.tag == "map":
                out.extend(_long_cx_ladder(c, t, tag=g.tag))
            else:
                out.extend([g])
        elif g.kind == "CXbar":
            c, t = g.qubits
            out.add("X", c, tag=g.tag)
            if topo == "linear" and abs(c - t) > 1 and g.tag == "map":
                out.extend(_long_cx_ladder(c, t, tag=g.tag))
            elif topo == "linear" and abs(c - t) == 2 and g.tag == "gempair":
                # bridge through the middle wire, still |0> at this stage
                m = (c + t) // 2
                out.add("CX", c, m, tag=g.tag)
                out.add("CX", m, t, tag=g.tag)
                out.add("CX", c, m, tag=g.tag)
            else:
                out.add("CX", c, t, tag=g.tag)
            out.add("X", c, tag=g.tag)
        elif g.kind == "SWAP":
            a, b = g.qubits
            out.add("CX", a, b, tag=g.tag)
            out.add("CX", b, a, tag=g.tag)
            out.add("CX", a, b, tag=g.tag)
        elif g.kind == "CRY":
            out.extend(_cry_expansion(*g.qubits, g.angle, tag=g.tag))
        elif g.kind == "CCRY":
            out.extend(_ccry_expansion(*g.qubits, g.angle, tag=g.tag))
        else:
            raise ValueError(f"cannot decompose {g.kind}")
        i += 1
    flush_accordion()
    return out


# ---------------------------------------------------------------------------
# Text format: one gate per line, "KIND q0 [q1 [q2]] [angle]"
# ---------------------------------------------------------------------------

def to_text(circ: Circuit) -> str:
    lines = [f"# qubits {circ.n_qubits}"]
    for g in circ.gates:
        parts = [g.kind] + [str(q) for q in g.qubits]
        if g.angle is not None:
            parts.append(f"{g.angle:.17g}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Circuit:
    n_qubits = 0
    gates: List[Gate] = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)
        comment = raw.strip()
        if comment.startswith("# qubits"):
            n_qubits = int(comment.split()[-1])
            continue
        body = line[0].strip()
        if not body:
            continue
        parts = body.split()
        kind = parts[0]
        if kind not in _ARITY:
            raise ValueError(f"line {ln}: unknown gate {kind!r}")
        arity = _ARITY[kind]
        qubits = tuple(int(p) for p in parts[1 : 1 + arity])
        angle = None
        if kind in _HAS_ANGLE:
            angle = float(parts[1 + arity])
        gates.append(Gate(kind, qubits, angle))
        n_qubits = max(n_qubits, 1 + max(qubits))
    c = Circuit(n_qubits)
    c.gates = gates
    return c
