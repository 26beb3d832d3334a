"""Clebsch-Gordan oracle for spin-coupled states.

Builds the spin eigenfunctions used as reference states as explicit
determinant expansions, independently of any circuit construction.  Site
patterns are bit-encoded integers with 1 = alpha (site i = bit i).

Two coupling patterns are provided:

* pattern 1: two subsystems of n = N/2 sites, each ferromagnetically coupled
  to maximal local spin s = n/2, combined into a global singlet via
  (1/sqrt(n+1)) sum_m (-1)^{s-m} |s, m> |s, -m>.
* pattern 2: a tensor product of two-site singlets (Bell pairs).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, sqrt
from typing import Dict, List, Sequence

import numpy as np

from .paulis import PauliSum, expectation, spin_operators


@dataclass
class SpinState:
    """Real-amplitude state of n_sites spin-1/2 sites, keyed on alpha-patterns."""

    amplitudes: Dict[int, float]
    n_sites: int
    total_spin: float
    spin_projection: float

    def norm(self) -> float:
        return sqrt(sum(a * a for a in self.amplitudes.values()))

    def support_size(self) -> int:
        return len(self.amplitudes)

    def inner(self, other: "SpinState") -> float:
        keys = self.amplitudes.keys() & other.amplitudes.keys()
        return sum(self.amplitudes[k] * other.amplitudes[k] for k in keys)


@dataclass
class CsfSpec:
    """Orbital layout of a configuration state function.

    closed_shell / open_shell hold spatial-orbital indices; everything else is
    virtual.  The order of open_shell defines the site order of the attached
    spin state.  coupling 1 is the two-subsystem maximal-spin singlet,
    coupling 2 the Bell-pair product.
    """

    closed_shell: List[int]
    open_shell: List[int]
    coupling: int = 1
    n_spatial: int | None = None

    def __post_init__(self):
        overlap = set(self.closed_shell) & set(self.open_shell)
        if overlap:
            raise ValueError(f"orbital indices shared between closed and open shells: {overlap}")

    def to_json(self) -> str:
        return json.dumps(
            {
                "closed": list(self.closed_shell),
                "open": list(self.open_shell),
                "coupling": self.coupling,
                "n_spatial": self.n_spatial,
            }
        )

    @staticmethod
    def from_json(text: str) -> "CsfSpec":
        d = json.loads(text)
        return CsfSpec(d["closed"], d["open"], d.get("coupling", 1), d.get("n_spatial"))


def _dicke_patterns(n: int, k: int) -> List[int]:
    """All n-bit patterns of Hamming weight k (bit i = site i)."""
    out = []
    for ones in combinations(range(n), k):
        p = 0
        for b in ones:
            p |= 1 << b
        out.append(p)
    return out


def singlet_coupled(n_open: int) -> SpinState:
    """Pattern-1 spin eigenfunction: two maximal-spin halves coupled to S=0.

    The state is (1/sqrt(n+1)) sum_{m} (-1)^{s-m} |s,m>|s,-m> with n = N/2 and
    s = n/2, each |s,m> the symmetric (Dicke-weight) state of its half.  The
    sign convention makes the coefficient of alpha^n beta^n positive.
    """
    if n_open < 2 or n_open % 2:
        raise ValueError("pattern-1 coupling needs an even number of sites >= 2")
    n = n_open // 2
    norm = sqrt(n + 1)
    amps: Dict[int, float] = {}
    # k = number of alpha sites in the left half = s + m
    for k in range(n + 1):
        sign = (-1.0) ** (n - k)  # (-1)^{s-m} with s-m = n-k
        c = sign / (norm * sqrt(comb(n, k)) * sqrt(comb(n, n - k)))
        for left in _dicke_patterns(n, k):
            for right in _dicke_patterns(n, n - k):
                amps[left | (right << n)] = c
    return SpinState(amps, n_open, 0.0, 0.0)


def bell_product(n_open: int) -> SpinState:
    """Pattern-2 spin eigenfunction: (|ab> - |ba>)/sqrt(2) on each site pair."""
    if n_open < 2 or n_open % 2:
        raise ValueError("pattern-2 coupling needs an even number of sites >= 2")
    amps = {1: 1 / sqrt(2), 2: -1 / sqrt(2)}  # bit0 = alpha on first site
    for _ in range(n_open // 2 - 1):
        new: Dict[int, float] = {}
        for p, a in amps.items():
            new[(p << 2) | 1] = a / sqrt(2)
            new[(p << 2) | 2] = -a / sqrt(2)
        amps = new
    # pairs were appended at the low end in reverse; re-key so pair j occupies bits (2j, 2j+1)
    # The construction above already yields all 2^{N/2} patterns with one
    # electron per pair; ordering within the register is symmetric, so no
    # further relabeling is needed.
    return SpinState(amps, n_open, 0.0, 0.0)


def embed_fock(spec: CsfSpec, spin: SpinState | None, n_spatial: int) -> np.ndarray:
    """Map a CSF onto the full 2^(2 n_spatial) interleaved-qubit register.

    Closed-shell orbitals become qubit pairs 11, open-shell sites map alpha ->
    10 and beta -> 01, virtuals stay 00.
    """
    for i in spec.closed_shell + spec.open_shell:
        if i >= n_spatial:
            raise ValueError(f"orbital index {i} exceeds n_spatial={n_spatial}")
    if spin is not None and spin.n_sites != len(spec.open_shell):
        raise ValueError("spin state size does not match the open shell")
    dim = 1 << (2 * n_spatial)
    v = np.zeros(dim, dtype=complex)
    closed_bits = 0
    for i in spec.closed_shell:
        closed_bits |= 0b11 << (2 * i)
    if spin is None or not spec.open_shell:
        v[closed_bits] = 1.0
        return v
    for pattern, amp in spin.amplitudes.items():
        bits = closed_bits
        for site, orb in enumerate(spec.open_shell):
            if (pattern >> site) & 1:  # alpha
                bits |= 1 << (2 * orb)
            else:  # beta
                bits |= 1 << (2 * orb + 1)
        v[bits] = amp
    v /= np.linalg.norm(v)
    return v


def open_shell_state(spec: CsfSpec) -> SpinState | None:
    if not spec.open_shell:
        return None
    if spec.coupling == 1:
        return singlet_coupled(len(spec.open_shell))
    if spec.coupling == 2:
        return bell_product(len(spec.open_shell))
    raise ValueError(f"unknown coupling pattern {spec.coupling}")


def csf_state(spec: CsfSpec, n_spatial: int | None = None) -> np.ndarray:
    """Embedded statevector for a CsfSpec (closed form, no circuits)."""
    m = n_spatial if n_spatial is not None else spec.n_spatial
    if m is None:
        raise ValueError("n_spatial not given")
    return embed_fock(spec, open_shell_state(spec), m)


def proxy_overlap(n_open: int) -> float:
    """Squared overlap 4/(N+2) of the two-determinant proxy with the pattern-1 state.

    Also verified against the explicit inner product: the proxy keeps only the
    alpha^n beta^n and beta^n alpha^n determinants with relative sign matched
    to their Clebsch-Gordan coefficients.
    """
    if n_open < 2 or n_open % 2:
        raise ValueError("even N >= 2 required")
    n = n_open // 2
    state = singlet_coupled(n_open)
    p1 = (1 << n) - 1          # alpha^n beta^n
    p2 = p1 << n               # beta^n alpha^n
    a1, a2 = state.amplitudes[p1], state.amplitudes[p2]
    proxy = {p1: a1 / sqrt(a1 * a1 + a2 * a2), p2: a2 / sqrt(a1 * a1 + a2 * a2)}
    overlap = sum(proxy[p] * state.amplitudes[p] for p in (p1, p2))
    analytic = 4.0 / (n_open + 2)
    assert abs(overlap**2 - analytic) < 1e-12
    return analytic


def spin_expectations(v: np.ndarray, n_spatial: int) -> Dict[str, float]:
    """<S^2>, <S_z>, <N> of an embedded state (diagnostic helper)."""
    s2, sz, nop = spin_operators(n_spatial)
    return {
        "S2": float(np.real(expectation(s2, v))),
        "Sz": float(np.real(expectation(sz, v))),
        "N": float(np.real(expectation(nop, v))),
    }
