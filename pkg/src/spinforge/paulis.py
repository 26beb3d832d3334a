"""Bit-encoded Slater determinants, Pauli-string algebra and the Jordan-Wigner map.

Conventions used throughout the package:

* Qubit 0 is the least-significant bit of a determinant integer.  A ket written
  ``|q0 q1 q2 ...>`` lists qubit 0 leftmost.
* Spin-orbitals are interleaved: qubit ``2i`` is the alpha spin-orbital of
  spatial orbital ``i``, qubit ``2i+1`` the beta one.
* Jordan-Wigner Z strings run over qubits with index *lower* than the mode the
  ladder operator acts on.

A Pauli string is stored as a pair of masks ``(x, z)`` plus a phase.  The
phase-free, Hermitian base operator associated with the masks is

    P(x, z) = i^{popcount(x & z)} X^x Z^z

which equals the tensor product of X/Y/Z/I factors (Y on qubits where both
masks are set).  ``PauliSum`` keeps a dict from ``(x, z)`` to a complex
coefficient in this Hermitian basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Tuple

import numpy as np

SIMPLIFY_TOL = 1e-14

_I_POW = (1.0, 1.0j, -1.0, -1.0j)


def popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True)
class Determinant:
    """Occupation-number basis state as a bit-encoded integer."""

    bits: int

    def occ(self, q: int) -> int:
        return (self.bits >> q) & 1

    @property
    def n_electrons(self) -> int:
        return popcount(self.bits)

    @staticmethod
    def from_occupied(qubits: Iterable[int]) -> "Determinant":
        bits = 0
        for q in qubits:
            bits |= 1 << q
        return Determinant(bits)

    def __repr__(self) -> str:
        return f"Determinant({self.bits:#b})"


@dataclass(frozen=True)
class PauliString:
    """Single Pauli string ``phase * i^{|x&z|} X^x Z^z`` with phase in {1,i,-1,-i}.

    ``phase_pow`` holds the exponent k of i^k, so the full operator is
    ``i^{phase_pow} * P(x, z)`` with P the Hermitian base string.
    """

    x: int
    z: int
    phase_pow: int = 0

    @property
    def phase(self) -> complex:
        return _I_POW[self.phase_pow % 4]

    @property
    def weight(self) -> int:
        return popcount(self.x | self.z)

    def __mul__(self, other: "PauliString") -> "PauliString":
        if not isinstance(other, PauliString):
            return NotImplemented
        # (i^a P1)(i^b P2): base strings P = i^{|x&z|} X^x Z^z.
        # X^x1 Z^z1 X^x2 Z^z2 = (-1)^{|z1&x2|} X^{x1^x2} Z^{z1^z2}
        x = self.x ^ other.x
        z = self.z ^ other.z
        k = (
            self.phase_pow
            + other.phase_pow
            + popcount(self.x & self.z)
            + popcount(other.x & other.z)
            + 2 * popcount(self.z & other.x)
            - popcount(x & z)
        )
        return PauliString(x, z, k % 4)

    def hermitian_base(self) -> Tuple[Tuple[int, int], complex]:
        """Return ((x, z), c) with  self == c * P(x, z)."""
        return (self.x, self.z), _I_POW[self.phase_pow % 4]

    @staticmethod
    def identity() -> "PauliString":
        return PauliString(0, 0, 0)

    def label(self, n_qubits: int) -> str:
        chars = []
        for q in range(n_qubits):
            xb, zb = (self.x >> q) & 1, (self.z >> q) & 1
            chars.append("IXZY"[xb + 2 * zb] if xb + 2 * zb != 3 else "Y")
        return "".join(chars)


def _string_dense(x: int, z: int, n_qubits: int) -> np.ndarray:
    """Dense matrix of the Hermitian base string P(x, z) on n_qubits."""
    dim = 1 << n_qubits
    idx = np.arange(dim, dtype=np.uint64)
    col = idx ^ np.uint64(x)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(z)) & 1)
    m = np.zeros((dim, dim), dtype=complex)
    m[col, idx] = (1j ** (popcount(x & z) % 4)) * signs
    return m


class PauliSum:
    """Weighted sum of Pauli strings, keyed on the Hermitian base strings."""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Tuple[int, int], complex] | None = None):
        self.terms: Dict[Tuple[int, int], complex] = dict(terms) if terms else {}

    # -- construction helpers -------------------------------------------------
    @staticmethod
    def identity(coeff: complex = 1.0) -> "PauliSum":
        return PauliSum({(0, 0): coeff})

    @staticmethod
    def zero() -> "PauliSum":
        return PauliSum({})

    @staticmethod
    def from_string(s: PauliString, coeff: complex = 1.0) -> "PauliSum":
        key, c = s.hermitian_base()
        return PauliSum({key: coeff * c})

    def copy(self) -> "PauliSum":
        return PauliSum(self.terms)

    # -- algebra ---------------------------------------------------------------
    def __add__(self, other: "PauliSum") -> "PauliSum":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0.0) + v
        return PauliSum(out).simplify()

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (other * -1.0)

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            out: Dict[Tuple[int, int], complex] = {}
            for (x1, z1), c1 in self.terms.items():
                s1 = PauliString(x1, z1)
                for (x2, z2), c2 in other.terms.items():
                    prod = s1 * PauliString(x2, z2)
                    key, ph = prod.hermitian_base()
                    out[key] = out.get(key, 0.0) + c1 * c2 * ph
            return PauliSum(out).simplify()
        return PauliSum({k: v * other for k, v in self.terms.items()})

    __rmul__ = __mul__

    def dagger(self) -> "PauliSum":
        return PauliSum({k: np.conj(v) for k, v in self.terms.items()})

    def commutator(self, other: "PauliSum") -> "PauliSum":
        return self * other - other * self

    def simplify(self, tol: float = SIMPLIFY_TOL) -> "PauliSum":
        self.terms = {k: v for k, v in self.terms.items() if abs(v) > tol}
        return self

    # -- queries ----------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Tuple[int, int], complex]]:
        return iter(self.terms.items())

    def n_qubits(self) -> int:
        m = 0
        for x, z in self.terms:
            m = max(m, (x | z).bit_length())
        return m

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(v.imag) < tol for v in self.terms.values())

    def norm(self) -> float:
        return float(sum(abs(v) for v in self.terms.values()))

    def dense(self, n_qubits: int) -> np.ndarray:
        dim = 1 << n_qubits
        out = np.zeros((dim, dim), dtype=complex)
        for (x, z), c in self.terms.items():
            out += c * _string_dense(x, z, n_qubits)
        return out

    def sorted_terms(self) -> list:
        """Terms in the canonical (weight, z, x) order used for Trotter products."""
        return sorted(self.terms.items(), key=lambda kv: (popcount(kv[0][0] | kv[0][1]), kv[0][1], kv[0][0]))

    def __repr__(self) -> str:
        n = max(1, self.n_qubits())
        bits = ", ".join(
            f"{PauliString(x, z).label(n)}: {c:.6g}" for (x, z), c in list(self.terms.items())[:8]
        )
        more = "" if len(self.terms) <= 8 else f", ... ({len(self.terms)} terms)"
        return f"PauliSum({{{bits}{more}}})"


# ---------------------------------------------------------------------------
# Pauli-sum action on dense amplitude vectors
# ---------------------------------------------------------------------------

def pauli_matvec(op: PauliSum, v: np.ndarray) -> np.ndarray:
    """y = op @ v without materializing the dense matrix."""
    dim = v.shape[0]
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValueError("vector length is not a power of two")
    if op.n_qubits() > n:
        raise ValueError("operator acts on more qubits than the vector has")
    idx = np.arange(dim, dtype=np.uint64)
    y = np.zeros(dim, dtype=complex)
    for (x, z), c in op.terms.items():
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(z)) & 1).astype(np.float64)
        t = (c * (1j ** (popcount(x & z) % 4))) * signs * v
        if x:
            y[idx ^ np.uint64(x)] += t
        else:
            y += t
    return y


def expectation(op: PauliSum, v: np.ndarray) -> complex:
    return complex(np.vdot(v, pauli_matvec(op, v)))


# ---------------------------------------------------------------------------
# Fermionic operators and the Jordan-Wigner transform
# ---------------------------------------------------------------------------

class FermionOperator:
    """Polynomial in fermionic ladder operators.

    Terms are tuples of ``(mode, dag)`` pairs applied left to right as written,
    e.g. ``((p, 1), (q, 0))`` is a_p^dagger a_q.
    """

    __slots__ = ("terms",)

    def __init__(self, term: Tuple[Tuple[int, int], ...] | None = None, coeff: complex = 1.0):
        self.terms: Dict[Tuple[Tuple[int, int], ...], complex] = {}
        if term is not None:
            self.terms[tuple(term)] = coeff

    @staticmethod
    def identity(coeff: complex = 1.0) -> "FermionOperator":
        return FermionOperator((), coeff)

    @staticmethod
    def zero() -> "FermionOperator":
        return FermionOperator()

    def __add__(self, other: "FermionOperator") -> "FermionOperator":
        out = FermionOperator()
        out.terms = dict(self.terms)
        for t, c in other.terms.items():
            out.terms[t] = out.terms.get(t, 0.0) + c
        return out

    def __sub__(self, other: "FermionOperator") -> "FermionOperator":
        return self + other * (-1.0)

    def __mul__(self, other):
        if isinstance(other, FermionOperator):
            out = FermionOperator()
            for t1, c1 in self.terms.items():
                for t2, c2 in other.terms.items():
                    key = t1 + t2
                    out.terms[key] = out.terms.get(key, 0.0) + c1 * c2
            return out
        out = FermionOperator()
        out.terms = {t: c * other for t, c in self.terms.items()}
        return out

    __rmul__ = __mul__

    def dagger(self) -> "FermionOperator":
        out = FermionOperator()
        for t, c in self.terms.items():
            out.terms[tuple((m, 1 - d) for m, d in reversed(t))] = np.conj(c)
        return out

    @staticmethod
    def creation(p: int) -> "FermionOperator":
        return FermionOperator(((p, 1),))

    @staticmethod
    def annihilation(p: int) -> "FermionOperator":
        return FermionOperator(((p, 0),))

    @staticmethod
    def number(p: int) -> "FermionOperator":
        return FermionOperator(((p, 1), (p, 0)))


def _jw_ladder(p: int, dag: bool) -> PauliSum:
    """JW image of a_p^dagger (dag) or a_p: Z_{<p} (X_p -/+ i Y_p)/2."""
    zstring = (1 << p) - 1
    x = 1 << p
    # X_p Z_{<p} term
    tx = PauliSum({(x, zstring): 0.5})
    # Y_p Z_{<p} term: base key has z bit set on p as well
    sign = -0.5j if dag else 0.5j
    ty = PauliSum({(x, zstring | x): sign})
    return tx + ty


def jordan_wigner(op: FermionOperator, n_modes: int | None = None) -> PauliSum:
    """Exact qubit image of a fermionic operator polynomial.

    Raises ValueError when a mode index is >= n_modes (if given).
    """
    out = PauliSum.zero()
    for term, coeff in op.terms.items():
        acc = PauliSum.identity(coeff)
        for mode, dag in term:
            if n_modes is not None and mode >= n_modes:
                raise ValueError(f"mode index {mode} out of range (n_modes={n_modes})")
            acc = acc * _jw_ladder(mode, bool(dag))
        out = out + acc
    return out.simplify()


def number_operator(n_qubits: int) -> PauliSum:
    op = FermionOperator.zero()
    for q in range(n_qubits):
        op = op + FermionOperator.number(q)
    return jordan_wigner(op)


def spin_operators(n_spatial: int) -> Tuple[PauliSum, PauliSum, PauliSum]:
    """Qubit images (S^2, S_z, N) for an interleaved register of n_spatial orbitals.

    S_z = (1/2) sum_i (n_{i,alpha} - n_{i,beta}),
    S+  = sum_i a^dag_{i,alpha} a_{i,beta},
    S^2 = S- S+ + S_z (S_z + 1).
    """
    if n_spatial < 1:
        raise ValueError("n_spatial must be >= 1")
    sz_f = FermionOperator.zero()
    sp_f = FermionOperator.zero()
    for i in range(n_spatial):
        a, b = 2 * i, 2 * i + 1
        sz_f = sz_f + FermionOperator.number(a) * 0.5 - FermionOperator.number(b) * 0.5
        sp_f = sp_f + FermionOperator(((a, 1), (b, 0)))
    s_z = jordan_wigner(sz_f)
    s_plus = jordan_wigner(sp_f)
    s_minus = s_plus.dagger()
    s2 = s_minus * s_plus + s_z * s_z + s_z
    n_op = number_operator(2 * n_spatial)
    return s2.simplify(), s_z.simplify(), n_op
