"""Reference-state factory for diatomic fixtures.

Builds the spin-coupled reference states of the valence space in the common
delocalized (fixture MO) basis: each CSF is embedded with its bespoke local
orbital layout and then rotated with paired Givens circuits, one rotation per
bonding/antibonding orbital pair.

Orbital order of the N2 fixtures: (sigma_g, pi_ux, pi_uy, pi_gx, pi_gy,
sigma_u); localization pairs (0,5), (1,3), (2,4).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from .circuits import Circuit, run_vector
from .csf import CsfSpec, csf_state
from .fcidump import Fixture
from .synth import basis_rotation_circuit

# rotating a state written on (g, u)-labeled wires by -pi/4 per pair sends the
# local-orbital labels onto the delocalized modes with at most a global sign
LOCALIZE_ANGLE = -np.pi / 4.0


@dataclass
class ReferenceState:
    label: str
    spec: CsfSpec
    vector: np.ndarray


def rotate_pairs(v: np.ndarray, pairs: Sequence[Sequence[int]], n_spatial: int,
                 angle: float = LOCALIZE_ANGLE) -> np.ndarray:
    circ = basis_rotation_circuit([tuple(p) for p in pairs], angle, n_spatial)
    return run_vector(circ, v)


def n2_reference_specs() -> Dict[str, dict]:
    """CSF layouts of the four N2 valence reference states."""
    return {
        "phi0": {"spec": CsfSpec([0, 1, 2], [], 1, 6), "pairs": []},
        "phi2x": {"spec": CsfSpec([0, 2], [1, 3], 1, 6), "pairs": [(1, 3)]},
        "phi2y": {"spec": CsfSpec([0, 1], [2, 4], 1, 6), "pairs": [(2, 4)]},
        "phi4": {"spec": CsfSpec([0], [1, 2, 3, 4], 1, 6), "pairs": [(1, 3), (2, 4)]},
        "phi6": {"spec": CsfSpec([], [0, 1, 2, 5, 3, 4], 1, 6), "pairs": [(0, 5), (1, 3), (2, 4)]},
    }


def build_reference(name: str, n_spatial: int = 6) -> np.ndarray:
    info = n2_reference_specs()[name]
    v = csf_state(info["spec"], n_spatial)
    if info["pairs"]:
        v = rotate_pairs(v, info["pairs"], n_spatial)
    return v


def n2_reference_states(include_phi2_parts: bool = False) -> List[ReferenceState]:
    """The four paper reference states: RHF, (phi2x+phi2y)/norm, phi4, phi6."""
    specs = n2_reference_specs()
    out = [ReferenceState("phi0", specs["phi0"]["spec"], build_reference("phi0"))]
    v2x = build_reference("phi2x")
    v2y = build_reference("phi2y")
    if include_phi2_parts:
        out.append(ReferenceState("phi2x", specs["phi2x"]["spec"], v2x))
        out.append(ReferenceState("phi2y", specs["phi2y"]["spec"], v2y))
    else:
        v2 = v2x + v2y
        v2 /= np.linalg.norm(v2)
        out.append(ReferenceState("phi2", specs["phi2x"]["spec"], v2))
    out.append(ReferenceState("phi4", specs["phi4"]["spec"], build_reference("phi4")))
    out.append(ReferenceState("phi6", specs["phi6"]["spec"], build_reference("phi6")))
    return out


def rhf_determinant(n_spatial: int, n_occ: int) -> np.ndarray:
    return csf_state(CsfSpec(list(range(n_occ)), [], 1, n_spatial), n_spatial)
