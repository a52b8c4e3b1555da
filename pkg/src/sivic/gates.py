"""Standard single-qubit gate targets in the nuclear frame basis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SynthesisError

_SQ2 = 1.0 / np.sqrt(2.0)

_MATRICES: dict[str, np.ndarray] = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": _SQ2 * np.array([[1, 1], [1, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "S-1": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    "T-1": np.array([[1, 0], [0, np.exp(-1j * np.pi / 4)]], dtype=complex),
}

GATE_NAMES = tuple(_MATRICES)

_ALIASES = {
    "sdg": "S-1", "sinv": "S-1", "s^-1": "S-1", "s-1": "S-1",
    "tdg": "T-1", "tinv": "T-1", "t^-1": "T-1", "t-1": "T-1",
}

#: nuclear Up state and its +X superposition, the two optimization anchors
KET_UP = np.array([1.0, 0.0], dtype=complex)
KET_PLUS_X = np.array([_SQ2, _SQ2], dtype=complex)
KET_PLUS_Y = np.array([_SQ2, 1j * _SQ2], dtype=complex)


def canonical_gate_name(name: str) -> str:
    key = name.strip()
    if key in _MATRICES:
        return key
    low = key.lower()
    if low in _ALIASES:
        return _ALIASES[low]
    if low.upper() in _MATRICES:
        return low.upper()
    raise SynthesisError(f"unknown gate {name!r}; known gates: {', '.join(GATE_NAMES)}")


@dataclass(frozen=True)
class GateTarget:
    """A 2x2 unitary plus the two (initial, target) state pairs that pin it."""

    name: str
    matrix: np.ndarray
    state_pairs: tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]

    @classmethod
    def from_matrix(cls, name: str, matrix: np.ndarray) -> "GateTarget":
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (2, 2):
            raise SynthesisError("gate matrix must be 2x2")
        if np.linalg.norm(matrix @ matrix.conj().T - np.eye(2)) > 1e-12:
            raise SynthesisError("gate matrix must be unitary")
        pairs = (
            (KET_UP, matrix @ KET_UP),
            (KET_PLUS_X, matrix @ KET_PLUS_X),
        )
        return cls(name=name, matrix=matrix, state_pairs=pairs)


def standard_gate(name: str) -> GateTarget:
    """Gate target by name (X, Y, Z, H, S, S-1, T, T-1; aliases accepted)."""
    canon = canonical_gate_name(name)
    return GateTarget.from_matrix(canon, _MATRICES[canon])
