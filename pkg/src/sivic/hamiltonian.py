"""Spin operators and the 8-dimensional ground-state Hamiltonian.

Basis ordering contract (frozen for the whole package): the product space is
orbital ⊗ electron-spin ⊗ nuclear-spin with factor bases {e+, e-}, {up, down},
{Up, Down}, i.e. basis index = 4*orbital + 2*electron + nucleus.  The orbital
angular momentum operator Lz is diagonal with eigenvalues +1 on e+ and -1 on
e-; Lx and Ly vanish in this subspace.

All matrices are in MHz (h = 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import SystemConfig
from .errors import ConfigError

_I2 = np.eye(2, dtype=complex)
_SX = np.array([[0.0, 0.5], [0.5, 0.0]], dtype=complex)
_SY = np.array([[0.0, -0.5j], [0.5j, 0.0]], dtype=complex)
_SZ = np.array([[0.5, 0.0], [0.0, -0.5]], dtype=complex)


def _lift(orb: np.ndarray, elec: np.ndarray, nuc: np.ndarray) -> np.ndarray:
    out = np.kron(orb, np.kron(elec, nuc))
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class OperatorSet:
    """Spin-1/2 operators lifted to the 8-dimensional product space."""

    Sx: np.ndarray
    Sy: np.ndarray
    Sz: np.ndarray
    Ix: np.ndarray
    Iy: np.ndarray
    Iz: np.ndarray
    Lz: np.ndarray

    @property
    def S(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.Sx, self.Sy, self.Sz)

    @property
    def I(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.Ix, self.Iy, self.Iz)


@lru_cache(maxsize=1)
def build_operators() -> OperatorSet:
    """Construct the shared operator set in the fixed basis ordering."""
    return OperatorSet(
        Sx=_lift(_I2, _SX, _I2),
        Sy=_lift(_I2, _SY, _I2),
        Sz=_lift(_I2, _SZ, _I2),
        Ix=_lift(_I2, _I2, _SX),
        Iy=_lift(_I2, _I2, _SY),
        Iz=_lift(_I2, _I2, _SZ),
        Lz=_lift(np.diag([1.0, -1.0]).astype(complex), _I2, _I2),
    )


def strain_transform() -> tuple[np.ndarray, np.ndarray]:
    """Orbital-basis transformation pair (T, T^-1) for the strain term.

    T is used exactly as printed, [[-1, -i], [1, -i]] ⊗ 1_4; it is sqrt(2)
    times a unitary, so the exact matrix inverse (not the adjoint) is
    returned alongside it.  The 2x2 block has determinant 2i.
    """
    t2 = np.array([[-1.0, -1.0j], [1.0, -1.0j]], dtype=complex)
    # inverse of t2, computed analytically from det = 2i
    t2_inv = np.array([[-0.5, 0.5], [0.5j, 0.5j]], dtype=complex)
    eye4 = np.eye(4, dtype=complex)
    return np.kron(t2, eye4), np.kron(t2_inv, eye4)


@dataclass(frozen=True)
class HamiltonianTerms:
    """Individual interaction terms, separately retrievable for tests."""

    electron_zeeman: np.ndarray
    nuclear_zeeman: np.ndarray
    hyperfine: np.ndarray
    spin_orbit: np.ndarray
    strain: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return (
            self.electron_zeeman
            + self.nuclear_zeeman
            + self.hyperfine
            + self.spin_orbit
            + self.strain
        )


@dataclass(frozen=True)
class HamiltonianMatrix:
    """8x8 Hermitian Hamiltonian (MHz) together with its source config."""

    matrix: np.ndarray
    config: SystemConfig
    terms: HamiltonianTerms


def hamiltonian_terms(config: SystemConfig) -> HamiltonianTerms:
    """Assemble the five interaction terms for the given scenario.

    Electron Zeeman includes the quenched orbital contribution
    gamma_L * q * Lz * Bz; the nuclear Zeeman is -gamma_n (B0 . I) with the
    signed gamma_n applied exactly once.
    """
    ops = build_operators()
    c = config.constants
    b = config.b_vector
    if not np.all(np.isfinite(b)):
        raise ConfigError("field vector must be finite")

    h_e = c.gamma_e * (b[0] * ops.Sx + b[1] * ops.Sy + b[2] * ops.Sz)
    h_e = h_e + c.gamma_L * c.q * b[2] * ops.Lz
    h_n = -c.gamma_n * (b[0] * ops.Ix + b[1] * ops.Iy + b[2] * ops.Iz)
    h_hf = c.A_par * (ops.Sz @ ops.Iz) + c.A_perp * (ops.Sx @ ops.Ix + ops.Sy @ ops.Iy)
    h_so = -c.lambda_SO * (ops.Lz @ ops.Sz)

    s = config.strain
    if s.is_strained:
        t, t_inv = strain_transform()
        block = np.kron(np.array([[s.alpha, s.beta], [s.beta, -s.alpha]], dtype=complex), np.eye(4))
        h_str = t @ block @ t_inv
    else:
        h_str = np.zeros((8, 8), dtype=complex)

    return HamiltonianTerms(
        electron_zeeman=h_e,
        nuclear_zeeman=h_n,
        hyperfine=h_hf,
        spin_orbit=h_so,
        strain=h_str,
    )


def build_hamiltonian(config: SystemConfig) -> HamiltonianMatrix:
    """Build the total Hamiltonian H = H_e + H_n + H_hf + H_SO + H_str."""
    terms = hamiltonian_terms(config)
    matrix = terms.total
    norm = np.linalg.norm(matrix)
    if norm > 0 and np.linalg.norm(matrix - matrix.conj().T) > 1e-12 * norm:
        raise ConfigError("assembled Hamiltonian is not Hermitian")
    matrix.setflags(write=False)
    return HamiltonianMatrix(matrix=matrix, config=config, terms=terms)
