"""Time evolution and the reduced two-level picture of the nuclear spin.

Gate sequences are built from instantaneous electron pi-rotations separated
by free-precession delays: pi, tau1, pi, tau2, pi, tau3, pi, tau4.  The
electron starts and ends in the lower level of the chosen transition, so the
nuclear spin alternately precesses about the secondary axis (B_beta, during
tau1 and tau3) and the primary axis (B_alpha, during tau2 and tau4).

Two pictures are implemented:

* an exact 8-dimensional evolution under the full Hamiltonian
  (``SequenceOracle`` / ``evolve_full``), which serves as the verification
  oracle, and
* the reduced nuclear two-level model (``two_level_propagator``), a product
  of four axis rotations with angles 2*pi*f*tau.

With the signed nuclear gyromagnetic ratio the effective nuclear Hamiltonian
is +|gamma_n| B_net . I, so the sublevel oriented along +B_net is the upper
one and the Bloch vector precesses right-handedly about +B_net.  Frequencies
come from exact doublet splittings; in phase units, MHz * ns carries a
factor 1e-3 (cycles = f_MHz * t_ns * 1e-3).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig
from .errors import AmbiguousPairingError, DegenerateAxisError
from .hamiltonian import HamiltonianMatrix, build_hamiltonian, build_operators
from .spectrum import (
    Doublet,
    QuantizationGeometry,
    Spectrum,
    TransitionPair,
    diagonalize,
    nuclear_quantization_fields,
    select_transition,
)

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

#: phase units: cycles = f[MHz] * t[ns] * CYCLES_PER_MHZ_NS
CYCLES_PER_MHZ_NS = 1e-3


def su2_rotation(axis: np.ndarray, angle: float) -> np.ndarray:
    """SU(2) rotation exp(-i*angle/2 * n.sigma) about the unit axis n."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    ns = n[0] * _SIGMA[0] + n[1] * _SIGMA[1] + n[2] * _SIGMA[2]
    return np.cos(angle / 2) * np.eye(2, dtype=complex) - 1j * np.sin(angle / 2) * ns


def rotation_matrix(axis: np.ndarray, angle: float) -> np.ndarray:
    """SO(3) rotation about the unit axis n by ``angle`` (Rodrigues form)."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    k = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    return np.eye(3) + np.sin(angle) * k + (1 - np.cos(angle)) * (k @ k)


@dataclass(frozen=True)
class NuclearFrame:
    """Right-handed orthonormal frame: z along B_alpha, B_beta in the x-z plane
    with non-negative x component."""

    x_axis: np.ndarray
    y_axis: np.ndarray
    z_axis: np.ndarray

    @classmethod
    def from_fields(cls, b_alpha: np.ndarray, b_beta: np.ndarray) -> "NuclearFrame":
        b_alpha = np.asarray(b_alpha, dtype=float)
        b_beta = np.asarray(b_beta, dtype=float)
        na = np.linalg.norm(b_alpha)
        nb = np.linalg.norm(b_beta)
        if na == 0.0 or nb == 0.0:
            raise DegenerateAxisError("quantization fields must be nonzero")
        z = b_alpha / na
        perp = b_beta - (b_beta @ z) * z
        np_norm = np.linalg.norm(perp)
        if np_norm < 1e-12 * nb:
            raise DegenerateAxisError(
                "B_alpha and B_beta are collinear; the rotation plane is undefined"
            )
        x = perp / np_norm
        y = np.cross(z, x)
        return cls(x_axis=x, y_axis=y, z_axis=z)

    @property
    def matrix(self) -> np.ndarray:
        """Rows are the frame axes; ``matrix @ v`` maps lab to frame coords."""
        return np.vstack([self.x_axis, self.y_axis, self.z_axis])

    def to_frame(self, v: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)

    def from_frame(self, v: np.ndarray) -> np.ndarray:
        return self.matrix.T @ np.asarray(v, dtype=float)


@dataclass(frozen=True)
class SequenceModel:
    """Reduced description of a gate set-point: frame, axes and frequencies.

    ``f_alpha`` drives rotations about the frame z axis, ``f_beta`` about the
    secondary axis at ``delta_theta_deg`` from z in the x-z plane.  Synthetic
    models (for algebraic tests) may leave the provenance fields as None.
    """

    frame: NuclearFrame
    f_alpha: float                 # MHz
    f_beta: float                  # MHz
    delta_theta_deg: float
    transition: TransitionPair | None = None
    config: SystemConfig | None = None
    geometry: QuantizationGeometry | None = None

    def __post_init__(self) -> None:
        if self.f_alpha <= 0 or self.f_beta <= 0:
            raise DegenerateAxisError("precession frequencies must be positive")

    @property
    def alpha_axis(self) -> np.ndarray:
        return np.array([0.0, 0.0, 1.0])

    @property
    def beta_axis(self) -> np.ndarray:
        t = np.radians(self.delta_theta_deg)
        return np.array([np.sin(t), 0.0, np.cos(t)])

    @classmethod
    def from_config(
        cls,
        config: SystemConfig,
        case: str | None = None,
        indices: tuple[int, int] | None = None,
    ) -> "SequenceModel":
        if case is None:
            case = "strained" if config.strain.is_strained else "unstrained"
        spec = diagonalize(build_hamiltonian(config))
        pair = select_transition(spec, case=case, indices=indices)
        geometry = nuclear_quantization_fields(config, spec, pair)
        frame = NuclearFrame.from_fields(geometry.B_alpha, geometry.B_beta)
        return cls(
            frame=frame,
            f_alpha=geometry.f_alpha,
            f_beta=geometry.f_beta,
            delta_theta_deg=geometry.delta_theta,
            transition=pair,
            config=config,
            geometry=geometry,
        )


def two_level_propagator(model: SequenceModel, taus) -> np.ndarray:
    """Net nuclear propagator of the four-delay sequence, in frame coordinates.

    U = R_alpha(2 pi f_a tau4) R_beta(2 pi f_b tau3)
        R_alpha(2 pi f_a tau2) R_beta(2 pi f_b tau1)
    """
    t1, t2, t3, t4 = (float(t) for t in taus)
    if min(t1, t2, t3, t4) < 0:
        raise ValueError("delays must be non-negative")
    two_pi = 2 * np.pi * CYCLES_PER_MHZ_NS
    u = su2_rotation(model.beta_axis, two_pi * model.f_beta * t1)
    u = su2_rotation(model.alpha_axis, two_pi * model.f_alpha * t2) @ u
    u = su2_rotation(model.beta_axis, two_pi * model.f_beta * t3) @ u
    u = su2_rotation(model.alpha_axis, two_pi * model.f_alpha * t4) @ u
    return u


def propagator(hamiltonian: HamiltonianMatrix | np.ndarray, t_ns: float) -> np.ndarray:
    """Exact evolution operator exp(-i 2 pi H t) via spectral decomposition."""
    if t_ns < 0:
        raise ValueError("time must be non-negative")
    if isinstance(hamiltonian, HamiltonianMatrix):
        matrix = hamiltonian.matrix
    else:
        matrix = np.asarray(hamiltonian, dtype=complex)
    w, v = np.linalg.eigh(matrix)
    phases = np.exp(-2j * np.pi * w * t_ns * CYCLES_PER_MHZ_NS)
    return (v * phases) @ v.conj().T


def nuclear_bloch(state: np.ndarray, frame: NuclearFrame | None = None) -> np.ndarray:
    """Bloch vector 2<I> of the reduced nuclear density matrix.

    Returns lab coordinates by default, or frame coordinates when ``frame``
    is given.
    """
    psi = np.asarray(state, dtype=complex).reshape(4, 2)
    rho = psi.T @ psi.conj()  # nuclear reduced density, rho[a,b] = sum_e psi[e,a] psi[e,b]*
    r = np.array(
        [2 * rho[0, 1].real, -2 * rho[0, 1].imag, (rho[0, 0] - rho[1, 1]).real]
    )
    if frame is not None:
        r = frame.to_frame(r)
    return r


def _dominant_vector(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    vec = v[:, -1]
    idx = int(np.argmax(np.abs(vec)))
    if vec[idx] != 0:
        vec = vec * (np.abs(vec[idx]) / vec[idx])
    return vec


def pi_rotation(spectrum: Spectrum, pair: TransitionPair) -> np.ndarray:
    """Idealized instantaneous electron pi-rotation for the transition.

    Swaps the two electron levels while leaving the nuclear state untouched:
    the lower-doublet subspace is mapped onto the upper-doublet subspace by
    the unitarized nuclear-overlap matrix (matching each nuclear sublevel to
    its best-aligned partner), and the remaining four states are unaffected.
    Applying the operator twice gives the identity on the pair subspace.
    """
    v = spectrum.eigenvectors
    vl = v[:, list(pair.lower.states)]
    vu = v[:, list(pair.upper.states)]

    def orbital_electron_density(basis: np.ndarray) -> np.ndarray:
        rho = np.zeros((4, 4), dtype=complex)
        for k in range(basis.shape[1]):
            m = basis[:, k].reshape(4, 2)
            rho += m @ m.conj().T
        return rho / basis.shape[1]

    e_lower = _dominant_vector(orbital_electron_density(vl))
    e_upper = _dominant_vector(orbital_electron_density(vu))
    # flips the electron level, acts as identity on the nuclear factor
    transfer = np.kron(np.outer(e_upper, e_lower.conj()), np.eye(2, dtype=complex))
    overlap = vu.conj().T @ transfer @ vl
    u_svd, sing, vh_svd = np.linalg.svd(overlap)
    if sing[-1] < 1e-3:
        raise AmbiguousPairingError(
            f"nuclear sublevel pairing is ambiguous (singular values {sing});"
            " the doublets do not share a common nuclear structure"
        )
    w = u_svd @ vh_svd
    raising = vu @ w @ vl.conj().T
    pi_op = raising + raising.conj().T
    rest = [k for k in range(8) if k not in pair.lower.states + pair.upper.states]
    for k in rest:
        pi_op += np.outer(v[:, k], v[:, k].conj())
    return pi_op


def doublet_qubit_basis(
    spectrum: Spectrum, doublet: Doublet, frame: NuclearFrame
) -> np.ndarray:
    """Two 8-dim basis states of a doublet forming a nuclear qubit.

    Column 0 has its nuclear Bloch vector along +z of the frame, column 1
    along -z, and their equal superposition points along +x (the relative
    phase is fixed against the frame x axis).
    """
    ops = build_operators()
    v1 = spectrum.eigenvectors[:, doublet.states[0]]
    v2 = spectrum.eigenvectors[:, doublet.states[1]]
    r1 = nuclear_bloch(v1, frame)
    if r1[2] >= 0:
        q_up, q_dn = v1, v2
    else:
        q_up, q_dn = v2, v1
    if abs(nuclear_bloch(q_up, frame)[2]) < 0.9:
        raise DegenerateAxisError(
            "doublet nuclear states are not aligned with the quantization axis"
        )
    ix_frame = (
        frame.x_axis[0] * ops.Ix + frame.x_axis[1] * ops.Iy + frame.x_axis[2] * ops.Iz
    )
    m = q_up.conj() @ ix_frame @ q_dn
    if abs(m) > 1e-12:
        q_dn = q_dn * np.exp(-1j * np.angle(m))
    return np.column_stack([q_up, q_dn])


@dataclass(frozen=True)
class Trajectory:
    """Sampled nuclear Bloch vectors along a gate sequence (frame coords)."""

    times: np.ndarray              # ns
    vectors: np.ndarray            # (N, 3)
    frame: str                     # "lab" or "rot"
    final_state: np.ndarray        # 8-dim state at the end of the sequence


class SequenceOracle:
    """Exact 8-dimensional replay of a pi-rotation gate sequence.

    Precomputes the eigensystem, the pi-rotation operator, and the nuclear
    qubit embedding for one set-point, so that many delay tuples can be
    replayed cheaply.
    """

    def __init__(
        self,
        config: SystemConfig,
        case: str | None = None,
        indices: tuple[int, int] | None = None,
        order: str = "pi-first",
    ):
        if order not in ("pi-first", "delay-first"):
            raise ValueError(f"unknown sequence order {order!r}")
        if case is None:
            case = "strained" if config.strain.is_strained else "unstrained"
        self.config = config
        self.order = order
        self.spectrum = diagonalize(build_hamiltonian(config))
        self.pair = select_transition(self.spectrum, case=case, indices=indices)
        self.geometry = nuclear_quantization_fields(config, self.spectrum, self.pair)
        self.frame = NuclearFrame.from_fields(self.geometry.B_alpha, self.geometry.B_beta)
        self.pi_op = pi_rotation(self.spectrum, self.pair)
        self.qubit_basis = doublet_qubit_basis(self.spectrum, self.pair.lower, self.frame)
        self.f_rf = self.geometry.f_alpha

    @classmethod
    def from_model(cls, model: SequenceModel, order: str = "pi-first") -> "SequenceOracle":
        if model.config is None or model.transition is None:
            raise ValueError("model lacks a config; build it with SequenceModel.from_config")
        case = "strained" if model.config.strain.is_strained else "unstrained"
        indices = (model.transition.lower_index, model.transition.upper_index)
        return cls(model.config, case=case, indices=indices, order=order)

    def model(self) -> SequenceModel:
        return SequenceModel(
            frame=self.frame,
            f_alpha=self.geometry.f_alpha,
            f_beta=self.geometry.f_beta,
            delta_theta_deg=self.geometry.delta_theta,
            transition=self.pair,
            config=self.config,
            geometry=self.geometry,
        )

    def embed(self, chi: np.ndarray) -> np.ndarray:
        """Lift a 2-dim nuclear state (frame basis) into the lower doublet."""
        return self.qubit_basis @ np.asarray(chi, dtype=complex)

    def extract(self, psi: np.ndarray) -> np.ndarray:
        """Project an 8-dim state back onto the nuclear qubit (not normalized)."""
        return self.qubit_basis.conj().T @ np.asarray(psi, dtype=complex)

    def _evolved(self, psi: np.ndarray, t_ns: float) -> np.ndarray:
        w, v = self.spectrum.eigenvalues, self.spectrum.eigenvectors
        coeff = v.conj().T @ psi
        phases = np.exp(-2j * np.pi * w * t_ns * CYCLES_PER_MHZ_NS)
        return v @ (coeff * phases)

    def propagate(self, taus, psi0: np.ndarray) -> np.ndarray:
        """Final 8-dim state after the four-rotation sequence."""
        psi = np.asarray(psi0, dtype=complex)
        for tau, pulse_first in self._segments(taus):
            if pulse_first:
                psi = self.pi_op @ psi
            psi = self._evolved(psi, tau)
            if not pulse_first:
                psi = self.pi_op @ psi
        return psi

    def _segments(self, taus):
        taus = [float(t) for t in taus]
        if len(taus) != 4:
            raise ValueError("expected four delays")
        if min(taus) < 0:
            raise ValueError("delays must be non-negative")
        # pi-first: pi tau1 pi tau2 pi tau3 pi tau4 (pulse opens each segment)
        # delay-first: tau1 pi tau2 pi tau3 pi tau4 pi (pulse closes each segment)
        pulse_first = self.order == "pi-first"
        return [(t, pulse_first) for t in taus]

    def evolve(
        self,
        taus,
        psi0: np.ndarray,
        samples_per_segment: int = 100,
        frame: str = "lab",
    ) -> Trajectory:
        """Replay the sequence, sampling the nuclear Bloch vector.

        ``frame="rot"`` reports vectors in the frame co-rotating about the
        primary axis at f_alpha.
        """
        if frame not in ("lab", "rot"):
            raise ValueError(f"unknown frame {frame!r}")
        psi = np.asarray(psi0, dtype=complex)
        times = [0.0]
        vectors = [nuclear_bloch(psi, self.frame)]
        t0 = 0.0
        for tau, pulse_first in self._segments(taus):
            if pulse_first:
                psi = self.pi_op @ psi
            n = max(2, int(samples_per_segment))
            for s in np.linspace(0.0, tau, n + 1):
                state = self._evolved(psi, s)
                times.append(t0 + s)
                vectors.append(nuclear_bloch(state, self.frame))
            psi = self._evolved(psi, tau)
            if not pulse_first:
                psi = self.pi_op @ psi
            t0 += tau
        times_arr = np.array(times)
        vec_arr = np.array(vectors)
        if frame == "rot":
            angles = -2 * np.pi * self.f_rf * times_arr * CYCLES_PER_MHZ_NS
            cos_a, sin_a = np.cos(angles), np.sin(angles)
            x = cos_a * vec_arr[:, 0] - sin_a * vec_arr[:, 1]
            y = sin_a * vec_arr[:, 0] + cos_a * vec_arr[:, 1]
            vec_arr = np.column_stack([x, y, vec_arr[:, 2]])
        return Trajectory(times=times_arr, vectors=vec_arr, frame=frame, final_state=psi)


def evolve_full(
    config: SystemConfig,
    taus,
    psi0: np.ndarray,
    case: str | None = None,
    indices: tuple[int, int] | None = None,
    samples_per_segment: int = 100,
    frame: str = "lab",
    order: str = "pi-first",
) -> Trajectory:
    """Exact replay of a gate sequence from a bare configuration."""
    oracle = SequenceOracle(config, case=case, indices=indices, order=order)
    return oracle.evolve(taus, psi0, samples_per_segment=samples_per_segment, frame=frame)


def rotating_frame(obj: np.ndarray, t_ns: float, f_rf: float, axis: np.ndarray):
    """Transform a Bloch vector or a 2x2 operator into the rotating frame.

    The frame rotates at f_rf about ``axis``; the transform is a rotation by
    -2*pi*f_rf*t, so at t = k/f_rf it is the identity.
    """
    if f_rf <= 0:
        raise ValueError("f_rf must be positive")
    angle = -2 * np.pi * f_rf * t_ns * CYCLES_PER_MHZ_NS
    obj = np.asarray(obj)
    if obj.shape == (3,):
        return rotation_matrix(axis, angle) @ obj.astype(float)
    if obj.shape == (2, 2):
        w = su2_rotation(axis, angle)
        return w @ obj.astype(complex) @ w.conj().T
    raise ValueError("expected a 3-vector or a 2x2 operator")
