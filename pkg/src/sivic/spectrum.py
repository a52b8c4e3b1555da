"""Diagonalization, transition selection, and nuclear quantization geometry.

The nuclear spin of each electron level precesses about the net field
B_net = B0 + B_hf, where the hyperfine field seen by the nucleus is built
from the electron spin expectation value of that level:

    B_hf = (A_perp <Sx>, A_perp <Sy>, A_par <Sz>) / |gamma_n|.

Precession frequencies are always taken from the exact doublet eigenvalue
splittings; |gamma_n| * |B_net| is kept as a consistency check only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig
from .errors import DegenerateAxisError, DiagonalizationError, DoubletError
from .hamiltonian import HamiltonianMatrix, build_operators

#: grouping thresholds: a nuclear doublet must be split by less than this
#: (MHz) and its two electron orientations must agree to this angle (deg).
DOUBLET_MAX_SPLIT_MHZ = 1_000.0
DOUBLET_MAX_S_ANGLE_DEG = 5.0

#: below this doublet splitting (MHz) the precession axis is undefined
DEGENERATE_SPLIT_MHZ = 1e-6

#: candidate transitions must have electron spins this close to antiparallel
_ANTIPARALLEL_MIN_DEG = 170.0
_MIN_S_NORM = 0.05


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column real-positive."""
    out = vectors.copy()
    for k in range(out.shape[1]):
        idx = int(np.argmax(np.abs(out[:, k])))
        pivot = out[idx, k]
        if pivot != 0:
            out[:, k] *= np.abs(pivot) / pivot
    return out


@dataclass(frozen=True)
class Spectrum:
    """Sorted eigenpairs with per-state spin expectation values."""

    eigenvalues: np.ndarray        # (8,) MHz, ascending
    eigenvectors: np.ndarray       # (8, 8), column k <-> eigenvalues[k]
    s_expect: np.ndarray           # (8, 3) electron <S> per state
    i_expect: np.ndarray           # (8, 3) nuclear <I> per state
    lz_expect: np.ndarray          # (8,) orbital <Lz> per state
    config: SystemConfig | None = None


def diagonalize(hamiltonian: HamiltonianMatrix | np.ndarray) -> Spectrum:
    """Dense Hermitian eigensolve with a deterministic phase convention."""
    if isinstance(hamiltonian, HamiltonianMatrix):
        matrix = hamiltonian.matrix
        config = hamiltonian.config
    else:
        matrix = np.asarray(hamiltonian, dtype=complex)
        config = None
    try:
        values, vectors = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:
        raise DiagonalizationError(f"eigensolver failed: {exc}") from exc
    vectors = _fix_phases(vectors)

    ops = build_operators()
    s_expect = np.empty((8, 3))
    i_expect = np.empty((8, 3))
    lz_expect = np.empty(8)
    for k in range(8):
        v = vectors[:, k]
        s_expect[k] = [np.real(v.conj() @ op @ v) for op in ops.S]
        i_expect[k] = [np.real(v.conj() @ op @ v) for op in ops.I]
        lz_expect[k] = np.real(v.conj() @ ops.Lz @ v)
    return Spectrum(
        eigenvalues=values,
        eigenvectors=vectors,
        s_expect=s_expect,
        i_expect=i_expect,
        lz_expect=lz_expect,
        config=config,
    )


@dataclass(frozen=True)
class Doublet:
    """Two nuclear sublevels of one electron level."""

    states: tuple[int, int]        # eigenstate indices, ascending energy
    mean_energy: float             # MHz
    splitting: float               # MHz, >= 0
    s_vec: np.ndarray              # electron <S> averaged over the two states
    lz: float                      # orbital <Lz> averaged over the two states


def group_doublets(spectrum: Spectrum) -> tuple[Doublet, ...]:
    """Group the eight states into four nuclear doublets.

    Consecutive eigenvalue pairs qualify when their gap is below 1 GHz and
    their electron orientations agree within 5 degrees.  Fails (DoubletError)
    when the electron orientation is unresolved, e.g. for Kramers-degenerate
    levels at zero field.
    """
    w = spectrum.eigenvalues
    doublets = []
    for lo in range(0, 8, 2):
        hi = lo + 1
        split = float(w[hi] - w[lo])
        if split >= DOUBLET_MAX_SPLIT_MHZ:
            raise DoubletError(
                f"states {lo},{hi} split by {split:.3f} MHz exceed the doublet window; "
                "supply explicit doublet indices"
            )
        s_lo, s_hi = spectrum.s_expect[lo], spectrum.s_expect[hi]
        n_lo, n_hi = np.linalg.norm(s_lo), np.linalg.norm(s_hi)
        if n_lo < _MIN_S_NORM or n_hi < _MIN_S_NORM:
            raise DoubletError(
                f"states {lo},{hi} have unresolved electron orientation; "
                "supply explicit doublet indices"
            )
        angle = np.degrees(np.arccos(np.clip(s_lo @ s_hi / (n_lo * n_hi), -1.0, 1.0)))
        if angle > DOUBLET_MAX_S_ANGLE_DEG:
            raise DoubletError(
                f"states {lo},{hi} electron orientations differ by {angle:.2f} deg; "
                "supply explicit doublet indices"
            )
        doublets.append(
            Doublet(
                states=(lo, hi),
                mean_energy=float(0.5 * (w[lo] + w[hi])),
                splitting=split,
                s_vec=0.5 * (s_lo + s_hi),
                lz=float(0.5 * (spectrum.lz_expect[lo] + spectrum.lz_expect[hi])),
            )
        )
    return tuple(doublets)


@dataclass(frozen=True)
class TransitionPair:
    """Electron transition between two nuclear doublets."""

    lower: Doublet
    upper: Doublet
    lower_index: int               # doublet index, 0..3
    upper_index: int
    label: str                     # "omega1", "omega2", or "custom"
    frequency: float               # MHz, > 0


def _antiparallel_candidates(doublets: tuple[Doublet, ...]) -> list[tuple[int, int]]:
    found = []
    for a in range(4):
        for b in range(a + 1, 4):
            va, vb = doublets[a].s_vec, doublets[b].s_vec
            na, nb = np.linalg.norm(va), np.linalg.norm(vb)
            if na < _MIN_S_NORM or nb < _MIN_S_NORM:
                continue
            angle = np.degrees(np.arccos(np.clip(va @ vb / (na * nb), -1.0, 1.0)))
            if angle >= _ANTIPARALLEL_MIN_DEG:
                found.append((a, b))
    return found


def select_transition(
    spectrum: Spectrum,
    case: str = "unstrained",
    indices: tuple[int, int] | None = None,
) -> TransitionPair:
    """Pick the electron spin-flip transition driven in the given strain case.

    The candidates are doublet pairs with antiparallel electron orientation
    (a true spin flip).  For the unstrained case the lower-frequency flip is
    returned (the one within the orbital branch whose spin-orbit field
    opposes the Zeeman field); for the strained case the flip within the
    lowest orbital branch.  Explicit doublet ``indices`` override selection.
    """
    doublets = group_doublets(spectrum)
    if indices is not None:
        a, b = sorted(int(i) for i in indices)
        if not (0 <= a < b <= 3):
            raise DoubletError(f"doublet indices must be distinct and in 0..3, got {indices}")
        label = "custom"
    else:
        candidates = _antiparallel_candidates(doublets)
        if not candidates:
            raise DoubletError(
                "no spin-flip transition found (no antiparallel doublet pair); "
                "supply explicit doublet indices"
            )
        if case == "strained":
            a, b = min(candidates)
            label = "omega2"
        elif case == "unstrained":
            a, b = min(candidates, key=lambda ab: doublets[ab[1]].mean_energy - doublets[ab[0]].mean_energy)
            label = "omega1"
        else:
            raise ValueError(f"unknown strain case {case!r}")
    lower, upper = doublets[a], doublets[b]
    frequency = upper.mean_energy - lower.mean_energy
    if frequency <= 0:
        raise DoubletError("transition frequency must be positive")
    return TransitionPair(
        lower=lower, upper=upper, lower_index=a, upper_index=b, label=label, frequency=float(frequency)
    )


def delta_theta(v1: np.ndarray, v2: np.ndarray) -> float:
    """Angle between two field vectors, degrees in [0, 180]."""
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    n1, n2 = np.linalg.norm(v1), np.linalg.norm(v2)
    if n1 == 0.0 or n2 == 0.0:
        raise ValueError("delta_theta requires nonzero vectors")
    return float(np.degrees(np.arccos(np.clip(v1 @ v2 / (n1 * n2), -1.0, 1.0))))


@dataclass(frozen=True)
class QuantizationGeometry:
    """Net nuclear quantization fields for the two electron levels of a transition."""

    B_alpha: np.ndarray            # T, electron in the lower level
    B_beta: np.ndarray             # T, electron in the upper level
    B_hf_alpha: np.ndarray         # hyperfine contribution alone, T
    B_hf_beta: np.ndarray
    delta_theta: float             # degrees between B_alpha and B_beta
    f_alpha: float                 # MHz, exact lower-doublet splitting
    f_beta: float                  # MHz, exact upper-doublet splitting
    period_alpha: float            # ns
    period_beta: float             # ns


def _hyperfine_field(config: SystemConfig, s_vec: np.ndarray) -> np.ndarray:
    c = config.constants
    return np.array(
        [c.A_perp * s_vec[0], c.A_perp * s_vec[1], c.A_par * s_vec[2]]
    ) / abs(c.gamma_n)


def nuclear_quantization_fields(
    config: SystemConfig, spectrum: Spectrum, pair: TransitionPair
) -> QuantizationGeometry:
    """Compute B_alpha / B_beta, their angle, and exact precession data.

    The hyperfine-field sign is chosen so that |gamma_n| * |B_net| matches
    the exact doublet splitting; with the signed electron expectation values
    the positive branch is the consistent one, and the check below guards
    against a silent sign error.
    """
    b0 = config.b_vector
    gn = abs(config.constants.gamma_n)
    out_fields = []
    out_hf = []
    freqs = []
    for doublet in (pair.lower, pair.upper):
        if doublet.splitting < DEGENERATE_SPLIT_MHZ:
            raise DegenerateAxisError(
                f"doublet {doublet.states} splitting {doublet.splitting:.2e} MHz is below "
                f"{DEGENERATE_SPLIT_MHZ} MHz; quantization axis undefined"
            )
        b_hf = _hyperfine_field(config, doublet.s_vec)
        candidates = [b0 + b_hf, b0 - b_hf]
        errors = [abs(gn * np.linalg.norm(b) - doublet.splitting) for b in candidates]
        pick = int(np.argmin(errors))
        b_net = candidates[pick]
        if errors[pick] > 0.05 * doublet.splitting:
            raise DegenerateAxisError(
                f"effective-field splitting deviates from the exact doublet splitting by "
                f"{errors[pick] / doublet.splitting:.1%} for states {doublet.states}"
            )
        out_fields.append(b_net)
        out_hf.append(b_hf if pick == 0 else -b_hf)
        freqs.append(doublet.splitting)

    f_alpha, f_beta = freqs
    return QuantizationGeometry(
        B_alpha=out_fields[0],
        B_beta=out_fields[1],
        B_hf_alpha=out_hf[0],
        B_hf_beta=out_hf[1],
        delta_theta=delta_theta(out_fields[0], out_fields[1]),
        f_alpha=f_alpha,
        f_beta=f_beta,
        period_alpha=1000.0 / f_alpha,
        period_beta=1000.0 / f_beta,
    )
