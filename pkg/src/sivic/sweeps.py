"""Field-grid sweeps of the quantization geometry, with CSV export.

Rows are emitted in row-major grid order (field magnitude outer, polar angle
inner) regardless of how the points are evaluated.  Grid points where the
transition cannot be resolved (e.g. zero field) become error rows and the
sweep continues.  Floats are written with 9 significant digits.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import SystemConfig
from .errors import SivicError
from .hamiltonian import build_hamiltonian
from .spectrum import (
    diagonalize,
    group_doublets,
    nuclear_quantization_fields,
    select_transition,
)
from .dynamics import nuclear_bloch

DTHETA_HEADER = ("B_mag_T", "theta_deg", "delta_theta_deg", "dev_orthogonal_deg", "status")
PRECESSION_HEADER = (
    "B_mag_T",
    "theta_deg",
    "f_alpha_MHz",
    "f_beta_MHz",
    "period_alpha_ns",
    "period_beta_ns",
    "status",
)
ORIENTATION_HEADER = ("B_mag_T", "state_index", "energy_MHz", "S_polar_deg", "I_polar_deg")

#: default grid extents: 0-7 T in 141 steps, 0-90 deg in 91 steps
DEFAULT_MAGNITUDES = tuple(np.linspace(0.0, 7.0, 141))
DEFAULT_ANGLES = tuple(np.linspace(0.0, 90.0, 91))


@dataclass(frozen=True)
class SweepRow:
    values: tuple
    status: str = "ok"


def _geometry_at(config: SystemConfig, magnitude: float, theta: float):
    point = config.with_field(magnitude, theta, config.field_point.azimuth)
    case = "strained" if config.strain.is_strained else "unstrained"
    spec = diagonalize(build_hamiltonian(point))
    pair = select_transition(spec, case=case)
    return spec, pair, nuclear_quantization_fields(point, spec, pair)


def sweep_delta_theta(
    config: SystemConfig,
    magnitudes=DEFAULT_MAGNITUDES,
    angles=DEFAULT_ANGLES,
) -> list[SweepRow]:
    """Quantization-axis angle and its deviation from orthogonality per grid point."""
    rows = []
    for mag in magnitudes:
        for theta in angles:
            try:
                _, _, geo = _geometry_at(config, float(mag), float(theta))
                rows.append(
                    SweepRow((mag, theta, geo.delta_theta, abs(90.0 - geo.delta_theta)))
                )
            except SivicError as exc:
                rows.append(SweepRow((mag, theta, math.nan, math.nan), f"error: {exc}"))
    return rows


def sweep_precession(
    config: SystemConfig,
    magnitudes=DEFAULT_MAGNITUDES,
    angles=DEFAULT_ANGLES,
) -> list[SweepRow]:
    """Exact precession frequencies (MHz) and periods (ns) per grid point."""
    rows = []
    for mag in magnitudes:
        for theta in angles:
            try:
                _, _, geo = _geometry_at(config, float(mag), float(theta))
                rows.append(
                    SweepRow(
                        (mag, theta, geo.f_alpha, geo.f_beta, geo.period_alpha, geo.period_beta)
                    )
                )
            except SivicError as exc:
                rows.append(
                    SweepRow((mag, theta, math.nan, math.nan, math.nan, math.nan), f"error: {exc}")
                )
    return rows


def _polar_deg(vec: np.ndarray) -> float:
    norm = np.linalg.norm(vec)
    if norm < 1e-12:
        return math.nan
    return float(np.degrees(np.arccos(np.clip(vec[2] / norm, -1.0, 1.0))))


def eigenstate_orientations(
    config: SystemConfig,
    magnitudes=DEFAULT_MAGNITUDES,
    angle: float = 54.7,
) -> list[SweepRow]:
    """Energies and spin orientation angles (to the defect axis) per eigenstate.

    Eight rows per field magnitude; the polar angle of the electron and the
    nuclear Bloch vectors is undefined (nan) where the expectation value
    vanishes, e.g. in exactly degenerate subspaces.
    """
    rows = []
    for mag in magnitudes:
        point = config.with_field(float(mag), angle, config.field_point.azimuth)
        spec = diagonalize(build_hamiltonian(point))
        for k in range(8):
            i_vec = nuclear_bloch(spec.eigenvectors[:, k])
            rows.append(
                SweepRow(
                    (
                        mag,
                        k,
                        spec.eigenvalues[k],
                        _polar_deg(spec.s_expect[k]),
                        _polar_deg(i_vec),
                    )
                )
            )
    return rows


def _format(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return "nan"
    return f"{v:.9g}"


def write_csv(path: str | Path, header: tuple[str, ...], rows: list[SweepRow]) -> Path:
    """Write sweep rows with the exact column schema of the sweep kind."""
    path = Path(path)
    has_status = header[-1] == "status"
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            cells = [_format(v) for v in row.values]
            if has_status:
                cells.append(row.status)
            writer.writerow(cells)
    return path
