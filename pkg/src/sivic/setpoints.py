"""Named operating set-points used for gate synthesis.

Set-point A is the unstrained scenario at 3.5 T, 54.7 deg from the defect
axis (field along [1 0 0] of the crystal).  Set-point B is the strained
scenario (alpha = beta = 150 GHz) on the same field line, at the magnitude
where the two nuclear quantization axes become orthogonal; that field is
resolved numerically and recorded in run manifests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize

from .config import SystemConfig
from .dynamics import SequenceModel
from .errors import SivicError

STRAIN_CASE_MHZ = 150_000.0
FIELD_ANGLE_DEG = 54.7


def setpoint_a() -> SystemConfig:
    return SystemConfig.default().with_field(3.5, FIELD_ANGLE_DEG)


def _strained_template() -> SystemConfig:
    return SystemConfig.default().with_strain(STRAIN_CASE_MHZ, STRAIN_CASE_MHZ)


@dataclass(frozen=True)
class SetpointB:
    config: SystemConfig
    b_mag: float
    delta_theta: float
    f_alpha: float
    f_beta: float


def _delta_theta_at(b_mag: float) -> float:
    model = SequenceModel.from_config(_strained_template().with_field(b_mag, FIELD_ANGLE_DEG))
    return model.delta_theta_deg


@lru_cache(maxsize=1)
def resolve_setpoint_b() -> SetpointB:
    """Locate the strained-case operating field on the 54.7 deg line.

    Scans 0-7 T on the default sweep grid for the point where the angle
    between the quantization axes is closest to 90 deg, then refines by
    root-finding when the angle crosses 90 deg between grid points.
    """
    grid = np.linspace(0.05, 7.0, 140)
    devs = []
    for b in grid:
        try:
            devs.append(_delta_theta_at(float(b)) - 90.0)
        except SivicError:
            devs.append(np.nan)
    devs = np.array(devs)
    if np.all(np.isnan(devs)):
        raise SivicError("no valid grid point while resolving set-point B")
    best = int(np.nanargmin(np.abs(devs)))

    b_star = float(grid[best])
    for k in range(max(0, best - 1), min(len(grid) - 1, best + 1)):
        lo, hi = devs[k], devs[k + 1]
        if np.isfinite(lo) and np.isfinite(hi) and lo * hi < 0:
            b_star = float(
                optimize.brentq(lambda b: _delta_theta_at(b) - 90.0, grid[k], grid[k + 1], xtol=1e-9)
            )
            break

    config = _strained_template().with_field(b_star, FIELD_ANGLE_DEG)
    model = SequenceModel.from_config(config)
    return SetpointB(
        config=config,
        b_mag=b_star,
        delta_theta=model.delta_theta_deg,
        f_alpha=model.f_alpha,
        f_beta=model.f_beta,
    )


def setpoint_config(name: str) -> SystemConfig:
    key = name.strip().upper()
    if key == "A":
        return setpoint_a()
    if key == "B":
        return resolve_setpoint_b().config
    raise SivicError(f"unknown set-point {name!r}; expected 'A' or 'B'")


@lru_cache(maxsize=4)
def setpoint_model(name: str) -> SequenceModel:
    return SequenceModel.from_config(setpoint_config(name))
