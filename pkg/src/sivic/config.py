"""Physical constants and scenario configuration.

Unit conventions used throughout the package (h = 1):

* energies and frequencies in MHz,
* magnetic fields in tesla,
* times in ns,
* angles in degrees at interfaces (radians only inside formulas).

The z axis is the defect symmetry axis; the static field is given in
spherical coordinates (magnitude, polar angle from z, azimuth about z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PhysicalConstants:
    """Ground-state spin constants of the defect.

    Defaults are the silicon-vacancy values: gyromagnetic ratios in MHz/T
    (gamma_n is carried with its physical negative sign and is applied
    exactly once), hyperfine components and spin-orbit coupling in MHz.
    gamma_L defaults to gamma_e / 2 when not given explicitly.
    """

    gamma_e: float = 28_000.0   # electron gyromagnetic ratio, MHz/T
    gamma_n: float = -8.46      # nuclear gyromagnetic ratio, MHz/T (signed)
    A_par: float = 70.0         # hyperfine component along the defect axis, MHz
    A_perp: float = 78.0        # hyperfine component transverse to the axis, MHz
    q: float = 0.1              # orbital quenching factor, dimensionless
    gamma_L: float | None = None  # orbital gyromagnetic ratio, MHz/T
    lambda_SO: float = 46_000.0   # ground-state spin-orbit coupling, MHz

    def __post_init__(self) -> None:
        for name in ("gamma_e", "gamma_n", "A_par", "A_perp", "q", "lambda_SO"):
            _require_finite(name, getattr(self, name))
        if self.gamma_L is None:
            object.__setattr__(self, "gamma_L", self.gamma_e / 2.0)
        _require_finite("gamma_L", self.gamma_L)
        if self.gamma_e <= 0:
            raise ConfigError("gamma_e must be positive")
        if self.gamma_n >= 0:
            raise ConfigError("gamma_n must be negative (signed convention)")
        if self.A_par <= 0 or self.A_perp <= 0:
            raise ConfigError("hyperfine components must be positive")
        # lambda_SO = 0 is allowed: it isolates the hyperfine structure,
        # which is useful as an independent cross-check case.
        if self.lambda_SO < 0:
            raise ConfigError("lambda_SO must be non-negative")


@dataclass(frozen=True)
class StrainParams:
    """In-plane strain anisotropy (alpha) and shearing strain (beta), MHz."""

    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self) -> None:
        _require_finite("alpha", self.alpha)
        _require_finite("beta", self.beta)

    @property
    def is_strained(self) -> bool:
        return self.alpha != 0.0 or self.beta != 0.0


@dataclass(frozen=True)
class FieldSetPoint:
    """Static field set-point: |B0| in T, polar angle and azimuth in degrees."""

    magnitude: float = 0.0
    polar_angle: float = 0.0
    azimuth: float = 0.0

    def __post_init__(self) -> None:
        _require_finite("magnitude", self.magnitude)
        _require_finite("polar_angle", self.polar_angle)
        _require_finite("azimuth", self.azimuth)
        if self.magnitude < 0:
            raise ConfigError("field magnitude must be >= 0")
        if not 0.0 <= self.polar_angle <= 180.0:
            raise ConfigError("polar_angle must be in [0, 180] degrees")
        if not 0.0 <= self.azimuth < 360.0:
            raise ConfigError("azimuth must be in [0, 360) degrees")

    @property
    def vector(self) -> np.ndarray:
        """Cartesian field vector (T) in the defect frame."""
        theta = math.radians(self.polar_angle)
        phi = math.radians(self.azimuth)
        return self.magnitude * np.array(
            [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
        )


# Flat key set of the text configuration format.
CONFIG_KEYS = (
    "gamma_e",
    "gamma_n",
    "A_par",
    "A_perp",
    "q",
    "gamma_L",
    "lambda_SO",
    "alpha",
    "beta",
    "B_mag_T",
    "theta_deg",
    "phi_deg",
)


@dataclass(frozen=True)
class SystemConfig:
    """Complete scenario: constants + strain + applied field."""

    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    strain: StrainParams = field(default_factory=StrainParams)
    field_point: FieldSetPoint = field(default_factory=FieldSetPoint)

    @classmethod
    def default(cls) -> "SystemConfig":
        return cls()

    @property
    def b_vector(self) -> np.ndarray:
        return self.field_point.vector

    def with_field(self, magnitude: float, polar_angle: float, azimuth: float = 0.0) -> "SystemConfig":
        return replace(self, field_point=FieldSetPoint(magnitude, polar_angle, azimuth))

    def with_strain(self, alpha: float, beta: float) -> "SystemConfig":
        return replace(self, strain=StrainParams(alpha, beta))

    def to_dict(self) -> dict[str, float]:
        c, s, f = self.constants, self.strain, self.field_point
        return {
            "gamma_e": c.gamma_e,
            "gamma_n": c.gamma_n,
            "A_par": c.A_par,
            "A_perp": c.A_perp,
            "q": c.q,
            "gamma_L": c.gamma_L,
            "lambda_SO": c.lambda_SO,
            "alpha": s.alpha,
            "beta": s.beta,
            "B_mag_T": f.magnitude,
            "theta_deg": f.polar_angle,
            "phi_deg": f.azimuth,
        }

    @classmethod
    def from_mapping(cls, values: dict[str, float]) -> "SystemConfig":
        unknown = sorted(set(values) - set(CONFIG_KEYS))
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
        base = cls.default().to_dict()
        base.update(values)
        constants = PhysicalConstants(
            gamma_e=base["gamma_e"],
            gamma_n=base["gamma_n"],
            A_par=base["A_par"],
            A_perp=base["A_perp"],
            q=base["q"],
            gamma_L=base["gamma_L"],
            lambda_SO=base["lambda_SO"],
        )
        strain = StrainParams(alpha=base["alpha"], beta=base["beta"])
        field_point = FieldSetPoint(
            magnitude=base["B_mag_T"], polar_angle=base["theta_deg"], azimuth=base["phi_deg"]
        )
        return cls(constants=constants, strain=strain, field_point=field_point)

    @classmethod
    def from_file(cls, path: str | Path) -> "SystemConfig":
        """Load a flat ``key = value`` text file.

        Lines starting with ``#`` and blank lines are ignored.  Unknown keys,
        repeated keys, and unparseable values raise ConfigError with the
        offending line number.
        """
        path = Path(path)
        values: dict[str, float] = {}
        for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, _, text = line.partition("=")
            key = key.strip()
            if key not in CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            if key in values:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            try:
                values[key] = float(text.strip())
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: invalid value for {key!r}: {text.strip()!r}") from None
        return cls.from_mapping(values)
