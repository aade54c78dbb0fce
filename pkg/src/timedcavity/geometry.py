"""Geometry of the two-atom cavity: couplings, excitation phase, dipole-dipole terms.

Units: rates in multiples of the atomic half-decay rate gamma, lengths in
wavelengths. The cavity and input wave numbers are taken equal (resonance),
k = 2*pi per wavelength. Atom 1 sits at the origin of the phase reference;
the axial projections of the two atoms onto the cavity axis are
``(z_center -/+ r12/2) * cos(beta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

from .errors import ConfigError, DivergenceError

TWOPI = 2.0 * math.pi

DDVariant = Literal["standard", "printed"]
DD_VARIANTS = ("standard", "printed")

# below this kr the standard-form cooperative decay uses its Taylor series
_SERIES_KR = 1e-2


@dataclass(frozen=True)
class SystemConfig:
    """Physical inputs of one simulation, in gamma-normalized units."""

    gamma: float = 1.0
    kappa: float = 0.3
    g0: float = 5.0
    delta: float = 0.0
    r12: float = 0.25
    theta: float = math.pi / 2
    beta: float = math.pi / 8
    alpha: float = math.pi / 2
    z_center: float = 0.0
    dd_enabled: bool = True
    dd_variant: DDVariant = "standard"
    field_amp: float = 1.0

    def __post_init__(self):
        for name in ("gamma", "kappa", "g0", "delta", "r12", "theta", "beta",
                     "alpha", "z_center", "field_amp"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ConfigError(f"{name} must be a finite number, got {value!r}")
        # gamma = 0 switches atomic decay off (lossless regime); it stays the rate unit
        if self.gamma < 0:
            raise ConfigError(f"gamma must be >= 0, got {self.gamma}")
        if self.kappa < 0:
            raise ConfigError(f"kappa must be >= 0, got {self.kappa}")
        if self.g0 < 0:
            raise ConfigError(f"g0 must be >= 0, got {self.g0}")
        if self.r12 <= 0:
            raise ConfigError(f"r12 must be > 0, got {self.r12}")
        for name in ("theta", "beta", "alpha"):
            value = getattr(self, name)
            if not 0.0 <= value <= math.pi:
                raise ConfigError(f"{name} must lie in [0, pi], got {value}")
        if self.dd_variant not in DD_VARIANTS:
            raise ConfigError(
                f"dd_variant must be one of {DD_VARIANTS}, got {self.dd_variant!r}")

    def with_(self, **changes) -> "SystemConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class DerivedCouplings:
    """Coupling constants resolved from a :class:`SystemConfig`."""

    g1: float
    g2: float
    omega12: float
    gamma12: float
    phi: float


def coupling_constants(config: SystemConfig) -> tuple[float, float]:
    """Signed atom-cavity couplings ``g_i = g0 cos(k z_i)``."""
    half = config.r12 / 2.0
    cb = math.cos(config.beta)
    g1 = config.g0 * math.cos(TWOPI * (config.z_center - half) * cb)
    g2 = config.g0 * math.cos(TWOPI * (config.z_center + half) * cb)
    return g1, g2


def excitation_phase(config: SystemConfig) -> float:
    """Relative excitation phase ``k0 . (r2 - r1) = 2 pi r12 cos(theta)``."""
    return TWOPI * config.r12 * math.cos(config.theta)


def omega12_at(kr: float, alpha: float, gamma: float = 1.0,
               variant: DDVariant = "standard") -> float:
    """Dipole-dipole shift as a function of ``kr = 2 pi r12``.

    The ``printed`` variant divides the last cosine term by ``(kr)**2``;
    ``standard`` uses ``(kr)**3``.
    """
    if kr <= 0:
        raise DivergenceError(f"dipole-dipole shift diverges at kr={kr}")
    c2 = math.cos(alpha) ** 2
    s, c = math.sin(kr), math.cos(kr)
    last = c / kr**2 if variant == "printed" else c / kr**3
    return 1.5 * gamma * (-(1.0 - c2) * c / kr + (1.0 - 3.0 * c2) * (s / kr**2 + last))


def gamma12_at(kr: float, alpha: float, gamma: float = 1.0,
               variant: DDVariant = "standard") -> float:
    """Cooperative decay rate as a function of ``kr = 2 pi r12``.

    Finite as kr -> 0 (limit gamma) for the ``standard`` variant; the
    ``printed`` variant diverges there.
    """
    c2 = math.cos(alpha) ** 2
    if variant == "printed":
        if kr <= 0:
            raise DivergenceError(f"printed cooperative decay diverges at kr={kr}")
        s, c = math.sin(kr), math.cos(kr)
        bracket = (c - s) / kr**2
        return 1.5 * gamma * ((1.0 - c2) * s / kr + (1.0 - 3.0 * c2) * bracket)
    if kr < 0:
        raise DivergenceError(f"negative separation kr={kr}")
    if kr < _SERIES_KR:
        x2 = kr * kr
        sinc = 1.0 - x2 / 6.0 + x2 * x2 / 120.0
        bracket = -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0
    else:
        s, c = math.sin(kr), math.cos(kr)
        sinc = s / kr
        bracket = c / kr**2 - s / kr**3
    return 1.5 * gamma * ((1.0 - c2) * sinc + (1.0 - 3.0 * c2) * bracket)


def dipole_shift(config: SystemConfig) -> float:
    if not config.dd_enabled:
        return 0.0
    return omega12_at(TWOPI * config.r12, config.alpha, config.gamma, config.dd_variant)


def cooperative_decay(config: SystemConfig) -> float:
    if not config.dd_enabled:
        return 0.0
    return gamma12_at(TWOPI * config.r12, config.alpha, config.gamma, config.dd_variant)


def derive_couplings(config: SystemConfig) -> DerivedCouplings:
    g1, g2 = coupling_constants(config)
    return DerivedCouplings(
        g1=g1,
        g2=g2,
        omega12=dipole_shift(config),
        gamma12=cooperative_decay(config),
        phi=excitation_phase(config),
    )
