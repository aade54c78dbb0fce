"""Closed-form lossless dynamics and dark/bright state algebra.

All states are expressed in the phase-bearing single-excitation basis
``(|g>, |e1>, |e2>, |c>)`` with ``|e1> = |10>|0>`` and
``|e2> = |01>|0> exp(i phi)`` (atom 1 at the origin). A bare ket ``|01>|0>``
is therefore ``exp(-i phi) |e2>`` in this basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCouplingError, UnsupportedRegimeError
from .geometry import SystemConfig, derive_couplings

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class StateVector:
    amp_g: complex
    amp_e1: complex
    amp_e2: complex
    amp_c: complex

    @classmethod
    def from_array(cls, v) -> "StateVector":
        v = np.asarray(v, dtype=complex)
        return cls(complex(v[0]), complex(v[1]), complex(v[2]), complex(v[3]))

    def as_array(self) -> np.ndarray:
        return np.array([self.amp_g, self.amp_e1, self.amp_e2, self.amp_c], dtype=complex)

    def norm2(self) -> float:
        return float(np.vdot(self.as_array(), self.as_array()).real)


@dataclass(frozen=True)
class DBAmplitudes:
    """Amplitudes of an atomic state on the free-space dark (a) and bright (b) states."""

    a: complex
    b: complex


def evolution_coefficients(g: float, t: float) -> tuple[complex, complex, complex]:
    """Coefficients of the lossless equal-coupling evolution.

    ``c1`` multiplies the cavity-excited state, ``c2`` the initial timed
    state and ``c3`` the timed state with the two phases interchanged.
    """
    w = SQRT2 * g * t
    c1 = -1j * math.sin(w) / SQRT2
    c2 = 0.5 * (math.cos(w) + 1.0)
    c3 = 0.5 * (math.cos(w) - 1.0)
    return c1, complex(c2), complex(c3)


def lossless_amplitudes(g: float, phi: float, t: float) -> StateVector:
    c1, c2, c3 = evolution_coefficients(g, t)
    e = np.exp(1j * phi)
    return StateVector(
        amp_g=0j,
        amp_e1=(c2 + c3 * e) / SQRT2,
        amp_e2=(c2 + c3 / e) / SQRT2,
        amp_c=c1 * (1.0 + e) / SQRT2,
    )


def _require_lossless(config: SystemConfig):
    c = derive_couplings(config)
    problems = []
    if config.gamma != 0.0:
        problems.append(f"gamma={config.gamma}")
    if config.kappa != 0.0:
        problems.append(f"kappa={config.kappa}")
    if config.delta != 0.0:
        problems.append(f"delta={config.delta}")
    if c.omega12 != 0.0 or c.gamma12 != 0.0:
        problems.append("dipole-dipole terms nonzero")
    if not math.isclose(c.g1, c.g2, rel_tol=1e-12, abs_tol=1e-14):
        problems.append(f"g1={c.g1} != g2={c.g2}")
    if problems:
        raise UnsupportedRegimeError(
            "closed form needs the lossless equal-coupling resonant regime: "
            + ", ".join(problems))
    return c


def lossless_state(config: SystemConfig, t: float) -> StateVector:
    c = _require_lossless(config)
    return lossless_amplitudes(c.g1, c.phi, t)


def cavity_probability_equal(config: SystemConfig, t: float) -> float:
    """Photon detection probability in the cavity, ``E^2 |c1|^2 (1 + cos phi)``."""
    c = _require_lossless(config)
    c1, _, _ = evolution_coefficients(c.g1, t)
    return config.field_amp**2 * abs(c1) ** 2 * (1.0 + math.cos(c.phi))


def db_decomposition(phi: float) -> DBAmplitudes:
    e = np.exp(1j * phi)
    return DBAmplitudes(a=complex((1.0 - e) / 2.0), b=complex((1.0 + e) / 2.0))


def dark_state(phi: float = 0.0) -> StateVector:
    """Free-space antisymmetric state ``(|10>|0> - |01>|0>)/sqrt 2``."""
    return StateVector(0j, 1.0 / SQRT2, -np.exp(-1j * phi) / SQRT2, 0j)


def bright_state(phi: float = 0.0) -> StateVector:
    """Free-space symmetric state ``(|10>|0> + |01>|0>)/sqrt 2``."""
    return StateVector(0j, 1.0 / SQRT2, np.exp(-1j * phi) / SQRT2, 0j)


def _unit_couplings(g1: float, g2: float) -> tuple[float, float]:
    scale = max(abs(g1), abs(g2))
    if scale == 0.0:
        raise DegenerateCouplingError("cavity dark/bright states need g1^2 + g2^2 > 0")
    # rescale first so subnormal couplings do not overflow
    u1, u2 = g1 / scale, g2 / scale
    n = math.hypot(u1, u2)
    return u1 / n, u2 / n


def cavity_dark_state(g1: float, g2: float, phi: float = 0.0) -> StateVector:
    """State annihilated by ``g1 a^+ s1 + g2 a^+ s2``."""
    u1, u2 = _unit_couplings(g1, g2)
    return StateVector(0j, u2, -u1 * np.exp(-1j * phi), 0j)


def cavity_bright_state(g1: float, g2: float, phi: float = 0.0) -> StateVector:
    u1, u2 = _unit_couplings(g1, g2)
    return StateVector(0j, u1, u2 * np.exp(-1j * phi), 0j)


def db_basis_change(g1: float, g2: float) -> np.ndarray:
    """Orthogonal map from (|B>, |D>) coordinates to (|B>_c, |D>_c) coordinates.

    Row 0 gives ``|B>_c`` and row 1 gives ``|D>_c`` in terms of ``(|B>, |D>)``.
    """
    u1, u2 = _unit_couplings(g1, g2)
    return np.array([[u1 + u2, u1 - u2],
                     [u2 - u1, u1 + u2]]) / SQRT2


def interference_factor(g1: float, g2: float, phi: float) -> float:
    """Relative cavity excitation ``(g1^2 + g2^2 + 2 g1 g2 cos phi) / (g1^2 + g2^2)``.

    Equals 2 for in-phase equal couplings and 0 for fully destructive ones.
    """
    u1, u2 = _unit_couplings(g1, g2)
    return 1.0 + 2.0 * u1 * u2 * math.cos(phi)
