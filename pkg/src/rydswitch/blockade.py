"""Rydberg blockade radius and gate-photon bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import PhysicsError


class DegenerateDenominator(PhysicsError):
    pass


@dataclass(frozen=True)
class BlockadeInput:
    """``c6`` in 2*pi x GHz um^6, ``delta_c`` and ``omega_c`` in 2*pi x MHz."""

    c6: float
    delta_c: float = 0.0
    omega_c: float = 0.0

    def __post_init__(self):
        if not self.c6 > 0:
            raise PhysicsError(f"c6 must be > 0, got {self.c6}")
        if self.omega_c < 0:
            raise PhysicsError(f"omega_c must be >= 0, got {self.omega_c}")


def blockade_radius(b: BlockadeInput) -> float:
    """r_b = |C6 / sqrt((2 delta_c)^2 + omega_c^2)|^(1/6) in um."""
    width = math.hypot(2.0 * b.delta_c, b.omega_c)
    if width < 1e-12:
        raise DegenerateDenominator("both omega_c and delta_c vanish")
    return abs(b.c6 * 1e3 / width) ** (1.0 / 6.0)


def c6_scaled(n: int, c6_ref: float, n_ref: int) -> float:
    """Rough n^11 van der Waals scaling of C6. Only an approximation.

    Prefer measured or computed per-state C6 values where available.
    """
    if n < 20 or n_ref < 20:
        raise PhysicsError("principal quantum numbers must be >= 20")
    return c6_ref * (n / n_ref) ** 11


def photons_per_sphere(flux: float, r_b: float, group_delay_per_length: float) -> float:
    """Gate photons inside one blockade sphere while crossing it at the group velocity.

    ``flux`` in photons/us, ``r_b`` in um, ``group_delay_per_length`` in ns/um.
    """
    if min(flux, r_b, group_delay_per_length) <= 0:
        raise PhysicsError("flux, radius and delay must all be > 0")
    transit_us = 2.0 * r_b * group_delay_per_length * 1e-3
    return flux * transit_us
