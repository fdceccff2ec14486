"""Uniform planar array geometry and unnormalized steering vectors."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class UpaGeometry:
    """Rectangular antenna panel.

    Parameters
    ----------
    n_horizontal : int
        Element count along the first (horizontal) axis.
    n_vertical : int
        Element count along the second (vertical) axis.
    spacing : float
        Element pitch in wavelengths, default half-wavelength.
    """

    n_horizontal: int
    n_vertical: int
    spacing: float = 0.5

    def __post_init__(self) -> None:
        if self.n_horizontal < 1 or self.n_vertical < 1:
            raise ValueError("element counts must be positive")
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise ValueError("spacing must be positive and finite")

    @property
    def size(self) -> int:
        return self.n_horizontal * self.n_vertical


@dataclass(frozen=True)
class AnglePair:
    """Azimuth/elevation direction in radians.

    Azimuth lies in (-pi, pi], elevation in [0, pi].
    """

    azimuth: float
    elevation: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.azimuth) and math.isfinite(self.elevation)):
            raise ValueError("angles must be finite")
        if not (-math.pi < self.azimuth <= math.pi):
            raise ValueError("azimuth outside (-pi, pi]")
        if not (0.0 <= self.elevation <= math.pi):
            raise ValueError("elevation outside [0, pi]")


def upa_steering(geometry: UpaGeometry, angles: AnglePair) -> np.ndarray:
    """Unnormalized steering vector of a planar array.

    Element (m, n) of the panel carries the phase

        2*pi*spacing*(m*sin(el)*cos(az) + n*sin(el)*sin(az)),

    with m in [0, n_horizontal) and n in [0, n_vertical).  Element (0, 0)
    is the zero-phase reference.  The panel is flattened with the
    horizontal index m running fastest, i.e. entry n*n_horizontal + m,
    and the same order is assumed everywhere a steering vector meets a
    channel matrix.  Every entry has unit modulus, so ||a||^2 = N.
    """
    m = np.arange(geometry.n_horizontal)
    n = np.arange(geometry.n_vertical)
    sin_el = math.sin(angles.elevation)
    phase_h = 2.0 * math.pi * geometry.spacing * sin_el * math.cos(angles.azimuth) * m
    phase_v = 2.0 * math.pi * geometry.spacing * sin_el * math.sin(angles.azimuth) * n
    # shape (n_vertical, n_horizontal); C-order ravel keeps m fastest
    phase = phase_v[:, None] + phase_h[None, :]
    return np.exp(1j * phase).ravel()


def near_square_geometry(n: int, spacing: float = 0.5) -> UpaGeometry:
    """Most-square factorization of n elements, n_horizontal <= n_vertical."""
    if n < 1:
        raise ValueError("element count must be positive")
    n_h = int(math.isqrt(n))
    while n % n_h:
        n_h -= 1
    return UpaGeometry(n_h, n // n_h, spacing)
