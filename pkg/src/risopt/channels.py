"""Ricean MIMO channel sampling and the RIS-parametrized cascade.

Channels between an array of n_array elements and the RIS of n_ris
elements are stored as n_ris x n_array matrices (RIS rows).  The
receive-side channel enters the cascade Hermitian-transposed, so the
end-to-end matrix is h_r_herm @ diag(phi) @ h_t with shapes
(n_r x n_s) (n_s x n_s) (n_s x n_t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import AnglePair, UpaGeometry, upa_steering


@dataclass(frozen=True)
class LosSpec:
    """Deterministic-path description between one array and the RIS."""

    ris_geometry: UpaGeometry
    array_geometry: UpaGeometry
    ris_side_angles: AnglePair
    array_side_angles: AnglePair

    def ris_steering(self) -> np.ndarray:
        return upa_steering(self.ris_geometry, self.ris_side_angles)

    def array_steering(self) -> np.ndarray:
        return upa_steering(self.array_geometry, self.array_side_angles)

    def los_matrix(self) -> np.ndarray:
        """Rank-1 deterministic component a_ris a_array^H (n_ris x n_array)."""
        return np.outer(self.ris_steering(), self.array_steering().conj())


@dataclass(frozen=True)
class RiceanChannel:
    """A sampled n_ris x n_array channel with its K-factor and geometry.

    matrix = sqrt(K/(K+1)) * los + sqrt(1/(K+1)) * B with B i.i.d.
    circular complex Gaussian of unit variance, so E[tr(H H^H)] equals
    n_ris * n_array for every K.  k_factor is linear (not dB); +inf is
    allowed and gives the deterministic component exactly.
    """

    matrix: np.ndarray
    k_factor: float
    los: LosSpec

    @property
    def hermitian(self) -> np.ndarray:
        """The channel as seen from the array side (n_array x n_ris)."""
        return self.matrix.conj().T

    def los_part(self) -> np.ndarray:
        """The weighted deterministic component sqrt(K/(K+1)) * los."""
        w = 1.0 if math.isinf(self.k_factor) else math.sqrt(
            self.k_factor / (self.k_factor + 1.0))
        return w * self.los.los_matrix()

    def scattered_part(self) -> np.ndarray:
        """The weighted random component, matrix minus los_part."""
        return self.matrix - self.los_part()


@dataclass(frozen=True)
class RisConfig:
    """Per-element RIS reflection states.

    states holds the 1-bit configuration over {+1, -1}; continuous
    optionally carries the unit-modulus vector it was derived from
    (phase alignment or manifold iterates before quantization).
    """

    states: np.ndarray
    continuous: np.ndarray | None = None

    def __post_init__(self) -> None:
        s = np.asarray(self.states, dtype=float).ravel()
        if s.size == 0:
            raise ValueError("empty configuration")
        if not np.all(np.abs(np.abs(s) - 1.0) == 0.0):
            raise ValueError("discrete states must be exactly +1 or -1")
        object.__setattr__(self, "states", s)
        if self.continuous is not None:
            c = np.asarray(self.continuous, dtype=complex).ravel()
            if c.size != s.size:
                raise ValueError("continuous variant has wrong length")
            if np.max(np.abs(np.abs(c) - 1.0)) > 1e-12:
                raise ValueError("continuous states must be unit modulus")
            object.__setattr__(self, "continuous", c)

    @property
    def n_elements(self) -> int:
        return self.states.size


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """I.i.d. circular complex Gaussian entries, zero mean, unit variance."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def sample_ricean(n_ris: int, n_array: int, k_factor: float, los: LosSpec,
                  rng: np.random.Generator) -> RiceanChannel:
    """Draw one Ricean channel realization.

    k_factor is linear and must be >= 0; +inf returns the pure
    deterministic matrix with no Gaussian draw (identical rng state
    consumption is not preserved in that case).
    """
    if math.isnan(k_factor) or k_factor < 0:
        raise ValueError("k_factor must be non-negative")
    if los.ris_geometry.size != n_ris or los.array_geometry.size != n_array:
        raise ValueError("LoS geometry sizes do not match requested dims")
    los_mat = los.los_matrix()
    if math.isinf(k_factor):
        return RiceanChannel(los_mat, k_factor, los)
    scattered = complex_gaussian(rng, (n_ris, n_array))
    matrix = (math.sqrt(k_factor / (k_factor + 1.0)) * los_mat
              + math.sqrt(1.0 / (k_factor + 1.0)) * scattered)
    return RiceanChannel(matrix, k_factor, los)


def _phase_vector(phi) -> np.ndarray:
    if isinstance(phi, RisConfig):
        return phi.states
    return np.asarray(phi).ravel()


def cascaded_channel(h_r_herm: np.ndarray, phi, h_t: np.ndarray) -> np.ndarray:
    """End-to-end channel h_r_herm @ diag(phi) @ h_t.

    phi may be a RisConfig (its discrete states are used) or any
    length-n_ris vector, including a continuous unit-modulus one.  The
    diagonal is never materialized; rows of h_t are scaled instead.
    """
    v = _phase_vector(phi)
    h_r_herm = np.asarray(h_r_herm)
    h_t = np.asarray(h_t)
    if h_r_herm.shape[1] != v.size or h_t.shape[0] != v.size:
        raise ValueError("dimension mismatch in cascade")
    return h_r_herm @ (v[:, None] * h_t)
