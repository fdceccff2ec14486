"""SVD bundling and closed-form asymptotic singular-value prediction.

For a Ricean n_ris x n_array channel with K-factor K, the squared
singular values converge (n_ris large, n_array fixed) to

    d_1^2   -> K/(K+1) * n_ris * n_array          (deterministic spike)
    d_i^2   -> (n_ris + 2 r sqrt(n_ris n_array)) / (K+1),  i >= 2,

where r runs over the roots, mapped to the variable
x = (y - n_ris) / (2 sqrt(n_ris n_array)), of the generalized Laguerre
polynomial whose zeros locate the bulk eigenvalues of the Gaussian part.
Entry 2 takes the largest mapped root, entry 3 the next, and so on; the
smallest retained root goes unused.  In the tall regime n_ris >> n_array
the mapped roots fall inside [-1, 1] (semicircle limit), which is what
bounds the bulk entries away from the spike.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal


@dataclass(frozen=True)
class SvdBundle:
    """Full SVD of a channel: columns of left/right are u_i / v_i."""

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray


@dataclass(frozen=True)
class AsymptoticSpectrum:
    """Predicted squared singular values for an (n_ris, n_array) channel.

    bulk_regime flags k_factor < 1/n_array, where the spike formula for
    entry 1 is not trusted and the bulk value is reported instead.
    """

    predicted_sq_singular_values: np.ndarray
    k_factor: float
    dims: tuple[int, int]
    bulk_regime: bool


def svd_bundle(h: np.ndarray) -> SvdBundle:
    """Dense SVD with descending singular values."""
    h = np.asarray(h, dtype=complex)
    if not np.all(np.isfinite(h.real)) or not np.all(np.isfinite(h.imag)):
        raise ValueError("non-finite entries")
    u, s, vh = np.linalg.svd(h, full_matrices=False)
    return SvdBundle(u, s, vh.conj().T)


@lru_cache(maxsize=None)
def _laguerre_roots_cached(n_big: int, n_small: int) -> tuple[float, ...]:
    # Nonzero roots of the degree-n_big polynomial with parameter
    # n_small - n_big reduce, via
    #   L_n^{-m}(y) = (-y)^m ((n-m)!/n!) L_{n-m}^{m}(y),  m = n_big - n_small,
    # to the n_small roots of L_{n_small}^{n_big - n_small}.  Those are the
    # eigenvalues of the symmetric tridiagonal Jacobi matrix of the
    # generalized-Laguerre recurrence (Golub-Welsch, nodes only).
    alpha = n_big - n_small
    diag = 2.0 * np.arange(n_small) + alpha + 1.0
    k = np.arange(1, n_small)
    off = np.sqrt(k * (k + alpha))
    y = eigvalsh_tridiagonal(diag, off)
    x = (y - n_big) / (2.0 * math.sqrt(n_big * n_small))
    return tuple(float(v) for v in x)


def laguerre_top_roots(n_big: int, n_small: int) -> np.ndarray:
    """Mapped nonzero Laguerre roots, ascending, length n_small.

    Returns the images, under x = (y - n_big)/(2 sqrt(n_big n_small)),
    of the n_small nonzero roots in y of the degree-n_big generalized
    Laguerre polynomial with parameter n_small - n_big.  The remaining
    n_big - n_small roots sit degenerate at y = 0 and are dropped.
    Results are cached per (n_big, n_small); recomputation is idempotent
    so concurrent first calls are harmless.
    """
    if n_small < 1:
        raise ValueError("n_small must be at least 1")
    if n_small > n_big:
        raise ValueError("n_small must not exceed n_big")
    return np.array(_laguerre_roots_cached(int(n_big), int(n_small)))


def asymptotic_spectrum(n_ris: int, n_array: int, k_factor: float) -> AsymptoticSpectrum:
    """Closed-form prediction of the squared singular values.

    Entry 1 is the deterministic spike K/(K+1)*n_ris*n_array; entries
    2..n_array take the bulk values built from the mapped Laguerre
    roots, largest root first.  When k_factor < 1/n_array the spike
    has not separated from the bulk, so entry 1 reports the bulk edge
    value instead and the result is flagged bulk_regime.
    """
    if math.isnan(k_factor) or k_factor < 0:
        raise ValueError("k_factor must be non-negative")
    roots = laguerre_top_roots(n_ris, n_array)
    scale = 2.0 * math.sqrt(n_ris * n_array)
    if math.isinf(k_factor):
        bulk = np.zeros(n_array)
        spike = float(n_ris * n_array)
    else:
        bulk = (n_ris + scale * roots) / (k_factor + 1.0)
        spike = k_factor / (k_factor + 1.0) * n_ris * n_array
    pred = np.empty(n_array)
    bulk_regime = k_factor < 1.0 / n_array
    # entry i (i >= 2) uses the (i-1)-th largest mapped root
    if n_array > 1:
        pred[1:] = bulk[::-1][: n_array - 1]
    pred[0] = bulk[-1] if bulk_regime else spike
    return AsymptoticSpectrum(pred, float(k_factor), (int(n_ris), int(n_array)),
                              bulk_regime)
