"""1-bit sign alignment of a complex vector.

The kernel behind every RIS configuration in this package: given a target
vector b, pick phi in {+1, -1}^N to make |b^T phi| large.  Trying the two
patterns sign(Re b) and sign(Im b) and keeping the better one is enough to
reach at least half of sum(|b_n|), hence at least a quarter of the
continuous optimum once squared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AlignmentResult:
    """Outcome of sign alignment on (the masked part of) a vector.

    phi holds only the aligned entries (mask order) as +/-1 floats;
    achieved_value is |sum b_n phi_n| over those entries; branch records
    which of the two sign patterns won.
    """

    phi: np.ndarray
    achieved_value: float
    branch: str


def _masked(b, mask) -> np.ndarray:
    b = np.asarray(b, dtype=complex).ravel()
    if mask is not None:
        idx = np.asarray(mask, dtype=np.intp).ravel()
        if idx.size and (idx.min() < 0 or idx.max() >= b.size):
            raise ValueError("mask indices out of range")
        b = b[idx]
    if b.size == 0:
        raise ValueError("empty effective vector")
    if not np.all(np.isfinite(b.real)) or not np.all(np.isfinite(b.imag)):
        raise ValueError("input must be finite")
    return b


def _signs(x: np.ndarray) -> np.ndarray:
    # sign(0) := +1 keeps outputs deterministic
    return np.where(x >= 0.0, 1.0, -1.0)


def sign_align(b, mask=None) -> AlignmentResult:
    """Best of the two 1-bit patterns sign(Re b) and sign(Im b).

    Parameters
    ----------
    b : array_like of complex
        Target vector.
    mask : array_like of int, optional
        Indices to align; entries outside the mask are not represented
        in the result.  Composition across masks is the caller's job.

    Returns
    -------
    AlignmentResult
        The winning pattern, its |b^T phi| value, and the branch name.
        Guarantee: achieved_value >= 0.5 * sum(|b_n|) over the mask.
    """
    bm = _masked(b, mask)
    phi_re = _signs(bm.real)
    phi_im = _signs(bm.imag)
    val_re = abs(bm @ phi_re)
    val_im = abs(bm @ phi_im)
    if val_re >= val_im:
        return AlignmentResult(phi_re, float(val_re), "real")
    return AlignmentResult(phi_im, float(val_im), "imaginary")


def phase_align(b, mask=None) -> np.ndarray:
    """Continuous alignment phi_n = exp(-1j*angle(b_n)) on the mask.

    The aligned sum b^T phi equals sum(|b_n|) exactly, the unconstrained
    optimum of |b^T phi| over unit-modulus phi.
    """
    bm = _masked(b, mask)
    return np.exp(-1j * np.angle(bm))
