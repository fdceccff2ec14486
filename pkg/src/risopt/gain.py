"""Channel-gain maximization via sign alignment on the LoS components.

The squared Frobenius norm of the cascade separates, through the SVDs of
both channels, into terms d_R,i^2 d_T,j^2 |(conj(v_R,i) * u_T,j)^T phi|^2.
For strong K-factors the (1,1) term dominates and its singular vectors
converge to the LoS steering vectors, so a single sign alignment on
conj(a_ris_rx) * a_ris_tx configures the RIS with statistical CSI only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .alignment import sign_align
from .channels import LosSpec, RisConfig, cascaded_channel
from .spectral import SvdBundle


@dataclass(frozen=True)
class GainReport:
    """One configured instance: the RIS states, the achieved gain, and
    the asymptotic lower bound it is compared against."""

    phi: RisConfig
    gain: float
    lower_bound: float
    ratio_db: float


def channel_gain(h_tilde: np.ndarray) -> float:
    """Squared Frobenius norm of the end-to-end channel."""
    h = np.asarray(h_tilde)
    return float(np.sum(np.abs(h) ** 2))


def gain_expansion(bundle_r: SvdBundle, bundle_t: SvdBundle, phi) -> float:
    """Diagnostic evaluation of the gain as the double sum over SVD terms.

    Equals channel_gain of the cascade (same phi) up to roundoff; kept as
    an independent oracle, not used on the production path.
    """
    v = phi.states if isinstance(phi, RisConfig) else np.asarray(phi).ravel()
    d_r = bundle_r.singular_values
    d_t = bundle_t.singular_values
    # columns: v_R,i in bundle_r.right, u_T,j in bundle_t.left
    zr = bundle_r.right.conj() * v[:, None]          # conj(v_R,i) * phi
    inner = zr.T @ bundle_t.left                     # (i, j) -> (conj(v_i) * u_j)^T phi
    return float(np.sum((d_r[:, None] ** 2) * (d_t[None, :] ** 2)
                        * np.abs(inner) ** 2))


def configure_gain_los(los_t: LosSpec, los_r: LosSpec) -> RisConfig:
    """Sign-align the product of RIS-side LoS steering vectors.

    los_t describes the transmitter-to-RIS path, los_r the RIS-to-
    receiver path.  The target vector is conj(a_ris of los_r) * a_ris of
    los_t; under pure LoS the resulting 1-bit gain is at least
    0.25 * n_r * n_t * n_ris^2.
    """
    if los_t.ris_geometry != los_r.ris_geometry:
        raise ValueError("LoS specs must share the RIS geometry")
    b = los_r.ris_steering().conj() * los_t.ris_steering()
    return RisConfig(sign_align(b).phi)


def configure_gain_svd(bundle_r: SvdBundle, bundle_t: SvdBundle) -> RisConfig:
    """Instantaneous-CSI variant: align on the principal singular vectors.

    A/B diagnostic against configure_gain_los; needs the full SVDs, so it
    is not the CSI-light production path.
    """
    b = bundle_r.right[:, 0].conj() * bundle_t.left[:, 0]
    return RisConfig(sign_align(b).phi)


def gain_lower_bound(n_ris: int, n_t: int, n_r: int,
                     k_t: float, k_r: float) -> float:
    """Asymptotic lower bound 0.25 * K-weights * n_ris^2 * n_t * n_r.

    k_t and k_r are linear K-factors; each contributes K/(1+K), with
    +inf giving weight 1.  Rayleigh on either side makes the bound 0.
    """
    def w(k: float) -> float:
        if math.isinf(k):
            return 1.0
        if math.isnan(k) or k < 0:
            raise ValueError("k factors must be non-negative")
        return k / (1.0 + k)

    return 0.25 * w(k_t) * w(k_r) * float(n_ris) ** 2 * n_t * n_r


def evaluate_gain(h_r_herm: np.ndarray, h_t: np.ndarray, phi: RisConfig,
                  lower_bound: float) -> GainReport:
    """Assemble a GainReport for a configured instance."""
    g = channel_gain(cascaded_channel(h_r_herm, phi, h_t))
    if lower_bound > 0 and g > 0:
        ratio_db = 10.0 * math.log10(g / lower_bound)
    else:
        ratio_db = math.inf
    return GainReport(phi, g, lower_bound, ratio_db)
