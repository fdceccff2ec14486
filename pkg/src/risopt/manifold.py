"""Riemannian ascent over the unit-modulus circle manifold.

The benchmark optimizer: relax the 1-bit constraint to |phi_n| = 1,
ascend the chosen objective along the Riemannian gradient with a
retraction back to the circle, then quantize the result to {+1, -1}.
Gradients use the convention g = 2 * df/d(conj phi), so the first-order
change of the objective is Re <g, dphi> and the finite-difference vector
(d/dRe + j d/dIm) reproduces g entrywise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import RisConfig
from .spectral import svd_bundle

_LN2 = math.log(2.0)

OBJECTIVES = ("gain", "capacity_exact", "capacity_surrogate")


@dataclass(frozen=True)
class RmoSettings:
    """Optimizer knobs; iteration and step limits define the benchmark cost."""

    objective: str = "gain"
    max_iters: int = 500
    step_rule: str = "backtracking"
    initial_step: float = 1.0
    gradient_tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")
        if self.step_rule not in ("fixed", "backtracking"):
            raise ValueError("step_rule must be 'fixed' or 'backtracking'")
        if self.max_iters < 1 or self.initial_step <= 0 or self.gradient_tolerance <= 0:
            raise ValueError("numeric settings must be positive")


@dataclass(frozen=True)
class RmoResult:
    """Continuous iterate, objective trace of accepted steps, and exit state."""

    phi: np.ndarray
    objective_trace: np.ndarray
    iterations: int
    converged: bool
    final_grad_norm: float
    stop_reason: str


def _closures(objective: str, h_r_herm: np.ndarray, h_t: np.ndarray,
              snr: float | None, n_t: int):
    """Value and Euclidean-gradient callables on the unconstrained embedding."""
    a = np.asarray(h_r_herm, dtype=complex)
    t = np.asarray(h_t, dtype=complex)
    if objective == "gain":
        def value(phi):
            g_mat = a @ (phi[:, None] * t)
            return float(np.sum(np.abs(g_mat) ** 2))

        def grad(phi):
            g_mat = a @ (phi[:, None] * t)
            return 2.0 * np.sum((a.conj().T @ g_mat) * t.conj(), axis=1)

        return value, grad

    if snr is None or snr <= 0:
        raise ValueError("capacity objectives need a positive linear snr")
    rho = snr / n_t

    if objective == "capacity_exact":
        eye = np.eye(a.shape[0])

        def value(phi):
            g_mat = a @ (phi[:, None] * t)
            s = np.linalg.svd(g_mat, compute_uv=False)
            return float(np.sum(np.log1p(rho * s ** 2)) / _LN2)

        def grad(phi):
            g_mat = a @ (phi[:, None] * t)
            m = eye + rho * (g_mat @ g_mat.conj().T)
            x = np.linalg.solve(m, g_mat)
            return (2.0 * rho / _LN2) * np.sum((a.conj().T @ x) * t.conj(), axis=1)

        return value, grad

    # capacity_surrogate: per-stream rank-1 quadratics through the SVDs
    bundle_r = svd_bundle(a)
    bundle_t = svd_bundle(t)
    nmin = min(bundle_r.singular_values.size, bundle_t.singular_values.size)
    cols = bundle_r.right[:, :nmin].conj() * bundle_t.left[:, :nmin]
    w = (bundle_r.singular_values[:nmin] ** 2) * (bundle_t.singular_values[:nmin] ** 2)

    def value(phi):
        z = cols.T @ phi
        return float(np.sum(np.log1p(rho * w * np.abs(z) ** 2)) / _LN2)

    def grad(phi):
        z = cols.T @ phi
        coef = (2.0 * rho / _LN2) * w / (1.0 + rho * w * np.abs(z) ** 2)
        return cols.conj() @ (coef * z)

    return value, grad


def euclidean_gradient(objective: str, h_r_herm: np.ndarray, h_t: np.ndarray,
                       phi, snr: float | None = None,
                       n_t: int | None = None) -> np.ndarray:
    """Euclidean gradient g = 2 df/d(conj phi) of the chosen objective."""
    phi = np.asarray(phi, dtype=complex).ravel()
    h_t = np.asarray(h_t)
    if n_t is None:
        n_t = h_t.shape[1]
    _, grad = _closures(objective, h_r_herm, h_t, snr, n_t)
    g = grad(phi)
    if not np.all(np.isfinite(g.real)) or not np.all(np.isfinite(g.imag)):
        raise FloatingPointError("non-finite gradient")
    return g


def riemannian_gradient(g: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Project g onto the tangent space: xi = g - Re{g conj(phi)} phi."""
    radial = g.real * phi.real + g.imag * phi.imag
    return g - radial * phi


def _retract(z: np.ndarray) -> np.ndarray:
    # tangency makes |phi + mu*xi| >= 1 entrywise, so no zero guard needed
    return z / np.abs(z)


def rmo_optimize(h_r_herm: np.ndarray, h_t: np.ndarray, settings: RmoSettings,
                 init=None, snr: float | None = None,
                 n_t: int | None = None) -> RmoResult:
    """Gradient ascent on the circle manifold.

    Starts from all-ones unless init (unit modulus) is given.  With the
    backtracking rule (Armijo factor 0.5, sufficient increase 1e-4, the
    directional derivative along xi is ||xi||^2) every accepted step
    raises the objective; the first trial step is sized so the largest
    element moves by initial_step radians, later ones start at twice the
    last accepted step.  Stops on gradient norm below tolerance, an
    exhausted line search, or max_iters.
    """
    h_r_herm = np.asarray(h_r_herm, dtype=complex)
    h_t = np.asarray(h_t, dtype=complex)
    n_s = h_t.shape[0]
    if n_t is None:
        n_t = h_t.shape[1]
    if init is None:
        phi = np.ones(n_s, dtype=complex)
    else:
        phi = np.asarray(init, dtype=complex).ravel().copy()
        if phi.size != n_s or np.max(np.abs(np.abs(phi) - 1.0)) > 1e-9:
            raise ValueError("init must be unit modulus of matching length")
    value, grad = _closures(settings.objective, h_r_herm, h_t, snr, n_t)

    f = value(phi)
    trace = [f]
    last_step = None
    iterations = 0
    converged = False
    stop_reason = "max_iters"
    grad_norm = math.inf
    for _ in range(settings.max_iters):
        g = grad(phi)
        if not np.all(np.isfinite(g.real)) or not np.all(np.isfinite(g.imag)):
            raise FloatingPointError(
                f"non-finite gradient at iteration {iterations}")
        xi = riemannian_gradient(g, phi)
        sq_norm = float(np.sum(xi.real ** 2 + xi.imag ** 2))
        grad_norm = math.sqrt(sq_norm)
        if grad_norm < settings.gradient_tolerance:
            converged = True
            stop_reason = "gradient_tolerance"
            break
        if settings.step_rule == "fixed":
            phi = _retract(phi + settings.initial_step * xi)
            f = value(phi)
            trace.append(f)
            iterations += 1
            continue
        if last_step is None:
            mu = settings.initial_step / max(float(np.max(np.abs(xi))), 1e-300)
        else:
            mu = 2.0 * last_step
        accepted = False
        for _ in range(60):
            cand = _retract(phi + mu * xi)
            f_new = value(cand)
            if f_new >= f + 1e-4 * mu * sq_norm:
                accepted = True
                break
            mu *= 0.5
        if not accepted:
            stop_reason = "line_search"
            break
        last_step = mu
        phi = cand
        f = f_new
        trace.append(f)
        iterations += 1
    return RmoResult(phi, np.asarray(trace), iterations, converged,
                     grad_norm, stop_reason)


def quantize_1bit(phi_continuous) -> RisConfig:
    """Nearest point of {+1, -1} per element: +1 iff Re >= 0 (ties to +1)."""
    phi = np.asarray(phi_continuous, dtype=complex).ravel()
    mags = np.abs(phi)
    if phi.size == 0 or np.max(np.abs(mags - 1.0)) > 1e-6:
        raise ValueError("input must be unit modulus")
    states = np.where(phi.real >= 0.0, 1.0, -1.0)
    return RisConfig(states, phi / mags)
