"""Capacity evaluation and waterfilling-style RIS element allocation.

The end-to-end capacity with identity precoding is log2 det(I + snr/n_t *
H H^H).  Through the channel SVDs the cascade is asymptotically
diagonalized by aligning disjoint groups of RIS elements to one stream
each, which turns the capacity into a separable surrogate over the
per-stream fractions p_i under the coupling constraint sum(sqrt(p_i)) = 1.
That non-convex program is solved by successive convex approximation:
linearize the constraint at the current iterate, solve the resulting
waterfilling subproblem in closed form, restore feasibility by rescaling.
Each step can only raise the surrogate, so the objective trace is
monotone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .alignment import phase_align, sign_align
from .channels import RisConfig, cascaded_channel
from .spectral import AsymptoticSpectrum, SvdBundle, svd_bundle

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class AllocationPlan:
    """Per-stream RIS element allocation.

    fractions are the p_i of the continuous program; counts and
    index_sets are filled by round_allocation and stay None until then.
    objective_trace records the surrogate value at the initial point and
    after every SCA step; converged is False when the iteration budget
    ran out before the objective settled (the last iterate is still
    returned, the flag is the caller's signal).
    """

    fractions: np.ndarray
    counts: np.ndarray | None
    index_sets: tuple | None
    water_level: float
    iterations_used: int
    objective_trace: np.ndarray
    converged: bool


@dataclass(frozen=True)
class CapacityReport:
    """One configured instance: RIS states plus the capacity metrics."""

    phi: RisConfig
    capacity_exact: float
    capacity_diag: float
    capacity_lb: float
    offdiag_ratio: float


def capacity_exact(h_tilde: np.ndarray, snr: float, n_t: int | None = None) -> float:
    """log2 det(I + snr/n_t * H H^H) in bits, via singular values."""
    h = np.asarray(h_tilde, dtype=complex)
    if not np.all(np.isfinite(h.real)) or not np.all(np.isfinite(h.imag)):
        raise ValueError("non-finite channel")
    if not snr > 0:
        raise ValueError("snr must be positive (linear)")
    if n_t is None:
        n_t = h.shape[1]
    s = np.linalg.svd(h, compute_uv=False)
    return float(np.sum(np.log1p((snr / n_t) * s ** 2)) / _LN2)


def effective_channel(bundle_r: SvdBundle, phi, bundle_t: SvdBundle) -> np.ndarray:
    """D_R V_R^H diag(phi) U_T D_T, sharing nonzero singular values with
    the cascade.

    bundle_r is the SVD of the receive-side channel in its n_r x n_s
    orientation (right vectors live on the RIS side); bundle_t is the
    SVD of the n_s x n_t transmit-side channel (left vectors on the RIS
    side).
    """
    v = phi.states if isinstance(phi, RisConfig) else np.asarray(phi).ravel()
    d_r = bundle_r.singular_values
    d_t = bundle_t.singular_values
    core = bundle_r.right.conj().T @ (v[:, None] * bundle_t.left)
    return d_r[:, None] * core * d_t[None, :]


def _stream_vectors(bundle_r: SvdBundle, bundle_t: SvdBundle, n_streams: int) -> np.ndarray:
    """Columns conj(v_R,i) * u_T,i for the first n_streams streams."""
    return bundle_r.right[:, :n_streams].conj() * bundle_t.left[:, :n_streams]


def capacity_diag_approx(bundle_r: SvdBundle, bundle_t: SvdBundle, phi,
                         snr: float, n_t: int | None = None) -> float:
    """Diagonal surrogate: per-stream terms only, in bits."""
    v = phi.states if isinstance(phi, RisConfig) else np.asarray(phi).ravel()
    if n_t is None:
        n_t = bundle_t.singular_values.size
    nmin = min(bundle_r.singular_values.size, bundle_t.singular_values.size)
    cols = _stream_vectors(bundle_r, bundle_t, nmin)
    z = cols.T @ v
    w = (bundle_r.singular_values[:nmin] ** 2) * (bundle_t.singular_values[:nmin] ** 2)
    return float(np.sum(np.log1p((snr / n_t) * w * np.abs(z) ** 2)) / _LN2)


def water_level_solve(gains, weights, budget: float) -> float:
    """Solve sum_i weights_i * max(1/(eta*weights_i) - 1/gains_i, 0) = budget.

    Exact active-set solve: in the variable s = 1/eta the residual is
    piecewise linear and increasing with breakpoints at weights_i/gains_i,
    so sorting the breakpoints gives the active segment in closed form.
    """
    a = np.asarray(gains, dtype=float)
    c = np.asarray(weights, dtype=float)
    if budget <= 0:
        raise ValueError("budget must be positive")
    if np.any(c <= 0) or np.any(a <= 0):
        raise ValueError("gains and weights must be positive")
    cut = c / a
    cut_sorted = np.sort(cut)
    prefix = np.cumsum(cut_sorted)
    n = cut_sorted.size
    s = (budget + prefix[-1]) / n
    for m in range(1, n):
        cand = (budget + prefix[m - 1]) / m
        if cut_sorted[m - 1] <= cand <= cut_sorted[m]:
            s = cand
            break
    return 1.0 / s


def allocate_sca(singvals_r, singvals_t, snr: float, n_t: int,
                 epsilon: float = 1e-6, max_iters: int = 200,
                 init=None) -> AllocationPlan:
    """Per-stream fraction allocation by SCA generalized waterfilling.

    singvals are the descending singular values of the two channels; the
    stream gains are a_i = 0.25 * snr * d_R,i^2 * d_T,i^2 / n_t.  The
    constraint sum(sqrt(p_i)) = 1 is non-convex and both single-stream
    corners of a two-stream instance are local maxima, so with init=None
    the iteration is run from the uniform point, every single-stream
    corner, and a gain-proportional point, and the best endpoint wins.
    Pass init to force one start.  Streams driven to zero are frozen
    (the linearization is undefined at p = 0) and cannot re-enter.
    Each start stops when the objective moves by less than epsilon bits;
    converged=False means its iteration budget ran out first.
    """
    d_r = np.asarray(singvals_r, dtype=float)
    d_t = np.asarray(singvals_t, dtype=float)
    if not snr > 0 or epsilon <= 0 or max_iters < 1:
        raise ValueError("snr, epsilon, max_iters must be positive")
    nmin = min(d_r.size, d_t.size)
    if nmin < 1:
        raise ValueError("need at least one stream")
    a = 0.25 * snr * (d_r[:nmin] ** 2) * (d_t[:nmin] ** 2) / n_t
    if not np.any(a > 0):
        raise ValueError("no stream has positive gain")

    if init is not None:
        p0 = np.array(init, dtype=float)
        if p0.size != nmin or np.any(p0 < 0) or not p0.any():
            raise ValueError("init must be nmin non-negative fractions")
        starts = [p0]
    else:
        starts = [np.full(nmin, 1.0 / nmin ** 2)]
        for i in np.flatnonzero(a > 0):
            corner = np.zeros(nmin)
            corner[i] = 1.0
            starts.append(corner)
        if nmin > 1:
            w = np.clip(a, 0.0, None)
            starts.append((w / w.sum()) ** 2)
    best = None
    for p0 in starts:
        plan = _sca_from(a, p0, epsilon, max_iters)
        if plan is None:
            continue
        if best is None or plan.objective_trace[-1] > best.objective_trace[-1]:
            best = plan
    if best is None:
        raise ValueError("no feasible start: every active stream has zero gain")
    return best


def _sca_from(a: np.ndarray, p0: np.ndarray, epsilon: float,
              max_iters: int) -> AllocationPlan | None:
    """One SCA run from p0; None when masking dead streams empties it."""
    p = p0.copy()
    p[a <= 0] = 0.0                       # dead streams never get elements
    root_sum = np.sum(np.sqrt(p))
    if root_sum == 0.0:
        return None
    p = p / root_sum ** 2

    def objective(q):
        return float(np.sum(np.log1p(a * q)) / _LN2)

    trace = [objective(p)]
    eta = math.nan
    converged = False
    iters = 0
    for _ in range(max_iters):
        active = p > 0
        sq = np.sqrt(p[active])
        c = 0.5 / sq
        gamma = 1.0 - float(np.sum(sq - p[active] * c))   # = 1 - sum(sq)/2
        eta = water_level_solve(a[active], c, gamma)
        s_level = 1.0 / eta
        p_next = np.zeros_like(p)
        p_next[active] = np.maximum(s_level - c / a[active], 0.0) / c
        root_sum = np.sum(np.sqrt(p_next))
        p_next /= root_sum ** 2
        iters += 1
        trace.append(objective(p_next))
        delta = trace[-1] - trace[-2]
        p = p_next
        if abs(delta) < epsilon:
            converged = True
            break
    return AllocationPlan(fractions=p, counts=None, index_sets=None,
                          water_level=float(eta), iterations_used=iters,
                          objective_trace=np.asarray(trace), converged=converged)


def round_allocation(plan: AllocationPlan, n_ris: int,
                     arrangement: str = "contiguous",
                     rng: np.random.Generator | None = None) -> AllocationPlan:
    """Fill integer counts and disjoint index sets on a plan.

    Counts come from largest-remainder rounding of sqrt(p_i) * n_ris
    (ties to the lower stream index); zero-fraction streams get zero
    elements.  Arrangements: contiguous blocks, interleaved round-robin
    deal, or seeded-random permutation blocks (pass the rng; a fixed
    default_rng(0) is used otherwise so outputs stay reproducible).
    """
    w = np.sqrt(np.clip(plan.fractions, 0.0, None))
    targets = w * n_ris
    counts = np.floor(targets).astype(np.int64)
    leftover = int(n_ris - counts.sum())
    if leftover > 0:
        rem = targets - counts
        order = np.lexsort((np.arange(rem.size), -rem))
        counts[order[:leftover]] += 1

    k = counts.size
    if arrangement == "contiguous":
        edges = np.concatenate(([0], np.cumsum(counts)))
        sets = tuple(np.arange(edges[i], edges[i + 1]) for i in range(k))
    elif arrangement == "interleaved":
        quotas = counts.copy()
        lists: list[list[int]] = [[] for _ in range(k)]
        for pos in range(n_ris):
            j = pos % k
            for step in range(k):
                cand = (j + step) % k
                if quotas[cand] > 0:
                    lists[cand].append(pos)
                    quotas[cand] -= 1
                    break
        sets = tuple(np.asarray(lst, dtype=np.int64) for lst in lists)
    elif arrangement in ("random", "seeded-random"):
        gen = rng if rng is not None else np.random.default_rng(0)
        perm = gen.permutation(n_ris)
        edges = np.concatenate(([0], np.cumsum(counts)))
        sets = tuple(np.sort(perm[edges[i]:edges[i + 1]]) for i in range(k))
    else:
        raise ValueError(f"unknown arrangement {arrangement!r}")
    return replace(plan, counts=counts, index_sets=sets)


def configure_capacity(bundle_r: SvdBundle, bundle_t: SvdBundle,
                       plan: AllocationPlan, continuous: bool = False) -> RisConfig:
    """Per-stream sign alignment on the plan's index sets.

    Stream i's elements are aligned to conj(v_R,i) * u_T,i restricted to
    its index set.  With continuous=True the unit-modulus phase-aligned
    vector is built as well (states are its 1-bit quantization).
    """
    if plan.counts is None or plan.index_sets is None:
        raise ValueError("plan has no counts/index sets; round it first")
    n_ris = bundle_r.right.shape[0]
    states = np.ones(n_ris)
    cont = np.ones(n_ris, dtype=complex) if continuous else None
    nmin = len(plan.index_sets)
    cols = _stream_vectors(bundle_r, bundle_t, nmin)
    for i, idx in enumerate(plan.index_sets):
        if idx.size == 0:
            continue
        b = cols[:, i]
        states[idx] = sign_align(b, mask=idx).phi
        if continuous:
            cont[idx] = phase_align(b, mask=idx)
            states[idx] = np.where(cont[idx].real >= 0.0, 1.0, -1.0)
    return RisConfig(states, cont)


def capacity_lower_bound(fractions, side_r, side_t, snr: float,
                         n_t: int | None = None) -> float:
    """Deterministic bound sum_i log2(1 + 0.25*snr/n_t * d_R,i^2 d_T,i^2 p_i).

    side_r / side_t are either SvdBundle (instantaneous squared singular
    values) or AsymptoticSpectrum (statistical mode, no instantaneous
    CSI needed).
    """
    def squared(side):
        if isinstance(side, AsymptoticSpectrum):
            return side.predicted_sq_singular_values
        if isinstance(side, SvdBundle):
            return side.singular_values ** 2
        raise TypeError("side must be SvdBundle or AsymptoticSpectrum")

    sq_r = squared(side_r)
    sq_t = squared(side_t)
    if n_t is None:
        n_t = side_t.dims[1] if isinstance(side_t, AsymptoticSpectrum) \
            else side_t.singular_values.size
    p = np.asarray(fractions, dtype=float)
    nmin = min(p.size, sq_r.size, sq_t.size)
    terms = 0.25 * (snr / n_t) * sq_r[:nmin] * sq_t[:nmin] * p[:nmin]
    return float(np.sum(np.log1p(terms)) / _LN2)


def offdiag_ratio(h_eff: np.ndarray) -> float:
    """Off-diagonal energy fraction of the effective channel, in [0, 1]."""
    h = np.asarray(h_eff)
    total = float(np.sum(np.abs(h) ** 2))
    if total == 0.0:
        return 0.0
    diag = float(np.sum(np.abs(np.diagonal(h)) ** 2))
    return (total - diag) / total


def run_wsa(h_r_herm: np.ndarray, h_t: np.ndarray, snr: float,
            n_t: int | None = None, *, epsilon: float = 1e-6,
            max_iters: int = 200, arrangement: str = "contiguous",
            rng: np.random.Generator | None = None,
            spectra: tuple[AsymptoticSpectrum, AsymptoticSpectrum] | None = None,
            continuous: bool = False) -> tuple[CapacityReport, AllocationPlan]:
    """Full waterfilling-SA pipeline on one channel pair.

    SVD both channels, allocate fractions (from the asymptotic spectra
    when given, else from the instantaneous singular values), round to
    element counts, align each stream, and score the configuration.
    Returns the report plus the completed plan.
    """
    h_r_herm = np.asarray(h_r_herm, dtype=complex)
    h_t = np.asarray(h_t, dtype=complex)
    if n_t is None:
        n_t = h_t.shape[1]
    bundle_r = svd_bundle(h_r_herm)
    bundle_t = svd_bundle(h_t)
    if spectra is not None:
        side_r, side_t = spectra
        sv_r = np.sqrt(side_r.predicted_sq_singular_values)
        sv_t = np.sqrt(side_t.predicted_sq_singular_values)
    else:
        side_r, side_t = bundle_r, bundle_t
        sv_r = bundle_r.singular_values
        sv_t = bundle_t.singular_values
    plan = allocate_sca(sv_r, sv_t, snr, n_t, epsilon=epsilon,
                        max_iters=max_iters)
    plan = round_allocation(plan, h_t.shape[0], arrangement, rng)
    phi = configure_capacity(bundle_r, bundle_t, plan, continuous=continuous)
    cap = capacity_exact(cascaded_channel(h_r_herm, phi, h_t), snr, n_t)
    cap_diag = capacity_diag_approx(bundle_r, bundle_t, phi, snr, n_t)
    cap_lb = capacity_lower_bound(plan.fractions, side_r, side_t, snr, n_t)
    ratio = offdiag_ratio(effective_channel(bundle_r, phi, bundle_t))
    return CapacityReport(phi, cap, cap_diag, cap_lb, ratio), plan
