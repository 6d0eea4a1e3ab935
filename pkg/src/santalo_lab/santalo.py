"""Santalo point solver and the balanced points of the half-volume ratio.

The Santalo point S(K) is the unique interior minimizer of z -> |K^{*z}|;
it is characterized by the polar's centroid sitting at the polarity origin.
The solver follows the negative polar-centroid direction (which is a descent
direction: the objective's gradient equals (d+1)|K^{*z}| * centroid(K^{*z}))
with a backtracking line search and a step cap that keeps the iterate well
inside the body, where the objective is finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from . import polarity as pol
from .errors import BracketFailure
from .geometry import VPolytope

TOL_SANT = 1e-8
TOL_RATIO = 1e-8
MAX_ITERATIONS = 500


@dataclass
class SantaloResult:
    point: np.ndarray
    polar_volume: float
    centroid_residual: float
    iterations: int
    converged: bool


def _residual(pb: pol.PolarBody) -> float:
    """Polar-centroid norm normalized by the polar diameter (scale-free)."""
    return float(np.linalg.norm(pb.centroid())) / geo.diameter(pb.polar)


def santalo_point(K: VPolytope, tol_sant: float = TOL_SANT,
                  max_iterations: int = MAX_ITERATIONS,
                  start=None, use_fd_gradient: bool = False) -> SantaloResult:
    """Minimize z -> |K^{*z}| over the interior of K.

    The descent runs on an affinely normalized copy of the body (unit
    moment covariance) and the result is polished in the original frame:
    the Santalo point is exactly affine-equivariant, and normalization
    keeps plain gradient descent well-conditioned on skewed bodies.
    Returns the best iterate with a non-converged flag when the iteration
    cap is reached.  `start` overrides the default Chebyshev-center seed
    (used for warm starts in sweeps).  `use_fd_gradient` replaces the
    polar-centroid step direction by a central finite-difference gradient
    (cross-checking aid; h = 1e-6 * inradius).
    """
    _, c, cov = geo.second_moment(K)
    # eigendecomposition is PSD-safe; floor guards near-flat numerics
    evals, evecs = np.linalg.eigh(cov)
    evals = np.maximum(evals, 1e-14 * float(np.max(evals)))
    L = evecs * np.sqrt(evals)  # cov = L L^T
    L_inv = (evecs / np.sqrt(evals)).T
    kappa = float(math.sqrt(np.max(evals) / np.min(evals)))
    Kn = geo.VPolytope((K.vertices - c) @ L_inv.T)
    start_n = None if start is None else L_inv @ (geo.as_vector(start) - c)
    res_n = _descend(Kn, tol_sant / max(1.0, kappa), max_iterations, start_n,
                     use_fd_gradient)
    z = L @ res_n.point + c
    polish_budget = max(50, max_iterations - res_n.iterations)
    res = _descend(K, tol_sant, polish_budget, z, use_fd_gradient)
    return SantaloResult(res.point, res.polar_volume, res.centroid_residual,
                         res_n.iterations + res.iterations,
                         res.converged)


def _descend(K: VPolytope, tol_sant: float, max_iterations: int,
             start, use_fd_gradient: bool) -> SantaloResult:
    h = K.halfspaces
    z = None
    if start is not None:
        z = geo.as_vector(start)
        if np.min(h.slack(z)) <= geo.TAU_GEOM * K.scale():
            z = None
    if z is None:
        z = geo.interior_point(K)
    inradius = float(np.min(h.slack(geo.interior_point(K)))) if use_fd_gradient else 0.0

    pb = pol.polar(K, z)
    f = pb.polar_volume
    step = 1.0
    iterations = 0
    while iterations < max_iterations:
        c = pb.centroid()
        res = _residual(pb)
        if res <= tol_sant:
            return SantaloResult(z, f, res, iterations, True)
        if use_fd_gradient:
            grad = _fd_gradient(K, z, 1e-6 * inradius)
            direction = -grad / ((K.dim + 1) * f)
        else:
            direction = -c
        iterations += 1
        # Cap the step so the iterate keeps facet slack >= 0.1 x current min.
        slack = h.slack(z)
        m = float(np.min(slack))
        along = h.normals @ direction
        with np.errstate(divide="ignore"):
            caps = (slack - 0.1 * m) / along
        caps = caps[along > 0]
        cap = float(np.min(caps)) if caps.size else math.inf
        t = min(step, cap)
        accepted = False
        for _ in range(60):
            z_new = z + t * direction
            try:
                pb_new = pol.polar(K, z_new)
            except pol.CenterNotInterior:
                t *= 0.5
                continue
            if pb_new.polar_volume < f:
                z, pb, f = z_new, pb_new, pb_new.polar_volume
                step = 1.5 * t
                accepted = True
                break
            t *= 0.5
        if not accepted:
            # Line search exhausted: the centroid residual is the verdict.
            break
    res = _residual(pb)
    return SantaloResult(z, f, res, iterations, res <= tol_sant)


def _fd_gradient(K: VPolytope, z: np.ndarray, h: float) -> np.ndarray:
    g = np.zeros_like(z)
    for i in range(z.size):
        e = np.zeros_like(z)
        e[i] = h
        g[i] = (pol.polar(K, z + e).polar_volume
                - pol.polar(K, z - e).polar_volume) / (2 * h)
    return g


def _log_ratio(K: VPolytope, C, v: float, axis: int) -> float:
    z = np.empty(K.dim)
    keep = [i for i in range(K.dim) if i != axis]
    z[keep] = C
    z[axis] = v
    hv = pol.half_volumes(K, z, axis=axis)
    if hv.diverged or hv.b_plus < pol.TAU_VOL:
        raise BracketFailure("half volume underflow at an interior probe")
    return math.log(hv.b_plus) - math.log(hv.b_minus)


def balanced_points(system, s: float, t: float, a: float, C,
                    tol_ratio: float = TOL_RATIO) -> tuple[float, float]:
    """Heights (a_s, a_t) with (a_s+a_t)/2 = a and equal half-volume ratios.

    Found by bisection on rho(v) = log lambda_s(v) - log lambda_t(2a - v)
    over its open definition interval; rho is negative at the left end and
    positive at the right end, so a sign change is guaranteed.  Bisection
    does not assume monotonicity.  Raises BracketFailure when no sign change
    is found after endpoint refinement (upstream tolerance breach).
    """
    from .shadow import body_at  # local import, module cycle

    if not s < t:
        raise ValueError("need s < t")
    C = geo.as_vector(C)
    axis = _system_axis(system)
    K_s = body_at(system, s)
    K_t = body_at(system, t)
    K_mid = body_at(system, (s + t) / 2.0)
    alpha_s, beta_s = geo.chord(K_s, C, axis=axis)
    alpha_t, beta_t = geo.chord(K_t, C, axis=axis)
    alpha_m, beta_m = geo.chord(K_mid, C, axis=axis)
    span = max(beta_m - alpha_m, geo.TAU_GEOM)
    if not (alpha_m + geo.TAU_GEOM * span < a < beta_m - geo.TAU_GEOM * span):
        raise ValueError("a must be strictly inside the mid-body chord")
    lo = max(alpha_s, 2 * a - beta_t)
    hi = min(beta_s, 2 * a - alpha_t)
    if hi - lo <= geo.TAU_GEOM * span:
        raise BracketFailure("empty definition interval for rho")

    def rho(v: float) -> float:
        return (_log_ratio(K_s, C, v, axis)
                - _log_ratio(K_t, C, 2 * a - v, axis))

    width = hi - lo
    v_lo = v_hi = None
    delta = 1e-3
    while delta > 1e-13:
        lo_probe, hi_probe = lo + delta * width, hi - delta * width
        try:
            r_lo, r_hi = rho(lo_probe), rho(hi_probe)
        except BracketFailure:
            delta *= 10
            if delta >= 0.5:
                raise
            continue
        if r_lo < 0 < r_hi:
            v_lo, v_hi = lo_probe, hi_probe
            break
        if r_lo >= 0 and r_hi > 0 or r_lo < 0 and r_hi <= 0:
            delta *= 0.1
            continue
        raise BracketFailure("rho has inverted signs at the interval ends")
    if v_lo is None:
        raise BracketFailure("no sign change after endpoint refinement")

    for _ in range(200):
        v = 0.5 * (v_lo + v_hi)
        lam_s = _log_ratio(K_s, C, v, axis)
        lam_t = _log_ratio(K_t, C, 2 * a - v, axis)
        if abs(lam_s - lam_t) <= tol_ratio:
            return v, 2 * a - v
        if lam_s - lam_t < 0:
            v_lo = v
        else:
            v_hi = v
        if v_hi - v_lo <= 1e-16 * max(1.0, abs(v_lo), abs(v_hi)):
            break
    v = 0.5 * (v_lo + v_hi)
    return v, 2 * a - v


def _system_axis(system) -> int:
    """Coordinate axis of the system's direction; raises if it is skew."""
    theta = system.direction
    axis = int(np.argmax(np.abs(theta)))
    if abs(abs(theta[axis]) - 1.0) > 1e-9:
        raise ValueError("half-volume machinery needs an axis-aligned direction")
    return axis
