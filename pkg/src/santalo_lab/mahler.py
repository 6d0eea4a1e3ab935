"""Volume-product bounds for polytopes with few vertices.

The case analysis for polytopes with d+1, d+2 or d+3 vertices (pyramid,
simplicial, double pyramid, skew and parallel apex-pair configurations)
comes with an explicit volume-preserving (or volume-affine) shadow system
per case whose endpoint bodies are strictly simpler.  Sweeping the volume
product along those moves and checking endpoint minimality turns the
few-vertex lower bound into a falsifiable test battery.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import geometry as geo
from . import polarity as pol
from . import santalo as san
from . import shadow as sh
from .errors import DegenerateInput, GeometryInconsistent, NotInCone, TooManyVertices
from .geometry import Hyperplane, VPolytope


def simplex_bound(d: int) -> float:
    """(d+1)^{d+1} / (d!)^2, the conjectured minimum of the volume product."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return (d + 1) ** (d + 1) / math.factorial(d) ** 2


class CaseLabel(Enum):
    SIMPLEX = "SIMPLEX"
    PYRAMID_Ia = "PYRAMID_Ia"
    SIMPLICIAL_Ib = "SIMPLICIAL_Ib"
    PYRAMID_IIa = "PYRAMID_IIa"
    DOUBLE_PYR_IIb1 = "DOUBLE_PYR_IIb1"
    SKEW_IIb2 = "SKEW_IIb2"
    PARALLEL_IIb3 = "PARALLEL_IIb3"
    SIMPLICIAL_IIc = "SIMPLICIAL_IIc"


@dataclass
class _Config:
    """Vertex configuration backing a classification decision."""

    label: CaseLabel
    margin_ok: bool
    coplanar: tuple[int, ...] = ()
    off: tuple[int, ...] = ()
    hyperplane: Hyperplane | None = None
    xi: tuple[float, float] = (0.0, 0.0)


def _hyperplane_of(points: np.ndarray) -> tuple[np.ndarray, float] | None:
    """Unit normal and offset through d points; None if nearly dependent."""
    if points.shape[0] != points.shape[1]:
        raise ValueError("need exactly d points")
    center = points.mean(axis=0)
    _, s, vt = np.linalg.svd(points - center, full_matrices=True)
    scale = max(1.0, float(np.max(np.abs(points))))
    if s[-2] <= 1e-7 * scale:  # affinely dependent subset: ambiguous normal
        return None
    normal = vt[-1]
    return normal, float(normal @ center)


def _configuration(K: VPolytope) -> _Config:
    verts = K.vertices
    n, d = verts.shape
    if n < d + 1:
        raise DegenerateInput("fewer than d+1 vertices")
    if n > d + 3:
        raise TooManyVertices(f"{n} vertices exceeds d+3 = {d + 3}")
    scale = K.scale()
    tau_on = geo.TAU_GEOM * max(1.0, scale)
    if n == d + 1:
        return _Config(CaseLabel.SIMPLEX, margin_ok=True)

    best_count = 0
    best_on: tuple[int, ...] = ()
    best_plane: tuple[np.ndarray, float] | None = None
    margin_ok = True
    for idx in itertools.combinations(range(n), d):
        plane = _hyperplane_of(verts[list(idx)])
        if plane is None:
            margin_ok = False
            continue
        normal, offset = plane
        dist = np.abs(verts @ normal - offset)
        on = dist <= tau_on
        if np.any((dist > tau_on) & (dist <= 10 * tau_on)):
            margin_ok = False
        count = int(np.sum(on))
        if count > best_count:
            best_count = count
            best_on = tuple(np.flatnonzero(on))
            best_plane = plane
    if best_plane is None:
        raise DegenerateInput("all defining subsets are affinely dependent")

    if n == d + 2:
        if best_count >= d + 1:
            return _Config(CaseLabel.PYRAMID_Ia, margin_ok,
                           coplanar=best_on,
                           off=tuple(i for i in range(n) if i not in best_on))
        return _Config(CaseLabel.SIMPLICIAL_Ib, margin_ok)

    # n == d + 3
    if best_count >= d + 2:
        return _Config(CaseLabel.PYRAMID_IIa, margin_ok,
                       coplanar=best_on,
                       off=tuple(i for i in range(n) if i not in best_on))
    if best_count == d:
        return _Config(CaseLabel.SIMPLICIAL_IIc, margin_ok)

    normal, offset = best_plane
    off = tuple(i for i in range(n) if i not in best_on)
    heights = verts[list(off)] @ normal - offset
    if heights[0] * heights[1] < 0:
        # opposite sides: orient so xi_1 < 0 < xi_2
        if heights[0] > 0:
            off = (off[1], off[0])
            heights = heights[::-1]
        label = CaseLabel.DOUBLE_PYR_IIb1
    else:
        if heights[0] < 0:  # flip normal so both heights positive
            normal, offset, heights = -normal, -offset, -heights
        if abs(heights[0] - heights[1]) <= tau_on:
            label = CaseLabel.PARALLEL_IIb3
        else:
            if abs(heights[0] - heights[1]) <= 10 * tau_on:
                margin_ok = False
            if heights[0] > heights[1]:  # order 0 < xi_1 < xi_2
                off = (off[1], off[0])
                heights = heights[::-1]
            label = CaseLabel.SKEW_IIb2
    return _Config(label, margin_ok, coplanar=best_on, off=off,
                   hyperplane=Hyperplane(normal, offset),
                   xi=(float(heights[0]), float(heights[1])))


def classify(K: VPolytope) -> CaseLabel:
    """Vertex-configuration label for a polytope with at most d+3 vertices."""
    return _configuration(K).label


# ---------------------------------------------------------------------------
# Pyramid factorization
# ---------------------------------------------------------------------------

@dataclass
class PyramidReport:
    pi_d: float
    pi_base: float
    factorization_error: float
    santalo_ratio: float
    ratio_error: float
    collinearity_residual: float


def embed_at_height(F: VPolytope, height: float = 0.0) -> np.ndarray:
    """Vertices of a (d-1)-polytope placed in the hyperplane x_d = height."""
    n = F.n_vertices
    return np.column_stack([F.vertices, np.full(n, height)])


def pyramid_factorization_check(F: VPolytope, apex) -> PyramidReport:
    """Compare the pyramid's volume product with its base-times-factor form.

    The base F is a (d-1)-polytope in its own coordinates and is embedded in
    the hyperplane x_d = 0; the apex must lie off that hyperplane.  Also
    measures the location of the pyramid's Santalo point on the segment from
    the base's Santalo point to the apex (the distance ratio is d+1).
    """
    apex = geo.as_vector(apex)
    d = F.dim + 1
    if apex.size != d:
        raise ValueError("apex dimension mismatch")
    if abs(apex[-1]) <= geo.TAU_GEOM * max(1.0, F.scale()):
        raise DegenerateInput("apex lies in the base hyperplane")
    K, _ = geo.convex_hull(np.vstack([embed_at_height(F), apex]))
    pi_d = pol.volume_product(K)
    pi_base = pol.volume_product(F)
    predicted = (d + 1) ** (d + 1) / d ** (d + 2) * pi_base
    z0 = np.append(san.santalo_point(F).point, 0.0)
    sk = san.santalo_point(K).point
    seg = apex - z0
    seg_len = float(np.linalg.norm(seg))
    u = seg / seg_len
    proj = float((sk - z0) @ u)
    perp = float(np.linalg.norm(sk - z0 - proj * u))
    ratio = seg_len / proj if proj > 0 else math.inf
    return PyramidReport(
        pi_d=pi_d,
        pi_base=pi_base,
        factorization_error=abs(pi_d - predicted) / predicted,
        santalo_ratio=ratio,
        ratio_error=abs(ratio - (d + 1)) / (d + 1),
        collinearity_residual=perp / seg_len,
    )


# ---------------------------------------------------------------------------
# Descent moves
# ---------------------------------------------------------------------------

@dataclass
class DescentMove:
    system: sh.ShadowSystem
    t_range: tuple[float, float]
    terminal_description: str
    label: CaseLabel
    volume_behavior: str = "constant"  # or "affine"
    expected_slope: float = 0.0


def _slide_move(K: VPolytope, label: CaseLabel) -> DescentMove:
    """Simplicial cases: slide vertex 0 in its volume-level hyperplane."""
    verts = K.vertices
    d = K.dim
    x0 = verts[0]
    rest = verts[1:]
    scale = K.scale()
    _, h_rest = geo.convex_hull(rest)

    def vol_with(y):
        P, _ = geo.convex_hull(np.vstack([rest, y]))
        return geo.volume(P)

    step = 1e-5 * max(1.0, scale)
    grad = np.zeros(d)
    for i in range(d):
        e = np.zeros(d)
        e[i] = step
        grad[i] = (vol_with(x0 + e) - vol_with(x0 - e)) / (2 * step)
    gn = np.linalg.norm(grad)
    if gn <= 1e-12:
        raise GeometryInconsistent("volume gradient vanished at the vertex")
    grad /= gn
    # deterministic direction in the level hyperplane of the volume gradient
    candidates = [np.eye(d)[i] for i in range(d)] + [x0 - rest.mean(axis=0)]
    best, best_norm = None, 0.0
    for c in candidates:
        p = c - (c @ grad) * grad
        npn = float(np.linalg.norm(p))
        if npn > best_norm:
            best, best_norm = p, npn
    if best_norm <= 1e-9 * max(1.0, scale):
        raise GeometryInconsistent("no direction available in the level plane")
    v = best / best_norm
    # Slide until the moving vertex first crosses any facet hyperplane of
    # conv(rest): the volume stays constant exactly while the vertex keeps
    # its side of every such hyperplane.
    along = h_rest.normals @ v
    dist = h_rest.offsets - h_rest.normals @ x0
    moving = np.abs(along) > 1e-12
    if np.any(np.abs(dist) <= geo.TAU_GEOM * max(1.0, scale)):
        raise GeometryInconsistent("vertex already on a non-adjacent facet plane")
    times = dist[moving] / along[moving]
    pos_t = times[times > 0]
    neg_t = times[times < 0]
    if pos_t.size == 0 or neg_t.size == 0:
        raise GeometryInconsistent("slide never reaches a facet hyperplane")
    tau2 = float(np.min(pos_t))
    tau1 = float(np.max(neg_t))
    speeds = np.zeros(len(verts))
    speeds[0] = 1.0
    system = sh.ShadowSystem(verts.copy(), speeds, v, (tau1, tau2))
    return DescentMove(system, (tau1, tau2),
                       "sliding vertex reaches a non-adjacent facet hyperplane; "
                       "endpoint bodies are pyramids or simplices", label)


def _frame_data(K: VPolytope, cfg: _Config):
    H = cfg.hyperplane
    coords = geo.to_frame(K.vertices, H)
    i1, i2 = cfg.off
    return H, coords, i1, i2


def _double_pyramid_move(K: VPolytope, cfg: _Config) -> DescentMove:
    H, coords, i1, i2 = _frame_data(K, cfg)
    xi1, xi2 = cfg.xi  # xi1 < 0 < xi2
    x1, x2 = K.vertices[i1], K.vertices[i2]
    v = x2 - x1
    vn = float(np.linalg.norm(v))
    speeds = np.zeros(K.n_vertices)
    speeds[i1] = speeds[i2] = vn
    tau1 = -xi2 / (xi2 - xi1)
    tau2 = -xi1 / (xi2 - xi1)
    if not tau1 < 0 < tau2:
        raise GeometryInconsistent("double-pyramid range does not straddle 0")
    system = sh.ShadowSystem(K.vertices.copy(), speeds, v / vn, (tau1, tau2))
    return DescentMove(system, (tau1, tau2),
                       "apex segment shifted along its line; endpoint bodies "
                       "are pyramids over the fixed base", cfg.label)


def _skew_move(K: VPolytope, cfg: _Config) -> DescentMove:
    H, coords, i1, i2 = _frame_data(K, cfg)
    xi1, xi2 = cfg.xi  # 0 < xi1 < xi2
    X = coords[:, :-1]
    F_idx = list(cfg.coplanar)
    X1, X2 = X[i1], X[i2]
    tau1 = -xi1 / (xi2 - xi1)
    X0 = X1 + tau1 * (X2 - X1)  # base-plane intersection of the apex line
    F_hull, _ = geo.convex_hull(X[F_idx])
    G_hull, _ = geo.convex_hull(np.vstack([X[F_idx], X0]))
    V2 = geo.volume(G_hull)
    V1 = V2 - geo.volume(F_hull)
    if V1 <= 0 or V2 - V1 <= 0:
        raise GeometryInconsistent("degenerate base areas in the skew move")
    x1, x2 = K.vertices[i1], K.vertices[i2]
    v = x2 - x1
    vn = float(np.linalg.norm(v))
    speeds = np.zeros(K.n_vertices)
    speeds[i1] = vn
    speeds[i2] = (V1 / V2) * vn
    tau2 = V2 / (V2 - V1)
    system = sh.ShadowSystem(K.vertices.copy(), speeds, v / vn, (tau1, tau2))
    return DescentMove(system, (tau1, tau2),
                       "apex pair slides along its joint line at speeds "
                       "(1, V1/V2); at one end the lower apex lands in the "
                       "base plane, at the other the apexes merge", cfg.label)


def _parallel_move(K: VPolytope, cfg: _Config, t_max: float = 1e3) -> DescentMove:
    H, coords, i1, i2 = _frame_data(K, cfg)
    xi = cfg.xi[0]
    d = K.dim
    X = coords[:, :-1]
    F_idx = list(cfg.coplanar)
    x1, x2 = K.vertices[i1], K.vertices[i2]
    v = x2 - x1
    vn = float(np.linalg.norm(v))
    w = (X[i2] - X[i1]) / np.linalg.norm(X[i2] - X[i1])
    # (d-2)-volume of the base's shadow orthogonal to the apex line
    _, _, vt = np.linalg.svd(w.reshape(1, -1))
    proj = X[F_idx] @ vt[1:].T
    if d == 3:
        pl = float(proj.max() - proj.min())
    else:
        pl_hull, _ = geo.convex_hull(proj)
        pl = geo.volume(pl_hull)
    slope = xi * vn * pl / (d * (d - 1))
    speeds = np.zeros(K.n_vertices)
    speeds[i2] = vn
    system = sh.ShadowSystem(K.vertices.copy(), speeds, v / vn, (-1.0, t_max))
    return DescentMove(system, (-1.0, t_max),
                       "single apex stretches along the line parallel to the "
                       "base plane; t=-1 merges the apexes (pyramid), large t "
                       "approximates the projective pyramid limit",
                       cfg.label, volume_behavior="affine", expected_slope=slope)


def descent_move(K: VPolytope, label: CaseLabel | None = None) -> DescentMove:
    """The volume-preserving (or volume-affine) move for a non-pyramid case."""
    cfg = _configuration(K)
    if label is not None and label != cfg.label:
        raise ValueError(f"label {label} does not match configuration {cfg.label}")
    label = cfg.label
    if label in (CaseLabel.SIMPLEX, CaseLabel.PYRAMID_Ia, CaseLabel.PYRAMID_IIa):
        raise ValueError(f"{label} has no descent move; pyramids factorize "
                         "and the simplex is terminal")
    if label in (CaseLabel.SIMPLICIAL_Ib, CaseLabel.SIMPLICIAL_IIc):
        return _slide_move(K, label)
    if label == CaseLabel.DOUBLE_PYR_IIb1:
        return _double_pyramid_move(K, cfg)
    if label == CaseLabel.SKEW_IIb2:
        return _skew_move(K, cfg)
    return _parallel_move(K, cfg)


@dataclass
class MonotonicityReport:
    ts: np.ndarray
    volume_products: np.ndarray
    volumes: np.ndarray
    endpoint_minimal: bool
    volume_behavior_ok: bool
    inverse_polar_convex: bool
    worst_interior_drop: float


def _renormalized_pi(K: VPolytope, direction: np.ndarray, squeeze: float) -> tuple[float, float]:
    """(volume product, raw volume); bodies squeezed along `direction`.

    The volume product is affine-invariant, so squeezing long bodies keeps
    the Santalo solve well-conditioned without changing the result.
    """
    d = K.dim
    if squeeze != 1.0:
        M = np.eye(d) - (1.0 - squeeze) * np.outer(direction, direction)
        Kn = geo.apply_affine(K, M)
    else:
        Kn = K
    return pol.volume_product(Kn), geo.volume(K)


def verify_descent_monotonicity(move: DescentMove, n_grid: int = 33,
                                tol_rel: float = 1e-7) -> MonotonicityReport:
    """Sweep the volume product over the move's range; check endpoint minimality.

    For volume-affine moves additionally checks the concave/convex quotient
    structure: |K_t| affine (within 1e-9 relative) and 1/|K_t^*| midpoint
    convex, which together forbid an interior strict minimum.
    """
    t1, t2 = move.t_range
    ts = np.linspace(t1, t2, n_grid)
    pis = np.empty(n_grid)
    vols = np.empty(n_grid)
    theta = move.system.direction
    for i, t in enumerate(ts):
        K = sh.body_at(move.system, t)
        squeeze = 1.0 / (1.0 + abs(t)) if move.volume_behavior == "affine" else 1.0
        pis[i], vols[i] = _renormalized_pi(K, theta, squeeze)
    scale = float(np.max(pis))
    endpoint_min = min(pis[0], pis[-1])
    worst_drop = float(endpoint_min - np.min(pis[1:-1]))
    endpoint_minimal = worst_drop <= tol_rel * scale

    if move.volume_behavior == "constant":
        dev = (np.max(vols) - np.min(vols)) / np.max(vols)
        volume_ok = dev <= 1e-9
    else:
        secant = vols[0] + (vols[-1] - vols[0]) * (ts - ts[0]) / (ts[-1] - ts[0])
        volume_ok = bool(np.max(np.abs(vols - secant)) <= 1e-9 * np.max(vols))

    inv = 1.0 / pis * vols  # = 1/|K_t^*| up to the constant-volume factor
    conv_viol = -math.inf
    for i in range(n_grid):
        for j in range(i + 2, n_grid, 2):
            m = (i + j) // 2
            conv_viol = max(conv_viol, inv[m] - 0.5 * (inv[i] + inv[j]))
    inverse_convex = conv_viol <= tol_rel * float(np.max(inv))
    return MonotonicityReport(ts, pis, vols, endpoint_minimal,
                              volume_ok, inverse_convex, worst_drop)


# ---------------------------------------------------------------------------
# Randomized campaigns
# ---------------------------------------------------------------------------

def _ball_points(rng, n: int, d: int) -> np.ndarray:
    x = rng.normal(size=(n, d))
    x /= np.linalg.norm(x, axis=1)[:, None]
    r = rng.uniform(size=(n, 1)) ** (1.0 / d)
    return x * r


def random_polytope(d: int, k: int, rng, max_tries: int = 2000) -> VPolytope:
    """k-vertex polytope from i.i.d. unit-ball points.

    Rejection-sampled until all k points are vertices and the classification
    margins are decisive (no near-coplanarity inside the ambiguous band).
    """
    for _ in range(max_tries):
        pts = _ball_points(rng, k, d)
        try:
            P, _ = geo.convex_hull(pts)
        except DegenerateInput:
            continue
        if P.n_vertices != k:
            continue
        if k <= d + 3:
            try:
                cfg = _configuration(P)
            except DegenerateInput:
                continue
            if not cfg.margin_ok:
                continue
        return P
    raise DegenerateInput(f"could not sample a clean {k}-vertex polytope in d={d}")


@dataclass
class CampaignReport:
    seed: int
    d: int
    k: int
    trials: int
    min_vp: float
    argmin_vertices: list
    violations: list = field(default_factory=list)
    excluded: int = 0
    bound: float = 0.0
    label_counts: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "seed": self.seed, "d": self.d, "k": self.k, "trials": self.trials,
            "min_vp": self.min_vp, "argmin_vertices": self.argmin_vertices,
            "violations": self.violations, "excluded": self.excluded,
            "bound": self.bound, "label_counts": self.label_counts,
        }


def _vp_with_condition(K: VPolytope) -> tuple[float, float]:
    res = san.santalo_point(K)
    pb = pol.polar(K, res.point)
    c = geo.centroid(pb.polar)
    R = float(np.max(np.linalg.norm(pb.polar.vertices - c, axis=1)))
    d = K.dim
    ball = math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0) * R ** d
    return geo.volume(K) * res.polar_volume, ball / res.polar_volume


def few_vertex_campaign(d: int, k: int, trials: int, seed: int = 0,
                     tol: float = 1e-6,
                     progress=None) -> CampaignReport:
    """Randomized few-vertex campaign against the simplex bound.

    Samples `trials` clean k-vertex polytopes, computes each volume product,
    and records any value below simplex_bound(d) - tol as a violation
    certificate.  Samples whose polar is conditioned worse than 1e8 are
    excluded from the minimum and counted separately.
    """
    if d > 4:
        raise ValueError("campaigns cover d in {2, 3, 4}")
    if k > d + 3:
        raise TooManyVertices("campaign vertex count exceeds d+3")
    rng = np.random.default_rng(seed)
    bound = simplex_bound(d)
    report = CampaignReport(seed, d, k, trials, math.inf, [], bound=bound)
    for i in range(trials):
        K = random_polytope(d, k, rng)
        label = classify(K).value
        report.label_counts[label] = report.label_counts.get(label, 0) + 1
        vp, cond = _vp_with_condition(K)
        if cond > 1e8:
            report.excluded += 1
            continue
        if vp < report.min_vp:
            report.min_vp = vp
            report.argmin_vertices = K.vertices.tolist()
        if vp < bound - tol:
            report.violations.append({"trial": i, "vp": vp,
                                      "vertices": K.vertices.tolist()})
        if progress is not None and (i + 1) % 100 == 0:
            progress(i + 1, report)
    return report


def polygon_minimality_campaign(trials: int, seed: int = 0, tol: float = 1e-6,
                        near: float = 1e-4, max_vertices: int = 12,
                        progress=None) -> CampaignReport:
    """2D minimality campaign: random polygons, 3..max_vertices vertices.

    Checks the triangle bound 27/4 and that near-minimal samples (within
    `near` of the bound) only occur for triangles.
    """
    rng = np.random.default_rng(seed)
    bound = simplex_bound(2)
    report = CampaignReport(seed, 2, 0, trials, math.inf, [], bound=bound)
    for i in range(trials):
        k = 3 + int(rng.integers(0, max_vertices - 2))
        K = random_polytope(2, k, rng) if k <= 5 else _random_polygon(rng, k)
        vp, cond = _vp_with_condition(K)
        if cond > 1e8:
            report.excluded += 1
            continue
        if vp < report.min_vp:
            report.min_vp = vp
            report.argmin_vertices = K.vertices.tolist()
        is_simplex = K.n_vertices == 3
        if vp < bound - tol:
            report.violations.append({"trial": i, "vp": vp, "kind": "below-bound",
                                      "vertices": K.vertices.tolist()})
        if vp <= bound + near and not is_simplex:
            report.violations.append({"trial": i, "vp": vp,
                                      "kind": "near-minimal-non-simplex",
                                      "vertices": K.vertices.tolist()})
        key = f"n={K.n_vertices}"
        report.label_counts[key] = report.label_counts.get(key, 0) + 1
        if progress is not None and (i + 1) % 100 == 0:
            progress(i + 1, report)
    return report


def _random_polygon(rng, k: int, max_tries: int = 200) -> VPolytope:
    """Exactly-k-vertex convex polygon from angle-sorted closed edge vectors."""
    for _ in range(max_tries):
        ang = rng.uniform(0.0, 2 * math.pi, size=k)
        lens = rng.uniform(0.3, 1.0, size=k)
        edges = lens[:, None] * np.column_stack([np.cos(ang), np.sin(ang)])
        edges -= edges.mean(axis=0)  # close the polygon
        order = np.argsort(np.arctan2(edges[:, 1], edges[:, 0]))
        verts = np.cumsum(edges[order], axis=0)
        try:
            P, _ = geo.convex_hull(verts)
        except DegenerateInput:
            continue
        if P.n_vertices == k:
            return P
    raise DegenerateInput(f"could not sample a {k}-gon")


def regular_polygon(n: int, radius: float = 1.0) -> VPolytope:
    ang = 2 * math.pi * np.arange(n) / n
    P, _ = geo.convex_hull(np.column_stack([radius * np.cos(ang),
                                            radius * np.sin(ang)]))
    return P


# ---------------------------------------------------------------------------
# Extreme-ray decomposition of the concave cone
# ---------------------------------------------------------------------------

@dataclass
class PiecewiseLinear:
    """Piecewise-linear function by breakpoints; evaluation interpolates."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.ys = np.asarray(self.ys, dtype=float)
        if self.xs.ndim != 1 or self.xs.shape != self.ys.shape or self.xs.size < 2:
            raise ValueError("need matching 1-d breakpoint arrays")
        if np.any(np.diff(self.xs) <= 0):
            raise ValueError("breakpoints must be strictly increasing")

    def __call__(self, x):
        return np.interp(x, self.xs, self.ys)

    @property
    def support(self) -> tuple[float, float]:
        return float(self.xs[0]), float(self.xs[-1])

    def slopes(self) -> np.ndarray:
        return np.diff(self.ys) / np.diff(self.xs)

    def left_derivative(self, x: float) -> float:
        """Slope of the segment immediately left of x."""
        s = self.slopes()
        i = int(np.searchsorted(self.xs, x - 1e-15 * max(1.0, abs(x))))
        i = min(max(i - 1, 0), len(s) - 1)
        return float(s[i])

    def with_breakpoint(self, x: float) -> "PiecewiseLinear":
        if np.any(np.abs(self.xs - x) <= 1e-15 * max(1.0, abs(x))):
            return self
        xs = np.sort(np.append(self.xs, x))
        return PiecewiseLinear(xs, self(xs))


def in_cone(f: PiecewiseLinear, tol: float = 1e-9) -> bool:
    """Concave, continuous, vanishing at both interval endpoints."""
    scale = max(1.0, float(np.max(np.abs(f.ys))))
    if abs(f.ys[0]) > tol * scale or abs(f.ys[-1]) > tol * scale:
        return False
    s = f.slopes()
    span = f.xs[-1] - f.xs[0]
    return bool(np.all(np.diff(s) <= tol * scale / span * 10))


def tent(a: float, alpha: float = 0.0, beta: float = 1.0,
         height_scale: float = 1.0) -> PiecewiseLinear:
    """Extreme ray of the cone: min((1-a)x, a(1-x)) on a rescaled interval."""
    if not 0 < a < 1:
        raise ValueError("breakpoint must be interior")
    xs = np.array([alpha, alpha + a * (beta - alpha), beta])
    ys = np.array([0.0, height_scale * a * (1 - a), 0.0])
    return PiecewiseLinear(xs, ys)


def extreme_ray_decompose(f: PiecewiseLinear, a: float) -> tuple[PiecewiseLinear, PiecewiseLinear]:
    """Split f = g + h inside the cone, g affine past the chosen breakpoint.

    Works on the interval rescaled to [0, 1]:
        g(x) = f(x) - x (f(a) + (1-a) f'_L(a))   on [0, a],
        g(x) = (1 - x)(f(a) - a f'_L(a))          on [a, 1],
    and h = f - g.  For f already spanning an extreme ray the pieces are
    proportional to f (the decomposition degenerates).
    """
    if not in_cone(f):
        raise NotInCone("f is not a concave endpoint-vanishing function")
    alpha, beta = f.support
    if not alpha < a < beta:
        raise NotInCone("breakpoint must be interior to the support")
    span = beta - alpha
    fa = f.with_breakpoint(a)
    u = (fa.xs - alpha) / span  # rescaled breakpoints, includes a
    ua = (a - alpha) / span
    fL = fa.left_derivative(a) * span  # derivative in rescaled coordinates
    val_a = float(f(a))
    g_ys = np.where(u <= ua + 1e-15,
                    fa.ys - u * (val_a + (1 - ua) * fL),
                    (1 - u) * (val_a - ua * fL))
    g = PiecewiseLinear(fa.xs, g_ys)
    h = PiecewiseLinear(fa.xs, fa.ys - g_ys)
    return g, h
