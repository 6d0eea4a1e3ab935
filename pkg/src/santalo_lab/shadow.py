"""Shadow systems: construction, sweeps, and convexity verdicts.

A shadow system moves a finite base point set along a common direction,
each point at its own speed:  K_t = conv{x_i + speed_i * t * direction}.
Sweeping t and measuring |K_t|, |K_t^*| and the Santalo point turns the
convexity statements about t -> |K_t| and t -> 1/|K_t^*| into grid tests.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from . import polarity as pol
from . import santalo as san
from .errors import (
    DegenerateAt,
    DegenerateInput,
    DegenerateMap,
    InsufficientGrid,
)
from .geometry import Hyperplane, VPolytope

# Midpoint-convexity slack, relative to the largest value on the grid.
TAU_CONV = 1e-7


@dataclass
class ShadowSystem:
    """Base point set with per-point speeds along a common unit direction.

    Bodies must be full-dimensional at both interval endpoints and at the
    midpoint (checked at construction); other parameters may still produce
    degenerate hulls, which sweep records flag per row.
    """

    base_points: np.ndarray
    speeds: np.ndarray
    direction: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self):
        self.base_points = np.atleast_2d(np.asarray(self.base_points, dtype=float))
        self.speeds = np.asarray(self.speeds, dtype=float).ravel()
        if len(self.speeds) != len(self.base_points):
            raise ValueError("one speed per base point required")
        theta = geo.as_vector(self.direction)
        norm = float(np.linalg.norm(theta))
        if norm <= geo.TAU_GEOM:
            raise DegenerateInput("zero-length shadow direction")
        self.direction = theta / norm
        lo, hi = float(self.interval[0]), float(self.interval[1])
        if not lo < hi:
            raise ValueError("empty parameter interval")
        self.interval = (lo, hi)
        for t in (lo, 0.5 * (lo + hi), hi):
            body_at(self, t)  # raises DegenerateAt on flat hulls

    @property
    def dim(self) -> int:
        return self.base_points.shape[1]


def body_at(system: ShadowSystem, t: float) -> VPolytope:
    """conv{x_i + speed_i * t * direction}; t must lie in the interval."""
    lo, hi = system.interval
    span = max(hi - lo, 1.0)
    if not lo - 1e-12 * span <= t <= hi + 1e-12 * span:
        raise ValueError(f"t={t} outside interval [{lo}, {hi}]")
    pts = system.base_points + np.outer(system.speeds * t, system.direction)
    try:
        P, _ = geo.convex_hull(pts)
    except DegenerateInput as exc:
        raise DegenerateAt(t, f"degenerate hull at t={t}: {exc}") from exc
    return P


@dataclass
class SweepRecord:
    t: float
    volume: float
    polar_volume: float
    santalo: np.ndarray
    converged: bool
    note: str = ""


def sweep(system: ShadowSystem, grid, warm_start: bool = True) -> list[SweepRecord]:
    """Measure |K_t|, |K_t^*| and S(K_t) on a sorted grid of parameters.

    Per-row failures are recorded (converged=False, NaNs), never raised, so
    one bad parameter cannot abort a campaign.  With `warm_start` each solve
    is seeded from the previous Santalo point (results must agree with the
    cold-start run within solver tolerance; tested).
    """
    grid = [float(t) for t in grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be sorted")
    rows: list[SweepRecord] = []
    prev = None
    d = system.dim
    for t in grid:
        try:
            K = body_at(system, t)
            res = san.santalo_point(K, start=prev if warm_start else None)
            if warm_start and res.converged:
                prev = res.point
            rows.append(SweepRecord(t, geo.volume(K), res.polar_volume,
                                    res.point, res.converged))
        except (DegenerateInput, pol.CenterNotInterior) as exc:
            rows.append(SweepRecord(t, math.nan, math.nan,
                                    np.full(d, math.nan), False, str(exc)))
    return rows


@dataclass
class ConvexityVerdict:
    is_midpoint_convex: bool
    worst_violation: float
    witness_triple: tuple[float, float, float] | None
    excluded: int = 0


def _midpoint_verdict(ts, values, valid, tol_rel) -> ConvexityVerdict:
    ts = np.asarray(ts, dtype=float)
    values = np.asarray(values, dtype=float)
    n = len(ts)
    if n < 3:
        raise InsufficientGrid("need at least 3 grid points")
    steps = np.diff(ts)
    if np.max(steps) - np.min(steps) > 1e-9 * (ts[-1] - ts[0]):
        raise InsufficientGrid("grid must be equally spaced")
    scale = float(np.max(np.abs(values[valid]))) if np.any(valid) else 1.0
    worst = -math.inf
    witness = None
    for i in range(n):
        if not valid[i]:
            continue
        for j in range(i + 2, n, 2):
            m = (i + j) // 2
            if not (valid[j] and valid[m]):
                continue
            viol = values[m] - 0.5 * (values[i] + values[j])
            if viol > worst:
                worst = viol
                witness = (ts[i], ts[m], ts[j])
    if witness is None:
        raise InsufficientGrid("no valid midpoint triple on the grid")
    return ConvexityVerdict(bool(worst <= tol_rel * scale), float(worst),
                            tuple(float(x) for x in witness),
                            excluded=int(np.sum(~np.asarray(valid))))


def check_volume_convexity(records, tol_rel: float = TAU_CONV) -> ConvexityVerdict:
    """Midpoint-convexity verdict for t -> |K_t| over a sweep."""
    ts = [r.t for r in records]
    vols = [r.volume for r in records]
    valid = [math.isfinite(v) for v in vols]
    return _midpoint_verdict(ts, np.nan_to_num(vols), valid, tol_rel)


def check_polar_convexity(records, tol_rel: float = TAU_CONV) -> ConvexityVerdict:
    """Midpoint-convexity verdict for t -> 1/|K_t^*| over a sweep.

    Rows whose Santalo solve did not converge are excluded and counted.
    """
    ts = [r.t for r in records]
    valid = [r.converged and math.isfinite(r.polar_volume) and r.polar_volume > 0
             for r in records]
    inv = [1.0 / r.polar_volume if ok else 0.0 for r, ok in zip(records, valid)]
    return _midpoint_verdict(ts, inv, valid, tol_rel)


def affine_family(K_mid: VPolytope, v: float, V, u: float,
                  interval: tuple[float, float]) -> ShadowSystem:
    """Shadow system whose bodies are exact affine images of K_mid.

    Body at parameter t is A_t(K_mid) with, splitting coordinates as (X, x),
        A_t(X, x) = (X, x + (t - mid)(v x + <V, X> + u)),
    realized by giving the vertex (X, x) the speed v x + <V, X> + u along
    the last coordinate axis.  Requires v s + 1 > 0 over the shifted
    interval, else the map degenerates (DegenerateMap).
    """
    lo, hi = float(interval[0]), float(interval[1])
    mid = 0.5 * (lo + hi)
    d = K_mid.dim
    V = np.zeros(d - 1) if V is None else geo.as_vector(V)
    if V.size != d - 1:
        raise ValueError("V must have dimension d-1")
    for s in (lo - mid, hi - mid):
        if v * s + 1.0 <= geo.TAU_GEOM:
            raise DegenerateMap(f"v*s+1 = {v * s + 1.0} at shifted parameter {s}")
    X = K_mid.vertices[:, :-1]
    x = K_mid.vertices[:, -1]
    speeds = v * x + X @ V + u
    theta = np.zeros(d)
    theta[-1] = 1.0
    base = K_mid.vertices - mid * np.outer(speeds, theta)
    return ShadowSystem(base, speeds, theta, (lo, hi))


# ---------------------------------------------------------------------------
# Steiner symmetrization as a shadow system
# ---------------------------------------------------------------------------

def _facet_vertex_sets(P: VPolytope) -> list[np.ndarray]:
    """Vertex index sets per (deduped) facet."""
    h = P.halfspaces
    sets = []
    scale = P.scale()
    for i in range(h.n_facets):
        on = np.abs(h.normals[i] @ P.vertices.T - h.offsets[i]) <= 1e-8 * max(1.0, scale)
        sets.append(np.flatnonzero(on))
    return sets


def _edges_3d(P: VPolytope) -> set[tuple[int, int]]:
    """Edge index pairs of a 3-polytope via per-facet cyclic orderings."""
    edges: set[tuple[int, int]] = set()
    for idx in _facet_vertex_sets(P):
        if len(idx) < 3:
            continue
        pts = P.vertices[idx]
        center = pts.mean(axis=0)
        # order facet vertices by angle in the facet plane
        rel = pts - center
        _, _, vt = np.linalg.svd(rel, full_matrices=False)
        uv = rel @ vt[:2].T
        order = np.argsort(np.arctan2(uv[:, 1], uv[:, 0]))
        cyc = idx[order]
        for a, b in zip(cyc, np.roll(cyc, -1)):
            edges.add((min(a, b), max(a, b)))
    return edges


def _segment_crossings_2d(segs_a, segs_b, tol) -> list[np.ndarray]:
    """Intersection points of two 2D segment families (incl. endpoints)."""
    out = []
    for (p1, p2), (q1, q2) in itertools.product(segs_a, segs_b):
        r = p2 - p1
        s = q2 - q1
        denom = r[0] * s[1] - r[1] * s[0]
        if abs(denom) <= tol:
            continue
        w = q1 - p1
        tt = (w[0] * s[1] - w[1] * s[0]) / denom
        uu = (w[0] * r[1] - w[1] * r[0]) / denom
        if -1e-12 <= tt <= 1 + 1e-12 and -1e-12 <= uu <= 1 + 1e-12:
            out.append(p1 + tt * r)
    return out


def steiner_system(K: VPolytope, H: Hyperplane) -> ShadowSystem:
    """Shadow system interpolating K, its Steiner symmetral, and its mirror.

    The system samples the chords of K orthogonal to H at every projected
    vertex and, in 3D, at every crossing of projected upper and lower edges
    (the breakpoints of the chord-length function).  Both endpoints of a
    sampled chord get the speed that carries the chord midpoint onto H, so
    every body K_t preserves all chord lengths orthogonal to H:
    K_{-1} = K, K_0 = the Steiner symmetral K_H, K_1 = the mirror image.

    Supported for d = 2 and 3 (the breakpoint overlay is dimension-specific).
    """
    d = K.dim
    if d not in (2, 3):
        raise DegenerateInput("steiner_system supports d = 2 or 3")
    coords = geo.to_frame(K.vertices, H)
    Kf = VPolytope(coords)  # isometric image; heights relative to H
    scale = Kf.scale()
    samples = [coords[i, :-1] for i in range(len(coords))]
    if d == 3:
        edges = _edges_3d(Kf)
        h = Kf.halfspaces
        fsets = _facet_vertex_sets(Kf)
        top_edges, bottom_edges = set(), set()
        for fi, idx in enumerate(fsets):
            sgn = h.normals[fi, -1]
            pool = top_edges if sgn > geo.TAU_GEOM else (
                bottom_edges if sgn < -geo.TAU_GEOM else None)
            if pool is None:
                continue
            members = set(idx)
            for e in edges:
                if e[0] in members and e[1] in members:
                    pool.add(e)
        seg = lambda e: (coords[e[0], :2], coords[e[1], :2])
        crossings = _segment_crossings_2d(
            [seg(e) for e in top_edges], [seg(e) for e in bottom_edges],
            1e-14 * max(1.0, scale) ** 2)
        samples.extend(crossings)
    X_arr = geo._dedupe_rows(np.atleast_2d(np.array(samples)),
                             1e-12 * max(1.0, scale))
    base, speeds = [], []
    for X in X_arr:
        lo, hi = geo._vertical_extent(Kf, X, d - 1)
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        base.append(np.append(X, half))
        speeds.append(-mid)
        if half > 1e-13 * max(1.0, scale):
            base.append(np.append(X, -half))
            speeds.append(-mid)
    base_world = geo.from_frame(np.array(base), H)
    return ShadowSystem(base_world, np.array(speeds), H.normal, (-1.0, 1.0))


def steiner_symmetral(K: VPolytope, H: Hyperplane) -> VPolytope:
    """The Steiner symmetral K_H (volume-preserving, chords centered on H)."""
    return body_at(steiner_system(K, H), 0.0)


def reflect(K: VPolytope, H: Hyperplane) -> VPolytope:
    """Mirror image of K about the hyperplane H."""
    n, off = H.normal, H.offset
    verts = K.vertices - 2.0 * np.outer(K.vertices @ n - off, n)
    return VPolytope(verts)


def brunn_midpoint_check(K: VPolytope, n_directions: int = 16,
                         tol: float = 1e-6, seed: int = 0) -> bool:
    """Do chord midpoints lie in a hyperplane, for a family of directions?

    For each of `n_directions` random chord directions, the midpoints of
    chords of K parallel to the direction are sampled at interior points of
    the projection and fitted with a hyperplane; the check passes when every
    direction's fit residual is at most tol * diameter(K).  Ellipsoid-like
    bodies pass for all directions; note that a polygonal approximation of
    an ellipse carries a midpoint residual on the scale of its own
    approximation error, so `tol` must be chosen accordingly.
    """
    rng = np.random.default_rng(seed)
    d = K.dim
    if d not in (2, 3):
        raise DegenerateInput("midpoint check supports d = 2 or 3")
    diam = geo.diameter(K)
    for _ in range(n_directions):
        u = rng.normal(size=d)
        u /= np.linalg.norm(u)
        H = Hyperplane(u, 0.0)
        coords = geo.to_frame(K.vertices, H)
        Kf = VPolytope(coords)
        proj, _ = geo.convex_hull(coords[:, :-1])
        c = proj.vertices.mean(axis=0)
        mids = []
        for lam in (0.0, 0.35, 0.7, 0.92):
            for w in proj.vertices:
                X = (1 - lam) * c + lam * w if lam > 0 else c
                lo, hi = geo._vertical_extent(Kf, X, d - 1)
                mids.append(np.append(X, 0.5 * (lo + hi)))
        mids = np.unique(np.round(np.array(mids), 12), axis=0)
        center = mids.mean(axis=0)
        _, _, vt = np.linalg.svd(mids - center, full_matrices=False)
        normal = vt[-1]
        residual = float(np.max(np.abs((mids - center) @ normal)))
        if residual > tol * diam:
            return False
    return True


@dataclass
class AffineFamilyFit:
    """Result of testing whether a system is (close to) an affine family.

    The converse direction (affine sweeps imply an affine family) is not
    decidable from samples; this is a falsification harness.  When both
    sweeps are affine within tolerance, the family parameters (v, V, u) are
    fitted by least squares on the vertex trajectories and the fitted map
    is checked against the actual bodies.  A failed reproduction is flagged
    as a converse witness candidate for manual inspection, never reported
    as a refutation.
    """

    sweeps_affine: bool
    v: float = 0.0
    V: np.ndarray | None = None
    u: float = 0.0
    fit_residual: float = math.nan
    reproduces: bool = False
    body_mismatch: float = math.nan
    verdict: str = ""


def fit_affine_family(system: ShadowSystem, n_grid: int = 9,
                      tol_rel: float = 1e-7) -> AffineFamilyFit:
    """Fit (v, V, u) to a system whose sweeps look affine; verify the map."""
    from . import santalo as san

    axis = san._system_axis(system)
    if axis != system.dim - 1:
        raise ValueError("fit expects the direction on the last axis")
    lo, hi = system.interval
    mid = 0.5 * (lo + hi)
    ts = np.linspace(lo, hi, n_grid)
    rows = sweep(system, ts)
    vols = np.array([r.volume for r in rows])
    inv = np.array([1.0 / r.polar_volume for r in rows])
    lin = (ts - lo) / (hi - lo)
    dev_v = np.max(np.abs(vols - (vols[0] + (vols[-1] - vols[0]) * lin)))
    dev_i = np.max(np.abs(inv - (inv[0] + (inv[-1] - inv[0]) * lin)))
    affine = bool(dev_v <= tol_rel * vols.max() and dev_i <= tol_rel * inv.max())
    if not affine:
        return AffineFamilyFit(False, verdict="sweeps not affine; family "
                                              "characterization not applicable")
    # vertex positions at the middle parameter carry the speed field
    pts_mid = system.base_points + np.outer(system.speeds * mid, system.direction)
    X = pts_mid[:, :-1]
    x = pts_mid[:, -1]
    design = np.column_stack([x, X, np.ones(len(x))])
    coef, *_ = np.linalg.lstsq(design, system.speeds, rcond=None)
    v, V, u = float(coef[0]), coef[1:-1], float(coef[-1])
    resid = float(np.max(np.abs(design @ coef - system.speeds)))
    K_mid = body_at(system, mid)
    mismatch = 0.0
    d = system.dim
    for t in (lo, 0.5 * (lo + mid), 0.75 * mid + 0.25 * hi, hi):
        s = t - mid
        A = np.eye(d)
        A[-1, -1] = v * s + 1.0
        A[-1, :-1] = s * V
        shift = np.zeros(d)
        shift[-1] = s * u
        try:
            image = geo.apply_affine(K_mid, A, shift)
        except geo.SingularMap:
            mismatch = math.inf
            break
        actual = body_at(system, t)
        m1 = max(max(-actual.halfspaces.slack(p).min(), 0.0)
                 for p in image.vertices)
        m2 = max(max(-image.halfspaces.slack(p).min(), 0.0)
                 for p in actual.vertices)
        mismatch = max(mismatch, m1, m2)
    scale = float(np.max(np.abs(K_mid.vertices)))
    reproduces = bool(mismatch <= 1e-7 * max(1.0, scale))
    verdict = ("affine family confirmed" if reproduces
               else "converse witness candidate: affine sweeps but the fitted "
                    "map does not reproduce the bodies (manual inspection)")
    return AffineFamilyFit(True, v, V, u, resid, reproduces, mismatch, verdict)


def random_shadow_system(d: int, rng, n_points: int | None = None,
                         speed_scale: float = 0.6,
                         interval: tuple[float, float] = (-0.5, 0.5)) -> ShadowSystem:
    """Random non-degenerate system: ball-sampled hull points, normal speeds."""
    n = n_points or (d + 3)
    theta = np.zeros(d)
    theta[-1] = 1.0
    for _ in range(100):
        raw = rng.normal(size=(n + 2, d))
        raw /= np.linalg.norm(raw, axis=1)[:, None]
        raw *= rng.uniform(0.2, 1.0, size=(n + 2, 1))
        try:
            P, _ = geo.convex_hull(raw)
            speeds = rng.normal(scale=speed_scale, size=P.n_vertices)
            return ShadowSystem(P.vertices, speeds, theta, interval)
        except DegenerateInput:
            continue
    raise DegenerateInput("failed to sample a non-degenerate system")
