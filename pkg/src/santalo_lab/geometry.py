"""Dimension-generic polytope substrate: hulls, volumes, sections, chords.

Polytopes are plain immutable value objects over numpy arrays.  A point or
direction ("Vector") is a 1-d float array of length d.  All operations are
pure functions; nothing mutates its arguments.  Double precision throughout;
the exact-rational 2D cross-check oracle lives in the test tree.

Supported dimensions: 1 <= d <= 6 (hull enumeration is delegated to Qhull,
which is reliable at desk scale in this range).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from .errors import (
    DegenerateInput,
    EmptySection,
    OutsideProjection,
    SingularMap,
)

# Coplanarity / facet-slack tolerance for the whole float pipeline.
TAU_GEOM = 1e-9

MAX_DIM = 6


def as_vector(x) -> np.ndarray:
    """Coerce to a finite 1-d float array."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise ValueError("vector must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite coordinates")
    return v


def _dedupe_rows(rows: np.ndarray, tol: float) -> np.ndarray:
    """Drop rows that coincide with an earlier row within `tol` (max-norm)."""
    if len(rows) <= 1:
        return rows
    order = np.lexsort(rows.T[::-1])
    srt = rows[order]
    keep = [0]
    for i in range(1, len(srt)):
        if np.max(np.abs(srt[i] - srt[keep[-1]])) > tol:
            keep.append(i)
    return srt[keep]


@dataclass(frozen=True)
class Hyperplane:
    """Set {x : <normal, x> = offset} with a unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = as_vector(self.normal)
        norm = float(np.linalg.norm(n))
        if norm <= TAU_GEOM:
            raise DegenerateInput("hyperplane normal is (near) zero")
        object.__setattr__(self, "normal", n / norm)
        object.__setattr__(self, "offset", float(self.offset) / norm)


class HPolytope:
    """Bounded full-dimensional intersection of halfspaces <n_i, x> <= b_i.

    Normals are stored unit-length; rows are deduplicated within TAU_GEOM.
    """

    def __init__(self, normals, offsets):
        normals = np.atleast_2d(np.asarray(normals, dtype=float))
        offsets = np.asarray(offsets, dtype=float).ravel()
        if normals.shape[0] != offsets.shape[0]:
            raise ValueError("normals and offsets length mismatch")
        norms = np.linalg.norm(normals, axis=1)
        if np.any(norms <= TAU_GEOM):
            raise DegenerateInput("zero facet normal")
        normals = normals / norms[:, None]
        offsets = offsets / norms
        rows = _dedupe_rows(np.column_stack([normals, offsets]), TAU_GEOM)
        self.normals = rows[:, :-1]
        self.offsets = rows[:, -1]

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @property
    def n_facets(self) -> int:
        return self.normals.shape[0]

    def slack(self, x) -> np.ndarray:
        """Per-facet slack b_i - <n_i, x>; all positive iff x is interior."""
        return self.offsets - self.normals @ as_vector(x)

    def contains(self, x, tol: float = TAU_GEOM) -> bool:
        return bool(np.min(self.slack(x)) >= -tol)


class VPolytope:
    """Convex polytope given by its (pruned) vertex list.

    Use `convex_hull` to build one from raw points; the direct constructor
    trusts its input (internal fast path for affine images, polars, ...).
    Facets and a facet triangulation are computed lazily and cached.
    """

    def __init__(self, vertices, halfspaces: HPolytope | None = None, simplices=None):
        self.vertices = np.atleast_2d(np.asarray(vertices, dtype=float))
        self._halfspaces = halfspaces
        self._simplices = simplices
        if not np.all(np.isfinite(self.vertices)):
            raise DegenerateInput("non-finite vertex coordinates")

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    def _ensure_hull(self):
        if self._halfspaces is None or self._simplices is None:
            vert_idx, h, simplices = _hull_of(self.vertices)
            self._halfspaces = h
            if len(vert_idx) == self.n_vertices:
                self._simplices = simplices
            else:
                # Trusted constructor was fed a redundant list; re-prune.
                remap = -np.ones(self.n_vertices, dtype=int)
                remap[vert_idx] = np.arange(len(vert_idx))
                self.vertices = self.vertices[vert_idx]
                self._simplices = remap[simplices]

    @property
    def halfspaces(self) -> HPolytope:
        self._ensure_hull()
        return self._halfspaces

    @property
    def facet_simplices(self) -> np.ndarray:
        """(m, d) vertex-index array triangulating the boundary."""
        self._ensure_hull()
        return self._simplices

    def contains(self, x, tol: float = TAU_GEOM) -> bool:
        return self.halfspaces.contains(x, tol)

    def scale(self) -> float:
        """Coordinate scale of the vertex cloud (for relative tolerances)."""
        return float(max(1e-30, np.max(np.abs(self.vertices))))


def _hull_of(points: np.ndarray):
    """Raw hull: (vertex indices, facet HPolytope, simplices).

    Simplices triangulate the boundary and index into `points` directly.
    """
    d = points.shape[1]
    if d == 1:
        i_lo, i_hi = int(np.argmin(points[:, 0])), int(np.argmax(points[:, 0]))
        lo, hi = float(points[i_lo, 0]), float(points[i_hi, 0])
        if hi - lo <= TAU_GEOM * max(1.0, abs(lo), abs(hi)):
            raise DegenerateInput("1-d point set has no extent")
        h = HPolytope([[1.0], [-1.0]], [hi, -lo])
        return np.array([i_lo, i_hi]), h, np.array([[i_lo], [i_hi]])
    if d > MAX_DIM:
        raise DegenerateInput(f"dimension {d} exceeds supported cap {MAX_DIM}")
    if points.shape[0] < d + 1:
        raise DegenerateInput("need at least d+1 points")
    try:
        hull = ConvexHull(points)
    except QhullError as exc:
        raise DegenerateInput(f"point set is degenerate: {exc}") from exc
    # Qhull equations are <n, x> + c <= 0 with outward unit normals.
    h = HPolytope(hull.equations[:, :-1], -hull.equations[:, -1])
    return hull.vertices, h, hull.simplices


def convex_hull(points) -> tuple[VPolytope, HPolytope]:
    """Convex hull of a point set: pruned vertices and irredundant facets.

    Raises DegenerateInput when the points lie in a lower-dimensional flat.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if not np.all(np.isfinite(pts)):
        raise DegenerateInput("non-finite input point")
    vert_idx, h, simplices = _hull_of(pts)
    remap = -np.ones(pts.shape[0], dtype=int)
    remap[vert_idx] = np.arange(len(vert_idx))
    P = VPolytope(pts[vert_idx], h, remap[simplices])
    return P, h


def volume(P: VPolytope) -> float:
    """d-volume by fanning the facet triangulation from the vertex mean."""
    v, _ = _volume_centroid(P)
    return v


def centroid(P: VPolytope) -> np.ndarray:
    """Exact centroid via the same triangulation as `volume`."""
    _, c = _volume_centroid(P)
    return c


def _volume_centroid(P: VPolytope) -> tuple[float, np.ndarray]:
    d = P.dim
    if d == 1:
        lo, hi = float(P.vertices.min()), float(P.vertices.max())
        return hi - lo, np.array([(lo + hi) / 2.0])
    simplices = P.facet_simplices
    verts = P.vertices
    apex = verts.mean(axis=0)
    # |det| of the d edge vectors of each fan simplex, vectorized.
    mats = verts[simplices] - apex  # (m, d, d)
    dets = np.abs(np.linalg.det(mats))
    total = float(dets.sum())
    if total <= 0.0:
        raise DegenerateInput("polytope has zero volume")
    simplex_centroids = (verts[simplices].sum(axis=1) + apex) / (d + 1)
    cen = (dets[:, None] * simplex_centroids).sum(axis=0) / total
    return total / math.factorial(d), cen


def second_moment(P: VPolytope) -> tuple[float, np.ndarray, np.ndarray]:
    """(volume, centroid, covariance) with exact polytope moments.

    The covariance is the body's normalized inertia about its centroid,
    computed over the same fan triangulation as `volume`.
    """
    d = P.dim
    if d == 1:
        lo, hi = float(P.vertices.min()), float(P.vertices.max())
        c = (lo + hi) / 2.0
        return hi - lo, np.array([c]), np.array([[(hi - lo) ** 2 / 12.0]])
    verts = P.vertices
    apex = verts.mean(axis=0)
    total = 0.0
    first = np.zeros(d)
    second = np.zeros((d, d))
    fact = math.factorial(d)
    for s in P.facet_simplices:
        w = np.vstack([verts[s], apex])  # d+1 simplex vertices
        vol = abs(np.linalg.det(verts[s] - apex)) / fact
        if vol == 0.0:
            continue
        ssum = w.sum(axis=0)
        total += vol
        first += vol * ssum / (d + 1)
        second += vol / ((d + 1) * (d + 2)) * (w.T @ w + np.outer(ssum, ssum))
    if total <= 0.0:
        raise DegenerateInput("polytope has zero volume")
    c = first / total
    cov = second / total - np.outer(c, c)
    return total, c, cov


def interior_point(P: VPolytope | HPolytope) -> np.ndarray:
    """Chebyshev center: the center of the largest inscribed ball (via LP)."""
    h = P.halfspaces if isinstance(P, VPolytope) else P
    d = h.dim
    # Variables (x, r): maximize r s.t. <n_i, x> + r <= b_i (unit normals).
    c = np.zeros(d + 1)
    c[-1] = -1.0
    A = np.column_stack([h.normals, np.ones(h.n_facets)])
    res = linprog(c, A_ub=A, b_ub=h.offsets,
                  bounds=[(None, None)] * d + [(0, None)], method="highs")
    if not res.success or res.x[-1] <= TAU_GEOM:
        raise DegenerateInput("no interior: Chebyshev LP infeasible or flat")
    return res.x[:-1]


def vertex_enumeration(h: HPolytope, interior=None) -> VPolytope:
    """Vertices of a bounded H-polytope.

    Runs the hull machinery in the dual: after translating an interior point
    to the origin and scaling facets to offset one, hull facets of the scaled
    normals correspond one-to-one to vertices of the original body.
    """
    d = h.dim
    if interior is None:
        interior = interior_point(h)
    interior = as_vector(interior)
    b = h.slack(interior)
    if np.min(b) <= TAU_GEOM:
        raise DegenerateInput("interior point has non-positive facet slack")
    if d == 1:
        pos = h.normals[:, 0] > 0
        neg = h.normals[:, 0] < 0
        if not (np.any(pos) and np.any(neg)):
            raise DegenerateInput("1-d H-polytope is unbounded")
        hi = float(np.min(h.offsets[pos] / h.normals[pos, 0]))
        lo = float(np.max(h.offsets[neg] / h.normals[neg, 0]))
        return VPolytope(np.array([[lo], [hi]]))
    dual_pts = h.normals / b[:, None]
    try:
        dual = ConvexHull(dual_pts)
    except QhullError as exc:
        raise DegenerateInput(f"dual hull failed (unbounded or flat?): {exc}") from exc
    n = dual.equations[:, :-1]
    c = -dual.equations[:, -1]
    if np.any(c <= TAU_GEOM):
        raise DegenerateInput("H-polytope appears unbounded")
    verts = n / c[:, None] + interior
    return VPolytope(_dedupe_rows(verts, TAU_GEOM * max(1.0, np.max(np.abs(verts)))))


def section(P: VPolytope, axis: int, level: float) -> VPolytope:
    """(d-1)-polytope slice {X : (X with coordinate `axis` = level) in P}.

    The returned polytope lives in the remaining coordinates, original order.
    Raises EmptySection unless `level` is strictly inside the open coordinate
    range of `axis` over P.
    """
    d = P.dim
    axis = range(d)[axis]
    coords = P.vertices[:, axis]
    lo, hi = float(coords.min()), float(coords.max())
    margin = TAU_GEOM * max(1.0, abs(lo), abs(hi))
    if not (lo + margin < level < hi - margin):
        raise EmptySection(f"level {level} outside open range ({lo}, {hi})")
    h = P.halfspaces
    keep = [i for i in range(d) if i != axis]
    A_rest = h.normals[:, keep]
    b_rest = h.offsets - h.normals[:, axis] * level
    row_norm = np.linalg.norm(A_rest, axis=1)
    flat = row_norm <= TAU_GEOM
    if np.any(b_rest[flat] < -margin):
        raise EmptySection("level violates an axis-orthogonal facet")
    if d == 2:
        pos = (~flat) & (A_rest[:, 0] > 0)
        neg = (~flat) & (A_rest[:, 0] < 0)
        if not (np.any(pos) and np.any(neg)):
            raise EmptySection("slice has no 1-d extent")
        hi1 = float(np.min(b_rest[pos] / A_rest[pos, 0]))
        lo1 = float(np.max(b_rest[neg] / A_rest[neg, 0]))
        if hi1 - lo1 <= margin:
            raise EmptySection("slice has no 1-d extent")
        return VPolytope(np.array([[lo1], [hi1]]))
    hh = HPolytope(A_rest[~flat], b_rest[~flat])
    # Interior point of the slice: walk from an interior point of P toward an
    # extreme vertex until the slicing level is reached (stays interior).
    c = P.vertices.mean(axis=0)
    target = P.vertices[np.argmax(coords) if c[axis] < level else np.argmin(coords)]
    s = (level - c[axis]) / (target[axis] - c[axis])
    q = c + s * (target - c)
    return vertex_enumeration(hh, interior=q[keep])


def chord(P: VPolytope, X, axis: int = -1) -> tuple[float, float]:
    """Closed interval {x : (X, x) in P} along `axis`, X over the other axes.

    X must lie in the interior of the orthogonal projection of P; boundary
    base points raise OutsideProjection (degenerate chords are excluded).
    """
    d = P.dim
    axis = range(d)[axis]
    X = as_vector(X)
    keep = [i for i in range(d) if i != axis]
    proj, _ = convex_hull(P.vertices[:, keep])
    scale = proj.scale()
    if np.min(proj.halfspaces.slack(X)) <= TAU_GEOM * scale:
        raise OutsideProjection("base point not interior to the projection")
    return _vertical_extent(P, X, axis)


def _vertical_extent(P: VPolytope, X, axis: int) -> tuple[float, float]:
    """Chord endpoints from the H-form; no interiority check (internal)."""
    h = P.halfspaces
    d = P.dim
    keep = [i for i in range(d) if i != axis]
    na = h.normals[:, axis]
    rest = h.offsets - h.normals[:, keep] @ np.asarray(X, dtype=float)
    scale = P.scale()
    pos = na > TAU_GEOM
    neg = na < -TAU_GEOM
    flat = ~(pos | neg)
    if np.any(rest[flat] < -TAU_GEOM * max(1.0, scale)):
        raise OutsideProjection("base point outside an axis-parallel facet")
    hi = float(np.min(rest[pos] / na[pos])) if np.any(pos) else math.inf
    lo = float(np.max(rest[neg] / na[neg])) if np.any(neg) else -math.inf
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise OutsideProjection("chord unbounded; polytope data inconsistent")
    if lo > hi:  # float noise on a near-degenerate chord
        mid = (lo + hi) / 2.0
        lo = hi = mid
    return lo, hi


def apply_affine(P: VPolytope, linear, shift=None) -> VPolytope:
    """Vertex-wise affine image x -> linear @ x + shift (linear invertible)."""
    A = np.asarray(linear, dtype=float)
    d = P.dim
    if A.shape != (d, d):
        raise ValueError("linear part has wrong shape")
    if abs(np.linalg.det(A)) <= 1e-12 * max(1.0, np.linalg.norm(A) ** d):
        raise SingularMap("linear part is (numerically) singular")
    shift = np.zeros(d) if shift is None else as_vector(shift)
    return VPolytope(P.vertices @ A.T + shift)


def translate(P: VPolytope, shift) -> VPolytope:
    return VPolytope(P.vertices + as_vector(shift))


def diameter(P: VPolytope) -> float:
    """Exact vertex-pair diameter (fine at desk scale)."""
    v = P.vertices
    diff = v[:, None, :] - v[None, :, :]
    return float(np.sqrt((diff ** 2).sum(axis=2).max()))


def hyperplane_frame(H: Hyperplane) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal map splitting R^d as (hyperplane coords, signed height).

    Returns (B, n) where B is (d-1, d): p maps to (B @ p, <n, p> - offset).
    B rows complete the unit normal n to an orthonormal basis; the map is an
    isometry on H, so (d-1)-volumes measured in frame coordinates are true.
    """
    n = H.normal
    d = n.shape[0]
    _, _, vt = np.linalg.svd(n.reshape(1, d))
    return vt[1:], n


def to_frame(points, H: Hyperplane) -> np.ndarray:
    """Coordinates (X, xi) of points with the hyperplane at height zero."""
    B, n = hyperplane_frame(H)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return np.column_stack([pts @ B.T, pts @ n - H.offset])


def from_frame(coords, H: Hyperplane) -> np.ndarray:
    B, n = hyperplane_frame(H)
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    return coords[:, :-1] @ B + (coords[:, -1:] + H.offset) * n
