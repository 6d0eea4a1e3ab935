import numpy as np
import pytest

from santalo_lab import geometry as geo


def random_body(rng, d, extra=4):
    """Full-dimensional random polytope from normal points."""
    pts = rng.normal(size=(d + extra, d))
    P, _ = geo.convex_hull(pts)
    return P


def set_equal(A, B, tol=1e-8):
    """Two polytopes describe the same set (mutual facet containment)."""
    v1 = max(max(-B.halfspaces.slack(v).min(), 0.0) for v in A.vertices)
    v2 = max(max(-A.halfspaces.slack(v).min(), 0.0) for v in B.vertices)
    return max(v1, v2) <= tol


def vertices_match(P, expected, tol=1e-9):
    """Vertex sets coincide as point sets within tol."""
    exp = np.atleast_2d(np.asarray(expected, dtype=float))
    if P.n_vertices != len(exp):
        return False
    d = np.linalg.norm(P.vertices[:, None, :] - exp[None, :, :], axis=2)
    return bool(d.min(axis=1).max() <= tol and d.min(axis=0).max() <= tol)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
