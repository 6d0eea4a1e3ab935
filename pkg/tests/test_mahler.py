import math

import numpy as np
import pytest

from conftest import random_body
from santalo_lab import geometry as geo
from santalo_lab import mahler as mah
from santalo_lab import polarity as pol
from santalo_lab import shadow as sh
from santalo_lab.errors import NotInCone, TooManyVertices
from santalo_lab.mahler import CaseLabel


def simplex(d):
    P, _ = geo.convex_hull(np.vstack([np.zeros(d), np.eye(d)]))
    return P


QUAD_BASE = np.array([[1, 1, 0], [1, -1, 0], [-1, 1, 0], [-1, -1, 0]],
                     dtype=float)


class TestSimplexBound:
    def test_values(self):
        assert mah.simplex_bound(2) == pytest.approx(6.75)
        assert mah.simplex_bound(3) == pytest.approx(64 / 9)
        assert mah.simplex_bound(4) == pytest.approx(3125 / 576)

    def test_d1_segment_hand_computation(self):
        # |K| * |K^{*mid}| for a segment of length L: L * (2/(L/2)) / ... = 4
        L = 3.7
        value = L * (2.0 / (L / 2.0)) / 1.0
        assert mah.simplex_bound(1) == pytest.approx(4.0) == pytest.approx(value)


class TestClassify:
    def test_simplex(self):
        assert mah.classify(simplex(3)) is CaseLabel.SIMPLEX

    def test_square_based_pyramid(self):
        P, _ = geo.convex_hull(np.vstack([QUAD_BASE, [0.2, 0.1, 1.5]]))
        assert mah.classify(P) is CaseLabel.PYRAMID_Ia

    def test_pyramid_over_pentagon(self):
        ang = 2 * math.pi * np.arange(5) / 5
        penta = np.column_stack([np.cos(ang), np.sin(ang), np.zeros(5)])
        P, _ = geo.convex_hull(np.vstack([penta, [0.1, 0.0, 1.0]]))
        assert mah.classify(P) is CaseLabel.PYRAMID_IIa

    def test_double_pyramid(self):
        P, _ = geo.convex_hull(np.vstack([QUAD_BASE,
                                          [0.2, 0.1, 1.3], [-0.1, 0.2, -1.1]]))
        assert mah.classify(P) is CaseLabel.DOUBLE_PYR_IIb1

    def test_skew_apex_pair(self):
        P, _ = geo.convex_hull(np.vstack([QUAD_BASE,
                                          [2.5, 0.2, 0.8], [0.3, 0.1, 1.9]]))
        assert mah.classify(P) is CaseLabel.SKEW_IIb2

    def test_parallel_apex_pair(self):
        P, _ = geo.convex_hull(np.vstack([QUAD_BASE,
                                          [0.8, 0.4, 1.2], [-0.5, -0.3, 1.2]]))
        assert mah.classify(P) is CaseLabel.PARALLEL_IIb3

    def test_2d_cases_are_simplicial(self, rng):
        # three collinear points can never all be vertices in the plane
        assert mah.classify(mah.random_polytope(2, 4, rng)) is CaseLabel.SIMPLICIAL_Ib
        assert mah.classify(mah.random_polytope(2, 5, rng)) is CaseLabel.SIMPLICIAL_IIc

    def test_too_many_vertices(self, rng):
        P = mah._random_polygon(rng, 6)
        with pytest.raises(TooManyVertices):
            mah.classify(P)

    def test_fuzz_totality(self):
        # classification is total and single-valued on clean samples
        rng = np.random.default_rng(99)
        budget = [(2, 5000), (3, 4200), (4, 800)]
        for d, trials in budget:
            for i in range(trials):
                k = d + 1 + int(rng.integers(0, 3))
                P = mah.random_polytope(d, k, rng)
                label = mah.classify(P)
                assert isinstance(label, CaseLabel)
                if k == d + 1:
                    assert label is CaseLabel.SIMPLEX


class TestPyramidFactorization:
    def test_triangle_base_reproduces_simplex(self):
        F = simplex(2)
        rep = mah.pyramid_factorization_check(F, [0.3, 0.2, 1.0])
        assert rep.pi_d == pytest.approx(64 / 9, rel=1e-9)
        assert rep.factorization_error < 1e-9

    def test_square_base(self):
        Sq, _ = geo.convex_hull([[0, 0], [1, 0], [0, 1], [1, 1]])
        rep = mah.pyramid_factorization_check(Sq, [0.5, 0.3, 0.9])
        assert rep.pi_d == pytest.approx(256 / 243 * 8.0, rel=1e-8)

    def test_random_3d_ratio_is_four(self, rng):
        for _ in range(10):
            F, _ = geo.convex_hull(rng.normal(size=(5, 2)))
            apex = np.append(rng.normal(size=2), rng.uniform(0.5, 2.0))
            rep = mah.pyramid_factorization_check(F, apex)
            assert rep.santalo_ratio == pytest.approx(4.0, abs=1e-4)
            assert rep.factorization_error < 1e-6

    def test_identity_d3_and_d4(self, rng):
        # factorization relative error stays below 1e-6 across dimensions
        for d, n in ((3, 60), (4, 40)):
            for _ in range(n):
                F = random_body(rng, d - 1, extra=2)
                apex = np.append(rng.normal(size=d - 1),
                                 rng.uniform(0.5, 1.5) * (1 if rng.uniform() < 0.5 else -1))
                rep = mah.pyramid_factorization_check(F, apex)
                assert rep.factorization_error < 1e-6


class TestDescentMoves:
    def test_pyramids_and_simplices_refused(self, rng):
        with pytest.raises(ValueError):
            mah.descent_move(simplex(3))
        P, _ = geo.convex_hull(np.vstack([QUAD_BASE, [0.2, 0.1, 1.5]]))
        with pytest.raises(ValueError):
            mah.descent_move(P)

    def test_double_pyramid_endpoints_are_pyramids(self):
        P, _ = geo.convex_hull(np.vstack([QUAD_BASE,
                                          [0.2, 0.1, 1.3], [-0.1, 0.2, -1.1]]))
        mv = mah.descent_move(P)
        K1 = sh.body_at(mv.system, mv.t_range[0])
        K2 = sh.body_at(mv.system, mv.t_range[1])
        assert mah.classify(K1) is CaseLabel.PYRAMID_Ia
        assert mah.classify(K2) is CaseLabel.PYRAMID_Ia
        vols = [geo.volume(sh.body_at(mv.system, t))
                for t in np.linspace(*mv.t_range, 9)]
        assert (max(vols) - min(vols)) / max(vols) < 1e-9

    def test_skew_volume_cancellation(self):
        P, _ = geo.convex_hull(np.vstack([QUAD_BASE,
                                          [2.5, 0.2, 0.8], [0.3, 0.1, 1.9]]))
        mv = mah.descent_move(P)
        vols = [geo.volume(sh.body_at(mv.system, t))
                for t in np.linspace(*mv.t_range, 9)]
        assert (max(vols) - min(vols)) / max(vols) < 1e-9
        K1 = sh.body_at(mv.system, mv.t_range[0])
        K2 = sh.body_at(mv.system, mv.t_range[1])
        assert mah.classify(K1) is CaseLabel.PYRAMID_IIa
        assert mah.classify(K2) is CaseLabel.PYRAMID_Ia

    def test_parallel_volume_slope_matches_finite_differences(self):
        P, _ = geo.convex_hull(np.vstack([QUAD_BASE,
                                          [0.8, 0.4, 1.2], [-0.5, -0.3, 1.2]]))
        mv = mah.descent_move(P)
        assert mv.volume_behavior == "affine"
        ts = np.linspace(-1.0, 4.0, 11)
        vols = np.array([geo.volume(sh.body_at(mv.system, t)) for t in ts])
        fd = np.diff(vols) / np.diff(ts)
        assert np.allclose(fd, mv.expected_slope, rtol=1e-9)
        # t = -1 merges the apexes into a pyramid
        assert mah.classify(sh.body_at(mv.system, -1.0)) is CaseLabel.PYRAMID_Ia

    def test_slide_volume_preserved_and_endpoints_simpler(self, rng):
        seen = 0
        while seen < 6:
            d = 2 if seen % 2 else 3
            k = d + 2 if seen < 4 else d + 3
            K = mah.random_polytope(d, k, rng)
            label = mah.classify(K)
            if label not in (CaseLabel.SIMPLICIAL_Ib, CaseLabel.SIMPLICIAL_IIc):
                continue
            seen += 1
            mv = mah.descent_move(K)
            vols = [geo.volume(sh.body_at(mv.system, t))
                    for t in np.linspace(*mv.t_range, 7)]
            assert (max(vols) - min(vols)) / max(vols) < 1e-9


class TestDescentMonotonicity:
    def test_affine_family_constant(self, rng):
        # constant volume product: endpoints trivially minimal
        K = random_body(rng, 2)
        fam = sh.affine_family(K, v=0.3, V=[0.1], u=0.0, interval=(-1.0, 1.0))
        mv = mah.DescentMove(fam, (-1.0, 1.0), "affine family", CaseLabel.SIMPLICIAL_Ib)
        rep = mah.verify_descent_monotonicity(mv, n_grid=9)
        assert rep.endpoint_minimal
        pis = rep.volume_products
        assert (pis.max() - pis.min()) / pis.max() < 1e-7

    def test_double_pyramid_endpoint_minimality(self, rng):
        P, _ = geo.convex_hull(np.vstack([QUAD_BASE,
                                          [0.2, 0.1, 1.3], [-0.1, 0.2, -1.1]]))
        mv = mah.descent_move(P)
        rep = mah.verify_descent_monotonicity(mv, n_grid=17)
        assert rep.endpoint_minimal and rep.volume_behavior_ok
        rep_dense = mah.verify_descent_monotonicity(mv, n_grid=65)
        assert rep_dense.endpoint_minimal

    def test_parallel_no_interior_minimum(self):
        P, _ = geo.convex_hull(np.vstack([QUAD_BASE,
                                          [0.8, 0.4, 1.2], [-0.5, -0.3, 1.2]]))
        mv = mah.descent_move(P)
        rep = mah.verify_descent_monotonicity(mv, n_grid=25)
        assert rep.endpoint_minimal
        assert rep.volume_behavior_ok
        assert rep.inverse_polar_convex

    @staticmethod
    def _random_double_pyramid(rng):
        while True:
            base2d = mah._random_polygon(rng, 4)
            F = np.column_stack([base2d.vertices, np.zeros(4)])
            xbar2 = base2d.vertices.mean(axis=0)
            w = rng.normal(size=2)
            w /= np.linalg.norm(w)
            h1, h2 = rng.uniform(0.5, 1.5, size=2)
            s1, s2 = rng.uniform(0.1, 0.6, size=2)
            x1 = np.append(xbar2 - s1 * w, -h1)
            x2 = np.append(xbar2 + s2 * w, h2)
            # segment [x1, x2] crosses z=0 at xbar2 + offset; keep it inside F
            cross = x1[:2] + (h1 / (h1 + h2)) * (x2[:2] - x1[:2])
            if np.min(base2d.halfspaces.slack(cross)) < 0.05:
                continue
            try:
                K, _ = geo.convex_hull(np.vstack([F, x1, x2]))
            except Exception:
                continue
            if K.n_vertices == 6 and mah.classify(K) is CaseLabel.DOUBLE_PYR_IIb1:
                return K

    def test_random_double_pyramid_dense_sweep(self, rng):
        K = self._random_double_pyramid(rng)
        mv = mah.descent_move(K)
        rep = mah.verify_descent_monotonicity(mv, n_grid=129)
        assert rep.endpoint_minimal
        assert rep.volume_behavior_ok
        assert rep.inverse_polar_convex

    def test_random_parallel_extended_range(self, rng):
        while True:
            base2d = mah._random_polygon(rng, 4)
            F = np.column_stack([base2d.vertices, np.zeros(4)])
            xi = rng.uniform(0.6, 1.4)
            X1 = rng.normal(scale=0.5, size=2)
            X2 = X1 + rng.normal(scale=1.0, size=2)
            try:
                K, _ = geo.convex_hull(np.vstack([F, np.append(X1, xi),
                                                  np.append(X2, xi)]))
            except Exception:
                continue
            if K.n_vertices == 6 and mah.classify(K) is CaseLabel.PARALLEL_IIb3:
                break
        mv = mah.descent_move(K)
        rep = mah.verify_descent_monotonicity(mv, n_grid=41)
        # no interior value below both endpoint limits
        interior_min = rep.volume_products[1:-1].min()
        assert interior_min >= min(rep.volume_products[0],
                                   rep.volume_products[-1]) - 1e-7 * rep.volume_products.max()
        assert rep.endpoint_minimal and rep.volume_behavior_ok


class TestCampaigns:
    def test_simplices_sit_on_the_bound(self, rng):
        rep = mah.few_vertex_campaign(2, 3, 40, seed=7)
        assert not rep.violations
        assert rep.min_vp == pytest.approx(6.75, rel=1e-9)

    def test_small_2d_campaign(self):
        rep = mah.few_vertex_campaign(2, 5, 150, seed=11)
        assert not rep.violations
        assert rep.min_vp > 6.75

    def test_small_3d_campaign(self):
        rep = mah.few_vertex_campaign(3, 6, 60, seed=13)
        assert not rep.violations
        assert rep.min_vp > 64 / 9

    def test_2d_minimality_campaign(self):
        rep = mah.polygon_minimality_campaign(150, seed=17)
        assert not rep.violations
        assert rep.min_vp >= 6.75 - 1e-6

    def test_regular_polygon_products(self):
        # exact value n^2 sin^2(pi/n); tends to pi^2 for large n
        for n in range(4, 13):
            P = mah.regular_polygon(n)
            expected = n ** 2 * math.sin(math.pi / n) ** 2
            assert pol.volume_product(P) == pytest.approx(expected, rel=1e-9)
        assert abs(mah.regular_polygon(96).n_vertices - 96) == 0
        assert pol.volume_product(mah.regular_polygon(96)) == pytest.approx(
            math.pi ** 2, rel=1e-3)

    def test_affine_invariance_of_volume_product(self, rng):
        for _ in range(100):
            d = 2 if rng.uniform() < 0.7 else 3
            K = random_body(rng, d)
            A = rng.normal(size=(d, d))
            if abs(np.linalg.det(A)) < 0.05:
                continue
            Q = geo.apply_affine(K, A, rng.normal(size=d))
            assert pol.volume_product(Q) == pytest.approx(
                pol.volume_product(K), rel=1e-6)


class TestExtremeRayDecomposition:
    def test_tent_decomposes_proportionally(self):
        f = mah.tent(0.35)
        g, h = mah.extreme_ray_decompose(f, 0.35)
        base = f.with_breakpoint(0.35)
        ratio = g.ys[1] / base.ys[1]
        assert np.allclose(g.ys, ratio * base.ys, atol=1e-12)
        assert np.allclose(h.ys, (1 - ratio) * base.ys, atol=1e-12)

    def test_two_piece_degenerates_at_any_point(self):
        f = mah.tent(0.6, height_scale=2.0)
        g, h = mah.extreme_ray_decompose(f, 0.3)
        base = f.with_breakpoint(0.3)
        nz = base.ys[1:-1] != 0
        ratios_g = g.ys[1:-1][nz] / base.ys[1:-1][nz]
        assert np.allclose(ratios_g, ratios_g[0], atol=1e-12)

    def test_three_piece_splits_into_cone_members(self):
        f = mah.PiecewiseLinear([0.0, 0.3, 0.7, 1.0], [0.0, 0.5, 0.6, 0.0])
        g, h = mah.extreme_ray_decompose(f, 0.5)
        assert mah.in_cone(g)
        assert mah.in_cone(h)
        fb = f.with_breakpoint(0.5)
        assert np.allclose(g.ys + h.ys, fb.ys, atol=1e-15)
        # neither piece proportional to f
        for part in (g, h):
            vals = part(np.array([0.3, 0.7]))
            ref = fb(np.array([0.3, 0.7]))
            r = vals / ref
            assert abs(r[0] - r[1]) > 1e-6

    def test_general_interval_supported(self):
        f = mah.PiecewiseLinear([-2.0, -0.5, 1.0], [0.0, 1.2, 0.0])
        g, h = mah.extreme_ray_decompose(f, 0.0)
        assert mah.in_cone(g) and mah.in_cone(h)
        xs = np.linspace(-2, 1, 13)
        assert np.allclose(g(xs) + h(xs), f(xs), atol=1e-12)

    def test_not_in_cone_rejected(self):
        convex = mah.PiecewiseLinear([0.0, 0.5, 1.0], [0.0, -0.3, 0.0])
        with pytest.raises(NotInCone):
            mah.extreme_ray_decompose(convex, 0.5)
        nonzero_end = mah.PiecewiseLinear([0.0, 0.5, 1.0], [0.0, 0.4, 0.3])
        with pytest.raises(NotInCone):
            mah.extreme_ray_decompose(nonzero_end, 0.5)
        f = mah.tent(0.5)
        with pytest.raises(NotInCone):
            mah.extreme_ray_decompose(f, 1.0)
