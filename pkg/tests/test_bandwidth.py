import math

import numpy as np
import pytest
from scipy.special import ive

from dirclust.bandwidth import (
    DEFAULT_RANGE,
    estimate_vmf_concentration,
    kde_squared_integral,
    lcv_score,
    lscv_score,
    optimize_1d,
    rot_circular_bandwidth,
    rot_hypersphere_bandwidth,
    select_bandwidth,
    select_lcv,
    select_lscv,
    select_rot_circular,
    select_rot_hypersphere,
)
from dirclust.density import KernelDensity, log_vmf_const, sample_vmf, sphere_quadrature
from dirclust.errors import DegenerateSampleError, DimMismatchError, NonFiniteScoreError

from conftest import random_sample


class TestConcentrationEstimate:
    def test_antipodal_pair_is_uniform(self):
        sample = np.array([[1.0, 0.0], [-1.0, 0.0]])
        assert estimate_vmf_concentration(sample) == 0.0

    def test_identical_points_degenerate(self):
        sample = np.tile([0.6, 0.8], (5, 1))
        with pytest.raises(DegenerateSampleError):
            estimate_vmf_concentration(sample)

    def test_consistency_on_vmf_draws(self):
        sample = sample_vmf(np.array([0.0, 0.0, 1.0]), 5.0, 2000, seed=77)
        kappa = estimate_vmf_concentration(sample)
        assert 4.5 <= kappa <= 5.5

    def test_inverts_bessel_ratio(self):
        # A_d(kappa-hat) must equal the observed resultant length
        sample = sample_vmf(np.array([1.0, 0.0]), 3.0, 400, seed=3)
        kappa = estimate_vmf_concentration(sample)
        rbar = float(np.linalg.norm(sample.mean(axis=0)))
        assert ive(1, kappa) / ive(0, kappa) == pytest.approx(rbar, abs=1e-9)


class TestRotCircular:
    def test_formula_against_oracle_bessel(self):
        # fixed kappa-hat = 2, n = 100, evaluated with scipy's Bessel
        kappa, n = 2.0, 100
        nu = (3 * n * kappa**2 * ive(2, 2 * kappa) * math.exp(2 * kappa)
              / (4 * math.sqrt(math.pi) * (ive(0, kappa) * math.exp(kappa)) ** 2)) ** 0.4
        assert rot_circular_bandwidth(n, kappa) == pytest.approx(nu ** -0.5, rel=1e-10)

    def test_doubling_n_scaling_law(self):
        h1 = rot_circular_bandwidth(500, 1.7)
        h2 = rot_circular_bandwidth(1000, 1.7)
        assert h2 / h1 == pytest.approx(2.0 ** (-1.0 / 5.0), rel=1e-12)

    def test_uniform_data_clamps_high(self):
        sample = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        result = select_rot_circular(sample)
        assert result.h == DEFAULT_RANGE[1]
        assert not result.converged

    def test_wrong_dim(self):
        with pytest.raises(DimMismatchError):
            select_rot_circular(np.eye(3))


class TestRotHypersphere:
    def test_formula_against_oracle_bessel(self):
        # fixed kappa-hat = 5, d = 3 (q = 2), n = 1000
        kappa, n, q = 5.0, 1000, 2

        def big_i(nu, x):
            return ive(nu, x) * math.exp(x)

        num = 4 * math.sqrt(math.pi) * big_i((q - 1) / 2, kappa) ** 2
        den = (
            kappa ** ((q + 1) / 2)
            * (2 * q * big_i((q + 1) / 2, 2 * kappa) + (2 + q) * kappa * big_i((q + 3) / 2, 2 * kappa))
            * n
        )
        expected = (num / den) ** (1.0 / (4 + q))
        assert rot_hypersphere_bandwidth(n, kappa, 3) == pytest.approx(expected, rel=1e-10)

    def test_doubling_n_scaling_law(self):
        for d in (3, 4):
            q = d - 1
            h1 = rot_hypersphere_bandwidth(1000, 5.0, d)
            h2 = rot_hypersphere_bandwidth(2000, 5.0, d)
            assert h2 / h1 == pytest.approx(2.0 ** (-1.0 / (4 + q)), rel=1e-12)

    def test_unimodal_smoke_property(self):
        # KDE at the rule-of-thumb bandwidth stays essentially unimodal on
        # concentrated one-group data: mostly exactly one mode, and any
        # extra component is a hairline blip (persistence ratio < 1.10)
        from dirclust.hdr import TauGrid, level_for_tau
        from dirclust.tree import GraphConfig, build_graph, build_merge_tree, mode_function

        exact = 0
        for seed in range(20):
            sample = sample_vmf(np.array([0.0, 0.0, 1.0]), 20.0, 1000, seed=seed)
            result = select_rot_hypersphere(sample)
            kde = KernelDensity(sample, result.h)
            graph = build_graph(kde, sample, GraphConfig(knn=30))
            tree = build_merge_tree(graph)
            levels = level_for_tau(kde, sample, TauGrid.default())
            count = mode_function(tree, levels).max_count
            assert count <= 2
            if count == 1:
                exact += 1
                continue
            for _, thr in levels:
                if tree.count_components(thr) != 2:
                    continue
                alive = [node for node in tree.nodes.values()
                         if node.death < thr <= node.birth]
                weaker = min(alive, key=lambda node: node.birth)
                assert weaker.birth / max(weaker.death, 1e-300) < 1.10
        assert exact >= 15


class TestLikelihoodCv:
    def test_two_antipodal_points_closed_form(self):
        sample = np.array([[1.0, 0.0], [-1.0, 0.0]])
        for h in (0.3, 0.8, 2.0):
            kappa = 1.0 / h**2
            expected = 2.0 * (log_vmf_const(2, kappa) - kappa)
            assert lcv_score(sample, h) == pytest.approx(expected, rel=1e-12)

    def test_antipodal_maximized_at_uniform_boundary(self):
        sample = np.array([[1.0, 0.0], [-1.0, 0.0]])
        result = select_lcv(sample)
        assert result.h == DEFAULT_RANGE[1]
        assert not result.converged

    def test_score_finite_for_all_h(self, rng):
        sample = random_sample(rng, 25, 3)
        for h in np.geomspace(0.02, 5.0, 12):
            assert math.isfinite(lcv_score(sample, h))

    def test_interior_optimum_on_vmf_sample(self):
        sample = sample_vmf(np.array([1.0, 0.0]), 5.0, 200, seed=101)
        result = select_lcv(sample)
        assert result.converged
        assert DEFAULT_RANGE[0] < result.h < DEFAULT_RANGE[1]
        lo, hi = DEFAULT_RANGE
        assert result.score > lcv_score(sample, lo)
        assert result.score > lcv_score(sample, hi)

    def test_permutation_invariance(self, rng):
        sample = sample_vmf(np.array([0.0, 1.0]), 3.0, 60, seed=8)
        perm = rng.permutation(60)
        a = select_lcv(sample)
        b = select_lcv(sample[perm])
        assert a.h == pytest.approx(b.h, rel=1e-9)


class TestLeastSquaresCv:
    def test_single_point_uniform_square(self):
        # n=1, kappa -> 0: int f^2 = 1/(2 pi) on the circle
        sample = np.array([[1.0, 0.0]])
        assert kde_squared_integral(sample, 1e4) == pytest.approx(
            1.0 / (2 * math.pi), rel=1e-6
        )

    def test_single_point_product_identity(self):
        # n=1: int f^2 = C_2(kappa)^2 / C_2(2 kappa), cross-checked by quadrature
        sample = np.array([[0.0, 1.0]])
        h = 0.6
        kappa = 1.0 / h**2
        closed = math.exp(2 * log_vmf_const(2, kappa) - log_vmf_const(2, 2 * kappa))
        assert kde_squared_integral(sample, h) == pytest.approx(closed, rel=1e-12)
        nodes, weights = sphere_quadrature(2, 20_000)
        kde = KernelDensity(sample, h)
        quad = float(np.exp(2 * kde.log_density(nodes)) @ weights)
        assert kde_squared_integral(sample, h) == pytest.approx(quad, abs=1e-6)

    def test_closed_form_matches_quadrature_random_samples(self, rng):
        # the anti-regression guard for the product identity
        for _ in range(20):
            sample = random_sample(rng, 20, 2)
            h = float(rng.uniform(0.15, 1.5))
            kde = KernelDensity(sample, h)
            nodes, weights = sphere_quadrature(2, 20_000)
            quad = float(np.exp(2 * kde.log_density(nodes)) @ weights)
            assert kde_squared_integral(sample, h) == pytest.approx(quad, abs=1e-5)

    def test_select_returns_in_range(self):
        sample = sample_vmf(np.array([1.0, 0.0]), 5.0, 150, seed=55)
        result = select_lscv(sample)
        lo, hi = DEFAULT_RANGE
        assert lo <= result.h <= hi
        assert result.score == pytest.approx(lscv_score(sample, result.h), rel=1e-9)


class TestOptimize1d:
    def test_unimodal_quadratic(self):
        target = math.log(0.7)
        h, _, converged = optimize_1d(lambda h: (math.log(h) - target) ** 2, (0.02, 5.0), "min")
        assert converged
        assert math.log(h) == pytest.approx(target, abs=2e-4)

    def test_monotone_hits_boundary(self):
        h, _, converged = optimize_1d(math.log, (0.02, 5.0), "min")
        assert h == 0.02 and not converged
        h, _, converged = optimize_1d(math.log, (0.02, 5.0), "max")
        assert h == 5.0 and not converged

    def test_multimodal_never_worse_than_grid(self):
        def bumpy(h):
            x = math.log(h)
            return math.sin(5 * x) + 0.1 * x**2

        grid = np.geomspace(0.02, 5.0, 25)
        grid_best = min(bumpy(g) for g in grid)
        _, value, _ = optimize_1d(bumpy, (0.02, 5.0), "min")
        assert value <= grid_best + 1e-12

    def test_non_finite_score_raises(self):
        with pytest.raises(NonFiniteScoreError):
            optimize_1d(lambda h: math.nan, (0.02, 5.0), "min")


class TestDispatch:
    def test_literal_number_and_string(self):
        sample = random_sample(np.random.default_rng(0), 10, 2)
        assert select_bandwidth(sample, 0.37).h == 0.37
        assert select_bandwidth(sample, "0.37").h == 0.37

    def test_rejects_nonpositive_literal(self):
        sample = random_sample(np.random.default_rng(0), 10, 2)
        with pytest.raises(ValueError):
            select_bandwidth(sample, -1.0)

    def test_unknown_selector(self):
        sample = random_sample(np.random.default_rng(0), 10, 2)
        with pytest.raises(ValueError):
            select_bandwidth(sample, "bootstrap")

    def test_selector_ids_route(self):
        sample = sample_vmf(np.array([1.0, 0.0]), 4.0, 80, seed=1)
        assert select_bandwidth(sample, "rot-circ").selector == "rot-circ"
        assert select_bandwidth(sample, "lcv").selector == "lcv"
        assert select_bandwidth(sample, "lscv").selector == "lscv"
        sphere = sample_vmf(np.array([0.0, 0.0, 1.0]), 4.0, 80, seed=2)
        assert select_bandwidth(sphere, "rot-hyper").selector == "rot-hyper"
