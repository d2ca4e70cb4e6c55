import numpy as np
import pytest

from dirclust.density import KernelDensity, VmfMixture, sample_vmf
from dirclust.errors import EmptySampleError
from dirclust.geometry import cartesian_to_circular, circular_to_cartesian
from dirclust.hdr import (
    HdrSpec,
    TauGrid,
    estimate_threshold,
    hdr_contains,
    hdr_mask,
    level_for_tau,
    mixture_threshold,
    quantile_threshold,
)

from conftest import random_sample


class _FixedDensity:
    """Stub model assigning preset density values to preset points."""

    def __init__(self, points, values):
        self.points = np.asarray(points, float)
        self.values = np.asarray(values, float)
        self.dim = self.points.shape[1]

    def log_density(self, x):
        x = np.atleast_2d(np.asarray(x, float))
        out = np.empty(x.shape[0])
        for i, row in enumerate(x):
            match = np.where((np.abs(self.points - row) < 1e-12).all(axis=1))[0]
            out[i] = np.log(self.values[match[0]])
        return out if out.shape[0] > 1 else out


class TestQuantileThreshold:
    def test_order_statistic_example(self):
        # n=5 densities 1..5, tau=0.4: k=2, threshold = 2, four values >= 2
        values = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
        thr = quantile_threshold(values, 0.4)
        assert thr == 2.0
        assert int((values >= thr).sum()) == 4

    def test_small_tau_gives_zero(self):
        assert quantile_threshold(np.array([1.0, 2, 3, 4, 5]), 0.15) == 0.0

    def test_tie_saturation(self):
        values = np.full(7, 3.3)
        for tau in (0.1, 0.5, 0.9):
            thr = quantile_threshold(values, tau)
            assert thr in (0.0, 3.3)
            assert np.all(values >= thr)

    def test_permutation_invariant(self, rng):
        values = rng.uniform(0, 1, 50)
        thr = quantile_threshold(values, 0.37)
        assert quantile_threshold(rng.permutation(values), 0.37) == thr

    def test_empty_raises(self):
        with pytest.raises(EmptySampleError):
            quantile_threshold(np.array([]), 0.5)


class TestHdrMembership:
    def test_threshold_zero_contains_everything(self, rng):
        sample = random_sample(rng, 40, 2)
        kde = KernelDensity(sample, 0.5)
        spec = estimate_threshold(kde, sample, 0.01)  # k = 0 at n = 40
        assert spec.threshold == 0.0
        assert hdr_mask(spec, sample).all()
        assert hdr_contains(spec, random_sample(rng, 1, 2)[0])

    def test_max_density_point_always_inside(self, rng):
        sample = random_sample(rng, 60, 3)
        kde = KernelDensity(sample, 0.4)
        dens = np.exp(kde.log_density(sample))
        top = sample[int(np.argmax(dens))]
        for tau in TauGrid.default().taus:
            spec = estimate_threshold(kde, sample, tau)
            assert hdr_contains(spec, top)

    def test_unimodal_mask_is_contiguous_arc(self):
        # points sorted by angle: the HDR of a unimodal circular fit marks
        # a contiguous run (modulo wraparound)
        sample = sample_vmf(np.array([1.0, 0.0]), 10.0, 200, seed=21)
        order = np.argsort(cartesian_to_circular(sample))
        sample = sample[order]
        kde = KernelDensity(sample, 0.3)
        spec = estimate_threshold(kde, sample, 0.5)
        mask = hdr_mask(spec, sample)
        switches = int((mask != np.roll(mask, 1)).sum())
        assert switches == 2  # one contiguous arc


class TestLevels:
    def test_thresholds_nondecreasing(self, rng):
        sample = random_sample(rng, 80, 2)
        kde = KernelDensity(sample, 0.4)
        levels = level_for_tau(kde, sample, TauGrid((0.25, 0.5, 0.75)))
        thrs = [t for _, t in levels]
        assert thrs == sorted(thrs)

    def test_uniform_kde_constant_thresholds(self, rng):
        sample = random_sample(rng, 50, 2)
        kde = KernelDensity(sample, 1e4)  # effectively uniform
        levels = level_for_tau(kde, sample, TauGrid((0.2, 0.5, 0.8)))
        thrs = np.array([t for _, t in levels])
        np.testing.assert_allclose(thrs, 1.0 / (2 * np.pi), rtol=1e-6)

    def test_bimodal_high_tau_exceeds_saddle(self):
        mu1, mu2 = circular_to_cartesian(0.0), circular_to_cartesian(np.pi)
        ss = np.random.SeedSequence(33)
        s1, s2 = ss.spawn(2)
        sample = np.vstack(
            [
                sample_vmf(mu1, 10.0, 150, np.random.default_rng(s1)),
                sample_vmf(mu2, 10.0, 150, np.random.default_rng(s2)),
            ]
        )
        kde = KernelDensity(sample, 0.35)
        saddle = np.exp(kde.log_density(circular_to_cartesian(np.pi / 2)))
        levels = dict(level_for_tau(kde, sample, TauGrid.default()))
        assert levels[0.95] > saddle

    def test_coverage_and_nesting_invariants(self, rng):
        # 50 random (sample, tau) draws
        for _ in range(50):
            n = int(rng.integers(20, 120))
            sample = random_sample(rng, n, int(rng.choice([2, 3])))
            kde = KernelDensity(sample, float(rng.uniform(0.2, 1.5)))
            tau1, tau2 = sorted(rng.uniform(0.05, 0.95, size=2))
            spec1 = estimate_threshold(kde, sample, tau1)
            spec2 = estimate_threshold(kde, sample, tau2)
            assert spec1.threshold <= spec2.threshold
            mask1 = hdr_mask(spec1, sample)
            mask2 = hdr_mask(spec2, sample)
            # nesting: HDR(tau2) subset of HDR(tau1)
            assert np.all(mask1[mask2])
            # coverage: fraction inside >= 1 - tau, <= 1 - tau + (1 + ties)/n
            values = np.exp(kde.log_density(sample))
            for tau, spec, mask in ((tau1, spec1, mask1), (tau2, spec2, mask2)):
                frac = mask.mean()
                assert frac >= 1 - tau - 1e-12
                ties = int((values == spec.threshold).sum()) if spec.threshold > 0 else n
                assert frac <= 1 - tau + (1 + ties) / n + 1e-12


class TestTauGrid:
    def test_default_grid(self):
        grid = TauGrid.default()
        assert grid.taus[0] == pytest.approx(0.01)
        assert grid.taus[-1] == pytest.approx(0.99)
        assert len(grid.taus) == 99

    def test_from_spec(self):
        grid = TauGrid.from_spec("0.1:0.9:0.2")
        np.testing.assert_allclose(grid.taus, [0.1, 0.3, 0.5, 0.7, 0.9])

    def test_rejects_invalid(self):
        with pytest.raises(ValueError):
            TauGrid((0.5, 0.4))
        with pytest.raises(ValueError):
            TauGrid((0.0, 0.5))


class TestMixtureThreshold:
    def test_single_vmf_content_matches(self):
        mix = VmfMixture([1.0], [[1.0, 0.0]], [4.0])
        tau = 0.3
        thr = mixture_threshold(mix, tau)
        # check content by independent quadrature
        from dirclust.density import sphere_quadrature

        nodes, weights = sphere_quadrature(2, 40_000)
        f = np.exp(mix.log_density(nodes))
        content = float((f * weights)[f >= thr].sum())
        assert content == pytest.approx(1 - tau, abs=2e-4)

    def test_uniform_mixture_threshold(self):
        mix = VmfMixture([1.0], [[0.0, 1.0]], [0.0])
        thr = mixture_threshold(mix, 0.5)
        # constant density: any level up to 1/(2 pi) keeps full content
        assert thr <= 1.0 / (2 * np.pi) + 1e-9
