import numpy as np
import pytest

from dirclust.density import sample_vmf
from dirclust.geometry import circular_to_cartesian


def random_unit(rng, d):
    v = rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_sample(rng, n, d):
    x = rng.standard_normal((n, d))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def two_group_circular(kappa, n_per_group, seed, separation=2 * np.pi / 3):
    """Pooled sample from two equally weighted circular vMF groups."""
    mu1 = circular_to_cartesian(np.pi / 2)
    mu2 = circular_to_cartesian(np.pi / 2 + separation)
    ss = np.random.SeedSequence(seed)
    s1, s2 = ss.spawn(2)
    a = sample_vmf(mu1, kappa, n_per_group, np.random.default_rng(s1))
    b = sample_vmf(mu2, kappa, n_per_group, np.random.default_rng(s2))
    labels = np.array([1] * n_per_group + [2] * n_per_group)
    return np.vstack([a, b]), labels
