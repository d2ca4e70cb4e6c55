import numpy as np
import pytest
from fastapi.testclient import TestClient

from dirclust.exports import export_ccluster
from dirclust.hdr import TauGrid
from dirclust.server import create_app

from conftest import random_sample, two_group_circular

TAUS = TauGrid.from_spec("0.1:0.9:0.1")


@pytest.fixture(scope="module")
def sample():
    pooled, _ = two_group_circular(10.0, 40, seed=17)  # n = 80 < 100
    return pooled


@pytest.fixture(scope="module")
def client(sample):
    app = create_app(sample, angle_resolution=128, tau_grid=TAUS)
    return TestClient(app)


class TestMeta:
    def test_fields(self, client, sample):
        body = client.get("/api/meta").json()
        assert body["n"] == len(sample)
        assert body["d"] == 2
        assert set(body["selectors"]) == {"rot-circ", "lcv", "lscv"}
        assert all(h > 0 for h in body["selectors"].values())


class TestHdr:
    def test_small_tau_all_true(self, client, sample):
        # n < 100 so floor(0.01 n) = 0: threshold 0, mask all-true
        body = client.get("/api/hdr", params={"h": "0.3", "tau": "0.01"}).json()
        assert body["threshold"] == 0.0
        assert all(body["mask"])
        assert len(body["mask"]) == len(sample)

    def test_high_tau_masks_fringe(self, client):
        body = client.get("/api/hdr", params={"h": "0.3", "tau": "0.9"}).json()
        assert 0 < sum(body["mask"]) < len(body["mask"])

    def test_malformed(self, client):
        assert client.get("/api/hdr", params={"h": "x", "tau": "0.5"}).status_code == 400
        assert client.get("/api/hdr", params={"h": "0.3", "tau": "1.5"}).status_code == 400
        assert client.get("/api/hdr", params={"h": "-0.3", "tau": "0.5"}).status_code == 400


class TestTree:
    def test_byte_identical_responses(self, client):
        a = client.get("/api/tree", params={"h": "0.25"})
        b = client.get("/api/tree", params={"h": "0.25"})
        assert a.content == b.content
        body = a.json()
        assert body["n"] == 80
        assert body["leaf_count"] >= 1

    def test_rounding_hits_cache(self, client):
        a = client.get("/api/tree", params={"h": "0.250000049"})
        b = client.get("/api/tree", params={"h": "0.25"})
        assert a.content == b.content


class TestDensity:
    def test_matches_export_row(self, client, sample):
        h = 0.31
        body = client.get("/api/density", params={"h": str(h)}).json()
        doc = export_ccluster(sample, np.array([1.0 / h**2]), 128, tau_grid=TAUS)
        np.testing.assert_allclose(body["density"], doc["density"][0], atol=1e-12)
        np.testing.assert_allclose(body["thresholds"], doc["thresholds"][0], atol=1e-12)

    def test_dimension_mismatch_422(self, rng):
        app = create_app(random_sample(rng, 20, 4), selectors=("lcv",))
        c = TestClient(app)
        assert c.get("/api/density", params={"h": "0.5"}).status_code == 422
        assert c.get("/api/meta").status_code == 200

    def test_spherical_frame(self, rng):
        app = create_app(random_sample(rng, 30, 3), selectors=("lcv",),
                         disk_resolution=12, tau_grid=TAUS)
        c = TestClient(app)
        body = c.get("/api/density", params={"h": "0.4"}).json()
        assert "north" in body and "south" in body
        assert len(body["north"]) == 12


class TestCores:
    def test_labels_cover_sample(self, client, sample):
        body = client.get("/api/cores", params={"h": "0.3"}).json()
        assert body["n_c"] >= 1
        assert len(body["labels"]) == len(sample)
        labelled = [v for v in body["labels"] if v > 0]
        assert set(labelled) == set(range(1, body["n_c"] + 1))

    def test_malformed(self, client):
        assert client.get("/api/cores", params={"h": "zero"}).status_code == 400
        assert client.get("/api/cores").status_code == 400
