"""Scikit-learn style wrappers over extraction and retrieval."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from visq.estimators import ImageFeaturizer, ImageRetriever
from visq.query import QuerySpec, rank
from visq.store import ExtractionConfig, FeatureStore, extract_features

from conftest import random_image, solid_image


def tiny_dataset(rng, n_per=3):
    images, labels = [], []
    for label, base in (("warm", (210, 40, 40)), ("cool", (40, 60, 210))):
        for _ in range(n_per):
            px = np.clip(
                np.array(base) + rng.integers(-15, 16, size=(12, 12, 3)), 0, 255
            ).astype(np.uint8)
            images.append(px)
            labels.append(label)
    return images, labels


class TestFeaturizer:
    def test_get_set_params_round_trip(self):
        f = ImageFeaturizer(h_bins=8, grid_rows=2)
        params = f.get_params()
        assert params["h_bins"] == 8
        assert params["grid_rows"] == 2
        f.set_params(h_bins=4)
        assert f.get_params()["h_bins"] == 4

    def test_clone_preserves_params(self):
        f = ImageFeaturizer(h_bins=8, include_texture=False)
        g = clone(f)
        assert g.get_params() == f.get_params()

    def test_transform_shape_full(self, rng):
        f = ImageFeaturizer().fit()
        images = [random_image(rng, 16, 16) for _ in range(3)]
        X = f.transform(images)
        # 256 global + 16 blocks x 256 + 6 moments
        assert X.shape == (3, 256 + 16 * 256 + 6)
        assert X.dtype == np.float64

    def test_transform_shape_gch_only(self, rng):
        f = ImageFeaturizer(include_lch=False, include_texture=False).fit()
        X = f.transform([random_image(rng)])
        assert X.shape == (1, 256)
        assert X[0].sum() == pytest.approx(1.0, abs=1e-9)

    def test_transform_matches_extract(self, rng):
        f = ImageFeaturizer(include_lch=False, include_texture=False).fit()
        img = random_image(rng)
        X = f.transform([img])
        fv = f.extract([img])[0]
        assert np.allclose(X[0], np.asarray(fv.gch.values), atol=0)

    def test_accepts_arrays_and_raw_images(self, rng):
        f = ImageFeaturizer(include_lch=False, include_texture=False).fit()
        img = random_image(rng)
        a = f.transform([img])
        b = f.transform([np.asarray(img.pixels)])
        assert np.array_equal(a, b)

    def test_unfitted_transform_rejected(self, rng):
        with pytest.raises(NotFittedError):
            ImageFeaturizer().transform([random_image(rng)])


class TestRetriever:
    def test_fit_from_images_and_labels(self, rng):
        images, labels = tiny_dataset(rng)
        r = ImageRetriever().fit(images, labels)
        assert len(r.store_) == 6

    def test_fit_from_feature_store(self, rng):
        cfg = ExtractionConfig()
        entries = tuple(
            extract_features(random_image(rng), cfg, id=f"i{i}") for i in range(4)
        )
        store = FeatureStore(config=cfg, entries=entries)
        r = ImageRetriever().fit(store)
        assert r.store_ is store

    def test_query_returns_ranked_results(self, rng):
        images, labels = tiny_dataset(rng)
        r = ImageRetriever().fit(images, labels)
        results = r.query(images[0], k=3)
        assert results[0].total_distance == 0.0
        assert len(results) == 3

    def test_query_agrees_with_functional_rank(self, rng):
        images, labels = tiny_dataset(rng)
        r = ImageRetriever(metric="euclidean").fit(images, labels)
        got = [res.id for res in r.query(images[2], k=4)]
        # stored entry 2 carries the same features the probe extracts
        probe = r.store_.entries[2]
        want = [res.id for res in rank(probe, r.store_, r._spec(4))]
        assert got == want

    def test_predict_labels_by_nearest(self, rng):
        images, labels = tiny_dataset(rng)
        r = ImageRetriever().fit(images, labels)
        warm_probe = np.clip(
            np.array((215, 45, 35)) + rng.integers(-5, 6, size=(12, 12, 3)), 0, 255
        ).astype(np.uint8)
        assert r.predict([warm_probe])[0] == "warm"

    def test_kneighbors_shapes(self, rng):
        images, labels = tiny_dataset(rng)
        r = ImageRetriever().fit(images, labels)
        dist, idx = r.kneighbors(images[:2], n_neighbors=3)
        assert dist.shape == (2, 3)
        assert idx.shape == (2, 3)
        # the probe is its own nearest stored neighbor
        assert dist[0, 0] == 0.0
        assert dist[1, 0] == 0.0

    def test_kneighbors_without_distance(self, rng):
        images, labels = tiny_dataset(rng)
        r = ImageRetriever().fit(images, labels)
        idx = r.kneighbors(images[:1], n_neighbors=2, return_distance=False)
        assert idx.shape == (1, 2)

    def test_minkowski_requires_mk(self, rng):
        images, labels = tiny_dataset(rng)
        r = ImageRetriever(metric="minkowski").fit(images, labels)
        with pytest.raises(ValueError):
            r.query(images[0], k=2)

    def test_unfitted_rejected(self, rng):
        with pytest.raises(NotFittedError):
            ImageRetriever().query(random_image(rng), k=1)

    def test_clone_compatible(self):
        r = ImageRetriever(metric="quadratic", weights={"gch": 1.0})
        c = clone(r)
        assert c.get_params()["metric"] == "quadratic"

    def test_custom_featurizer_params_flow_through(self, rng):
        f = ImageFeaturizer(h_bins=8, s_bins=2, v_bins=2, include_lch=False)
        images, labels = tiny_dataset(rng)
        r = ImageRetriever(featurizer=f).fit(images, labels)
        assert r.store_.config.scheme.total_bins == 32
