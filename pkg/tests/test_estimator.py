"""Estimator facade: sklearn protocol compliance and train/predict behavior."""

import numpy as np
import pytest
from sklearn.base import clone

from cxrnet.estimator import ConvNetClassifier
from cxrnet.exceptions import PixelRangeError, ShapeMismatchError
from conftest import pattern_images


def tiny_classifier(**overrides):
    params = dict(
        input_shape=(16, 16, 3),
        conv_filters=(3, 4),
        dense_units=8,
        epochs=3,
        batch_size=4,
        learning_rate=1e-3,
        random_state=0,
        validation_fraction=0.0,
    )
    params.update(overrides)
    return ConvNetClassifier(**params)


class TestSklearnProtocol:
    def test_get_params_round_trip(self):
        clf = tiny_classifier(learning_rate=0.005)
        params = clf.get_params()
        assert params["learning_rate"] == 0.005
        assert params["input_shape"] == (16, 16, 3)
        rebuilt = ConvNetClassifier(**params)
        assert rebuilt.get_params() == params

    def test_set_params_chains(self):
        clf = tiny_classifier()
        out = clf.set_params(epochs=7, optimizer="sgd-momentum")
        assert out is clf and clf.epochs == 7 and clf.optimizer == "sgd-momentum"

    def test_clone_preserves_params_and_drops_state(self):
        x, y = pattern_images(n_per_class=2, size=16, seed=0)
        clf = tiny_classifier(epochs=1).fit(x, y)
        copy = clone(clf)
        assert copy.get_params() == clf.get_params()
        assert not hasattr(copy, "model_")

    def test_unfitted_predict_raises(self):
        x, _ = pattern_images(n_per_class=1, size=16, seed=0)
        with pytest.raises(RuntimeError):
            tiny_classifier().predict(x)


class TestFitPredict:
    def test_fit_sets_state_and_returns_self(self):
        x, y = pattern_images(n_per_class=3, size=16, seed=1)
        clf = tiny_classifier()
        assert clf.fit(x, y) is clf
        assert hasattr(clf, "model_") and hasattr(clf, "history_")
        np.testing.assert_array_equal(clf.classes_, [0, 1, 2])
        assert len(clf.history_.records) == clf.epochs

    def test_predict_shapes_and_range(self):
        x, y = pattern_images(n_per_class=3, size=16, seed=2)
        clf = tiny_classifier().fit(x, y)
        pred = clf.predict(x)
        assert pred.shape == (9,)
        assert set(np.unique(pred)) <= {0, 1, 2}

    def test_predict_proba_rows_sum_to_one(self):
        x, y = pattern_images(n_per_class=3, size=16, seed=3)
        clf = tiny_classifier().fit(x, y)
        probs = clf.predict_proba(x)
        assert probs.shape == (9, 3)
        np.testing.assert_allclose(probs.sum(axis=1), np.ones(9), atol=1e-5)

    def test_predict_is_argmax_of_proba(self):
        x, y = pattern_images(n_per_class=3, size=16, seed=4)
        clf = tiny_classifier().fit(x, y)
        np.testing.assert_array_equal(
            clf.predict(x), clf.predict_proba(x).argmax(axis=1)
        )

    def test_score_learnable_patterns(self):
        x, y = pattern_images(n_per_class=5, size=16, seed=5)
        clf = tiny_classifier(epochs=30, learning_rate=3e-3).fit(x, y)
        assert clf.score(x, y) >= 0.8

    def test_same_seed_reproduces_predictions(self):
        x, y = pattern_images(n_per_class=2, size=16, seed=6)
        a = tiny_classifier().fit(x, y)
        b = tiny_classifier().fit(x, y)
        np.testing.assert_array_equal(a.predict_proba(x), b.predict_proba(x))


class TestInputValidation:
    def test_wrong_shape_rejected(self):
        x, y = pattern_images(n_per_class=2, size=12, seed=0)
        with pytest.raises(ShapeMismatchError):
            tiny_classifier().fit(x, y)

    def test_out_of_range_pixels_rejected(self):
        x, y = pattern_images(n_per_class=2, size=16, seed=0)
        with pytest.raises(PixelRangeError):
            tiny_classifier().fit(x * 300.0, y)

    def test_non_integer_labels_rejected(self):
        x, _ = pattern_images(n_per_class=2, size=16, seed=0)
        with pytest.raises(ValueError):
            tiny_classifier().fit(x, np.full(len(x), 0.5))

    def test_out_of_range_labels_rejected(self):
        x, _ = pattern_images(n_per_class=2, size=16, seed=0)
        with pytest.raises(ValueError):
            tiny_classifier().fit(x, np.full(len(x), 9, dtype=int))

    def test_length_mismatch_rejected(self):
        x, y = pattern_images(n_per_class=2, size=16, seed=0)
        with pytest.raises(ValueError):
            tiny_classifier().fit(x, y[:-1])
