from types import SimpleNamespace

import numpy as np
import pytest

from simplexdff.errors import TooFewSamples, WidthMismatch
from simplexdff.forest import (
    DecisionTree,
    ForestConfig,
    cross_validate,
    predict,
    stratified_kfold,
    train,
)
from tests.factories import separable_clouds


@pytest.fixture
def clouds():
    return separable_clouds(np.random.default_rng(0))


@pytest.mark.parametrize(
    ["num_features", "max_features", "expected"],
    [(0, None, 0), (1, None, 1), (10, None, 3), (1031, None, 32), (3, 5, 3), (50, 4, 4)],
)
def test_features_per_split(num_features, max_features, expected):
    assert ForestConfig(max_features=max_features).features_per_split(num_features) == expected


@pytest.mark.parametrize(
    "options", [{"num_trees": 0}, {"min_samples_split": 1}, {"max_features": 0}]
)
def test_invalid_forest_config(options):
    with pytest.raises(ValueError):
        ForestConfig(**options)


def test_one_sample_per_fold():
    folds = stratified_kfold([0] * 5 + [1] * 5, 10, seed=0)

    assert sorted(folds.tolist()) == list(range(10))


def test_fold_sizes_and_proportions():
    labels = np.array([0] * 125 + [1] * 63)

    folds = stratified_kfold(labels, 10, seed=3)

    sizes = np.bincount(folds, minlength=10)
    assert set(sizes.tolist()) == {18, 19}
    for fold in range(10):
        assert np.count_nonzero(labels[folds == fold] == 1) in (6, 7)


def test_folds_are_deterministic():
    labels = np.random.default_rng(1).integers(0, 3, size=60)

    assert (stratified_kfold(labels, 5, 7) == stratified_kfold(labels, 5, 7)).all()
    assert not (stratified_kfold(labels, 5, 7) == stratified_kfold(labels, 5, 8)).all()


@pytest.mark.parametrize("k", [1, 16])
def test_too_few_samples_for_folds(k):
    with pytest.raises(TooFewSamples):
        stratified_kfold([0] * 5 + [1] * 10, k, seed=0)


def test_more_folds_than_members_of_a_class():
    labels = np.array([0] * 3 + [1] * 9)

    folds = stratified_kfold(labels, 6, seed=4)

    assert np.bincount(folds, minlength=6).tolist() == [2] * 6
    for fold in range(6):
        assert np.count_nonzero(labels[folds == fold] == 0) in (0, 1)


def test_separable_training_accuracy(clouds):
    X, y = clouds

    forest = train(X, y, ForestConfig(num_trees=100, seed=0))

    assert (predict(forest, X) == y).all()


def test_constant_features_predict_majority():
    X = np.zeros((100, 4))
    y = np.array([0] * 70 + [1] * 30)

    forest = train(X, y, ForestConfig(num_trees=50))

    assert (forest.predict(X) == 0).all()


def test_single_sample_predicts_its_class():
    forest = train(np.array([[1.0, 2.0]]), np.array([3]), ForestConfig())

    assert forest.is_constant
    assert forest.predict(np.array([[5.0, 6.0], [0.0, 0.0]])).tolist() == [3, 3]


def test_predict_on_no_rows(clouds):
    forest = train(*clouds, ForestConfig(num_trees=5))

    assert len(forest.predict(np.zeros((0, 2)))) == 0


def test_zero_width_rows_get_one_prediction_each():
    forest = train(np.zeros((6, 0)), np.array([0, 1, 1, 0, 1, 1]), ForestConfig(num_trees=5))

    predicted = forest.predict(np.zeros((4, 0)))

    assert len(predicted) == 4
    assert len(set(predicted.tolist())) == 1
    assert predicted[0] in (0, 1)


def test_cross_validation_on_zero_width_features():
    y = np.array([0] * 4 + [1] * 8)

    report = cross_validate(
        SimpleNamespace(X=np.zeros((12, 0)), class_labels=y), 3, ForestConfig(num_trees=5)
    )

    assert len(report.fold_accuracies) == 3
    assert np.array(report.confusion).sum(axis=1).tolist() == [4, 8]


def test_predict_with_wrong_width(clouds):
    forest = train(*clouds, ForestConfig(num_trees=5))

    with pytest.raises(WidthMismatch):
        forest.predict(np.zeros((3, 5)))


def test_training_rejects_missing_values(clouds):
    X, y = clouds
    X = X.copy()
    X[0, 0] = np.nan

    with pytest.raises(ValueError):
        train(X, y, ForestConfig(num_trees=5))


def test_class_labels_are_preserved():
    X, y = separable_clouds(np.random.default_rng(2), per_class=20)
    labels = np.where(y == 0, -1, 1)

    forest = train(X, labels, ForestConfig(num_trees=10))

    assert set(forest.predict(X).tolist()) <= {-1, 1}


def test_results_do_not_depend_on_jobs(clouds):
    X, y = clouds
    rng = np.random.default_rng(9)
    X = X + rng.normal(0, 4.0, size=X.shape)
    cfg = ForestConfig(num_trees=20, seed=5)

    serial = train(X, y, cfg, jobs=1)
    parallel = train(X, y, cfg, jobs=4)

    assert (serial.predict(X) == parallel.predict(X)).all()
    for a, b in zip(serial.trees, parallel.trees):
        assert (a.feature == b.feature).all()
        assert (a.threshold == b.threshold).all()


def test_tree_structure_survives_monotone_transform():
    rng = np.random.default_rng(6)
    X = rng.normal(size=(80, 3))
    y = (X[:, 0] + rng.normal(0, 0.5, size=80) > 0).astype(int)

    tree = DecisionTree(max_features=2).fit(X, y, 2, np.random.default_rng(1))
    transformed = DecisionTree(max_features=2).fit(np.exp(X), y, 2, np.random.default_rng(1))

    assert (tree.feature == transformed.feature).all()
    assert (tree.apply(X) == transformed.apply(np.exp(X))).all()


def test_max_depth_limits_tree():
    X, y = separable_clouds(np.random.default_rng(3))
    y = np.random.default_rng(3).permutation(y)

    tree = DecisionTree(max_features=2, max_depth=1).fit(X, y, 2, np.random.default_rng(0))

    assert len(tree.feature) <= 3


def test_cross_validation_on_separable_data(clouds):
    X, y = clouds

    report = cross_validate(SimpleNamespace(X=X, class_labels=y), 10, ForestConfig(num_trees=25))

    assert report.mean_accuracy >= 0.95
    assert len(report.fold_accuracies) == 10
    assert np.array(report.confusion).sum() == len(y)
    assert report.to_dict()["k"] == 10


def test_cross_validation_on_shuffled_labels_is_chance():
    accuracies = []
    for seed in range(10):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(100, 5))
        y = rng.permutation([0] * 50 + [1] * 50)
        report = cross_validate(
            SimpleNamespace(X=X, class_labels=y), 10, ForestConfig(num_trees=20, seed=seed)
        )
        accuracies.append(report.mean_accuracy)

    assert 0.35 <= np.mean(accuracies) <= 0.65


def test_cross_validation_on_constant_features():
    y = np.array([0] * 70 + [1] * 30)

    report = cross_validate(
        SimpleNamespace(X=np.zeros((100, 3)), class_labels=y), 10, ForestConfig(num_trees=25)
    )

    assert report.mean_accuracy == pytest.approx(0.7)
    assert report.confusion == [[70, 0], [30, 0]]


def test_cross_validation_is_deterministic(clouds):
    X, y = clouds
    noisy = X + np.random.default_rng(1).normal(0, 5, X.shape)
    features = SimpleNamespace(X=noisy, class_labels=y)
    cfg = ForestConfig(num_trees=10, seed=2)

    first = cross_validate(features, 5, cfg)
    second = cross_validate(features, 5, cfg, jobs=3)

    assert first.fold_accuracies == second.fold_accuracies
