import logging
import math
from dataclasses import asdict, dataclass
from typing import List, Optional

import numpy as np
from joblib import Parallel, delayed

from .errors import TooFewSamples, WidthMismatch


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ForestConfig:
    num_trees: int = 100
    max_features: Optional[int] = None
    min_samples_split: int = 2
    max_depth: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.num_trees < 1:
            raise ValueError("num_trees must be at least 1")
        if self.min_samples_split < 2:
            raise ValueError("min_samples_split must be at least 2")
        if self.max_features is not None and self.max_features < 1:
            raise ValueError("max_features must be at least 1")

    def features_per_split(self, num_features):
        """
        Candidate features drawn at each split, floor(sqrt(d)) unless set.

        Args:
            num_features (int):

        Returns:
            int
        """
        if num_features == 0:
            return 0
        if self.max_features is None:
            return max(1, int(math.isqrt(num_features)))
        return min(self.max_features, num_features)

    def snapshot(self):
        return asdict(self)


def _gini_scores(left_counts, total_counts):
    """
    Weighted Gini impurity of every split position given the cumulative class
    counts of the left side. Returns n * weighted impurity for positions
    1..n-1.
    """
    n = total_counts.sum()
    n_left = left_counts.sum(axis=1)
    n_right = n - n_left
    right_counts = total_counts[None, :] - left_counts

    left_term = n_left - (left_counts ** 2).sum(axis=1) / n_left
    right_term = n_right - (right_counts ** 2).sum(axis=1) / n_right

    return left_term + right_term


class DecisionTree:
    """
    CART classification tree with Gini splits over randomly drawn candidate
    features. Nodes are stored in flat arrays; feature is -1 at leaves and
    samples with x[feature] <= threshold go left.
    """

    def __init__(self, max_features, min_samples_split=2, max_depth=None):
        """
        Args:
            max_features (int): Candidate features per split
            min_samples_split (int):
            max_depth (int|None):
        """
        self.max_features = max_features
        self.min_samples_split = min_samples_split
        self.max_depth = max_depth

        self.feature = None
        self.threshold = None
        self.left = None
        self.right = None
        self.value = None

    def fit(self, X, y, n_classes, rng):
        """
        Args:
            X (numpy.ndarray): (n, d) features
            y (numpy.ndarray): Class indices in 0..n_classes-1
            n_classes (int):
            rng (numpy.random.Generator): Draws candidate features

        Returns:
            DecisionTree self
        """
        feature, threshold, left, right, value = [], [], [], [], []

        def new_node(indices):
            counts = np.bincount(y[indices], minlength=n_classes)
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            # argmax returns the first maximum, so ties favour the smaller class
            value.append(int(np.argmax(counts)))
            return len(feature) - 1, counts

        root, root_counts = new_node(np.arange(len(y)))
        stack = [(root, np.arange(len(y)), root_counts, 0)]

        while stack:
            node, indices, counts, depth = stack.pop()

            if (
                np.count_nonzero(counts) <= 1
                or len(indices) < self.min_samples_split
                or (self.max_depth is not None and depth >= self.max_depth)
            ):
                continue

            split = self._best_split(X, y, indices, counts, n_classes, rng)
            if split is None:
                continue

            split_feature, split_threshold, go_left = split
            feature[node] = split_feature
            threshold[node] = split_threshold

            left_indices = indices[go_left]
            right_indices = indices[~go_left]
            left_node, left_counts = new_node(left_indices)
            right_node, right_counts = new_node(right_indices)
            left[node] = left_node
            right[node] = right_node

            stack.append((right_node, right_indices, right_counts, depth + 1))
            stack.append((left_node, left_indices, left_counts, depth + 1))

        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=float)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.int64)

        return self

    def _best_split(self, X, y, indices, counts, n_classes, rng):
        """
        Search candidate features in a random order. At least max_features
        features are examined; the search goes on past that only while no
        feature has shown a usable threshold.
        """
        best_score = np.inf
        best = None

        for examined, f in enumerate(rng.permutation(X.shape[1]), start=1):
            if examined > self.max_features and best is not None:
                break

            values = X[indices, f]
            order = np.argsort(values, kind="mergesort")
            sorted_values = values[order]
            distinct = sorted_values[1:] > sorted_values[:-1]
            if not distinct.any():
                continue

            onehot = np.zeros((len(indices), n_classes))
            onehot[np.arange(len(indices)), y[indices][order]] = 1.0
            scores = _gini_scores(np.cumsum(onehot, axis=0)[:-1], counts)
            scores[~distinct] = np.inf

            position = int(np.argmin(scores))
            if scores[position] < best_score:
                low, high = sorted_values[position], sorted_values[position + 1]
                midpoint = low + (high - low) / 2.0
                if not low <= midpoint < high:
                    midpoint = low
                best_score = scores[position]
                best = (int(f), float(midpoint))

        if best is None:
            return None

        return best[0], best[1], X[indices, best[0]] <= best[1]

    def apply(self, X):
        """
        Leaf index reached by every row.

        Args:
            X (numpy.ndarray):

        Returns:
            numpy.ndarray
        """
        nodes = np.zeros(len(X), dtype=np.int64)
        while True:
            active = np.flatnonzero(self.feature[nodes] >= 0)
            if len(active) == 0:
                return nodes

            current = nodes[active]
            go_left = X[active, self.feature[current]] <= self.threshold[current]
            nodes[active] = np.where(go_left, self.left[current], self.right[current])

    def predict(self, X):
        """
        Args:
            X (numpy.ndarray):

        Returns:
            numpy.ndarray: Class indices
        """
        return self.value[self.apply(X)]


class Forest:
    """
    Bagged ensemble of decision trees voting by majority.
    """

    def __init__(self, config, classes, num_features, trees):
        self.config = config
        self.classes = np.asarray(classes)
        self.num_features = num_features
        self.trees = trees

    @property
    def is_constant(self):
        return len(self.classes) == 1

    def predict(self, rows):
        """
        Majority vote across trees; ties go to the smaller class id.

        Args:
            rows (numpy.ndarray): (n, d)

        Returns:
            numpy.ndarray
        """
        X = np.asarray(rows, dtype=float)
        if len(X) == 0:
            return np.zeros(0, dtype=self.classes.dtype)

        if X.ndim != 2 or X.shape[1] != self.num_features:
            raise WidthMismatch(
                f"Rows have width {X.shape[-1]}, forest was trained on {self.num_features}"
            )

        if self.is_constant:
            return np.full(len(X), self.classes[0])

        votes = np.zeros((len(X), len(self.classes)), dtype=np.int64)
        for tree in self.trees:
            votes[np.arange(len(X)), tree.predict(X)] += 1

        return self.classes[np.argmax(votes, axis=1)]


def _fit_tree(X, y, n_classes, config, max_features, seed_sequence):
    rng = np.random.default_rng(seed_sequence)
    sample = rng.integers(0, len(y), size=len(y))
    tree = DecisionTree(max_features, config.min_samples_split, config.max_depth)

    return tree.fit(X[sample], y[sample], n_classes, rng)


def train(X, y, cfg, jobs=1):
    """
    Train a random forest. Each tree draws its bootstrap sample and candidate
    features from its own stream spawned from cfg.seed, so results do not
    depend on jobs.

    Args:
        X (numpy.ndarray): (n, d) features
        y (sequence(int)): Class labels
        cfg (ForestConfig):
        jobs (int): Trees trained concurrently

    Returns:
        Forest
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)

    if X.ndim != 2 or len(X) != len(y):
        raise ValueError(f"Feature matrix {X.shape} does not match {len(y)} labels")
    if len(y) == 0:
        raise TooFewSamples("Cannot train on zero samples")
    if np.isnan(X).any():
        raise ValueError("Feature matrix contains missing values")

    classes, encoded = np.unique(y, return_inverse=True)
    if len(classes) == 1:
        logger.warning(
            "Training set has a single class %s, predicting it for every row", classes[0]
        )
        return Forest(cfg, classes, X.shape[1], [])

    max_features = cfg.features_per_split(X.shape[1])
    streams = np.random.SeedSequence(cfg.seed).spawn(cfg.num_trees)

    def fit(stream):
        return _fit_tree(X, encoded, len(classes), cfg, max_features, stream)

    if jobs > 1:
        trees = Parallel(n_jobs=jobs, prefer="threads")(delayed(fit)(stream) for stream in streams)
    else:
        trees = [fit(stream) for stream in streams]

    return Forest(cfg, classes, X.shape[1], trees)


def predict(forest, rows):
    """
    Args:
        forest (Forest):
        rows (numpy.ndarray):

    Returns:
        numpy.ndarray
    """
    return forest.predict(rows)


def stratified_kfold(class_labels, k, seed):
    """
    Assign every sample to one of k folds, dealing each class's shuffled
    members round-robin so fold class proportions match the dataset's.

    Args:
        class_labels (sequence(int)):
        k (int):
        seed (int):

    Returns:
        numpy.ndarray: Fold index per sample
    """
    labels = np.asarray(class_labels)
    if k < 2:
        raise TooFewSamples(f"Need at least 2 folds, got {k}")
    if k > len(labels):
        raise TooFewSamples(f"{k} folds requested but there are only {len(labels)} samples")

    classes = np.unique(labels)
    rng = np.random.default_rng(seed)
    folds = np.empty(len(labels), dtype=np.int64)
    offset = 0
    for label in classes:
        members = rng.permutation(np.flatnonzero(labels == label))
        folds[members] = (offset + np.arange(len(members))) % k
        offset += len(members)

    return folds


@dataclass
class CVReport:
    fold_accuracies: List[float]
    mean_accuracy: float
    std_accuracy: float
    classes: List[int]
    confusion: List[List[int]]
    seed: int
    config: dict
    k: int
    dataset: str = ""
    variant: Optional[str] = None
    t: Optional[float] = None

    def to_dict(self):
        return {
            "dataset": self.dataset,
            "variant": self.variant,
            "t": self.t,
            "k": self.k,
            "seed": self.seed,
            "config": self.config,
            "fold_accuracies": self.fold_accuracies,
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "classes": self.classes,
            "confusion": self.confusion,
        }


def cross_validate(features, k, cfg, jobs=1):
    """
    Stratified k-fold cross-validation. Fold i trains with the seed stream
    (cfg.seed, i).

    Args:
        features (FeatureMatrix):
        k (int):
        cfg (ForestConfig):
        jobs (int):

    Returns:
        CVReport
    """
    X = np.asarray(features.X, dtype=float)
    y = np.asarray(features.class_labels)
    folds = stratified_kfold(y, k, cfg.seed)
    classes = sorted(int(c) for c in np.unique(y))
    position = {c: i for i, c in enumerate(classes)}
    confusion = np.zeros((len(classes), len(classes)), dtype=np.int64)

    accuracies = []
    for fold in range(k):
        test = folds == fold
        fold_seed = int(np.random.SeedSequence([cfg.seed, fold]).generate_state(1)[0])
        fold_cfg = ForestConfig(
            cfg.num_trees, cfg.max_features, cfg.min_samples_split, cfg.max_depth, fold_seed
        )

        forest = train(X[~test], y[~test], fold_cfg, jobs=jobs)
        predicted = forest.predict(X[test])

        for actual, guess in zip(y[test], predicted):
            confusion[position[int(actual)], position[int(guess)]] += 1
        accuracies.append(float(np.mean(predicted == y[test])))

    variant = getattr(features, "variant", None)
    report = CVReport(
        fold_accuracies=accuracies,
        mean_accuracy=float(np.mean(accuracies)),
        std_accuracy=float(np.std(accuracies)),
        classes=classes,
        confusion=confusion.tolist(),
        seed=cfg.seed,
        config=cfg.snapshot(),
        k=k,
        dataset=getattr(features, "dataset", ""),
        variant=variant.value if variant is not None else None,
        t=getattr(features, "t", None),
    )

    logger.info(
        "%s %s t=%s: mean accuracy %.4f (std %.4f)",
        report.dataset,
        report.variant,
        report.t,
        report.mean_accuracy,
        report.std_accuracy,
    )

    return report
