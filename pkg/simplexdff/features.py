import csv
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .base_types import DFF_EPSILON, Variant
from .errors import MalformedLine, MissingFile, VocabularyMismatch


@dataclass(frozen=True)
class FeatureVocabulary:
    """
    Sorted label-sets of p-simplices observed anywhere in a dataset. Since
    super-nodes are labels, a label-set occurs at most once per graph.
    """

    p: int
    variant: Optional[Variant]
    entries: Tuple[Tuple[int, ...], ...]
    _slots: Dict[Tuple[int, ...], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_slots", {e: i for i, e in enumerate(self.entries)})

    def __len__(self):
        return len(self.entries)

    def slot(self, label_set):
        """
        Args:
            label_set (tuple(int)):

        Returns:
            int
        """
        try:
            return self._slots[tuple(label_set)]
        except KeyError:
            raise VocabularyMismatch(f"Label-set {label_set} is not in the vocabulary")

    def feature_names(self):
        """
        Column names such as L3, L3-L7, L1-L4-L9.

        Returns:
            list(str)
        """
        return [format_label_set(e) for e in self.entries]


def format_label_set(label_set):
    return "-".join(f"L{label}" for label in label_set)


def parse_label_set(name):
    """
    Inverse of format_label_set.

    Args:
        name (str):

    Returns:
        tuple(int)
    """
    try:
        return tuple(int(part[1:]) for part in name.split("-") if part.startswith("L"))
    except ValueError:
        raise MalformedLine(f"Invalid feature name {name!r}")


@dataclass(eq=False)
class FeatureMatrix:
    """
    One reciprocal-DFF feature row per graph, aligned to a vocabulary.
    """

    dataset: str
    variant: Optional[Variant]
    t: float
    vocabulary: FeatureVocabulary
    graph_ids: np.ndarray
    class_labels: np.ndarray
    X: np.ndarray

    def __len__(self):
        return len(self.graph_ids)


def build_vocabulary(complexes, p, variant=None):
    """
    Union of the p-simplex label-sets over all complexes.

    Args:
        complexes (iterable(SimplicialComplex)):
        p (int):
        variant (Variant):

    Returns:
        FeatureVocabulary
    """
    entries = set()
    for sc in complexes:
        if p > sc.max_dim:
            raise ValueError(f"Complex built up to {sc.max_dim}, vocabulary needs {p}")
        entries.update(sc.simplices[p])

    variant = Variant.parse(variant) if variant is not None else None
    return FeatureVocabulary(p, variant, tuple(sorted(entries)))


def vectorize(dff_values, sc, vocab):
    """
    Feature row of one graph: 1/F for present label-sets, 1/epsilon when F
    does not exceed epsilon, 0 for absent ones.

    Args:
        dff_values (DFFValues):
        sc (SimplicialComplex):
        vocab (FeatureVocabulary):

    Returns:
        numpy.ndarray
    """
    simplices = sc.simplices[vocab.p] if vocab.p <= sc.max_dim else ()
    values = np.asarray(dff_values.values, dtype=float)

    if len(values) != len(simplices):
        raise ValueError(
            f"{len(values)} DFF values for {len(simplices)} {vocab.p}-simplices"
        )

    row = np.zeros(len(vocab))
    for simplex, value in zip(simplices, values):
        row[vocab.slot(simplex)] = 1.0 / value if value > DFF_EPSILON else 1.0 / DFF_EPSILON

    return row


def write_feature_csv(path, features):
    """
    Write `graph_id,class,<features...>` rows at full float precision.

    Args:
        path (str):
        features (FeatureMatrix):
    """
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["graph_id", "class"] + features.vocabulary.feature_names())

        for graph_id, label, row in zip(features.graph_ids, features.class_labels, features.X):
            writer.writerow([int(graph_id), int(label)] + [repr(float(v)) for v in row])


def read_feature_csv(path, dataset="", variant=None, t=float("nan")):
    """
    Read a feature CSV written by write_feature_csv.

    Args:
        path (str):
        dataset (str):
        variant (Variant):
        t (float):

    Returns:
        FeatureMatrix
    """
    try:
        f = open(path, "r", newline="")
    except FileNotFoundError:
        raise MissingFile(f"Feature file not found: {path}")

    with f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or header[:2] != ["graph_id", "class"]:
            raise MalformedLine(f"{path}: missing graph_id,class header")

        entries = tuple(parse_label_set(name) for name in header[2:])
        p = len(entries[0]) - 1 if entries else (variant.dimension if variant else 0)

        graph_ids, labels, rows = [], [], []
        for line_no, record in enumerate(reader, start=2):
            if not record:
                continue
            if len(record) != len(header):
                raise MalformedLine(f"{path}:{line_no}: expected {len(header)} columns")
            try:
                graph_ids.append(int(record[0]))
                labels.append(int(record[1]))
                rows.append([float(v) for v in record[2:]])
            except ValueError:
                raise MalformedLine(f"{path}:{line_no}: non-numeric value")

    vocab = FeatureVocabulary(p, variant, entries)
    X = np.asarray(rows, dtype=float).reshape(len(rows), len(entries))

    return FeatureMatrix(
        dataset, variant, t, vocab, np.asarray(graph_ids), np.asarray(labels), X
    )
