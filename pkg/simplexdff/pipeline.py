import logging
import math

import numpy as np
from joblib import Parallel, delayed

from .base_types import Variant
from .complex import clique_complex
from .diffusion import FrechetFunction, decompose, probability_distribution
from .features import FeatureMatrix, build_vocabulary, vectorize
from .laplacian import laplacian_for_variant
from .supergraph import compress


logger = logging.getLogger(__name__)


def format_t(t):
    """
    Compact label for a diffusion time: 1e-3 for powers of ten, %g otherwise.

    Args:
        t (float):

    Returns:
        str
    """
    exponent = math.log10(t)
    if abs(exponent - round(exponent)) < 1e-9:
        return f"1e{int(round(exponent))}"
    return f"{t:g}"


def feature_filename(dataset, variant, t):
    return f"{dataset}_{Variant.parse(variant).value}_t{format_t(t)}.csv"


def _map(func, items, jobs):
    """
    Ordered map over a joblib thread pool, inline when jobs <= 1.
    """
    if jobs > 1:
        return Parallel(n_jobs=jobs, prefer="threads")(delayed(func)(item) for item in items)

    return [func(item) for item in items]


def build_complexes(dataset, jobs=1):
    """
    Compress every graph and build its clique complex up to triangles.

    Args:
        dataset (LabeledGraphDataset):
        jobs (int):

    Returns:
        list(SimplicialComplex): Aligned with dataset.graphs
    """

    def build(graph):
        sc = clique_complex(compress(graph))
        logger.debug(
            "Graph %d: %d super-nodes, %d super-edges, %d triangles",
            graph.graph_id,
            sc.count(0),
            sc.count(1),
            sc.count(2),
        )
        return sc

    return _map(build, dataset.graphs, jobs)


def graph_feature_rows(sc, variant, vocab, t_values):
    """
    Feature rows of one graph for every diffusion time. The spectrum is
    computed once and shared across all t.

    Args:
        sc (SimplicialComplex):
        variant (Variant):
        vocab (FeatureVocabulary):
        t_values (sequence(float)):

    Returns:
        list(numpy.ndarray): One row per t
    """
    p = variant.dimension
    if sc.count(p) == 0:
        return [np.zeros(len(vocab)) for _ in t_values]

    spectrum = decompose(laplacian_for_variant(sc, variant))
    frechet = FrechetFunction(spectrum, probability_distribution(sc.weights[p]), variant)

    return [vectorize(frechet(t), sc, vocab) for t in t_values]


def extract_features(dataset, variants, t_values, jobs=1, complexes=None):
    """
    Reciprocal-DFF feature matrices for every (variant, t) cell. Vocabularies
    are built over the whole dataset before any graph is vectorized.

    Args:
        dataset (LabeledGraphDataset):
        variants (sequence(Variant)):
        t_values (sequence(float)):
        jobs (int): Graphs processed concurrently
        complexes (list(SimplicialComplex)): Reuse already built complexes

    Returns:
        dict((Variant, float), FeatureMatrix)
    """
    if complexes is None:
        complexes = build_complexes(dataset, jobs)

    graph_ids = np.asarray([g.graph_id for g in dataset.graphs])
    class_labels = np.asarray([g.class_label for g in dataset.graphs])

    cells = {}
    for variant in (Variant.parse(v) for v in variants):
        vocab = build_vocabulary(complexes, variant.dimension, variant)
        if len(vocab) == 0:
            logger.warning(
                "%s has no %d-simplices in any graph, %s features are all zero",
                dataset.name,
                variant.dimension,
                variant.value,
            )

        per_graph = _map(
            lambda sc: graph_feature_rows(sc, variant, vocab, t_values), complexes, jobs
        )

        for index, t in enumerate(t_values):
            X = np.zeros((len(per_graph), len(vocab)))
            for row, rows in enumerate(per_graph):
                X[row] = rows[index]

            cells[(variant, t)] = FeatureMatrix(
                dataset.name, variant, t, vocab, graph_ids, class_labels, X
            )
            logger.info(
                "Extracted %s %s t=%s: %s", dataset.name, variant.value, format_t(t), X.shape
            )

    return cells
