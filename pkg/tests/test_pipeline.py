import numpy as np
import pytest

from simplexdff.base_types import DEFAULT_T_VALUES, Variant
from simplexdff.pipeline import build_complexes, extract_features, feature_filename, format_t
from simplexdff.tudata import LabeledGraphDataset
from tests.factories import make_graph


@pytest.fixture
def triangle_free_dataset():
    return LabeledGraphDataset.from_graphs(
        "SQ",
        [
            make_graph([(0, 1), (1, 2), (2, 3), (3, 0)], [0, 1, 2, 3], graph_id=1),
            make_graph([(0, 1), (1, 2)], [0, 1, 2], graph_id=2, class_label=1),
        ],
    )


@pytest.mark.parametrize(
    ["t", "expected"],
    [(1.0, "1e0"), (0.1, "1e-1"), (1e-5, "1e-5"), (10.0, "1e1"), (0.5, "0.5")],
)
def test_format_t(t, expected):
    assert format_t(t) == expected


def test_feature_filename():
    assert feature_filename("MUTAG", "edge-down", 1e-3) == "MUTAG_edge-down_t1e-3.csv"
    assert feature_filename("DD", Variant.TRIANGLE_DOWN, 1.0) == "DD_triangle-down_t1e0.csv"


def test_full_grid_has_thirty_cells(triangle_free_dataset):
    cells = extract_features(triangle_free_dataset, list(Variant), DEFAULT_T_VALUES)

    assert len(cells) == 30
    assert {feature_filename("SQ", v, t) for v, t in cells} == {
        feature_filename("SQ", v, t) for v in Variant for t in DEFAULT_T_VALUES
    }


def test_triangle_down_without_triangles_warns(triangle_free_dataset, caplog):
    cells = extract_features(triangle_free_dataset, [Variant.TRIANGLE_DOWN], [1.0])

    features = cells[(Variant.TRIANGLE_DOWN, 1.0)]

    assert features.X.shape == (2, 0)
    assert "no 2-simplices" in caplog.text


def test_rows_follow_graph_order(triangle_free_dataset):
    features = extract_features(triangle_free_dataset, [Variant.VERTEX_UP], [0.1])[
        (Variant.VERTEX_UP, 0.1)
    ]

    assert features.graph_ids.tolist() == [1, 2]
    assert features.class_labels.tolist() == [0, 1]
    assert features.dataset == "SQ"


def test_results_do_not_depend_on_jobs():
    rng = np.random.default_rng(4)
    graphs = []
    for graph_id in range(1, 11):
        n = int(rng.integers(4, 10))
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.6]
        labels = [int(label) for label in rng.integers(0, 4, size=n)]
        graphs.append(make_graph(edges, labels, graph_id=graph_id))
    dataset = LabeledGraphDataset.from_graphs("J", graphs)

    serial = extract_features(dataset, list(Variant), [1e-2])
    parallel = extract_features(dataset, list(Variant), [1e-2], jobs=4)

    for key, features in serial.items():
        assert (features.X == parallel[key].X).all()


def test_prebuilt_complexes_are_reused(triangle_free_dataset):
    complexes = build_complexes(triangle_free_dataset)

    reused = extract_features(
        triangle_free_dataset, [Variant.EDGE_UP], [1.0], complexes=complexes
    )[(Variant.EDGE_UP, 1.0)]
    fresh = extract_features(triangle_free_dataset, [Variant.EDGE_UP], [1.0])

    assert (reused.X == fresh[(Variant.EDGE_UP, 1.0)].X).all()