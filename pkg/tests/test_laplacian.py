import numpy as np
import pytest

from simplexdff.base_types import LaplacianKind, Variant
from simplexdff.errors import DimensionUnavailable
from simplexdff.laplacian import (
    down_laplacian,
    full_laplacian,
    laplacian,
    laplacian_for_variant,
    up_laplacian,
)
from simplexdff.supergraph import SuperGraph
from simplexdff.complex import clique_complex
from tests.factories import complete_edges, complex_of, random_complex


@pytest.fixture
def triangle():
    return complex_of([(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def single_edge():
    return complex_of([(0, 1)])


def test_vertex_up_laplacian_of_triangle(triangle):
    assert up_laplacian(triangle, 0).matrix.tolist() == [
        [2, -1, -1],
        [-1, 2, -1],
        [-1, -1, 2],
    ]


def test_vertex_up_laplacian_of_single_edge(single_edge):
    assert up_laplacian(single_edge, 0).matrix.tolist() == [[1, -1], [-1, 1]]


def test_edge_up_laplacian_without_triangles_is_zero():
    sc = complex_of([(0, 1), (1, 2), (2, 3)])

    matrix = up_laplacian(sc, 1).matrix

    assert matrix.shape == (3, 3)
    assert not matrix.any()


def test_edge_down_laplacian_of_triangle(triangle):
    # edges [0,1], [0,2], [1,2]
    assert down_laplacian(triangle, 1).matrix.tolist() == [
        [2, 1, -1],
        [1, 2, 1],
        [-1, 1, 2],
    ]


def test_triangle_down_laplacian_of_single_triangle(triangle):
    assert down_laplacian(triangle, 2).matrix.tolist() == [[3]]


def test_edge_down_laplacian_of_single_edge(single_edge):
    assert down_laplacian(single_edge, 1).matrix.tolist() == [[2]]


def test_vertices_have_no_down_laplacian(triangle):
    with pytest.raises(DimensionUnavailable):
        down_laplacian(triangle, 0)


def test_up_laplacian_needs_next_dimension(triangle):
    with pytest.raises(DimensionUnavailable):
        up_laplacian(triangle, 2)


def test_full_laplacian_of_triangle(triangle):
    full = full_laplacian(triangle, 1).matrix

    assert np.diag(full).tolist() == [3, 3, 3]
    assert (full == up_laplacian(triangle, 1).matrix + down_laplacian(triangle, 1).matrix).all()


def test_full_laplacian_without_triangles_equals_down():
    sc = complex_of([(0, 1), (1, 2)])

    assert (full_laplacian(sc, 1).matrix == down_laplacian(sc, 1).matrix).all()


def test_full_laplacian_of_empty_dimension():
    sc = complex_of([], labels=[0, 1])

    assert full_laplacian(sc, 1).matrix.shape == (0, 0)


def test_vertex_laplacian_is_degree_minus_adjacency():
    sc = random_complex(np.random.default_rng(7))
    n = sc.count(0)
    adjacency = np.zeros((n, n))
    for u, v in sc.simplices[1]:
        adjacency[u, v] = adjacency[v, u] = 1

    expected = np.diag(adjacency.sum(axis=1)) - adjacency

    assert (up_laplacian(sc, 0).matrix == expected).all()


@pytest.mark.parametrize("seed", range(200))
def test_laplacian_invariants_on_random_complexes(seed):
    sc = random_complex(np.random.default_rng(seed))

    for variant in Variant:
        matrix = laplacian_for_variant(sc, variant).matrix
        assert (matrix == matrix.T).all()
        if matrix.size:
            norm = max(1.0, np.abs(matrix).max())
            assert np.linalg.eigvalsh(matrix).min() >= -1e-10 * norm

    for p in (0, 1):
        assert np.trace(up_laplacian(sc, p).matrix) == (p + 2) * sc.count(p + 1)
    for p in (1, 2):
        assert np.trace(down_laplacian(sc, p).matrix) == (p + 1) * sc.count(p)


@pytest.mark.parametrize(
    ["variant", "p", "kind"],
    [
        (Variant.VERTEX_UP, 0, LaplacianKind.UP),
        (Variant.EDGE_DOWN, 1, LaplacianKind.DOWN),
        (Variant.EDGE_UP, 1, LaplacianKind.UP),
        (Variant.EDGE_BOTH, 1, LaplacianKind.FULL),
        (Variant.TRIANGLE_DOWN, 2, LaplacianKind.DOWN),
    ],
)
def test_variant_mapping(variant, p, kind):
    sc = complex_of(complete_edges(4))

    result = laplacian_for_variant(sc, variant.value)

    assert (result.p, result.kind) == (p, kind)
    assert (result.matrix == laplacian(sc, p, kind).matrix).all()


def test_weighted_up_laplacian_scales_by_simplex_weights():
    sg = SuperGraph((0, 1), (2, 4), ((0, 1),), (3,))

    matrix = up_laplacian(clique_complex(sg), 0, weighted=True).matrix

    # W0^-1 D0^T W1 D0 with W0 = diag(2, 4), W1 = (3)
    assert matrix.tolist() == [[1.5, -1.5], [-0.75, 0.75]]


def test_weighted_down_laplacian_matches_formula():
    sg = SuperGraph((0, 1), (2, 4), ((0, 1),), (3,))

    matrix = down_laplacian(clique_complex(sg), 1, weighted=True).matrix

    # D0 W0^-1 D0^T W1 = (1/2 + 1/4) * 3
    assert matrix.tolist() == [[2.25]]
