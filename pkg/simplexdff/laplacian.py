from dataclasses import dataclass

import numpy as np

from .base_types import LaplacianKind, Variant
from .complex import incidence_matrix, requires_dimensions


@dataclass(frozen=True)
class LaplacianMatrix:
    p: int
    kind: LaplacianKind
    matrix: np.ndarray

    @property
    def size(self):
        return self.matrix.shape[0]


def _weight_matrices(sc, p, q, weighted):
    """
    Diagonal weights of dimensions p and q as 1-d arrays, ones unless weighted.
    """
    if not weighted:
        return np.ones(sc.count(p)), np.ones(sc.count(q))

    return sc.weights[p].as_array(), sc.weights[q].as_array()


@requires_dimensions(0, 1)
def up_laplacian(sc, p, weighted=False):
    """
    Up Laplacian W_p^-1 D_p^T W_{p+1} D_p. With identity weights, the default
    used by every experiment, this is D_p^T D_p.

    Args:
        sc (SimplicialComplex):
        p (int):
        weighted (bool): Use simplex weights instead of identity matrices

    Returns:
        LaplacianMatrix
    """
    incidence = incidence_matrix(sc, p)

    if weighted:
        d = incidence.to_dense().astype(float)
        w_p, w_next = _weight_matrices(sc, p, p + 1, True)
        matrix = (d.T * w_next) @ d / w_p[:, None]
    else:
        d = incidence.to_sparse()
        matrix = (d.T @ d).toarray()

    return LaplacianMatrix(p, LaplacianKind.UP, matrix)


@requires_dimensions(-1, 0)
def down_laplacian(sc, p, weighted=False):
    """
    Down Laplacian D_{p-1} W_{p-1}^-1 D_{p-1}^T W_p, D_{p-1} D_{p-1}^T at
    identity weights. Vertices have none.

    Args:
        sc (SimplicialComplex):
        p (int):
        weighted (bool):

    Returns:
        LaplacianMatrix
    """
    incidence = incidence_matrix(sc, p - 1)

    if weighted:
        d = incidence.to_dense().astype(float)
        w_prev, w_p = _weight_matrices(sc, p - 1, p, True)
        matrix = (d / w_prev) @ d.T * w_p[None, :]
    else:
        d = incidence.to_sparse()
        matrix = (d @ d.T).toarray()

    return LaplacianMatrix(p, LaplacianKind.DOWN, matrix)


@requires_dimensions(-1, 0, 1)
def full_laplacian(sc, p, weighted=False):
    """
    Sum of the up and down Laplacians.

    Args:
        sc (SimplicialComplex):
        p (int):
        weighted (bool):

    Returns:
        LaplacianMatrix
    """
    up = up_laplacian(sc, p, weighted=weighted)
    down = down_laplacian(sc, p, weighted=weighted)

    return LaplacianMatrix(p, LaplacianKind.FULL, up.matrix + down.matrix)


_BUILDERS = {
    LaplacianKind.UP: up_laplacian,
    LaplacianKind.DOWN: down_laplacian,
    LaplacianKind.FULL: full_laplacian,
}


def laplacian(sc, p, kind, weighted=False):
    """
    Dispatch to the builder for a Laplacian kind.

    Args:
        sc (SimplicialComplex):
        p (int):
        kind (LaplacianKind|str):
        weighted (bool):

    Returns:
        LaplacianMatrix
    """
    return _BUILDERS[LaplacianKind(kind)](sc, p, weighted=weighted)


def laplacian_for_variant(sc, variant):
    """
    Args:
        sc (SimplicialComplex):
        variant (Variant|str):

    Returns:
        LaplacianMatrix
    """
    variant = Variant.parse(variant)
    return laplacian(sc, variant.dimension, variant.kind)
