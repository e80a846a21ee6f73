from dataclasses import dataclass, field
from functools import wraps
from typing import Dict, Tuple

import numpy as np
from scipy import sparse

from .base_types import MAX_DIMENSION
from .errors import DimensionUnavailable
from .supergraph import SimplexWeights, simplex_weights


def requires_dimensions(*offsets):
    """
    Decorator for functions taking (complex, p, ...). It checks that every
    dimension p + offset has been built in the complex. If one has not, it
    raises a DimensionUnavailable.

    Args:
        *offsets (int)

    Returns:
        function
    """

    def decorator(func):
        @wraps(func)
        def wrapper(sc, p, *args, **kwargs):
            for offset in offsets:
                dim = p + offset
                if not 0 <= dim <= sc.max_dim:
                    raise DimensionUnavailable(
                        f"{func.__name__} for p={p} needs dimension {dim}, "
                        f"complex is built up to {sc.max_dim}"
                    )

            return func(sc, p, *args, **kwargs)

        return wrapper

    return decorator


@dataclass(frozen=True)
class SimplicialComplex:
    """
    Clique complex of a super-graph. simplices[p] holds the p-simplices as
    strictly increasing tuples of super-node ids, sorted lexicographically;
    weights[p] is aligned with it.
    """

    simplices: Tuple[Tuple[Tuple[int, ...], ...], ...]
    weights: Tuple[SimplexWeights, ...]
    _index: Tuple[Dict[Tuple[int, ...], int], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        index = tuple({s: i for i, s in enumerate(dim)} for dim in self.simplices)
        object.__setattr__(self, "_index", index)

    @property
    def max_dim(self):
        return len(self.simplices) - 1

    def count(self, p):
        """
        Number of p-simplices, 0 for dimensions that were not built.

        Args:
            p (int):

        Returns:
            int
        """
        if 0 <= p <= self.max_dim:
            return len(self.simplices[p])
        return 0


def enumerate_triangles(adjacency):
    """
    Enumerate triangles in lexicographic order: for every edge (u, v) with
    u < v, intersect the neighbours of u and v that lie above v.

    Args:
        adjacency (dict(int, list(int)) | list(list(int))): Neighbours per node

    Returns:
        list(tuple(int, int, int))
    """
    nodes = adjacency.items() if isinstance(adjacency, dict) else enumerate(adjacency)
    above = {node: set(n for n in neighbours if n > node) for node, neighbours in nodes}

    triangles = []
    for u in sorted(above):
        for v in sorted(above[u]):
            triangles.extend((u, v, w) for w in sorted(above[u] & above[v]))

    return triangles


def count_triangles(adjacency):
    """
    Args:
        adjacency (dict(int, list(int)) | list(list(int))):

    Returns:
        int
    """
    return len(enumerate_triangles(adjacency))


def clique_complex(sg, max_dim=MAX_DIMENSION):
    """
    Build the clique complex of a super-graph up to max_dim, with simplex
    weights attached per dimension.

    Args:
        sg (SuperGraph):
        max_dim (int): 0, 1 or 2

    Returns:
        SimplicialComplex
    """
    if max_dim not in (0, 1, 2):
        raise ValueError(f"max_dim must be 0, 1 or 2, got {max_dim}")

    simplices = [tuple((node,) for node in sg.super_nodes)]
    if max_dim >= 1:
        simplices.append(tuple(sg.super_edges))
    if max_dim >= 2:
        simplices.append(tuple(enumerate_triangles(sg.adjacency())))

    weights = tuple(simplex_weights(sg, s, p) for p, s in enumerate(simplices))

    return SimplicialComplex(tuple(simplices), weights)


@dataclass(frozen=True)
class IncidenceMatrix:
    """
    Signed incidence D_p between p-simplices (columns) and (p+1)-simplices
    (rows), stored as (row, col, sign) triples.
    """

    p: int
    shape: Tuple[int, int]
    rows: np.ndarray
    cols: np.ndarray
    signs: np.ndarray

    def to_sparse(self):
        """
        Returns:
            scipy.sparse.csr_matrix
        """
        return sparse.csr_matrix(
            (self.signs.astype(float), (self.rows, self.cols)), shape=self.shape
        )

    def to_dense(self):
        """
        Returns:
            numpy.ndarray (int)
        """
        matrix = np.zeros(self.shape, dtype=np.int64)
        matrix[self.rows, self.cols] = self.signs
        return matrix

    def format_triples(self):
        """
        Text dump, one "row col sign" line per nonzero after a shape header.

        Returns:
            str
        """
        lines = [f"# D{self.p} {self.shape[0]}x{self.shape[1]}"]
        lines.extend(f"{r} {c} {s:+d}" for r, c, s in zip(self.rows, self.cols, self.signs))
        return "\n".join(lines) + "\n"


@requires_dimensions(0, 1)
def incidence_matrix(sc, p):
    """
    Signed incidence matrix D_p. For a (p+1)-simplex [v0 < ... < v_{p+1}],
    the face omitting v_j has sign (-1)^j.

    Args:
        sc (SimplicialComplex):
        p (int): Source dimension

    Returns:
        IncidenceMatrix
    """
    cofaces = sc.simplices[p + 1]
    faces = sc._index[p]

    rows, cols, signs = [], [], []
    for i, simplex in enumerate(cofaces):
        for j in range(len(simplex)):
            rows.append(i)
            cols.append(faces[simplex[:j] + simplex[j + 1:]])
            signs.append(1 if j % 2 == 0 else -1)

    return IncidenceMatrix(
        p=p,
        shape=(len(cofaces), len(sc.simplices[p])),
        rows=np.asarray(rows, dtype=np.int64),
        cols=np.asarray(cols, dtype=np.int64),
        signs=np.asarray(signs, dtype=np.int64),
    )
