import json
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Tuple

import numpy as np

from .errors import NotAClique


@dataclass(frozen=True)
class SuperGraph:
    """
    Compressed graph over the distinct vertex labels of one input graph.

    Super-nodes are label ids in ascending order; super-edges are sorted
    label pairs in lexicographic order. Weights are aligned with those
    orderings.
    """

    super_nodes: Tuple[int, ...]
    node_weights: Tuple[int, ...]
    super_edges: Tuple[Tuple[int, int], ...]
    edge_weights: Tuple[int, ...]
    dropped_selfloop_count: int = 0

    @property
    def num_nodes(self):
        return len(self.super_nodes)

    @property
    def num_edges(self):
        return len(self.super_edges)

    def edge_weight_map(self):
        """
        Returns:
            dict(tuple(int, int), int)
        """
        return dict(zip(self.super_edges, self.edge_weights))

    def adjacency(self):
        """
        Sorted neighbour lists keyed by super-node id.

        Returns:
            dict(int, list(int))
        """
        neighbours = {node: [] for node in self.super_nodes}
        for u, v in self.super_edges:
            neighbours[u].append(v)
            neighbours[v].append(u)

        return {node: sorted(n) for node, n in neighbours.items()}

    def to_json(self):
        """
        Serialize to a single-line JSON object for debugging dumps.

        Returns:
            str
        """
        return json.dumps(
            {
                "nodes": list(self.super_nodes),
                "node_weights": list(self.node_weights),
                "edges": [list(e) for e in self.super_edges],
                "edge_weights": list(self.edge_weights),
                "dropped_selfloop_count": self.dropped_selfloop_count,
            },
            sort_keys=True,
        )


@dataclass(frozen=True)
class SimplexWeights:
    p: int
    weights: Tuple[float, ...]

    def __len__(self):
        return len(self.weights)

    def as_array(self):
        return np.asarray(self.weights, dtype=float)


def compress(graph):
    """
    Compress a labeled graph into its simplex-weighted super-graph.

    Edges whose endpoints share a label cannot be 1-simplices, so they are
    only counted in dropped_selfloop_count.

    Args:
        graph (LabeledGraph):

    Returns:
        SuperGraph
    """
    node_counts = Counter(graph.vertex_labels)
    edge_counts = Counter()
    dropped = 0

    for u, v in graph.edges:
        a, b = graph.vertex_labels[u], graph.vertex_labels[v]
        if a == b:
            dropped += 1
        else:
            edge_counts[(min(a, b), max(a, b))] += 1

    nodes = sorted(node_counts)
    edges = sorted(edge_counts)

    return SuperGraph(
        super_nodes=tuple(nodes),
        node_weights=tuple(node_counts[n] for n in nodes),
        super_edges=tuple(edges),
        edge_weights=tuple(edge_counts[e] for e in edges),
        dropped_selfloop_count=dropped,
    )


def simplex_weights(sg, simplices, p):
    """
    Weights of p-simplices of the super-graph's clique complex: label
    frequency for p=0, co-occurrence for p=1 and the smallest edge weight
    of the simplex for p>=2.

    Args:
        sg (SuperGraph):
        simplices (list(tuple(int))): Sorted (p+1)-tuples of super-node ids
        p (int): Dimension

    Returns:
        SimplexWeights
    """
    if p < 0:
        raise ValueError(f"Dimension must be non-negative, got {p}")

    if p == 0:
        node_weight = dict(zip(sg.super_nodes, sg.node_weights))
        try:
            return SimplexWeights(0, tuple(node_weight[s[0]] for s in simplices))
        except KeyError as e:
            raise NotAClique(f"{e.args[0]} is not a super-node")

    edge_weight = sg.edge_weight_map()
    weights = []
    for simplex in simplices:
        if len(simplex) != p + 1:
            raise ValueError(f"Simplex {simplex} does not have {p + 1} vertices")

        try:
            weights.append(min(edge_weight[pair] for pair in combinations(simplex, 2)))
        except KeyError as e:
            raise NotAClique(f"{simplex} contains the non-edge {e.args[0]}")

    return SimplexWeights(p, tuple(weights))


def dump_supergraphs(path, supergraphs):
    """
    Write one JSON object per super-graph, one per line.

    Args:
        path (str):
        supergraphs (iterable(SuperGraph)):
    """
    with open(path, "w") as f:
        for sg in supergraphs:
            f.write(sg.to_json() + "\n")
