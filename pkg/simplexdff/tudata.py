import logging
import os
import re
from collections import OrderedDict
from dataclasses import dataclass
from typing import List, Tuple

from .errors import EmptyDataset, IndexOutOfRange, MalformedLine, MissingFile


logger = logging.getLogger(__name__)

_SEPARATOR = re.compile(r"[\s,]+")

REQUIRED_SUFFIXES = ("A", "graph_indicator", "graph_labels", "node_labels")


@dataclass(frozen=True)
class LabeledGraph:
    """
    One vertex-labeled, undirected graph with local 0-based vertex indices.
    Edges are stored canonically as sorted (u, v) pairs with u < v.
    """

    graph_id: int
    num_vertices: int
    edges: Tuple[Tuple[int, int], ...]
    vertex_labels: Tuple[int, ...]
    class_label: int

    def __post_init__(self):
        if self.num_vertices < 0:
            raise ValueError(f"Graph {self.graph_id}: negative vertex count")

        if len(self.vertex_labels) != self.num_vertices:
            raise ValueError(
                f"Graph {self.graph_id}: {len(self.vertex_labels)} labels "
                f"for {self.num_vertices} vertices"
            )

        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"Graph {self.graph_id}: self-loop on vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"Graph {self.graph_id}: edge ({u}, {v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"Graph {self.graph_id}: duplicate edge {key}")
            seen.add(key)

    @property
    def num_edges(self):
        return len(self.edges)

    def adjacency(self):
        """
        Sorted neighbour lists, one per vertex.

        Returns:
            list(list(int))
        """
        neighbours = [[] for _ in range(self.num_vertices)]
        for u, v in self.edges:
            neighbours[u].append(v)
            neighbours[v].append(u)

        return [sorted(n) for n in neighbours]


@dataclass(frozen=True)
class LabeledGraphDataset:
    name: str
    graphs: Tuple[LabeledGraph, ...]
    label_universe: Tuple[int, ...]
    class_universe: Tuple[int, ...]

    @classmethod
    def from_graphs(cls, name, graphs):
        """
        Build a dataset, deriving the label and class universes from the graphs.

        Args:
            name (str):
            graphs (iterable(LabeledGraph)):

        Returns:
            LabeledGraphDataset
        """
        graphs = tuple(graphs)
        labels = sorted({label for g in graphs for label in g.vertex_labels})
        classes = sorted({g.class_label for g in graphs})

        return cls(name, graphs, tuple(labels), tuple(classes))

    def __len__(self):
        return len(self.graphs)

    @property
    def class_labels(self):
        return [g.class_label for g in self.graphs]

    def summary(self):
        """
        Dataset-level properties: size, classes, average vertex and edge
        counts, and distinct vertex labels.

        Returns:
            dict
        """
        return {
            "dataset": self.name,
            "graphs": len(self.graphs),
            "classes": len(self.class_universe),
            "avg_vertices": sum(g.num_vertices for g in self.graphs) / len(self.graphs),
            "avg_edges": sum(g.num_edges for g in self.graphs) / len(self.graphs),
            "labels": len(self.label_universe),
        }


def _path(directory, name, suffix):
    return os.path.join(directory, f"{name}_{suffix}.txt")


def _read_rows(path, arity):
    """
    Read a TU text file as rows of integers. Tokens may be separated by
    commas and/or whitespace; blank lines are skipped.

    Args:
        path (str):
        arity (int): Expected number of integers per line

    Returns:
        list(tuple(int))
    """
    if not os.path.isfile(path):
        raise MissingFile(f"Required file not found: {path}")

    rows = []
    with open(path, "r") as f:
        for line_no, line in enumerate(f, start=1):
            stripped = line.strip().strip(",")
            if not stripped:
                continue

            tokens = [t for t in _SEPARATOR.split(stripped) if t]
            if len(tokens) != arity:
                raise MalformedLine(
                    f"{path}:{line_no}: expected {arity} value(s), found {len(tokens)}"
                )

            try:
                rows.append(tuple(int(t) for t in tokens))
            except ValueError:
                raise MalformedLine(f"{path}:{line_no}: non-integer token in {stripped!r}")

    return rows


def load_dataset(directory, name):
    """
    Load a TU-format dataset.

    Global 1-based node ids are remapped to per-graph 0-based indices, each
    undirected edge listed in both directions is kept once, and self-loops are
    dropped.

    Args:
        directory (str): Directory holding the `<name>_*.txt` files
        name (str): Dataset name, e.g. "MUTAG"

    Returns:
        LabeledGraphDataset
    """
    for suffix in REQUIRED_SUFFIXES:
        if not os.path.isfile(_path(directory, name, suffix)):
            raise MissingFile(f"Required file not found: {_path(directory, name, suffix)}")

    indicator = [r[0] for r in _read_rows(_path(directory, name, "graph_indicator"), 1)]
    node_labels = [r[0] for r in _read_rows(_path(directory, name, "node_labels"), 1)]
    graph_labels = [r[0] for r in _read_rows(_path(directory, name, "graph_labels"), 1)]
    raw_edges = _read_rows(_path(directory, name, "A"), 2)

    if not indicator:
        raise EmptyDataset(f"Dataset {name} in {directory} contains no graphs")

    if len(node_labels) != len(indicator):
        raise MalformedLine(
            f"{_path(directory, name, 'node_labels')}: {len(node_labels)} labels "
            f"for {len(indicator)} nodes"
        )

    # Graph id -> list of global node ids, in file order
    members = OrderedDict()
    local_index = []
    for node, graph_id in enumerate(indicator):
        nodes = members.setdefault(graph_id, [])
        local_index.append(len(nodes))
        nodes.append(node)

    edges = {graph_id: set() for graph_id in members}
    self_loops = 0
    for i, j in raw_edges:
        for node_id in (i, j):
            if not 1 <= node_id <= len(indicator):
                raise IndexOutOfRange(
                    f"{_path(directory, name, 'A')}: node id {node_id} outside 1..{len(indicator)}"
                )

        if i == j:
            self_loops += 1
            continue

        graph_id = indicator[i - 1]
        if indicator[j - 1] != graph_id:
            raise MalformedLine(
                f"{_path(directory, name, 'A')}: edge ({i}, {j}) joins graphs "
                f"{graph_id} and {indicator[j - 1]}"
            )

        u, v = local_index[i - 1], local_index[j - 1]
        edges[graph_id].add((min(u, v), max(u, v)))

    if self_loops:
        logger.warning("Dropped %d self-loop line(s) from %s", self_loops, name)

    graphs = []
    for graph_id in sorted(members):
        if not 1 <= graph_id <= len(graph_labels):
            raise IndexOutOfRange(
                f"{_path(directory, name, 'graph_labels')}: no class for graph {graph_id}"
            )

        nodes = members[graph_id]
        graphs.append(
            LabeledGraph(
                graph_id=graph_id,
                num_vertices=len(nodes),
                edges=tuple(sorted(edges[graph_id])),
                vertex_labels=tuple(node_labels[n] for n in nodes),
                class_label=graph_labels[graph_id - 1],
            )
        )

    dataset = LabeledGraphDataset.from_graphs(name, graphs)

    logger.info(
        "Loaded %s: %d graphs, %d classes, %d vertex labels",
        name,
        len(dataset.graphs),
        len(dataset.class_universe),
        len(dataset.label_universe),
    )

    return dataset


def write_dataset(dataset, directory):
    """
    Write a dataset back out in the TU layout. Graph ids must be 1..N.

    Args:
        dataset (LabeledGraphDataset):
        directory (str):
    """
    graphs = sorted(dataset.graphs, key=lambda g: g.graph_id)
    if [g.graph_id for g in graphs] != list(range(1, len(graphs) + 1)):
        raise ValueError("Graph ids must be consecutive starting from 1")

    os.makedirs(directory, exist_ok=True)
    name = dataset.name

    indicator_lines, label_lines, edge_lines, class_lines = [], [], [], []
    offset = 0
    for graph in graphs:
        for label in graph.vertex_labels:
            indicator_lines.append(f"{graph.graph_id}")
            label_lines.append(f"{label}")

        for u, v in graph.edges:
            edge_lines.append(f"{offset + u + 1}, {offset + v + 1}")
            edge_lines.append(f"{offset + v + 1}, {offset + u + 1}")

        class_lines.append(f"{graph.class_label}")
        offset += graph.num_vertices

    for suffix, lines in (
        ("A", edge_lines),
        ("graph_indicator", indicator_lines),
        ("node_labels", label_lines),
        ("graph_labels", class_lines),
    ):
        with open(_path(directory, name, suffix), "w") as f:
            f.writelines(line + "\n" for line in lines)
