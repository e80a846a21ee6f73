__all__ = [
    "LabeledGraph",
    "LabeledGraphDataset",
    "SimplicialComplex",
    "SuperGraph",
    "Variant",
    "clique_complex",
    "compress",
    "extract_features",
    "load_dataset",
]


from .base_types import Variant
from .complex import SimplicialComplex, clique_complex
from .pipeline import extract_features
from .supergraph import SuperGraph, compress
from .tudata import LabeledGraph, LabeledGraphDataset, load_dataset
