"""Spatial graph diagrams, vertex-reduction bounds and generalized braid words."""

from .graph import OrientedGraph, parse_graph, serialize_graph
from .sliced import (
    SlicedDiagram,
    load_sliced,
    parse_sliced,
    serialize_sliced,
    validate_sliced,
)
from .word import (
    GraphBraidWord,
    b_tilde,
    closure,
    parse_word,
    serialize_word,
    validate_word,
)

__version__ = "0.1.0"

__all__ = [
    "GraphBraidWord",
    "OrientedGraph",
    "SlicedDiagram",
    "b_tilde",
    "closure",
    "load_sliced",
    "parse_graph",
    "parse_sliced",
    "parse_word",
    "serialize_graph",
    "serialize_sliced",
    "serialize_word",
    "validate_sliced",
    "validate_word",
]
