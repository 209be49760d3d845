"""Spanning tree graphs of weighted digraphs, with exact identity checks."""

from .arborescence import Arborescence, Forest, enumerate_forests, enumerate_trees, tau
from .digraph import Digraph, GraphFormatError, format_graph, parse_graph, read_graph
from .identities import m_prime, phi_report, r_polynomial, zeta_series
from .lift import LiftGraph, LiftTooLarge, build_lift
from .matrix import RingMatrix, det
from .poly import MultiPoly
from .verify import Config, run_checks

__all__ = [
    "Arborescence",
    "Config",
    "Digraph",
    "Forest",
    "GraphFormatError",
    "LiftGraph",
    "LiftTooLarge",
    "MultiPoly",
    "RingMatrix",
    "build_lift",
    "det",
    "enumerate_forests",
    "enumerate_trees",
    "format_graph",
    "m_prime",
    "parse_graph",
    "phi_report",
    "r_polynomial",
    "read_graph",
    "run_checks",
    "tau",
    "zeta_series",
]
