"""Exact computational toolkit for K_{a,b,c}-tilings of 3-uniform hypergraphs."""

from .core import Hypergraph3, VertexPartition, degree, shadow, shadow_bound, tripartite_density, is_epsilon_regular
from .errors import HypertileError, InfeasibleSize, InvalidArgument, NotApplicable, SizeLimitError
from .kspec import KSpec, QuadraticSurd, classify, f_coefficient, threshold_coefficient
from .tiler import KCopy, Tiling, enumerate_copies, greedy_regular_tiling, has_perfect_tiling, max_tiling
from .constructions import Kind, check_certificate, generate
from .fractional import FractionalHomTiling, gadget_L1, gadget_L2, verify
from .lattice import LatticeBasis, lattice_contains, robust_edge_vectors, robust_k_vectors, transferral_check
from .absorb import build_absorbing_family, epsilon_reduction, reachability_count, reachability_partition

__version__ = "0.1.0"

__all__ = [
    "Hypergraph3", "VertexPartition", "degree", "shadow", "shadow_bound", "tripartite_density",
    "is_epsilon_regular", "HypertileError", "InfeasibleSize", "InvalidArgument", "NotApplicable",
    "SizeLimitError", "KSpec", "QuadraticSurd", "classify", "f_coefficient", "threshold_coefficient",
    "KCopy", "Tiling", "enumerate_copies", "greedy_regular_tiling", "has_perfect_tiling", "max_tiling",
    "Kind", "check_certificate", "generate", "FractionalHomTiling", "gadget_L1", "gadget_L2", "verify",
    "LatticeBasis", "lattice_contains", "robust_edge_vectors", "robust_k_vectors", "transferral_check",
    "build_absorbing_family", "epsilon_reduction", "reachability_count", "reachability_partition",
]
