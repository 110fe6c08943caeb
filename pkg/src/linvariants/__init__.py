"""L-invariants of p-adically uniformised curves from harmonic cocycles and
from monodromy modules."""

from .padic import PadicField, Padic, PrecisionError
from .coeff import WeightData, CoeffModule, CoeffVector
from .btree import BruhatTitsTree, TreeVertex, TreeEdge
from .schottky import SchottkyGroup, SchottkyError, verify_schottky, quotient_graph, load_fixture

__all__ = [
    "PadicField", "Padic", "PrecisionError",
    "WeightData", "CoeffModule", "CoeffVector",
    "BruhatTitsTree", "TreeVertex", "TreeEdge",
    "SchottkyGroup", "SchottkyError", "verify_schottky", "quotient_graph", "load_fixture",
]
__version__ = "0.1.0"
