"""Hamilton ell-cycles in k-uniform hypergraphs: exact solvers, brute-force
oracles, and the constructive extremal-case pipeline, at desk scale."""

__version__ = "0.1.0"

from .hypergraph import Hypergraph
from .paths import OrderedCycle, OrderedPath, check_ell_path, check_hamilton_ell_cycle
from .search import SearchBudget, SearchOutcome, find_hamilton_ell_cycle
from .extremal import Classification, ExtremalPartition, GoodnessParams
from .pipeline import AssemblyResult, assemble_hamilton_cycle

__all__ = [
    "Hypergraph", "OrderedPath", "OrderedCycle",
    "check_ell_path", "check_hamilton_ell_cycle",
    "SearchBudget", "SearchOutcome", "find_hamilton_ell_cycle",
    "GoodnessParams", "ExtremalPartition", "Classification",
    "AssemblyResult", "assemble_hamilton_cycle",
    "__version__",
]
