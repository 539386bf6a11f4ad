"""Cost-constrained random minimum spanning trees: Lagrangian dual, exchange repair,
series predictions and a seeded Monte Carlo harness."""
from .instances import (Instance, SpanningTree, enumerate_spanning_trees, exact_constrained_mst,
                        mst, sample_instance)
from .lagrange import (DualPoint, DualSolution, InfeasibleBudget, gr_repair, maximize_dual, phi,
                       solve, tree_edge_maxima)

__version__ = "0.1.0"

__all__ = [
    "Instance", "SpanningTree", "sample_instance", "mst", "enumerate_spanning_trees",
    "exact_constrained_mst", "DualPoint", "DualSolution", "InfeasibleBudget", "phi",
    "maximize_dual", "gr_repair", "tree_edge_maxima", "solve",
]
