"""Certified upper bounds on the growth constant of square-lattice
self-avoiding walks, via finite state graphs of walk suffixes."""

from .automaton import StateGraph, build, load_graph, save_graph
from .simplify import Options
from .spectral import OptimizeResult, PowerResult, optimize, power_iterate

__version__ = "0.1.0"

__all__ = [
    "Options",
    "OptimizeResult",
    "PowerResult",
    "StateGraph",
    "build",
    "load_graph",
    "optimize",
    "power_iterate",
    "save_graph",
    "__version__",
]
