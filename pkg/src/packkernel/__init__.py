"""Kernelization toolkit for packing problems.

Kernels for d-Set Matching, K_{1,d}-Matching, P_3-Matching and annotated
P_d-Matching, exact oracles to check them, and the gadgets and
OR-compositions behind the matching lower bounds.
"""

from .estimators import P3Kernel, PathPackingKernel, StarKernel, SunflowerKernel
from .graphcore import (
    CNF,
    HPattern,
    Hypergraph,
    MCBInstance,
    ParseError,
    PartitionedHypergraph,
    SimpleGraph,
    WeightedPathGraph,
    parse_instance,
    serialize_instance,
)
from .oracles import BudgetExhausted, OracleBudget
from .p3 import kernelize_p3
from .pathpacking import kernelize_pd
from .star import kernelize_star_matching
from .sunflower import kernelize_set_matching
from .trace import KernelTrace

__version__ = "0.1.0"

__all__ = [
    "CNF",
    "HPattern",
    "Hypergraph",
    "MCBInstance",
    "ParseError",
    "PartitionedHypergraph",
    "SimpleGraph",
    "WeightedPathGraph",
    "parse_instance",
    "serialize_instance",
    "BudgetExhausted",
    "OracleBudget",
    "KernelTrace",
    "kernelize_set_matching",
    "kernelize_star_matching",
    "kernelize_p3",
    "kernelize_pd",
    "SunflowerKernel",
    "StarKernel",
    "P3Kernel",
    "PathPackingKernel",
]
