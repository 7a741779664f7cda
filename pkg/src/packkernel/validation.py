"""Argument checks shared by the estimator wrappers."""

from __future__ import annotations

from numbers import Integral, Real

from .graphcore import Hypergraph, PartitionedHypergraph, SimpleGraph, WeightedPathGraph

__all__ = ["check_int", "check_real", "check_instances"]


def check_int(value, name: str, low: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if low is not None and value < low:
        raise ValueError(f"{name} must be >= {low}, got {value}")
    return int(value)


def check_real(value, name: str, positive: bool = True) -> float:
    if isinstance(value, bool) or not isinstance(value, Real):
        raise TypeError(f"{name} must be a number, got {type(value).__name__}")
    if positive and not value > 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return float(value)


def check_instances(X, types: tuple[type, ...], name: str = "X") -> list:
    """A single instance or a sequence of them, as a list; types are enforced."""
    if isinstance(X, (Hypergraph, PartitionedHypergraph, SimpleGraph, WeightedPathGraph)):
        X = [X]
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f"{name} must be an instance or a sequence of instances") from None
    for i, x in enumerate(items):
        if not isinstance(x, types):
            want = " or ".join(t.__name__ for t in types)
            raise TypeError(f"{name}[{i}] is a {type(x).__name__}, expected {want}")
    return items
