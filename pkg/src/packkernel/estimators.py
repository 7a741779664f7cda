"""scikit-learn style wrappers around the kernels.

Each transformer maps a sequence of instances to their kernels. ``fit`` only
validates parameters, since a kernel has nothing to learn; the traces of the
last ``transform`` call are kept in ``traces_``.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .graphcore import Hypergraph, PartitionedHypergraph, SimpleGraph, WeightedPathGraph
from .p3 import DEFAULT_C, kernelize_p3
from .pathpacking import kernelize_pd
from .star import kernelize_star_matching
from .sunflower import kernelize_set_matching
from .validation import check_instances, check_int, check_real

__all__ = ["SunflowerKernel", "StarKernel", "P3Kernel", "PathPackingKernel"]


class _KernelTransformer(TransformerMixin, BaseEstimator):
    _accepts: tuple[type, ...] = ()

    def _validate(self) -> None:
        check_int(self.k, "k", 0)

    def fit(self, X=None, y=None):
        self._validate()
        if X is not None:
            check_instances(X, self._accepts)
        self.n_instances_seen_ = 0
        return self

    def partial_fit(self, X, y=None):
        if not hasattr(self, "n_instances_seen_"):
            self.fit()
        self.n_instances_seen_ += len(check_instances(X, self._accepts))
        return self

    def transform(self, X):
        check_is_fitted(self, "n_instances_seen_")
        items = check_instances(X, self._accepts)
        out, traces = [], []
        for x in items:
            kernel, trace = self._kernelize(x)
            out.append(kernel)
            traces.append(trace)
        self.traces_ = traces
        return out

    def _kernelize(self, x):
        raise NotImplementedError


class SunflowerKernel(_KernelTransformer):
    """d-Set Matching kernel with at most d!(dk)^d hyperedges."""

    _accepts = (Hypergraph, PartitionedHypergraph)

    def __init__(self, k: int = 1, drop_isolated: bool = True):
        self.k = k
        self.drop_isolated = drop_isolated

    def _validate(self):
        check_int(self.k, "k", 1)

    def _kernelize(self, x):
        base = x.base if isinstance(x, PartitionedHypergraph) else x
        return kernelize_set_matching(base, self.k, drop_isolated=self.drop_isolated)


class StarKernel(_KernelTransformer):
    """K_{1,d}-Matching kernel with at most d^3 k^2 edges."""

    _accepts = (SimpleGraph,)

    def __init__(self, d: int = 2, k: int = 1, drop_isolated: bool = True):
        self.d = d
        self.k = k
        self.drop_isolated = drop_isolated

    def _validate(self):
        check_int(self.d, "d", 2)
        check_int(self.k, "k", 1)

    def _kernelize(self, x):
        return kernelize_star_matching(x, self.d, self.k, drop_isolated=self.drop_isolated)


class P3Kernel(_KernelTransformer):
    """P_3-Matching kernel; ``strict=False`` starts the good-vertex search earlier."""

    _accepts = (SimpleGraph,)

    def __init__(self, k: int = 1, C: float = DEFAULT_C, strict: bool = True, drop_isolated: bool = True):
        self.k = k
        self.C = C
        self.strict = strict
        self.drop_isolated = drop_isolated

    def _validate(self):
        check_int(self.k, "k", 0)
        check_real(self.C, "C")

    def _kernelize(self, x):
        return kernelize_p3(x, self.k, C=self.C, strict=self.strict, drop_isolated=self.drop_isolated)


class PathPackingKernel(_KernelTransformer):
    """Annotated P_d-Matching kernel; outputs weighted graphs."""

    _accepts = (SimpleGraph, WeightedPathGraph)

    def __init__(self, d: int = 2, k: int = 1, witnesses: bool = False):
        self.d = d
        self.k = k
        self.witnesses = witnesses

    def _validate(self):
        check_int(self.d, "d", 2)
        check_int(self.k, "k", 0)

    def _kernelize(self, x):
        res = kernelize_pd(x, self.d, self.k, witnesses=self.witnesses)
        return res.graph, res.trace
