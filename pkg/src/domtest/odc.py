"""Order-statistics layer for two-sample dominance analysis.

Empirical CDFs, empirical quantile functions, per-observation ranks, and the
empirical ordinal dominance curve (ODC), i.e. the PP-style curve
``u -> F1_hat(Q2_hat(u))`` evaluated on the grid ``i/n2``. Everything here
depends on the data only through ranks, and every function is pure, so calls
are safe from concurrent code without coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Pairing",
    "TwoSampleData",
    "OdcCurve",
    "RankProfile",
    "ecdf_eval",
    "empirical_quantile",
    "empirical_odc",
    "rank_profile",
]


class Pairing(Enum):
    """How the two samples were collected."""

    INDEPENDENT = "independent"
    MATCHED = "matched"


def _as_sample(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True).reshape(-1)
    if arr.size == 0:
        raise ValueError(f"{name} must contain at least one observation")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TwoSampleData:
    """Two univariate samples plus the sampling relationship between them.

    ``x1`` and ``x2`` hold the raw observations. Under matched pairing the
    i-th entries of the two arrays form a pair, so the lengths must agree.
    """

    x1: np.ndarray
    x2: np.ndarray
    pairing: Pairing = Pairing.INDEPENDENT

    def __post_init__(self):
        object.__setattr__(self, "x1", _as_sample(self.x1, "x1"))
        object.__setattr__(self, "x2", _as_sample(self.x2, "x2"))
        if not isinstance(self.pairing, Pairing):
            raise ValueError(f"invalid pairing: {self.pairing!r}")
        if self.pairing is Pairing.MATCHED and self.x1.size != self.x2.size:
            raise ValueError(
                f"matched pairs need equal sample sizes, got {self.x1.size} and {self.x2.size}"
            )

    @property
    def n1(self) -> int:
        return self.x1.size

    @property
    def n2(self) -> int:
        return self.x2.size

    @property
    def ties_detected(self) -> bool:
        """True when the pooled sample contains duplicate values."""
        pooled = np.concatenate([self.x1, self.x2])
        return bool(np.unique(pooled).size < pooled.size)


@dataclass(frozen=True, eq=False)
class OdcCurve:
    """Empirical ODC stored as its values on the grid ``i/n2``, i = 1..n2.

    ``values[i-1]`` is the fraction of first-sample observations at or below
    the i-th order statistic of the second sample, hence an exact multiple
    of ``1/n1`` up to one float rounding.
    """

    values: np.ndarray
    n1: int
    n2: int

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if self.n1 < 1 or self.n2 < 1:
            raise ValueError("sample sizes must be positive")
        if vals.size != self.n2:
            raise ValueError(f"expected {self.n2} grid values, got {vals.size}")
        if vals.size and (vals[0] < 0.0 or vals[-1] > 1.0 or np.any(np.diff(vals) < 0)):
            raise ValueError("ODC values must be nondecreasing within [0, 1]")
        scaled = vals * self.n1
        if not np.allclose(scaled, np.rint(scaled), atol=1e-8, rtol=0.0):
            raise ValueError("ODC values must be multiples of 1/n1")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def grid(self) -> np.ndarray:
        """The evaluation grid ``i/n2``, i = 1..n2."""
        return np.arange(1, self.n2 + 1, dtype=np.float64) / self.n2

    @property
    def counts(self) -> np.ndarray:
        """Integer numerators ``k`` with ``values = k/n1``, recovered exactly."""
        return np.rint(self.values * self.n1).astype(np.int64)


@dataclass(frozen=True, eq=False)
class RankProfile:
    """Normalized within-sample ranks of matched pairs.

    ``u_ranks[j]`` is the first-sample ECDF evaluated at the j-th first-sample
    observation, and likewise for ``v_ranks``; with no ties each vector is a
    permutation of ``{1/n, ..., 1}``.
    """

    u_ranks: np.ndarray
    v_ranks: np.ndarray

    def __post_init__(self):
        u = _as_sample(self.u_ranks, "u_ranks")
        v = _as_sample(self.v_ranks, "v_ranks")
        if u.size != v.size:
            raise ValueError("rank vectors must have equal length")
        object.__setattr__(self, "u_ranks", u)
        object.__setattr__(self, "v_ranks", v)

    @property
    def n(self) -> int:
        return self.u_ranks.size


def ecdf_eval(sample, x: float) -> float:
    """Empirical CDF of ``sample`` at ``x``: the fraction of values <= x."""
    arr = _as_sample(sample, "sample")
    if not math.isfinite(x):
        raise ValueError("evaluation point must be finite")
    return int(np.count_nonzero(arr <= x)) / arr.size


def empirical_quantile(sample, u: float) -> float:
    """Empirical quantile ``inf{x : ecdf(x) >= u}`` for ``u`` in (0, 1].

    Returns the ``ceil(n*u)``-th order statistic. The index is nudged so the
    infimum definition holds exactly for the float grid ``k/n``.
    """
    arr = _as_sample(sample, "sample")
    if not (0.0 < u <= 1.0):
        raise ValueError(f"quantile level must lie in (0, 1], got {u}")
    n = arr.size
    k = min(max(int(math.ceil(n * u)), 1), n)
    while k > 1 and (k - 1) / n >= u:
        k -= 1
    while k < n and k / n < u:
        k += 1
    return float(np.partition(arr, k - 1)[k - 1])


def empirical_odc(data: TwoSampleData) -> OdcCurve:
    """Empirical ordinal dominance curve of ``data`` on the grid ``i/n2``.

    Entry ``i-1`` is the first-sample ECDF at the i-th smallest second-sample
    observation. The result depends only on the joint ranks of the pooled
    observations, so it is invariant under common strictly increasing
    transformations of all data.
    """
    x1s = np.sort(data.x1)
    x2s = np.sort(data.x2, kind="stable")
    counts = np.searchsorted(x1s, x2s, side="right")
    return OdcCurve(values=counts / data.n1, n1=data.n1, n2=data.n2)


def rank_profile(data: TwoSampleData) -> RankProfile:
    """Within-sample ECDF ranks of matched pairs, in pair order.

    Only defined for matched pairs; the empirical copula built from these
    ranks has no meaning for two unrelated samples.
    """
    if data.pairing is not Pairing.MATCHED:
        raise ValueError("rank_profile requires matched pairs")
    n = data.n1
    x1s = np.sort(data.x1)
    x2s = np.sort(data.x2)
    u = np.searchsorted(x1s, data.x1, side="right") / n
    v = np.searchsorted(x2s, data.x2, side="right") / n
    return RankProfile(u_ranks=u, v_ranks=v)
