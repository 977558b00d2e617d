"""Bootstrap machinery for the dominance tests.

Resampling uses multinomial weights drawn independently of the data: with
independent samples each sample gets its own equal-probability multinomial,
with matched pairs a single weight vector is shared so pairs are resampled
jointly. Each draw yields a bootstrap ODC recentered at the empirical ODC;
the modified variant drops grid cells that fall more than ``tau`` estimated
standard deviations below the diagonal, which sharpens power when the true
curve touches the diagonal on part of the unit interval. Setting
``tau = inf`` keeps every cell and reproduces the standard bootstrap draw
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .odc import OdcCurve, Pairing, RankProfile, TwoSampleData, empirical_odc, rank_profile
from .stats import StatKind, ks_statistic, wmw_statistic

__all__ = [
    "BootstrapWeights",
    "VarianceProfile",
    "BootstrapConfig",
    "TestReport",
    "draw_weights",
    "bootstrap_odc",
    "bootstrap_statistic_standard",
    "bootstrap_statistic_modified",
    "variance_profile",
    "empirical_copula_diag",
    "critical_value",
    "run_test",
]

# Cap on int64 elements held by one batch of vectorized bootstrap draws.
_BATCH_ELEMENTS = 4_000_000


@dataclass(frozen=True, eq=False)
class BootstrapWeights:
    """Multinomial resampling counts for each sample, in observation order."""

    w1: np.ndarray
    w2: np.ndarray

    def __post_init__(self):
        w1 = np.asarray(self.w1, dtype=np.int64)
        w2 = np.asarray(self.w2, dtype=np.int64)
        for name, w in (("w1", w1), ("w2", w2)):
            if w.ndim != 1 or w.size == 0:
                raise ValueError(f"{name} must be a nonempty vector")
            if np.any(w < 0) or int(w.sum()) != w.size:
                raise ValueError(f"{name} must be multinomial counts summing to its length")
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)


@dataclass(frozen=True, eq=False)
class VarianceProfile:
    """Estimated variances of the normalized ODC at each grid point."""

    v: np.ndarray
    mode: Pairing

    def __post_init__(self):
        v = np.asarray(self.v, dtype=np.float64)
        if np.any(v < 0):
            raise ValueError("variance estimates must be nonnegative")
        object.__setattr__(self, "v", v)


@dataclass(frozen=True)
class BootstrapConfig:
    """Parameters of a bootstrap dominance test.

    ``tau`` may be ``math.inf`` for the standard bootstrap. ``eta`` is a small
    floor applied to the critical value; the default 0 disables it, which is
    how the test is normally run.
    """

    alpha: float = 0.05
    tau: float = 0.75
    num_reps: int = 999
    eta: float = 0.0
    seed: int = 0
    statistic_kind: StatKind = StatKind.WMW

    def __post_init__(self):
        if not (0.0 < self.alpha < 0.5):
            raise ValueError(f"alpha must lie in (0, 0.5), got {self.alpha}")
        if not (self.tau > 0.0):
            raise ValueError(f"tau must be positive (inf allowed), got {self.tau}")
        if self.num_reps < 1:
            raise ValueError("num_reps must be at least 1")
        if not (self.eta >= 0.0):
            raise ValueError("eta must be nonnegative")
        if not isinstance(self.seed, (int, np.integer)) or not (0 <= self.seed < 2**64):
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.statistic_kind not in (StatKind.WMW, StatKind.KS):
            raise ValueError(f"unsupported statistic kind: {self.statistic_kind}")


@dataclass(frozen=True)
class TestReport:
    """Outcome of one dominance test plus every parameter that produced it."""

    statistic: float
    critical_value: float
    p_value: float
    reject: bool
    ties_detected: bool
    alpha: float
    tau: float
    num_reps: int
    eta: float
    seed: int
    pairing: Pairing
    n1: int
    n2: int
    statistic_kind: StatKind


def _multinomial_rows(rng: np.random.Generator, categories: int, nrows: int) -> np.ndarray:
    """Draw ``nrows`` equal-probability multinomial count vectors.

    Each row is built from ``categories`` independent uniform category draws,
    counted, which is exactly multinomial.
    """
    draws = rng.integers(0, categories, size=(nrows, categories))
    flat = draws + (np.arange(nrows) * categories)[:, None]
    counts = np.bincount(flat.ravel(), minlength=nrows * categories)
    return counts.reshape(nrows, categories).astype(np.int64, copy=False)


def draw_weights(data: TwoSampleData, rng: np.random.Generator) -> BootstrapWeights:
    """One set of bootstrap weights for ``data``.

    Matched pairs share a single weight vector across both samples, so pairs
    are kept intact by the resampling.
    """
    if data.pairing is Pairing.MATCHED:
        w = _multinomial_rows(rng, data.n1, 1)[0]
        return BootstrapWeights(w1=w, w2=w)
    w1 = _multinomial_rows(rng, data.n1, 1)[0]
    w2 = _multinomial_rows(rng, data.n2, 1)[0]
    return BootstrapWeights(w1=w1, w2=w2)


def bootstrap_odc(data: TwoSampleData, weights: BootstrapWeights) -> OdcCurve:
    """Bootstrap ODC: the ODC of the weighted resample, on the grid ``i/n2``.

    Grid value ``i-1`` is the weighted first-sample ECDF evaluated at the
    bootstrap quantile ``inf{x : F2_star(x) >= i/n2}``.
    """
    if weights.w1.size != data.n1 or weights.w2.size != data.n2:
        raise ValueError("weight lengths do not match the sample sizes")
    perm1 = np.argsort(data.x1, kind="stable")
    perm2 = np.argsort(data.x2, kind="stable")
    x1s = data.x1[perm1]
    x2s = data.x2[perm2]
    m = np.searchsorted(x1s, x2s, side="right")
    w1s = weights.w1[perm1]
    w2s = weights.w2[perm2]
    # i-th order statistic of the resample sits at sorted-x2 index k, where k
    # repeats according to the weights; total weight n2 fills the whole grid.
    k = np.repeat(np.arange(data.n2), w2s)
    cum1 = np.concatenate([[0], np.cumsum(w1s)])
    values = cum1[m[k]] / data.n1
    return OdcCurve(values=values, n1=data.n1, n2=data.n2)


def bootstrap_statistic_standard(odc_star: OdcCurve, odc: OdcCurve) -> float:
    """Recentered bootstrap statistic: scaled sum of max(R_star - R_hat, 0)."""
    if odc_star.n1 != odc.n1 or odc_star.n2 != odc.n2:
        raise ValueError("bootstrap and empirical curves must share the same grid")
    terms = np.maximum(odc_star.values - odc.values, 0.0)
    scale = math.sqrt(odc.n1 * odc.n2 / (odc.n1 + odc.n2)) / odc.n2
    return float(scale * terms.sum())


def bootstrap_statistic_modified(
    odc_star: OdcCurve, odc: OdcCurve, v: VarianceProfile, tau: float
) -> float:
    """Bootstrap statistic with cells far below the diagonal zeroed out.

    Cell ``i`` survives when ``sqrt(T_n)*(R_hat(i/n2) - i/n2)`` is no less
    than ``-tau*sqrt(v[i])``; with ``tau = inf`` every cell survives and the
    standard statistic is recovered exactly.
    """
    if not (tau > 0.0):
        raise ValueError(f"tau must be positive (inf allowed), got {tau}")
    if odc_star.n1 != odc.n1 or odc_star.n2 != odc.n2:
        raise ValueError("bootstrap and empirical curves must share the same grid")
    if v.v.size != odc.n2:
        raise ValueError("variance profile does not match the grid")
    terms = np.maximum(odc_star.values - odc.values, 0.0)
    if math.isfinite(tau):
        sqrt_tn = math.sqrt(odc.n1 * odc.n2 / (odc.n1 + odc.n2))
        keep = sqrt_tn * (odc.values - odc.grid) >= -tau * np.sqrt(v.v)
        terms = terms * keep
    scale = math.sqrt(odc.n1 * odc.n2 / (odc.n1 + odc.n2)) / odc.n2
    return float(scale * terms.sum())


def empirical_copula_diag(ranks: RankProfile) -> np.ndarray:
    """Empirical copula on the diagonal: entry ``i-1`` counts pairs whose
    normalized ranks both sit at or below ``i/n``, divided by ``n``."""
    n = ranks.n
    iu = np.rint(ranks.u_ranks * n).astype(np.int64)
    iv = np.rint(ranks.v_ranks * n).astype(np.int64)
    worst = np.maximum(iu, iv)
    hist = np.bincount(worst, minlength=n + 1)
    return np.cumsum(hist)[1:] / n


def variance_profile(data: TwoSampleData) -> VarianceProfile:
    """Gridwise variance estimates for the normalized empirical ODC.

    Independent samples admit the closed form ``i/n2 - i^2/n2^2``; matched
    pairs replace the product term with the empirical copula diagonal, which
    keeps the estimate rank-based.
    """
    n2 = data.n2
    i = np.arange(1, n2 + 1, dtype=np.float64)
    if data.pairing is Pairing.MATCHED:
        diag = empirical_copula_diag(rank_profile(data))
        v = i / n2 - diag
    else:
        v = i / n2 - i**2 / n2**2
    return VarianceProfile(v=np.maximum(v, 0.0), mode=data.pairing)


def critical_value(draws, alpha: float) -> float:
    """Empirical upper quantile of bootstrap draws, as an infimum.

    Returns the ``ceil(N*(1-alpha))``-th smallest draw, the smallest value c
    with at least a ``1-alpha`` fraction of draws at or below c.
    """
    arr = np.asarray(draws, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise ValueError("need at least one bootstrap draw")
    if not (0.0 < alpha < 0.5):
        raise ValueError(f"alpha must lie in (0, 0.5), got {alpha}")
    k = min(max(int(math.ceil(arr.size * (1.0 - alpha))), 1), arr.size)
    return float(np.partition(arr, k - 1)[k - 1])


class _Prepared:
    """Per-dataset quantities reused across all bootstrap replications."""

    def __init__(self, data: TwoSampleData):
        self.data = data
        self.n1 = data.n1
        self.n2 = data.n2
        self.sqrt_tn = math.sqrt(self.n1 * self.n2 / (self.n1 + self.n2))
        self.perm1 = np.argsort(data.x1, kind="stable")
        self.perm2 = np.argsort(data.x2, kind="stable")
        x1s = data.x1[self.perm1]
        x2s = data.x2[self.perm2]
        self.m = np.searchsorted(x1s, x2s, side="right").astype(np.int64)
        pooled = np.concatenate([x1s, x2s])
        self.cnt1 = np.searchsorted(x1s, pooled, side="right").astype(np.int64)
        self.cnt2 = np.searchsorted(x2s, pooled, side="right").astype(np.int64)
        self.ks_base = self.cnt1 * self.n2 - self.cnt2 * self.n1

    def keep_columns(self, tau: float) -> np.ndarray | None:
        """Grid columns retained by the contact-set screen, None for all."""
        if math.isinf(tau):
            return None
        grid = np.arange(1, self.n2 + 1, dtype=np.float64) / self.n2
        v = variance_profile(self.data).v
        mask = self.sqrt_tn * (self.m / self.n1 - grid) >= -tau * np.sqrt(v)
        return np.flatnonzero(mask)

    def wmw_draws(self, w1: np.ndarray, w2: np.ndarray, keep: np.ndarray | None) -> np.ndarray:
        nrows = w1.shape[0]
        w1s = w1[:, self.perm1]
        w2s = w2[:, self.perm2]
        k = np.repeat(np.tile(np.arange(self.n2), nrows), w2s.ravel()).reshape(nrows, self.n2)
        cum1 = np.concatenate(
            [np.zeros((nrows, 1), dtype=np.int64), np.cumsum(w1s, axis=1)], axis=1
        )
        rstar = np.take_along_axis(cum1, self.m[k], axis=1)
        excess = np.maximum(rstar - self.m[np.newaxis, :], 0)
        if keep is not None:
            excess = excess[:, keep]
        return excess.sum(axis=1) * (self.sqrt_tn / (self.n1 * self.n2))

    def ks_draws(self, w1: np.ndarray, w2: np.ndarray) -> np.ndarray:
        nrows = w1.shape[0]
        zeros = np.zeros((nrows, 1), dtype=np.int64)
        cum1 = np.concatenate([zeros, np.cumsum(w1[:, self.perm1], axis=1)], axis=1)
        cum2 = np.concatenate([zeros, np.cumsum(w2[:, self.perm2], axis=1)], axis=1)
        diff = cum1[:, self.cnt1] * self.n2 - cum2[:, self.cnt2] * self.n1
        diff -= self.ks_base[np.newaxis, :]
        best = np.maximum(diff.max(axis=1), 0)
        return best * (self.sqrt_tn / (self.n1 * self.n2))


def _bootstrap_draws(
    prep: _Prepared, config: BootstrapConfig, rng: np.random.Generator
) -> np.ndarray:
    """All bootstrap statistic draws for one test, vectorized in batches."""
    data = prep.data
    keep = prep.keep_columns(config.tau) if config.statistic_kind is StatKind.WMW else None
    per_row = data.n1 + data.n2
    batch = max(1, min(config.num_reps, _BATCH_ELEMENTS // per_row))
    out = np.empty(config.num_reps, dtype=np.float64)
    done = 0
    while done < config.num_reps:
        rows = min(batch, config.num_reps - done)
        if data.pairing is Pairing.MATCHED:
            w1 = _multinomial_rows(rng, data.n1, rows)
            w2 = w1
        else:
            w1 = _multinomial_rows(rng, data.n1, rows)
            w2 = _multinomial_rows(rng, data.n2, rows)
        if config.statistic_kind is StatKind.WMW:
            out[done : done + rows] = prep.wmw_draws(w1, w2, keep)
        else:
            out[done : done + rows] = prep.ks_draws(w1, w2)
        done += rows
    return out


def run_test(
    data: TwoSampleData, config: BootstrapConfig, rng: np.random.Generator | None = None
) -> TestReport:
    """Run the full bootstrap dominance test and report the decision.

    Computes the observed statistic, generates ``config.num_reps`` bootstrap
    draws (contact-set screened for the WMW statistic when ``tau`` is finite,
    standard otherwise and always for KS), and rejects the dominance null
    when the statistic exceeds ``max(critical_value, eta)``. The p-value is
    the fraction of draws at or above the observed statistic.

    The report is fully determined by the data, the config, and the stream:
    when ``rng`` is omitted a fresh generator is seeded from ``config.seed``.
    """
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    prep = _Prepared(data)
    if config.statistic_kind is StatKind.WMW:
        stat = wmw_statistic(empirical_odc(data)).value
    else:
        stat = ks_statistic(data).value
    draws = _bootstrap_draws(prep, config, rng)
    cv = critical_value(draws, config.alpha)
    p_value = float(np.count_nonzero(draws >= stat)) / config.num_reps
    return TestReport(
        statistic=stat,
        critical_value=cv,
        p_value=p_value,
        reject=bool(stat > max(cv, config.eta)),
        ties_detected=data.ties_detected,
        alpha=config.alpha,
        tau=config.tau,
        num_reps=config.num_reps,
        eta=config.eta,
        seed=config.seed,
        pairing=data.pairing,
        n1=data.n1,
        n2=data.n2,
        statistic_kind=config.statistic_kind,
    )
