"""Bootstrap resampling, the Mann-Whitney U test, and the replacement sweep."""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .core import VectorLike, arith_mean, as_vector, geom_mean
from .errors import FractionOutOfRange, InvalidParams
from .rng import derive_seed, make_rng

ALPHAS = (0.05, 0.01, 0.001)


class Statistic(str, enum.Enum):
    ARITH_MEAN = "arith_mean"
    GEOM_MEAN = "geom_mean"


@dataclass(frozen=True)
class BootstrapConfig:
    sample_size: int
    n_resamples: int
    statistic: Statistic = Statistic.ARITH_MEAN
    seed: int = 0

    def __post_init__(self):
        if self.sample_size < 1 or self.n_resamples < 1:
            raise InvalidParams("sample_size and n_resamples must be >= 1")
        object.__setattr__(self, "statistic", Statistic(self.statistic))


def _resample_matrix(values: np.ndarray, sample_size: int, n_resamples: int, seed: int) -> np.ndarray:
    rng = make_rng(seed)
    idx = rng.integers(0, values.size, size=(n_resamples, sample_size))
    return values[idx]


def _row_stat(samples: np.ndarray, statistic: Statistic) -> np.ndarray:
    if statistic is Statistic.ARITH_MEAN:
        return samples.mean(axis=1)
    return np.exp(np.log(samples).mean(axis=1))


def bootstrap(a: VectorLike, cfg: BootstrapConfig) -> np.ndarray:
    """Sampling distribution of ``cfg.statistic``.

    Draws ``cfg.n_resamples`` samples of ``cfg.sample_size`` elements with
    replacement and returns the statistic of each. Two configs that differ
    only in ``statistic`` see the same samples.
    """
    a = as_vector(a)
    samples = _resample_matrix(a.values, cfg.sample_size, cfg.n_resamples, cfg.seed)
    return _row_stat(samples, cfg.statistic)


# Mann-Whitney U --------------------------------------------------------------


class Alternative(str, enum.Enum):
    TWO_SIDED = "two-sided"
    GREATER = "greater"
    LESS = "less"


class MwuMethod(str, enum.Enum):
    EXACT = "exact"
    NORMAL_APPROX = "normal-approx"


@dataclass(frozen=True)
class MwuResult:
    u_statistic: float
    p_value: float
    method: MwuMethod
    alternative: Alternative

    def to_dict(self) -> dict:
        return {
            "u_statistic": self.u_statistic,
            "p_value": self.p_value,
            "method": self.method.value,
            "alternative": self.alternative.value,
        }


EXACT_MAX_TOTAL = 20


def _ranks_and_ties(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    order = np.argsort(values, kind="mergesort")
    sv = values[order]
    new_group = np.empty(sv.size, dtype=bool)
    new_group[0] = True
    np.not_equal(sv[1:], sv[:-1], out=new_group[1:])
    bounds = np.append(np.flatnonzero(new_group), sv.size)
    group = np.cumsum(new_group) - 1
    ranks = np.empty(sv.size, dtype=float)
    ranks[order] = (bounds[group] + 1 + bounds[group + 1]) / 2
    return ranks, bounds[1:] - bounds[:-1]


def rankdata(values: Sequence[float]) -> np.ndarray:
    """1-based ranks, ties get the mean of the ranks they span."""
    v = np.asarray(values, dtype=float).reshape(-1)
    if v.size == 0:
        return np.empty(0)
    return _ranks_and_ties(v)[0]


@functools.lru_cache(maxsize=256)
def _rank_sum_counts(weights: Tuple[int, ...], n1: int) -> Tuple[np.ndarray, int]:
    """Number of size-``n1`` subsets of ``weights`` for every possible total.

    Subset-sum counting over the (doubled) ranks; equivalent to enumerating
    every assignment of ranks to the first sample, without the combinatorial
    cost.
    """
    top = sum(sorted(weights)[-n1:]) if n1 else 0
    dp = np.zeros((n1 + 1, top + 1), dtype=object if len(weights) > 60 else np.int64)
    dp[0, 0] = 1
    for w in weights:
        prev = dp.copy()
        if w <= top:
            dp[1:, w:] += prev[:-1, : top + 1 - w]
    counts = dp[n1]
    return counts, int(counts.sum())


def _exact_p(doubled_ranks: np.ndarray, n1: int, observed: int, alternative: Alternative) -> float:
    counts, total = _rank_sum_counts(tuple(np.sort(doubled_ranks).tolist()), n1)
    le = int(counts[: observed + 1].sum())
    ge = int(counts[observed:].sum())
    p_le, p_ge = le / total, ge / total
    if alternative is Alternative.LESS:
        return p_le
    if alternative is Alternative.GREATER:
        return p_ge
    return min(1.0, 2 * min(p_le, p_ge))


def _norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2))


def _normal_p(u: float, n1: int, n2: int, ties: np.ndarray, alternative: Alternative) -> float:
    n = n1 + n2
    mu = n1 * n2 / 2
    tie_term = float(np.sum(ties.astype(float) ** 3 - ties)) / (n * (n - 1)) if n > 1 else 0.0
    var = n1 * n2 / 12 * ((n + 1) - tie_term)
    if var <= 0:
        return 1.0
    sd = math.sqrt(var)
    if alternative is Alternative.GREATER:
        return _norm_sf((u - mu - 0.5) / sd)
    if alternative is Alternative.LESS:
        return _norm_sf((mu - u - 0.5) / sd)
    z = max(abs(u - mu) - 0.5, 0.0) / sd
    return min(1.0, 2 * _norm_sf(z))


def mwu_test(
    a: Sequence[float],
    b: Sequence[float],
    alternative: Alternative = Alternative.TWO_SIDED,
    method: Optional[MwuMethod] = None,
) -> MwuResult:
    """Mann-Whitney U test of ``a`` against ``b``.

    ``u_statistic`` counts pairs with ``a_i > b_j`` (ties count one half), so
    ``GREATER`` tests whether ``a`` tends to be larger. When ``method`` is
    ``None`` the exact null distribution is used for tie-free samples with
    ``len(a) + len(b) <= 20``; otherwise a normal approximation with tie and
    continuity corrections.
    """
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    if a.size == 0 or b.size == 0:
        raise InvalidParams("both samples must be non-empty")
    alternative = Alternative(alternative)
    n1, n2 = a.size, b.size
    pooled = np.concatenate([a, b])
    ranks, ties = _ranks_and_ties(pooled)
    u = float(ranks[:n1].sum() - n1 * (n1 + 1) / 2)
    has_ties = ties.size < pooled.size
    if method is None:
        method = MwuMethod.EXACT if (n1 + n2 <= EXACT_MAX_TOTAL and not has_ties) else MwuMethod.NORMAL_APPROX
    method = MwuMethod(method)
    if method is MwuMethod.EXACT:
        doubled = (2 * ranks).astype(np.int64)
        p = _exact_p(doubled, n1, int(doubled[:n1].sum()), alternative)
    else:
        p = _normal_p(u, n1, n2, ties, alternative)
    return MwuResult(u_statistic=u, p_value=p, method=method, alternative=alternative)


# Replacement sweep -----------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    k: int
    p_value: float
    p_value_arith: float
    d_arith_of_sample_means: float
    d_geom_of_sample_means: float
    paradox_direction_ok: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class SweepReport:
    """Per replacement count ``k``: geometric (``p_value``) and arithmetic MWU
    p-values comparing bootstrap means of ``A'`` against ``A``.

    ``threshold_crossings`` maps each alpha to the first ``k`` where the
    geometric p-value drops below it with the paradoxical direction, or None.
    """

    sample_size: int
    n_resamples: int
    seed: int
    max_fraction: float
    step: int
    interval: Tuple[float, float]
    points: List[SweepPoint]
    threshold_crossings: Dict[float, Optional[int]] = field(default_factory=dict)

    def point(self, k: int) -> SweepPoint:
        for p in self.points:
            if p.k == k:
                return p
        raise KeyError(k)

    def to_dict(self) -> dict:
        return {
            "sample_size": self.sample_size,
            "n_resamples": self.n_resamples,
            "seed": self.seed,
            "max_fraction": self.max_fraction,
            "step": self.step,
            "interval": list(self.interval),
            "points": [p.to_dict() for p in self.points],
            "threshold_crossings": {str(a): k for a, k in self.threshold_crossings.items()},
        }


def replace_random(a: np.ndarray, k: int, low: float, high: float, rng: np.random.Generator) -> np.ndarray:
    """Copy of ``a`` with ``k`` distinct random positions overwritten by uniform draws."""
    out = a.copy()
    if k:
        idx = rng.choice(a.size, size=k, replace=False)
        out[idx] = rng.uniform(low, high, size=k)
    return out


def sweep_point(
    a: np.ndarray,
    k: int,
    interval: Tuple[float, float],
    sample_size: int,
    n_resamples: int,
    seed: int,
    alternative: Alternative = Alternative.TWO_SIDED,
) -> SweepPoint:
    # One substream per k. The resample indices are shared between A and A'
    # so that k=0 compares identical distributions.
    a_prime = replace_random(a, k, interval[0], interval[1], make_rng(seed, k, 0))
    boot_seed = derive_seed(seed, k, 1)
    s = _resample_matrix(a, sample_size, n_resamples, boot_seed)
    s_prime = _resample_matrix(a_prime, sample_size, n_resamples, boot_seed)
    geo, geo_p = _row_stat(s, Statistic.GEOM_MEAN), _row_stat(s_prime, Statistic.GEOM_MEAN)
    ari, ari_p = _row_stat(s, Statistic.ARITH_MEAN), _row_stat(s_prime, Statistic.ARITH_MEAN)
    d_geom = float(geo_p.mean() - geo.mean())
    d_arith = float(ari_p.mean() - ari.mean())
    return SweepPoint(
        k=k,
        p_value=mwu_test(geo_p, geo, alternative).p_value,
        p_value_arith=mwu_test(ari_p, ari, alternative).p_value,
        d_arith_of_sample_means=d_arith,
        d_geom_of_sample_means=d_geom,
        paradox_direction_ok=d_geom > 0 and d_arith < 0,
    )


def replacement_sweep(
    a: VectorLike,
    max_fraction: float = 0.1,
    step: int = 1,
    sample_size: int = 200,
    n_resamples: int = 50,
    seed: int = 0,
    alternative: Alternative = Alternative.TWO_SIDED,
    ks: Optional[Sequence[int]] = None,
) -> SweepReport:
    """Replace ``k`` random elements of ``a`` by uniform draws from the
    inter-mean interval of the original ``a`` and test whether bootstrap means
    shift, for ``k = 0, step, 2*step, ...`` up to ``max_fraction * len(a)``.

    ``ks`` overrides the grid (values must still respect ``max_fraction``).
    """
    a = as_vector(a)
    if not 0 < max_fraction <= 0.5:
        raise FractionOutOfRange(f"max_fraction must be in (0, 0.5], got {max_fraction!r}")
    if step < 1:
        raise InvalidParams("step must be >= 1")
    limit = int(math.floor(max_fraction * len(a) + 1e-9))
    if ks is None:
        ks = range(0, limit + 1, step)
    elif any(k < 0 or k > limit for k in ks):
        raise FractionOutOfRange(f"replacement counts must lie in [0, {limit}]")
    interval = (geom_mean(a), arith_mean(a))
    values = np.array(a.values)
    points = [
        sweep_point(values, int(k), interval, sample_size, n_resamples, seed, Alternative(alternative))
        for k in ks
    ]
    return SweepReport(
        sample_size=sample_size,
        n_resamples=n_resamples,
        seed=seed,
        max_fraction=max_fraction,
        step=step,
        interval=interval,
        points=points,
        threshold_crossings=threshold_crossings(points),
    )


def threshold_crossings(points: Sequence[SweepPoint], alphas=ALPHAS) -> Dict[float, Optional[int]]:
    out = {}
    for alpha in alphas:
        out[alpha] = next(
            (p.k for p in points if p.paradox_direction_ok and p.p_value < alpha), None
        )
    return out


def moving_average(values: Sequence[float], window: int = 10) -> np.ndarray:
    """Trailing mean over up to ``window`` points (shorter at the start)."""
    v = np.asarray(values, dtype=float)
    c = np.concatenate([[0.0], np.cumsum(v)])
    idx = np.arange(1, v.size + 1)
    lo = np.maximum(idx - window, 0)
    return (c[idx] - c[lo]) / (idx - lo)
