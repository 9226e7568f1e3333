"""Detecting and inducing opposite-signed arithmetic/geometric mean comparisons."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .core import (
    SampleVector,
    VectorLike,
    arith_mean,
    as_vector,
    concat,
    geom_mean,
    multiset_difference,
)
from .errors import NonPositiveInput, VectorTooSmall
from .finite_diff import ZERO_BAND, Concat, diff_arith, diff_geom, sign


@dataclass(frozen=True)
class ParadoxVerdict:
    """Comparison of ``a`` against ``b``.

    ``arith_order``/``geom_order`` are +1 when ``a``'s mean is larger, -1 when
    smaller, 0 within the zero band. ``d_a``/``d_g`` are ``mean(b) - mean(a)``,
    and ``criterion`` is ``-d_a * d_g``, positive on a paradox.
    """

    arith_order: int
    geom_order: int
    is_paradox: bool
    d_a: float
    d_g: float
    criterion: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def paradox_verdict(a: VectorLike, b: VectorLike) -> ParadoxVerdict:
    d_a = arith_mean(b) - arith_mean(a)
    d_g = geom_mean(b) - geom_mean(a)
    return verdict_from_means(d_a, d_g)


def verdict_from_means(d_a: float, d_g: float) -> ParadoxVerdict:
    """Verdict from precomputed ``mean(b) - mean(a)`` differences."""
    arith_order = -sign(d_a)
    geom_order = -sign(d_g)
    return ParadoxVerdict(
        arith_order=arith_order,
        geom_order=geom_order,
        is_paradox=arith_order * geom_order == -1,
        d_a=d_a,
        d_g=d_g,
        criterion=-d_a * d_g,
    )


def optimal_target(x: VectorLike) -> float:
    """Midpoint ``Q`` of the inter-mean interval ``[geom_mean, arith_mean]``."""
    return (geom_mean(x) + arith_mean(x)) / 2


def heuristic_precondition(m: float, big_m: float, q: float) -> bool:
    """True when swapping ``[m, big_m]`` for ``[q, q]`` moves the means apart in sign."""
    return math.sqrt(m * big_m) < q < (m + big_m) / 2


@dataclass(frozen=True)
class HeuristicStep:
    q: float
    removed: Tuple[float, ...]
    inserted: Tuple[float, ...]
    precondition_holds: bool

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "removed": list(self.removed),
            "inserted": list(self.inserted),
            "precondition_holds": self.precondition_holds,
        }


def _step_info(x: SampleVector, removed=(), inserted=()) -> HeuristicStep:
    q = optimal_target(x)
    m, big_m = float(x.values.min()), float(x.values.max())
    return HeuristicStep(
        q=q,
        removed=tuple(float(v) for v in removed),
        inserted=tuple(float(v) for v in inserted),
        precondition_holds=heuristic_precondition(m, big_m, q),
    )


def insert_step(x: VectorLike) -> Tuple[SampleVector, HeuristicStep]:
    """Append ``Q`` once. Shrinks the inter-mean distance whenever it is non-zero."""
    x = as_vector(x)
    info = _step_info(x)
    info = HeuristicStep(info.q, (), (info.q,), info.precondition_holds)
    return concat(x, [info.q]), info


class Selector(str, enum.Enum):
    RANDOM = "random"
    MIN = "min"
    MAX = "max"
    MINMAX = "minmax"


def replace_step(
    x: VectorLike,
    selector: Selector = Selector.MINMAX,
    seed: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[SampleVector, HeuristicStep]:
    """One replacement step; the output has the same length as the input.

    ``MINMAX`` swaps one minimum and one maximum for two copies of ``Q``.
    ``MIN`` and ``MAX`` swap a single extreme for ``Q``. ``RANDOM`` removes a
    uniformly chosen element and inserts a uniform draw from
    ``[geom_mean(x), arith_mean(x)]``; it needs ``seed`` or ``rng``.
    """
    x = as_vector(x)
    selector = Selector(selector)
    v = x.values
    info = _step_info(x)
    q = info.q
    if selector is Selector.MINMAX:
        if len(x) < 3:
            raise VectorTooSmall("min/max replacement needs at least 3 elements")
        removed = (float(v.min()), float(v.max()))
        inserted = (q, q)
    elif selector is Selector.RANDOM:
        if rng is None:
            if seed is None:
                raise ValueError("random replacement needs a seed or rng")
            rng = np.random.default_rng(seed)
        removed = (float(v[rng.integers(len(x))]),)
        inserted = (float(rng.uniform(geom_mean(x), arith_mean(x))),)
    elif selector is Selector.MIN:
        removed, inserted = (float(v.min()),), (q,)
    else:
        removed, inserted = (float(v.max()),), (q,)
    out = multiset_difference(concat(x, inserted), removed)
    return out, HeuristicStep(q, removed, inserted, info.precondition_holds)


def d_score(m: float, big_m: float) -> float:
    """Susceptibility score ``(m + M)/2 - sqrt(m M)`` of a vector's extremes.

    Evaluated as ``(sqrt(M) - sqrt(m))**2 / 2``, the same quantity without the
    cancellation.
    """
    if not (m > 0 and big_m > 0):
        raise NonPositiveInput(f"extremes must be > 0, got m={m!r}, M={big_m!r}")
    return (math.sqrt(big_m) - math.sqrt(m)) ** 2 / 2


def d_surface(m_grid: Sequence[float], big_m_grid: Sequence[float]) -> np.ndarray:
    """Matrix of :func:`d_score`, rows indexed by ``m_grid``, columns by ``big_m_grid``."""
    m = np.asarray(m_grid, dtype=float).reshape(-1)
    big_m = np.asarray(big_m_grid, dtype=float).reshape(-1)
    if m.size == 0 or big_m.size == 0:
        raise NonPositiveInput("grids must be non-empty")
    if not (np.all(m > 0) and np.all(big_m > 0)):
        raise NonPositiveInput("grid values must be > 0")
    return (np.sqrt(big_m)[None, :] - np.sqrt(m)[:, None]) ** 2 / 2


class GradientPoint(NamedTuple):
    candidate: float
    d_arith: float
    d_geom: float
    product: float


def default_candidates(x: VectorLike, points: int = 400) -> np.ndarray:
    v = as_vector(x).values
    return np.logspace(math.log10(v.min() / 10), math.log10(v.max() * 10), points)


def gradient_product_sweep(
    x: VectorLike, candidates: Optional[Sequence[float]] = None
) -> List[GradientPoint]:
    """Effect of appending a single candidate value on both means.

    The product ``d_arith * d_geom`` is negative exactly for candidates strictly
    between the geometric and arithmetic mean of ``x``.
    """
    x = as_vector(x)
    cands = default_candidates(x) if candidates is None else np.asarray(candidates, dtype=float)
    if not np.all(cands > 0):
        raise NonPositiveInput("candidates must be > 0")
    out = []
    for c in cands.tolist():
        p = Concat([c])
        da, dg = diff_arith(x, p), diff_geom(x, p)
        out.append(GradientPoint(c, da, dg, da * dg))
    return out


def single_insert_criterion(x: VectorLike, candidate: float) -> float:
    """``-d_arith * d_geom`` for appending one value."""
    p = Concat([candidate])
    return -diff_arith(x, p) * diff_geom(x, p)


__all__ = [
    "ZERO_BAND",
    "GradientPoint",
    "HeuristicStep",
    "ParadoxVerdict",
    "Selector",
    "d_score",
    "d_surface",
    "default_candidates",
    "gradient_product_sweep",
    "heuristic_precondition",
    "insert_step",
    "optimal_target",
    "paradox_verdict",
    "replace_step",
    "single_insert_criterion",
    "verdict_from_means",
]
