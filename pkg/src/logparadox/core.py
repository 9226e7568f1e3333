"""Positive vectors, their two means, and the multiset algebra used everywhere else."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    ElementNotPresent,
    EmptyVector,
    InvalidParams,
    NonFiniteElement,
    NonPositiveElement,
    OffsetTooLarge,
)


class SampleVector:
    """Immutable, non-empty vector of finite, strictly positive reals.

    Ordering is kept (reports list elements in input order) but none of the
    statistics depend on it; the vector behaves as a multiset.
    """

    __slots__ = ("_values",)

    def __init__(self, values: Union["SampleVector", Iterable[float]]):
        if isinstance(values, SampleVector):
            self._values = values._values
            return
        arr = np.array(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
        arr = arr.reshape(-1)
        if arr.size == 0:
            raise EmptyVector()
        with np.errstate(invalid="ignore"):
            bad = np.flatnonzero(~(np.isfinite(arr) & (arr > 0)))
        if bad.size:
            # report the first offending index, whichever kind it is
            i = int(bad[0])
            v = float(arr[i])
            if not math.isfinite(v):
                raise NonFiniteElement(i, v)
            raise NonPositiveElement(i, v)
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    def __len__(self):
        return self._values.size

    def __iter__(self):
        return iter(self._values.tolist())

    def __getitem__(self, item):
        return self._values[item]

    def __array__(self, dtype=None, copy=None):
        return self._values if dtype is None else self._values.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, SampleVector):
            return NotImplemented
        return np.array_equal(self._values, other._values)

    def __hash__(self):
        return hash(self._values.tobytes())

    def __repr__(self):
        return f"SampleVector({self._values.tolist()!r})"

    def tolist(self) -> list:
        return self._values.tolist()


VectorLike = Union[SampleVector, Sequence[float], np.ndarray]


def validate(values: VectorLike) -> SampleVector:
    """Check ``values`` and wrap them as a :class:`SampleVector`.

    Raises EmptyVector, NonFiniteElement(index) or NonPositiveElement(index).
    """
    return SampleVector(values)


def as_vector(x: VectorLike) -> SampleVector:
    return x if isinstance(x, SampleVector) else SampleVector(x)


def arith_mean(x: VectorLike) -> float:
    # fsum is exact up to the final rounding; the division can still land one
    # ulp outside [min, max] (e.g. three copies of 3.3), so clamp it back.
    x = as_vector(x)
    v = x.values
    return min(max(math.fsum(v.tolist()) / len(x), float(v.min())), float(v.max()))


def log_mean(x: VectorLike) -> float:
    """Mean of natural logs, i.e. ``ln(geom_mean(x))`` before clamping."""
    x = as_vector(x)
    return math.fsum(np.log(x.values).tolist()) / len(x)


def geom_mean(x: VectorLike) -> float:
    # Always through logs: a running product over/underflows long before the
    # mean does. Clamped to [min, arith_mean] so AM-GM holds in floating point.
    x = as_vector(x)
    g = math.exp(log_mean(x))
    return min(max(g, float(x.values.min())), arith_mean(x))


@dataclass(frozen=True)
class MeanSummary:
    n: int
    arith_mean: float
    geom_mean: float
    inter_mean_distance: float
    flatness: float
    min: float
    max: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def inter_mean_distance(x: VectorLike) -> float:
    return max(arith_mean(x) - geom_mean(x), 0.0)


def summarize(x: VectorLike) -> MeanSummary:
    x = as_vector(x)
    am = arith_mean(x)
    gm = geom_mean(x)
    return MeanSummary(
        n=len(x),
        arith_mean=am,
        geom_mean=gm,
        inter_mean_distance=max(am - gm, 0.0),
        flatness=gm / am,
        min=float(x.values.min()),
        max=float(x.values.max()),
    )


class TransformMode(str, enum.Enum):
    PLAIN = "plain"
    OFFSET = "offset"
    CLAMP = "clamp"


@dataclass(frozen=True)
class TransformOptions:
    base: float = math.e
    offset: float = 0.0
    clamp_epsilon: float = 1e-12
    mode: TransformMode = TransformMode.PLAIN

    def __post_init__(self):
        if not (self.base > 1 and math.isfinite(self.base)):
            raise InvalidParams(f"log base must be > 1, got {self.base!r}")
        if not self.offset >= 0:
            raise InvalidParams(f"offset must be >= 0, got {self.offset!r}")
        if not self.clamp_epsilon > 0:
            raise InvalidParams(f"clamp epsilon must be > 0, got {self.clamp_epsilon!r}")
        object.__setattr__(self, "mode", TransformMode(self.mode))


def log_transform(x, opts: TransformOptions = TransformOptions()) -> np.ndarray:
    """Elementwise logarithm in base ``opts.base``.

    ``PLAIN`` computes ``log_b(x)``, ``OFFSET`` computes ``log_b(x - c)`` and
    requires ``c < min(x)``, ``CLAMP`` computes ``log_b(max(x, eps))``. Clamp is
    the one mode that also accepts zeros, so its input is not required to be a
    :class:`SampleVector`.
    """
    if opts.mode is TransformMode.CLAMP:
        arr = np.asarray(x, dtype=float).reshape(-1)
        if arr.size == 0:
            raise EmptyVector()
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise NonFiniteElement(int(bad[0]), float(arr[bad[0]]))
        v = np.maximum(arr, opts.clamp_epsilon)
    else:
        v = as_vector(x).values
        if opts.mode is TransformMode.OFFSET:
            if opts.offset >= v.min():
                raise OffsetTooLarge(
                    f"offset {opts.offset!r} must be below min(x)={float(v.min())!r}"
                )
            v = v - opts.offset
    return np.log(v) / math.log(opts.base)


@dataclass(frozen=True)
class BaseSensitivity:
    base: float
    min_below_base: bool
    derivative_at_min: float


def base_sensitivity(x: VectorLike, base: float) -> BaseSensitivity:
    """Slope of ``log_b`` at the smallest element, ``1 / (ln(b) * min(x))``.

    Values below the base sit on the steep part of the curve and get
    re-weighted relative to the rest of the data.
    """
    if not base > 1:
        raise InvalidParams(f"log base must be > 1, got {base!r}")
    m = float(as_vector(x).values.min())
    return BaseSensitivity(base=base, min_below_base=m < base, derivative_at_min=1.0 / (math.log(base) * m))


def concat(x: VectorLike, y: VectorLike) -> SampleVector:
    return SampleVector(np.concatenate([as_vector(x).values, as_vector(y).values]))


def multiset_difference(x: VectorLike, y: VectorLike, atol: float = 0.0) -> SampleVector:
    """Remove one occurrence of each element of ``y`` from ``x``.

    Matching is exact unless ``atol > 0``, in which case the closest unused
    element within ``atol`` is removed. Raises ElementNotPresent when ``y`` is
    not contained in ``x`` and EmptyVector when nothing would be left.
    """
    xv = as_vector(x).values
    yv = as_vector(y).values
    keep = np.ones(xv.size, dtype=bool)
    if atol == 0.0:
        # For each distinct value of y with multiplicity c, drop the first c
        # occurrences (in input order) of that value in x.
        order = np.argsort(xv, kind="stable")
        xs = xv[order]
        yu, yc = np.unique(yv, return_counts=True)
        left = np.searchsorted(xs, yu, side="left")
        avail = np.searchsorted(xs, yu, side="right") - left
        short = np.flatnonzero(avail < yc)
        if short.size:
            raise ElementNotPresent(float(yu[short[0]]))
        offsets = np.arange(yc.sum()) - np.repeat(np.cumsum(yc) - yc, yc)
        keep[order[np.repeat(left, yc) + offsets]] = False
    else:
        for v in yv:
            dist = np.where(keep, np.abs(xv - v), np.inf)
            j = int(np.argmin(dist))
            if not dist[j] <= atol:
                raise ElementNotPresent(float(v))
            keep[j] = False
    if not keep.any():
        raise EmptyVector("multiset difference would leave an empty vector")
    return SampleVector(xv[keep])


def multiset_equal(a: VectorLike, b: VectorLike) -> bool:
    return np.array_equal(np.sort(as_vector(a).values), np.sort(as_vector(b).values))
