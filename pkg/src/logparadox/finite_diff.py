"""Finite differences of the arithmetic mean, geometric mean and inter-mean distance.

A difference is always ``F(perturbed) - F(original)``. Three perturbations are
supported: appending ``y`` (:class:`Concat`), removing ``y`` (:class:`Delete`)
and appending ``y`` then removing ``z`` (:class:`Replace`). The closed forms only
need the means and sizes of the operands; :func:`oracle_diff` rebuilds the
perturbed vector and recomputes everything, and is kept deliberately naive so it
can be used to check the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .core import (
    SampleVector,
    VectorLike,
    arith_mean,
    as_vector,
    concat,
    geom_mean,
    log_mean,
    multiset_difference,
)
from .errors import DeleteLargerThanVector, ReplaceSizeMismatch

ZERO_BAND = 1e-12


@dataclass(frozen=True)
class Concat:
    y: SampleVector

    def __post_init__(self):
        object.__setattr__(self, "y", as_vector(self.y))


@dataclass(frozen=True)
class Delete:
    y: SampleVector

    def __post_init__(self):
        object.__setattr__(self, "y", as_vector(self.y))


@dataclass(frozen=True)
class Replace:
    y: SampleVector
    z: SampleVector

    def __post_init__(self):
        object.__setattr__(self, "y", as_vector(self.y))
        object.__setattr__(self, "z", as_vector(self.z))


Perturbation = Union[Concat, Delete, Replace]


@dataclass(frozen=True)
class DiffResult:
    d_arith: float
    d_geom: float
    d_id: float
    paradox_signed: bool

    @classmethod
    def from_parts(cls, d_arith: float, d_geom: float) -> "DiffResult":
        return cls(d_arith, d_geom, d_arith - d_geom, opposite_signs(d_arith, d_geom))

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class SignPrediction:
    sign_arith: int
    sign_geom: int


def sign(v: float, band: float = ZERO_BAND) -> int:
    if abs(v) < band:
        return 0
    return 1 if v > 0 else -1


def opposite_signs(a: float, b: float, band: float = ZERO_BAND) -> bool:
    sa, sb = sign(a, band), sign(b, band)
    return sa * sb == -1


def apply(x: VectorLike, p: Perturbation) -> SampleVector:
    """Build the perturbed vector explicitly."""
    x = as_vector(x)
    if isinstance(p, Concat):
        return concat(x, p.y)
    if isinstance(p, Delete):
        if len(p.y) >= len(x):
            raise DeleteLargerThanVector(
                f"cannot delete {len(p.y)} elements from a vector of {len(x)}"
            )
        return multiset_difference(x, p.y)
    if isinstance(p, Replace):
        return multiset_difference(concat(x, p.y), p.z)
    raise TypeError(f"unknown perturbation {p!r}")


def _check(x: SampleVector, p: Perturbation) -> None:
    # The closed forms never look at individual elements, so membership and
    # size constraints have to be enforced separately.
    if isinstance(p, (Delete, Replace)):
        apply(x, p)


def diff_arith(x: VectorLike, p: Perturbation) -> float:
    x = as_vector(x)
    _check(x, p)
    return _arith(x, p)


def _arith(x: SampleVector, p: Perturbation) -> float:
    n = len(x)
    if isinstance(p, Concat):
        m = len(p.y)
        return m / (n + m) * (arith_mean(p.y) - arith_mean(x))
    if isinstance(p, Delete):
        m = len(p.y)
        return m / (n - m) * (arith_mean(x) - arith_mean(p.y))
    m, k = len(p.y), len(p.z)
    if m == k:
        return m / n * (arith_mean(p.y) - arith_mean(p.z))
    size = n + m - k
    return (-(m - k) * arith_mean(x) + m * arith_mean(p.y) - k * arith_mean(p.z)) / size


def diff_geom(x: VectorLike, p: Perturbation) -> float:
    """Closed-form change of the geometric mean.

    Written as ``g * expm1(w * (ln a - ln b))`` which is the same expression as
    ``g**(1-w) * a**w - g`` (and its deletion/replacement counterparts) but
    returns an exact zero when the two geometric means coincide.
    """
    x = as_vector(x)
    _check_sizes(p)
    _check(x, p)
    return _geom(x, p)


def _check_sizes(p: Perturbation) -> None:
    if isinstance(p, Replace) and len(p.y) != len(p.z):
        raise ReplaceSizeMismatch(
            f"geometric replacement needs |y| == |z|, got {len(p.y)} and {len(p.z)}"
        )


def _geom(x: SampleVector, p: Perturbation) -> float:
    n = len(x)
    lx = log_mean(x)
    gx = math.exp(lx)
    if isinstance(p, Concat):
        m = len(p.y)
        return gx * math.expm1(m / (n + m) * (log_mean(p.y) - lx))
    if isinstance(p, Delete):
        m = len(p.y)
        return gx * math.expm1(m / (n - m) * (lx - log_mean(p.y)))
    m = len(p.y)
    return gx * math.expm1(m / n * (log_mean(p.y) - log_mean(p.z)))


def diff_id(x: VectorLike, p: Perturbation) -> float:
    return diff_arith(x, p) - diff_geom(x, p)


def closed_form_diff(x: VectorLike, p: Perturbation) -> DiffResult:
    x = as_vector(x)
    _check_sizes(p)
    _check(x, p)
    return DiffResult.from_parts(_arith(x, p), _geom(x, p))


def oracle_diff(x: VectorLike, p: Perturbation) -> DiffResult:
    x = as_vector(x)
    xp = apply(x, p)
    return DiffResult.from_parts(
        arith_mean(xp) - arith_mean(x), geom_mean(xp) - geom_mean(x)
    )


def _cmp(a: float, b: float) -> int:
    return (a > b) - (a < b)


def condition_check(x: VectorLike, p: Perturbation) -> SignPrediction:
    """Predict the signs of both differences from mean comparisons alone."""
    x = as_vector(x)
    if isinstance(p, Replace) and len(p.y) != len(p.z):
        raise ReplaceSizeMismatch("sign conditions are only defined for |y| == |z|")
    _check(x, p)
    if isinstance(p, Concat):
        return SignPrediction(
            _cmp(arith_mean(p.y), arith_mean(x)), _cmp(log_mean(p.y), log_mean(x))
        )
    if isinstance(p, Delete):
        return SignPrediction(
            _cmp(arith_mean(x), arith_mean(p.y)), _cmp(log_mean(x), log_mean(p.y))
        )
    return SignPrediction(
        _cmp(arith_mean(p.y), arith_mean(p.z)), _cmp(log_mean(p.y), log_mean(p.z))
    )

