import math

import numpy as np
import pytest

from logparadox.core import (
    SampleVector,
    TransformMode,
    TransformOptions,
    arith_mean,
    base_sensitivity,
    concat,
    geom_mean,
    log_transform,
    multiset_difference,
    multiset_equal,
    summarize,
    validate,
)
from logparadox.errors import (
    ElementNotPresent,
    EmptyVector,
    InvalidParams,
    NonFiniteElement,
    NonPositiveElement,
    OffsetTooLarge,
)

X = [2, 4, 6, 13]


def test_validate_accepts_positive():
    v = validate(X)
    assert v.tolist() == [2.0, 4.0, 6.0, 13.0]
    assert len(v) == 4


def test_validate_reports_first_bad_index():
    with pytest.raises(NonPositiveElement) as e:
        validate([1, 0])
    assert e.value.index == 1
    with pytest.raises(NonPositiveElement) as e:
        validate([3, -1, 0])
    assert e.value.index == 1
    with pytest.raises(NonFiniteElement) as e:
        validate([1, 2, float("nan")])
    assert e.value.index == 2
    with pytest.raises(NonFiniteElement):
        validate([float("inf")])


def test_validate_empty():
    with pytest.raises(EmptyVector):
        validate([])


def test_sample_vector_is_read_only():
    v = SampleVector(X)
    with pytest.raises(ValueError):
        v.values[0] = 5
    assert v == SampleVector([2.0, 4.0, 6.0, 13.0])
    assert hash(v) == hash(SampleVector(X))


def test_arith_mean():
    assert arith_mean(X) == 6.25
    assert arith_mean([7.5]) == 7.5
    assert arith_mean([3, 11]) == 7.0


def test_geom_mean():
    assert math.isclose(geom_mean(X), 624 ** 0.25, rel_tol=1e-14)
    assert abs(geom_mean(X) - 4.998) < 5e-4
    assert geom_mean([3.3, 3.3, 3.3]) == 3.3
    assert math.isclose(geom_mean([3, 11]), math.sqrt(33), rel_tol=1e-14)


def test_geom_mean_never_exceeds_arith_mean():
    # values where exp(mean(log)) rounds above the arithmetic mean unclamped
    x = [0.1 + 1e-16 * i for i in range(50)]
    assert geom_mean(x) <= arith_mean(x)
    assert geom_mean(x) >= min(x)


def test_summarize():
    s = summarize(X)
    assert s.n == 4 and s.min == 2 and s.max == 13
    assert s.arith_mean == 6.25
    assert math.isclose(s.inter_mean_distance, 1.2520012011212334, rel_tol=1e-12)
    assert math.isclose(s.flatness, 0.7996798078206027, rel_tol=1e-12)
    s = summarize([5, 5])
    assert s.inter_mean_distance == 0 and s.flatness == 1
    s = summarize([1, 100])
    assert s.arith_mean == 50.5
    assert math.isclose(s.geom_mean, 10.0, rel_tol=1e-14)
    assert math.isclose(s.inter_mean_distance, 40.5, rel_tol=1e-12)


def test_log_transform():
    assert np.allclose(log_transform([10, 100], TransformOptions(base=10)), [1, 2])
    assert np.allclose(log_transform([math.e]), [1])
    opts = TransformOptions(base=10, offset=1, mode=TransformMode.OFFSET)
    assert np.allclose(log_transform([11], opts), [1])


def test_log_transform_offset_too_large():
    with pytest.raises(OffsetTooLarge):
        log_transform([2, 3], TransformOptions(offset=2, mode="offset"))


def test_log_transform_clamp_accepts_zero():
    out = log_transform([0.0, 1.0], TransformOptions(mode="clamp", clamp_epsilon=1e-6))
    assert np.allclose(out, [math.log(1e-6), 0.0])


def test_bad_base():
    with pytest.raises(InvalidParams):
        TransformOptions(base=1)
    with pytest.raises(InvalidParams):
        base_sensitivity([2], 0.5)


def test_base_sensitivity():
    s = base_sensitivity([10, 20, 30], 10)
    assert not s.min_below_base
    assert math.isclose(s.derivative_at_min, 0.0434294481903, rel_tol=1e-10)
    assert base_sensitivity([1], math.e).derivative_at_min == pytest.approx(1.0)
    assert base_sensitivity([0.5, 4], 2).min_below_base


def test_concat():
    assert concat([1, 2, 3], [3, 4]).tolist() == [1, 2, 3, 3, 4]
    assert concat(X, [5.5]).tolist() == [2, 4, 6, 13, 5.5]


def test_multiset_difference():
    assert multiset_difference([1, 2, 3, 3, 4], [3, 4]).tolist() == [1, 2, 3]
    assert multiset_difference(X, [6]).tolist() == [2, 4, 13]
    with pytest.raises(EmptyVector):
        multiset_difference([3], [3])
    with pytest.raises(ElementNotPresent):
        multiset_difference(X, [99])
    with pytest.raises(ElementNotPresent):
        multiset_difference([3, 4], [3, 3])


def test_multiset_difference_tolerance():
    assert multiset_difference([1.0, 2.0], [2.0 + 1e-13], atol=1e-12).tolist() == [1.0]
    with pytest.raises(ElementNotPresent):
        multiset_difference([1.0, 2.0], [2.0 + 1e-13])


def test_multiset_equal():
    assert multiset_equal([1, 2, 2], [2, 1, 2])
    assert not multiset_equal([1, 2], [1, 2, 2])
