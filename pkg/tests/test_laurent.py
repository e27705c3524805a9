import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from bohrlab.exceptions import DomainError
from bohrlab.laurent import (ExteriorMap, LaurentSeries, eval_series, get_precision,
                             laurent_mul, laurent_pow)

H3 = ExteriorMap(1.0, 0j, (0.0, 0.5))
SEGMENT = ExteriorMap(2.0, 0j, (0.5,))


def dense(s, lo, hi):
    return np.array([complex(s[d]) for d in range(lo, hi + 1)])


coeff = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)
series = st.builds(lambda lo, c: LaurentSeries(lo, c), st.integers(-4, 3),
                   st.lists(coeff, min_size=1, max_size=5))


def test_inverse_powers_multiply_to_one():
    p = laurent_mul(LaurentSeries.monomial(1), LaurentSeries.monomial(-1))
    assert p.lo == p.hi == 0
    assert p[0] == 1


def test_h3_square_by_hand():
    psi = H3.series()
    sq = laurent_mul(psi, psi)
    expect = {2: 1, -1: 1, -4: 0.25}
    for d in range(sq.lo, sq.hi + 1):
        assert sq[d] == pytest.approx(expect.get(d, 0))
    assert_allclose(dense(laurent_pow(psi, 2), -4, 2), dense(sq, -4, 2))


def test_identity_and_zeroth_power():
    a = LaurentSeries(-2, [1, 2j, 3, 4])
    assert_allclose(laurent_mul(a, LaurentSeries.constant()).coeffs, a.coeffs)
    one = laurent_pow(a, 0)
    assert (one.lo, one.hi, one[0]) == (0, 0, 1)


def test_disk_cube():
    cube = laurent_pow(ExteriorMap(1.0).series(), 3)
    assert_allclose(dense(cube, 0, 3), [0, 0, 0, 1])


def test_eval_examples():
    assert eval_series(ExteriorMap(1.0), 3j) == pytest.approx(3j)
    assert eval_series(H3, 1.0) == pytest.approx(1.5)
    assert eval_series(SEGMENT, 1.0) == pytest.approx(1.0)
    assert eval_series(H3.series(), 2.0) == pytest.approx(2 + 0.5 / 4)


def test_eval_rejects_origin_for_negative_powers():
    with pytest.raises(DomainError):
        eval_series(LaurentSeries(-1, [1, 1]), 0)
    with pytest.raises(DomainError):
        H3(0.5)


def test_window_records_dropped_mass():
    a = LaurentSeries(-3, [0.5, 0.25, 0, 1])
    b = laurent_mul(a, a, window=(-2, 0))
    full = laurent_mul(a, a)
    assert b.floor == pytest.approx(full.l1() - b.l1())
    with pytest.raises(ValueError, match="empty window"):
        laurent_mul(a, a, window=(1, 0))


def test_floor_propagates_through_products():
    a = LaurentSeries(0, [1, 1], floor=0.1)
    b = LaurentSeries(0, [2], floor=0.0)
    assert laurent_mul(a, b).floor == pytest.approx(0.1 * 2)


def test_exterior_map_basics():
    assert SEGMENT.capacity == pytest.approx(0.5)
    assert SEGMENT(1j * 2) == pytest.approx((2j + 1 / (2j)) / 2)
    assert H3.J == 2 and not H3.is_affine and ExteriorMap(2.0).is_affine
    with pytest.raises(DomainError):
        ExteriorMap(-1.0)
    assert ExteriorMap.from_dict(H3.to_dict()) == H3


def test_scaled_map_composes():
    w = 1.3 * np.exp(0.4j)
    assert H3.scaled(2.0)(w) == pytest.approx(H3(2.0 * w))


def test_derivative_matches_finite_difference():
    w, h = 1.7 * np.exp(1.1j), 1e-6
    fd = (H3(w + h) - H3(w - h)) / (2 * h)
    assert H3.derivative(w) == pytest.approx(fd, rel=1e-8)


def test_truncation_records_tail():
    m = ExteriorMap(1.0, 0j, tuple(0.5 ** j for j in range(1, 10)))
    t = m.truncated(3)
    assert t.J == 3 and t.tail_bound > 0


def test_convexity_margin_sign():
    assert SEGMENT.scaled(2.0).convexity_margin() > 0
    assert H3.convexity_margin() < 0


def test_precision_env(monkeypatch):
    monkeypatch.setenv("BOHRLAB_PRECISION", "dd")
    assert get_precision() == "dd"
    monkeypatch.setenv("BOHRLAB_PRECISION", "quad")
    with pytest.raises(ValueError):
        get_precision()


def test_dd_series_agrees_with_double():
    a = laurent_pow(H3.series("dd"), 5).to_complex()
    b = laurent_pow(H3.series(), 5)
    assert_allclose(a.coeffs, b.coeffs, atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(series, series, series)
def test_mul_commutative_associative(a, b, c):
    ab, ba = laurent_mul(a, b), laurent_mul(b, a)
    assert_allclose(dense(ab, ab.lo, ab.hi), dense(ba, ab.lo, ab.hi), atol=1e-12)
    left, right = laurent_mul(ab, c), laurent_mul(a, laurent_mul(b, c))
    assert_allclose(dense(left, left.lo, left.hi), dense(right, left.lo, left.hi), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(series, st.integers(0, 8))
def test_pow_matches_repeated_mul(a, k):
    expect = LaurentSeries.constant()
    for _ in range(k):
        expect = laurent_mul(expect, a)
    got = laurent_pow(a, k)
    scale = max(1.0, expect.l1())
    assert_allclose(dense(got, expect.lo, expect.hi) / scale,
                    dense(expect, expect.lo, expect.hi) / scale, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(series, series, st.floats(1.1, 3.0), st.floats(0, 2 * np.pi))
def test_eval_is_multiplicative(a, b, r, t):
    w = r * np.exp(1j * t)
    lhs = eval_series(laurent_mul(a, b), w)
    rhs = eval_series(a, w) * eval_series(b, w)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))
