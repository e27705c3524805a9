import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from bohrlab import faber, gallery, oracles
from bohrlab.exceptions import DomainError
from bohrlab.laurent import ExteriorMap, laurent_pow

DISK = gallery.make_disk().map
SEGMENT = gallery.make_segment().map
H3 = gallery.make_hypocycloid(3).map
GALLERY = ["disk", "segment", "h3", "h4", "h5", "level:segment:2", "level:h3:1.5"]


def interior_points(fmap, k, seed):
    rng = np.random.default_rng(seed)
    s = 1.05 + 0.9 * rng.random(k)
    return fmap(s * np.exp(2j * np.pi * rng.random(k)))


def test_disk_monomials():
    p = faber.faber_poly(DISK, 5)
    assert_allclose(p.z_coeffs, [0, 0, 0, 0, 0, 1], atol=1e-12)
    assert not np.any(p.alpha_tail)


def test_segment_degree_two():
    p = faber.faber_poly(SEGMENT, 2)
    assert_allclose(p.z_coeffs, [-2, 0, 4], atol=1e-12)
    assert p(0.5) == pytest.approx(-1.0)


def test_segment_is_twice_chebyshev():
    for p in faber.faber_polys(SEGMENT, 10)[1:]:
        assert_allclose(p.z_coeffs.real, oracles.twice_chebyshev(p.n), atol=1e-10)


def test_h3_degree_two():
    p = faber.faber_poly(H3, 2)
    assert_allclose(p.z_coeffs, [0, 0, 1], atol=1e-14)
    assert p.alpha_tail[0] == pytest.approx(1)
    assert p.alpha_tail[3] == pytest.approx(0.25)


def test_zero_degree():
    p = faber.faber_poly(H3, 0)
    assert_allclose(p.z_coeffs, [1])
    assert p.alpha_tail.size == 0


@pytest.mark.parametrize("name", GALLERY)
def test_leading_coefficient_and_residuals(name):
    fmap = gallery.get_condenser(name).map
    for p in faber.faber_polys(fmap, 10):
        assert abs(p.z_coeffs[-1] / fmap.gamma ** p.n - 1) <= 1e-9
        assert p.residual <= 1e-9
        assert p.composition_residual() <= 1e-9 * 1.5 ** p.n


def test_tails_match_direct_composition():
    # read the tail off sum_k c_k psi**k and compare with the stored tail
    fmap = ExteriorMap(1.3, 0.2, (0.3, -0.1j, 0.05))
    for p in faber.faber_polys(fmap, 8):
        comp = sum(c * laurent_pow(fmap.series(), k) for k, c in enumerate(p.z_coeffs))
        direct = np.array([complex(comp[-j]) for j in range(1, p.alpha_tail.size + 1)])
        assert_allclose(p.alpha_tail, direct, atol=1e-12)


def test_high_degree_tails_stay_accurate():
    p = faber.faber_poly(SEGMENT, 120)
    expect = np.zeros(120, dtype=complex)
    expect[-1] = 1
    assert_allclose(p.alpha_tail, expect, atol=1e-12)
    q = faber.faber_poly(H3, 120)
    assert 1 + q.alpha_tail.real.sum() == pytest.approx(2 + 0.5 ** 120, abs=1e-12)


def test_dd_precision_agrees():
    a = faber.faber_polys(H3, 12, precision="dd")
    b = faber.faber_polys(H3, 12, precision="double")
    for p, q in zip(a, b):
        assert_allclose(p.z_coeffs, q.z_coeffs, atol=1e-12)
        assert_allclose(p.alpha_tail, q.alpha_tail, atol=1e-12)


def test_oracle_examples():
    assert faber.faber_oracle(DISK, 3, 0.2) == pytest.approx(0.008, abs=1e-12)
    assert faber.faber_oracle(SEGMENT, 2, 0.5) == pytest.approx(-1.0, abs=1e-10)
    assert faber.faber_oracle(H3, 1, 0.3 + 0.1j) == pytest.approx(0.3 + 0.1j, abs=1e-10)


def test_oracle_rejects_outside_points():
    with pytest.raises(DomainError):
        faber.faber_oracle(DISK, 2, 5.0, rho=1.5)


@pytest.mark.parametrize("name", GALLERY)
def test_oracle_equivalence(name):
    fmap = gallery.get_condenser(name).map
    zs = interior_points(fmap, 20, seed=len(name))
    for p in faber.faber_polys(fmap, 10):
        got = p(zs)
        ref = np.array([faber.faber_oracle(fmap, p.n, z, rho=2.0) for z in zs])
        assert np.abs(got - ref).max() <= 1e-8


@pytest.mark.parametrize("name,R", [("segment", 2.0), ("segment", 3.0), ("h3", 2.0), ("h3", 3.0)])
def test_scaling_identity(name, R):
    fmap = gallery.get_condenser(name).map
    scaled = faber.scale_to_level(fmap, R)
    for p, q in zip(faber.faber_polys(fmap, 8), faber.faber_polys(scaled, 8)):
        assert_allclose(p.z_coeffs, R ** p.n * q.z_coeffs, atol=1e-10)


def test_scaled_disk():
    q = faber.faber_poly(faber.scale_to_level(DISK, 2.0), 3)
    assert_allclose(q.z_coeffs, [0, 0, 0, 1 / 8], atol=1e-15)
    with pytest.raises(DomainError):
        faber.scale_to_level(DISK, 1.0)


def test_coefficients_of_basis_elements():
    p3 = faber.faber_poly(H3, 3)
    a = faber.faber_coefficients(p3, H3, 1.5, 8)
    expect = np.zeros(9)
    expect[3] = 1
    assert_allclose(a, expect, atol=1e-10)
    one = faber.faber_coefficients(lambda z: np.ones_like(z), H3, 1.5, 8)
    expect = np.zeros(9)
    expect[0] = 1
    assert_allclose(one, expect, atol=1e-12)


def test_coefficient_round_trip_h3():
    rng = np.random.default_rng(3)
    N = 60
    a = 2.0 ** -np.arange(N + 1) * np.exp(2j * np.pi * rng.random(N + 1))
    polys = faber.faber_polys(H3, N)
    w = 1.5 * np.exp(2j * np.pi * np.arange(512) / 512)
    samples = sum(ak * p.composed(w) for ak, p in zip(a, polys))
    got = faber.faber_coefficients(samples, H3, 1.5, N)
    assert_allclose(got[:13], a[:13], atol=1e-8)


def test_holomorphy_radius_examples():
    n = np.arange(64)
    assert faber.holomorphy_radius(2.0 ** -n).radius == pytest.approx(2.0)
    assert faber.holomorphy_radius(3.0 ** -n * np.maximum(n, 1) ** 2).radius == pytest.approx(3.0, rel=0.05)
    zero = np.zeros(64)
    zero[0] = 1
    assert math.isinf(faber.holomorphy_radius(zero).radius)


def sampled_En(fmap, n, r, m=512):
    w = r * np.exp(2j * np.pi * np.arange(m) / m)
    return float(np.abs(faber.faber_poly(fmap, n).tail_at(w)).max())


def test_tail_bound_disk_is_positive():
    tb = faber.en_tail_bound(DISK, 1.5, 2.0, 3.0)
    assert tb.value(3) > 0
    assert sampled_En(DISK, 3, 3.0) == 0


def test_tail_bound_h3_formula_and_domination():
    tb = faber.en_tail_bound(H3, 1.5, 2.0, 4.0)
    assert tb.value(3) == pytest.approx(1.5 ** 3 * tb.boundary_length / (2 * np.pi * tb.separation))
    for n in range(1, 9):
        assert tb.value(n) >= sampled_En(H3, n, 4.0)


def test_tail_bound_segment_domination():
    tb = faber.en_tail_bound(SEGMENT, 2.0, 4.0, 8.0)
    for n in range(1, 9):
        assert tb.value(n) >= sampled_En(SEGMENT, n, 8.0)
    with pytest.raises(DomainError):
        faber.en_tail_bound(SEGMENT, 2.0, 1.5, 8.0)


def test_separation_is_a_lower_bound():
    # circles of radius 1.5 and 3 under the disk map are 1.5 apart
    assert faber.level_separation(DISK, 1.5, 3.0) <= 1.5
    assert faber.level_separation(DISK, 1.5, 3.0) > 1.49
    assert faber.level_length(DISK, 2.0) == pytest.approx(4 * np.pi)


def test_holomorphy_radius_ignores_coefficients_below_floor():
    n = np.arange(80)
    a = 2.0 ** -n
    a[50:] = 1e-30                       # below the floor: treated as unresolved
    floor = np.full(80, 1e-20)
    assert faber.holomorphy_radius(a, noise=floor).radius == pytest.approx(2.0)
