import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bohrlab import bohr, faber, gallery, norms, oracles
from bohrlab.exceptions import DomainError

DISK = gallery.make_disk()
SEGMENT = gallery.make_segment()
H3 = gallery.make_hypocycloid(3)
ONES = norms.NormModel.custom(lambda n: 1.0, envelope=1.0, label="ones")


def test_caratheodory_examples():
    assert bohr.caratheodory_bound(1, 2, 1) == pytest.approx(2)
    assert bohr.caratheodory_bound(0, 2.5, 4) == 0
    assert bohr.caratheodory_bound(1, 2, 3) == pytest.approx(2 / 7)
    with pytest.raises(DomainError):
        bohr.caratheodory_bound(1, 1, 3)


def test_annulus_examples():
    assert bohr.caratheodory_bound_annulus(1, 2, 2, 1) == pytest.approx(4 / 3)
    assert bohr.caratheodory_bound_annulus(0.5, 3, 3, 2) == pytest.approx(9 / 80)
    assert bohr.caratheodory_bound_annulus(1, 3, 1e12, 1) == pytest.approx(2 / 3)
    big = bohr.caratheodory_bound_annulus(1, 2.5, 1e6, 3)
    assert abs(big - 2 / 2.5 ** 3) < 1e-9


def test_check_constant_function():
    res = bohr.check_caratheodory([1, 0, 0, 0], 2.0)
    assert res.ok and np.all(np.isinf(res.ratios))


@pytest.mark.parametrize("R", [2.0, 3.0, 5.0])
def test_moebius_family(R):
    n = np.arange(1, 16)
    a = np.concatenate([[1.0], 2 * (-1.0) ** n / R ** n])
    res = bohr.check_caratheodory(a, R)
    assert res.ok
    np.testing.assert_allclose(res.ratios, R ** n / (R ** n - 1), rtol=1e-10)
    assert np.all(np.diff(res.slacks) < 0) and res.slacks[-1] < 1e-6 * res.slacks[0]


def test_check_rejects_negative_real_part():
    with pytest.raises(DomainError, match="rotate"):
        bohr.check_caratheodory([-1, 0.1], 2.0)


def test_h3_normalized_family_satisfies_bounds():
    R, r1 = 3.0, 0.9
    cert = bohr.lower_certificate(H3.map, H3.exact_norms, R, r1)
    c = bohr.extremal_coefficients(R, r1, cert.truncationN)
    # |c . F / T| <= 1 on the level R, so 1 - c . F / T has nonnegative real part there
    a = -c / cert.boundarySup
    a[0] += 1
    assert bohr.check_caratheodory(a, R).ok


def test_solve_upper_h3():
    rep = bohr.solve_upper(norms.NormModel(norms.EXACT_H3))
    assert rep.R == pytest.approx(4.919167, abs=1e-4)
    assert abs(rep.R - oracles.series_root_oracle(oracles.m3_mp)) <= 1e-9
    assert rep.residual <= 0 and abs(rep.residual) <= 1e-9


def test_solve_upper_degenerate():
    zero = norms.NormModel.custom(lambda n: 0.0, envelope=0.0, label="zero")
    rep = bohr.solve_upper(zero)
    assert rep.R == 1 and rep.method.endswith("degenerate")


def test_solve_upper_convex_and_general():
    convex = bohr.solve_upper(norms.NormModel(norms.BOUND_CONVEX)).R
    assert 5.5 < convex < 5.9
    assert abs(convex - oracles.series_root_oracle(lambda n: 2)) <= 1e-9
    general = bohr.solve_upper(norms.NormModel(norms.BOUND_GENERAL)).R
    ref = oracles.series_root_oracle(lambda n: 2 * mpmath.sqrt(n * mpmath.log(n) + 2 * n))
    assert abs(general - ref) <= 1e-9
    assert convex < general <= 13.8


def test_solve_upper_h4_matches_oracle():
    rep = bohr.solve_upper(norms.NormModel(norms.EXACT_H4))
    assert abs(rep.R - oracles.series_root_oracle(oracles.m4_mp)) <= 1e-9


def test_disk_model_root_is_closed_form():
    # sum 2 / (R**n - 1) = 1 has no elementary root; compare against the oracle
    rep = bohr.solve_upper(norms.NormModel(norms.EXACT_DISK))
    assert abs(rep.R - oracles.series_root_oracle(lambda n: 1)) <= 1e-9


def test_sampled_requires_inflation():
    with pytest.raises(ValueError, match="inflation"):
        bohr.solve_upper(norms.NormModel.sampled(H3.map))
    rep = bohr.solve_upper(norms.NormModel.sampled(H3.map), tol=1e-6, sampled_inflation=1 + 1e-4)
    assert rep.R > bohr.solve_upper(norms.NormModel(norms.EXACT_H3)).R


def test_annulus_limits():
    # as r grows the denominators tend to R**n, whose M = 1 root is 2 / (R - 1) = 1
    far = bohr.solve_upper_annulus(ONES, 1e12).R
    assert abs(far - 3) <= 1e-9
    near = bohr.solve_upper_annulus(ONES, 10).R
    ref = oracles.series_root_oracle(lambda n: 1, r_inner=10)
    assert abs(near - ref) <= 1e-9
    assert 0 < near - far < 0.05
    # the inner level only helps: R**n - r**-n > R**n - 1
    assert near < bohr.solve_upper(ONES).R


def test_annulus_with_decaying_tail_tends_to_three():
    r0, Mp = 1.5, 1.0
    roots = []
    for r in (10.0, 100.0, 1000.0):
        q = r0 / r
        model = norms.NormModel.custom(lambda n, q=q: 1 + q ** n * Mp, envelope=1 + q * Mp)
        roots.append(bohr.solve_upper_annulus(model, r).R)
    assert all(b < a for a, b in zip(roots, roots[1:]))
    assert abs(roots[-1] - 3) < 0.01


@settings(max_examples=100, deadline=None)
@given(st.floats(0.5, 3.0), st.floats(0.0, 0.9), st.floats(1.05, 20), st.floats(1.001, 2))
def test_g_strictly_decreasing(c, q, R1, factor):
    model = norms.NormModel.custom(lambda n: c + q ** n, envelope=c + q)
    R2 = R1 * factor
    assert bohr.upper_series(model, R2) < bohr.upper_series(model, R1)


def test_bohr_sum_examples():
    assert bohr.bohr_sum([1, 0, 0], DISK.exact_norms) == 1
    c = bohr.extremal_coefficients(2.5, 0.99, 400)
    assert bohr.bohr_sum(c, DISK.exact_norms) == pytest.approx(oracles.disk_bohr_sum(0.99, 2.5))
    assert oracles.disk_bohr_sum(0.99, 2.5) == pytest.approx(1.0032, abs=1e-4)
    c = bohr.extremal_coefficients(3.0, 0.9, 200)
    assert bohr.bohr_sum(c, H3.exact_norms) > bohr.bohr_sum(c, DISK.exact_norms)


def test_disk_certificates():
    cert = bohr.lower_certificate(DISK.map, DISK.exact_norms, 2.5, 0.99)
    assert cert.certified and cert.boundarySup == pytest.approx(1)
    assert cert.bohrSum == pytest.approx(1.0032, abs=1e-4)
    for r1 in (0.5, 0.9, 0.99, 0.9999):
        cert = bohr.lower_certificate(DISK.map, DISK.exact_norms, 3.0, r1)
        assert not cert.certified
        assert cert.bohrSum == pytest.approx((1 + 3 * r1 - 2 * r1 ** 2) / (3 - r1), abs=1e-6)
        assert cert.bohrSum <= 1 + 1e-7


def test_disk_certificate_follows_closed_form_in_r1():
    # S - 1 = (1 - r1)(1 + 2 r1 - R) / (R - r1): positive exactly when r1 > (R - 1) / 2
    R = 2.7
    for r1 in np.linspace(0.5, 0.99, 12):
        cert = bohr.lower_certificate(DISK.map, DISK.exact_norms, R, r1)
        gap = (1 - r1) * (1 + 2 * r1 - R) / (R - r1)
        assert cert.ratio - 1 == pytest.approx(gap, abs=1e-7)
        assert cert.certified == (gap > cert.margin)


def test_h3_certificate():
    cert = bohr.lower_certificate(H3.map, H3.exact_norms, 3.0, 0.99)
    assert cert.certified and cert.ratio > 1 + 1e-6
    # the rigorous sup bound dominates the sampled maximum
    assert cert.boundarySup >= cert.boundarySampled


def test_certificate_input_checks():
    with pytest.raises(DomainError):
        bohr.lower_certificate(H3.map, H3.exact_norms, 3.0, 1.2)
    with pytest.raises(DomainError):
        bohr.lower_certificate(H3.map, H3.exact_norms, 0.9, 0.5)


def test_disk_scan_approaches_three_from_below():
    grid = np.round(np.arange(2.9, 3.1 + 1e-9, 0.002), 10)
    rep = bohr.lower_scan(DISK.map, DISK.exact_norms, grid, bohr.DEFAULT_R1GRID)
    assert 2.98 < rep.R < 3
    coarse = bohr.lower_scan(DISK.map, DISK.exact_norms, grid, (0.9,))
    assert coarse.R <= rep.R


def test_disk_scan_never_certifies_three_or_more():
    grid = np.round(np.arange(3.0, 3.5, 0.05), 10)
    rep = bohr.lower_scan(DISK.map, DISK.exact_norms, grid, bohr.DEFAULT_R1GRID)
    assert rep.R == 1 and rep.method.endswith("none")


def test_scans_on_h3_and_segment():
    grid = np.round(np.arange(2.9, 3.3, 0.02), 10)
    h3 = bohr.lower_scan(H3.map, H3.exact_norms, grid, bohr.DEFAULT_R1GRID)
    assert h3.R > 3
    seg = bohr.lower_scan(SEGMENT.map, SEGMENT.exact_norms, grid, bohr.DEFAULT_R1GRID)
    assert seg.R >= 3 - 0.02


@pytest.mark.parametrize("cond", [DISK, SEGMENT, H3, gallery.make_hypocycloid(4)])
def test_brackets_are_consistent(cond):
    grid = np.round(np.arange(2.5, 4.5, 0.05), 10)
    lower = bohr.lower_scan(cond.map, cond.exact_norms, grid, bohr.DEFAULT_R1GRID).R
    upper = bohr.solve_upper(cond.upper_model()).R
    general = bohr.solve_upper(norms.NormModel(norms.BOUND_GENERAL)).R
    assert lower <= upper <= general


def test_theorem2_disk_rows_are_exact():
    rows = bohr.theorem2_experiment(DISK.map, [2, 5])
    assert [(row.lowerB, row.upperB) for row in rows] == [(3, 3), (3, 3)]


def test_theorem2_segment_trend():
    rows = bohr.theorem2_experiment(SEGMENT.map, [2, 4, 8, 16, 32])
    ups = [row.epsilonUp for row in rows]
    assert all(b < a for a, b in zip(ups, ups[1:]))
    assert ups[-1] < 0.5
    lows = [row.lowerB for row in rows]
    assert all(b <= a for a, b in zip(lows, lows[1:]))
    assert all(row.epsilonDown <= 0.005 + 1e-12 for row in rows)
    assert all(row.lowerB <= row.upperB for row in rows)


def test_theorem2_h3_upper_near_three():
    rows = bohr.theorem2_experiment(H3.map, [2, 8, 32])
    assert abs(rows[-1].upperB - 3) < 0.5
    assert all(b.upperB < a.upperB for a, b in zip(rows, rows[1:]))


def test_theorem2_rejects_bad_levels():
    with pytest.raises(DomainError):
        bohr.theorem2_experiment(SEGMENT.map, [1.8, 4])
    with pytest.raises(ValueError):
        bohr.theorem2_experiment(SEGMENT.map, [4, 2])


def test_analytic_lower_branch_below_upper():
    tb = faber.en_tail_bound(H3.map, 1.5, 2.0, 32.0)
    low = bohr.analytic_lower(tb, 32.0)
    assert 1 <= low < 3
    assert not math.isnan(low)
