import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gl3kuz.errors import PoleProximity, PreconditionError
from gl3kuz.group import weyl_act
from gl3kuz.testfunctions import TestFunction, gaussian_test_function
from gl3kuz.weyl import (
    EF_PRESETS, EPSILON, MAIN_TERM_CONSTANT, SpectralRegion, ef_error, ef_monotonicity_audit, ef_preset,
    elem_bounds_audit, elem_bounds_lhs_rhs, offaxis_bound_check, omega_weight, smoothed_indicator,
    spectral_main_term,
)

# mpmath values, see tests/oracles/weyl_oracle.py
BOX = (0.5, 1.5, 0.5, 1.5)
BOX_T8 = 15.7907325174177
BOX_T16 = 510.974413126851
BALL_CENTER = (1.0, 0.0)
BALL_T16_M1 = 2.38341530710863
BALL_T16_M2 = 9.53366122843454

# left sides at v = (0, 1, 3), see tests/oracles/elembounds_oracle.py; the slow algebraic tails
# limit the oracle to about 1e-8 for the two-dimensional integral
ELEM_LHS = (9.389508248375348, 5.2910034288991, 0.495004197473009)
ELEM_TOL = (1e-7, 1e-8, 1e-10)

T_SMOOTH = 20.0
GAUSSIAN = gaussian_test_function(center=(0.5, -0.2), width=1.0)


def _tempered(x1, x2, re=(0.0, 0.0)):
    return np.array([re[0] + 1j * x1, re[1] + 1j * x2, -re[0] - re[1] - 1j * (x1 + x2)])


def _disc(a, b):
    return a * a + b * b < 1


def test_box_main_terms_match_oracle():
    region = SpectralRegion.from_box(BOX)
    assert abs(spectral_main_term(region.scaled(8.0)) / BOX_T8 - 1) < 1e-12
    assert abs(spectral_main_term(region.scaled(16.0)) / BOX_T16 - 1) < 1e-12


def test_ball_main_terms_match_oracle():
    ball = SpectralRegion.ball(BALL_CENTER, 1.0, T=16.0)
    assert abs(spectral_main_term(ball) / BALL_T16_M1 - 1) < 1e-12
    assert abs(spectral_main_term(ball.with_radius(2.0)) / BALL_T16_M2 - 1) < 1e-12


def test_dilation_ratio_near_fifth_power():
    region = SpectralRegion.from_box(BOX)
    ratio = spectral_main_term(region.scaled(16.0)) / spectral_main_term(region.scaled(8.0))
    assert abs(ratio / 32 - 1) < 0.05


def test_radius_ratio_near_square():
    ball = SpectralRegion.ball(BALL_CENTER, 1.0, T=16.0)
    ratio = spectral_main_term(ball.with_radius(2.0)) / spectral_main_term(ball)
    assert abs(ratio / 4 - 1) < 0.10


def test_main_term_constant():
    region = SpectralRegion.from_box(BOX, T=8.0)
    assert spectral_main_term(region, with_constant=True) == pytest.approx(
        MAIN_TERM_CONSTANT * spectral_main_term(region), rel=1e-14)


def test_empty_region_is_zero():
    assert spectral_main_term(SpectralRegion.from_box((1.0, 1.0, 0.0, 2.0))) == 0.0
    assert spectral_main_term(SpectralRegion.ball((0.0, 0.0), 0.0)) == 0.0


def test_dilated_quadrature_agrees_with_box_rule():
    # the midpoint rule on an indicator converges to the tensor Gauss rule on the same box
    exact = spectral_main_term(SpectralRegion.from_box(BOX, T=4.0))
    square = SpectralRegion.dilated(lambda a, b: (a > 0.5) & (a < 1.5) & (b > 0.5) & (b < 1.5), BOX, T=4.0)
    assert abs(spectral_main_term(square, spacing=0.01) / exact - 1) < 1e-4


@given(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0), st.floats(0.1, 2.0), st.floats(0.1, 2.0))
@settings(max_examples=30)
def test_main_term_nonnegative(lo1, lo2, w1, w2):
    region = SpectralRegion.from_box((lo1, lo1 + w1, lo2, lo2 + w2))
    assert spectral_main_term(region) >= 0


def test_region_symmetry_and_membership():
    assert SpectralRegion.from_box((-1, 1, -1, 1)).is_symmetric()
    assert not SpectralRegion.from_box((0, 1, -1, 1)).is_symmetric()
    assert SpectralRegion.ball((0.5, 0.5), 1.0).is_symmetric()
    assert not SpectralRegion.ball(BALL_CENTER, 1.0).is_symmetric()
    assert SpectralRegion.dilated(_disc, (-1, 1, -1, 1)).is_symmetric()
    ball = SpectralRegion.ball((0.0, 0.0), 1.0, T=2.0)
    # |(x1, x2, -x1-x2)| = sqrt(2) |x1| on the axis x2 = 0
    assert ball.contains(0.7, 0.0) and not ball.contains(0.71, 0.0)
    assert SpectralRegion.from_box((0, 1, 0, 1), T=3.0).contains(2.9, 0.1)


def test_region_preconditions():
    with pytest.raises(ValueError):
        SpectralRegion.from_box(BOX, T=0.5)
    with pytest.raises(ValueError):
        SpectralRegion("annulus")


def test_ef_zero_function():
    zero = TestFunction(lambda mu: np.zeros(np.shape(mu)[1:]), (-1.0, 1.0, -1.0, 1.0))
    assert ef_error(zero, (0, 0, 0), (0.0, 0.5)) == 0.0


def test_ef_preset_rows():
    assert EF_PRESETS[1] == ((0.0, 0.0, 0.0), (0.0, 0.5))
    for s, _ in EF_PRESETS.values():
        assert abs(sum(s)) < 1e-15
    assert ef_preset(GAUSSIAN, 1) == ef_error(GAUSSIAN, (0, 0, 0), (0.0, 0.5))


def test_ef_row_one_stable_under_node_doubling():
    coarse = ef_preset(GAUSSIAN, 1, spacing=0.1)
    fine = ef_preset(GAUSSIAN, 1, spacing=0.05)
    assert np.isfinite(coarse) and coarse > 0
    assert abs(coarse / fine - 1) < 1e-4


def test_ef_shift_must_sum_to_zero():
    with pytest.raises(PreconditionError):
        ef_error(GAUSSIAN, (0.1, 0.0, 0.0), (0.0, 0.5))


def test_ef_monotonicity_audit():
    pairs = [((0.0, 0.5), (0.0, 1.0)), ((0.5, 0.5), (0.25, 1.0)), ((-0.5, 0.5), (-0.25, 0.75)),
             ((-0.5, 0.0), (-0.5, 0.5))]
    for s in ((0.0, 0.0, 0.0), EF_PRESETS[4][0]):
        rows = ef_monotonicity_audit(GAUSSIAN, s, pairs)
        assert all(row[4] for row in rows)


def test_ef_monotonicity_rejects_incomparable_pair():
    with pytest.raises(PreconditionError):
        ef_monotonicity_audit(GAUSSIAN, (0, 0, 0), [((0.0, 1.0), (0.0, 0.5))])


# sixteenths keep the comparability arithmetic exact
sixteenths = st.integers(0, 8).map(lambda k: k / 16)


@given(st.integers(-8, 8).map(lambda k: k / 16), sixteenths, sixteenths, sixteenths)
@settings(max_examples=15)
def test_ef_monotone_in_t(t1, gap, dt2, dsum):
    t = (t1, t1 + gap)
    tp2 = t[1] + dt2
    tp = (t[0] + t[1] + dsum - tp2, tp2)
    (row,) = ef_monotonicity_audit(GAUSSIAN, (0, 0, 0), [(t, tp)])
    assert row[4]


def test_omega_values():
    assert omega_weight(_tempered(0.4, 0.4)) == pytest.approx(0.01, abs=1e-15)
    assert abs(omega_weight(np.array([0.5, -0.5, 0.0]))) < 1e-15
    assert abs(omega_weight(np.array([-0.5, 0.5, 0.0]))) < 1e-15
    assert omega_weight(np.array([1j, -1j, 0.0])) == pytest.approx(5 / 104, abs=1e-15)


def test_omega_pole():
    with pytest.raises(PoleProximity):
        omega_weight(np.array([5.0, -5.0, 0.0]))


def test_smoothed_box_interior_and_exterior():
    F = smoothed_indicator(SpectralRegion.from_box((-1, 1, -1, 1)), T=T_SMOOTH)
    for x in [(0.0, 0.0), (5.0, -3.0), (12.0, 12.0)]:
        mu = _tempered(*x)
        assert abs(F(mu) / omega_weight(mu) - 1) < 1e-13
    for x in [(300.0, 0.0), (60.0, -60.0)]:
        assert abs(F(_tempered(*x))) < T_SMOOTH ** -50


def test_smoothed_dilated_interior_and_exterior():
    F = smoothed_indicator(SpectralRegion.dilated(_disc, (-1, 1, -1, 1)), T=T_SMOOTH)
    for x in [(0.0, 0.0), (5.0, -3.0)]:
        mu = _tempered(*x)
        assert abs(F(mu) / omega_weight(mu) - 1) < 1e-12
    assert abs(F(_tempered(40.0, 0.0))) < T_SMOOTH ** -50


def test_smoothed_indicator_needs_t_above_one():
    with pytest.raises(PreconditionError):
        smoothed_indicator(SpectralRegion.from_box((-1, 1, -1, 1)), T=1.0)


SYMMETRIC_REGIONS = [
    SpectralRegion.from_box((-1, 1, -1, 1)),
    SpectralRegion.ball((0.5, 0.5), 1.0),
    SpectralRegion.dilated(_disc, (-1, 1, -1, 1)),
]
SMOOTHED = [smoothed_indicator(r, T=T_SMOOTH) for r in SYMMETRIC_REGIONS]


@given(st.sampled_from(range(3)), st.floats(-30, 30), st.floats(-30, 30), st.floats(-0.5, 0.5),
       st.floats(-0.5, 0.5))
@settings(max_examples=40)
def test_smoothed_indicator_w2_symmetric(k, x1, x2, r1, r2):
    F = SMOOTHED[k]
    mu = _tempered(x1, x2, (r1, r2))
    a, b = F(mu), F(weyl_act("w2", mu))
    assert abs(a - b) <= 1e-10 * max(1.0, abs(a))


@pytest.mark.parametrize("k", range(3))
def test_offaxis_bound(k):
    # points inside the B(10) neighborhood or at least 12 from the region; the shell between is tested below
    region = SYMMETRIC_REGIONS[k].scaled(T_SMOOTH)
    F = SMOOTHED[k]
    for x in [(0.0, 0.0), (5.0, 2.0), (15.0, -8.0), (25.0, 25.0), (29.9, 0.0), (45.0, 0.0), (-80.0, 30.0)]:
        lhs, rhs = offaxis_bound_check(F, region, T_SMOOTH, _tempered(*x, (0.3, -0.3)))
        assert lhs <= rhs


def test_offaxis_shell_is_gaussian_small():
    # just outside B(10) the kernel is T^{-d^2} with d^2 > 100, exceeding (|mu| + T)^{-97} until T is astronomical
    region = SpectralRegion.from_box((-1, 1, -1, 1))
    F = SMOOTHED[0]
    for d in (10.2, 11.0):
        lhs, rhs = offaxis_bound_check(F, region, T_SMOOTH, _tempered(20.0 + d, 0.0, (0.3, -0.3)))
        assert lhs < T_SMOOTH ** (-d * d + 0.3 ** 2 * 2 + EPSILON)
        assert lhs > rhs


def test_elem_bounds_reference_point():
    lhs, rhs = elem_bounds_lhs_rhs((0, 1, 3))
    for value, ref, tol in zip(lhs, ELEM_LHS, ELEM_TOL):
        assert abs(value / ref - 1) < tol
    b = np.sqrt(2.0)
    assert rhs == pytest.approx((b ** -0.99 * np.sqrt(5.0) ** -1.49, b ** -0.49, b ** -1.49 * np.sqrt(5.0) ** -1.49),
                                rel=1e-14)


def test_elem_bounds_precondition():
    with pytest.raises(PreconditionError):
        elem_bounds_lhs_rhs((0, 2, 3))
    with pytest.raises(PreconditionError):
        elem_bounds_lhs_rhs((1, 0, 3))


def test_elem_bounds_gap_sweep():
    report = elem_bounds_audit([(0, g, 3 * g) for g in (1, 2, 4, 8)])
    ratios = np.array([row.ratio for row in report["rows"]])
    assert np.all(np.isfinite(ratios)) and np.all(ratios > 0)
    # a power-law excess would give constant log2 growth; the observed growth decelerates
    growth = np.array(report["growth_exponents"])
    assert np.all(np.diff(growth[:, 0]) < 0) and np.all(np.diff(growth[:, 2]) < 0)
    assert np.all(growth < 1)
    assert report["max_ratio"] == tuple(ratios.max(axis=0))
    assert EPSILON == 0.01
