import numpy as np
import pytest
from hypothesis import given, strategies as st

from gl3kuz.complexgamma import gamma, log_gamma_sum
from gl3kuz.errors import NonFinite, TailTooLarge
from gl3kuz.mellin import (
    ContourSpec, build_grid, default_height, eval_powers, integrate_line, integrate_plane, vertical,
)
from gl3kuz.whittaker import WhittakerGrid, default_whittaker_contour, g1_vector


def _barnes_quarter(s):
    return np.exp(log_gamma_sum([0.5 + s, 0.5 + s, 0.5 - s, 0.5 - s]))


def test_contour_spec_invariants():
    with pytest.raises(ValueError):
        ContourSpec((0.5,), 0.0, 101)
    with pytest.raises(ValueError):
        ContourSpec((0.5,), 10.0, 8)
    with pytest.raises(ValueError):
        ContourSpec((0.5,), 10.0, 101, rel_tol=0.0)
    assert default_height(1e-8) == 30.0
    assert default_height(1e-8, max_im_mu=20.0) > 40.0


def test_non_decaying_integrand_rejected():
    ctl = vertical((0.5,), rel_tol=1e-10)
    # Gamma(s)Gamma(1-s) e^{i pi s} tends to a nonzero constant as Im s -> -infinity
    with pytest.raises(TailTooLarge):
        integrate_line(lambda s: gamma(s) * gamma(1 - s) * np.exp(1j * np.pi * s), ctl)


def test_reflection_product_integrates_to_one_half():
    # Gamma(s)Gamma(1-s) = pi / sin(pi s) decays like 2 pi e^{-pi |t|} on Re s = 1/2
    res = integrate_line(lambda s: gamma(s) * gamma(1 - s), vertical((0.5,), rel_tol=1e-12))
    assert abs(res.value - 0.5) < 1e-10


def test_non_finite_rejected():
    with pytest.raises(NonFinite):
        integrate_line(lambda s: np.full(s.shape, np.nan), vertical((0.5,)))


def test_barnes_forced_value():
    res = integrate_line(_barnes_quarter, vertical((0.0,), rel_tol=1e-12, spacing=0.05))
    assert abs(res.value - 1.0) < 1e-12


def test_mellin_inversion_of_gamma():
    res = integrate_line(lambda s: gamma(s), vertical((1.0,), rel_tol=1e-12))
    assert abs(res.value - np.exp(-1.0)) < 1e-12


def test_plane_separable_and_zero():
    ctl = vertical((0.0, 0.0), rel_tol=1e-10, spacing=0.1)
    g = _barnes_quarter
    h = lambda s: np.exp(log_gamma_sum([0.75 + s, 0.5 + s, 0.5 - s, 0.75 - s]))
    plane = integrate_plane(lambda s1, s2: g(s1) * h(s2), ctl).value
    line = integrate_line(g, ctl, 0).value * integrate_line(h, ctl, 1).value
    assert abs(plane - line) < 1e-12 * abs(line)
    assert integrate_plane(lambda s1, s2: 0 * s1 * s2, ctl).value == 0


def test_contour_shift_independence():
    # no poles of Gamma(1/2 + s)^2 Gamma(1/2 - s)^2 between Re s = -0.2 and Re s = 0.2
    a = integrate_line(_barnes_quarter, vertical((-0.2,), rel_tol=1e-12, spacing=0.025)).value
    b = integrate_line(_barnes_quarter, vertical((0.2,), rel_tol=1e-12, spacing=0.025)).value
    assert abs(a - b) < 1e-10


@given(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_linearity(alpha, beta):
    ctl = vertical((0.25,), rel_tol=1e-10)
    f = _barnes_quarter
    g = lambda s: gamma(s + 0.25) * gamma(0.75 - s)
    lhs = integrate_line(lambda s: alpha * f(s) + beta * g(s), ctl, check_tail=False).value
    rhs = alpha * integrate_line(f, ctl).value + beta * integrate_line(g, ctl).value
    assert abs(lhs - rhs) < 1e-12 * (1 + abs(alpha) + abs(beta))


def test_eval_powers_at_unit_point_is_plain_sum():
    mu = np.array([0.4j, -0.1j, -0.3j])
    ctl = default_whittaker_contour(mu, rel_tol=1e-8, spacing=0.2)
    grid = build_grid(lambda s1, s2: g1_vector((s1, s2), mu)[0], ctl)
    assert abs(eval_powers(grid, (1.0, 1.0)) - np.sum(grid.values)) < 1e-14 * np.abs(grid.values).sum()


def test_cached_grid_matches_direct_plane_integrals():
    rng = np.random.default_rng(11)
    mu = np.array([0.5j, 0.2j, -0.7j])
    ctl = default_whittaker_contour(mu, rel_tol=1e-8, spacing=0.1)
    cached = WhittakerGrid(mu, ctl)
    worst = 0.0
    # beyond y ~ 1.5 W1* falls below the rounding floor of its own O(1) integrand
    for y1, y2 in rng.uniform(0.05, 1.2, (20, 2)):
        direct = np.array([
            integrate_plane(lambda s1, s2, k=k: (np.pi * y1) ** (1 - s1) * (np.pi * y2) ** (1 - s2)
                            * g1_vector((s1, s2), mu)[k], ctl, check_tail=False).value
            for k in range(3)]) / (4 * np.pi ** 2)
        fast = cached((y1, y2))
        worst = max(worst, np.max(np.abs(fast - direct)) / np.max(np.abs(direct)))
    assert worst < 5 * ctl.rel_tol


def test_node_doubling_is_stable():
    mu = np.array([0.5j, 0.2j, -0.7j])
    ctl = default_whittaker_contour(mu, rel_tol=1e-8, spacing=0.1)
    a = WhittakerGrid(mu, ctl)((0.7, 0.9))
    b = WhittakerGrid(mu, ctl.refined())((0.7, 0.9))
    assert np.max(np.abs(a - b)) < ctl.rel_tol * np.max(np.abs(b))
