import numpy as np
import pytest
from hypothesis import given, strategies as st

from gl3kuz.complexgamma import gamma
from gl3kuz.errors import PreconditionError, SingularSpectrum, SubspaceViolated, SeriesDiverged
from gl3kuz.group import WEYL_GROUP, weyl_act
from gl3kuz.kernels import (
    KernelEvalPolicy, casimir_eigenvalues, combination_lhs, combination_rhs, h_w_transform,
    j1_combination, j_w4_series, j_wl_series, j_wl_series_result, k1_kernel, k1_w4_mellin_barnes,
    k_pm_series, k_wl_mellin_barnes, verify_combination_proposition,
)
from gl3kuz.testfunctions import gaussian_test_function
from gl3kuz.weyl import spectral_integral

# mpmath reimplementation values, see tests/oracles/kernels_oracle.py
MU_J = np.array([0.9j, 0.2j, -1.1j])
J_WL_REF = -1.4403380257700015054 - 5.6026498264821648027j
J1_WL_REF = 3.2002216869455065813 + 3.2485647171813675948j
J1_WL_SIGNED_REF = -5.0404570673806627335 - 18.358843617970913048j
MU_W4 = np.array([0.7j, 0.2j, -0.9j])
J_W4_POS_REF = -353.56700046125935222 + 278.88490676140803160j
J_W4_NEG_REF = -6798.3086076805777152 - 4305.8685103588854049j

coord = st.floats(-3, 3, allow_nan=False)


def _close(a, b, rel):
    return abs(a - b) <= rel * max(abs(a), abs(b))


def test_casimir_values():
    c = casimir_eigenvalues(np.zeros(3))
    assert (c.lambda1, c.lambda2) == (1, 0)
    c = casimir_eigenvalues(np.array([1j, -1j, 0]))
    assert abs(c.lambda1 - 2) < 1e-15 and abs(c.lambda2) < 1e-15


@given(coord, coord, coord, coord)
def test_casimir_weyl_invariant(a, b, c, d):
    mu = np.array([a + 1j * b, c + 1j * d, -(a + c) - 1j * (b + d)])
    ref = casimir_eigenvalues(mu)
    for w in WEYL_GROUP:
        other = casimir_eigenvalues(weyl_act(w, mu))
        assert abs(other.lambda1 - ref.lambda1) <= 1e-12 * max(1, abs(ref.lambda1))
        assert abs(other.lambda2 - ref.lambda2) <= 1e-12 * max(1, abs(ref.lambda2))


def test_series_against_oracle():
    assert _close(j_wl_series((0.01, 0.01), MU_J), J_WL_REF, 1e-12)
    assert _close(j1_combination("wl", (0.01, 0.01), MU_J), J1_WL_REF, 1e-12)
    assert _close(j1_combination("wl", (-0.01, 0.02), MU_J), J1_WL_SIGNED_REF, 1e-12)
    assert _close(j_w4_series(0.1, MU_W4), J_W4_POS_REF, 1e-12)
    assert _close(j_w4_series(-0.1, MU_W4), J_W4_NEG_REF, 1e-12)


def test_positive_combination_is_plain_sum():
    y = (0.01, 0.02)
    plain = sum(j_wl_series(y, weyl_act(w, MU_J)) for w in ("I", "w4", "w5"))
    assert _close(j1_combination("wl", y, MU_J), plain, 1e-15)


def test_j_wl_leading_term():
    m1, m2, m3 = MU_J
    lead = (4 * np.pi ** 2) ** (2 + m1 - m3) / (gamma(1 + m1 - m3) * gamma(1 + m1 - m2) * gamma(1 + m2 - m3))
    errs = []
    for h in (1e-2, 1e-3):
        p = h ** (1 - m3) * h ** (1 + m1)
        errs.append(abs(j_wl_series((h, h), MU_J) / p / lead - 1))
    assert errs[1] < errs[0] < 1


def test_j_w4_leading_term():
    m1, m2, m3 = MU_W4
    errs = []
    for y1 in (1e-2, 1e-3, 1e-4):
        scaled = j_w4_series(y1, MU_W4) * gamma(1 + m1 - m3) * gamma(1 + m2 - m3) / abs(8 * np.pi ** 3 * y1) ** (1 - m3)
        errs.append(abs(scaled - 1))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-2


def test_truncation_stability():
    short = KernelEvalPolicy(series_terms=30)
    longer = KernelEvalPolicy(series_terms=40)
    y = (1 / (4 * np.pi ** 2), -1 / (4 * np.pi ** 2))
    assert _close(j_wl_series(y, MU_J, short), j_wl_series(y, MU_J, longer), 1e-12)
    assert _close(j_w4_series(0.02, MU_W4, short), j_w4_series(0.02, MU_W4, longer), 1e-12)


def test_reported_tail_dominates_truncation_error():
    y = (1.2 / (4 * np.pi ** 2), 1.2 / (4 * np.pi ** 2))
    coarse = j_wl_series_result(y, MU_J, KernelEvalPolicy(series_terms=24))
    fine = j_wl_series_result(y, MU_J, KernelEvalPolicy(series_terms=48))
    assert abs(coarse.value - fine.value) <= coarse.tail


def test_series_radius_enforced():
    with pytest.raises(SeriesDiverged):
        j_wl_series((0.1, 0.01), MU_J)


def test_j_w4_conjugation():
    # term by term: conj of (-i x)^n / Gamma(n + 1 + a) is (i x)^n / Gamma(n + 1 + conj a)
    mu = np.array([0.3 + 0.7j, 0.1 + 0.2j, -0.4 - 0.9j])
    assert _close(np.conj(j_w4_series(0.07, mu)), j_w4_series(-0.07, np.conj(mu)), 1e-13)
    assert _close(np.conj(j_w4_series(0.07, MU_W4)), j_w4_series(-0.07, -MU_W4), 1e-13)


def test_j1_w4_first_term_vanishes_at_equal_coordinates():
    mu = np.array([0.4j, 0.4j, -0.8j])
    y1 = 0.05
    m1, m2, m3 = mu
    rest = (-1j * np.cos(np.pi / 2 * (m1 - m3)) * j_w4_series(y1, weyl_act("w4", mu))
            + 1j * np.cos(np.pi / 2 * (m2 - m3)) * j_w4_series(y1, weyl_act("w5", mu)))
    assert _close(j1_combination("w4", (y1, 1.0), mu), rest, 1e-15)


def test_k1_kernel_basic():
    assert k1_kernel("I", (-0.3, 2.0), MU_J) == 1
    assert k1_kernel("w5", (1.0, 0.07), MU_W4) == k1_kernel("w4", (-0.07, 1.0), -MU_W4)
    with pytest.raises(SubspaceViolated):
        k1_kernel("w4", (0.1, 0.5), MU_W4)
    with pytest.raises(SubspaceViolated):
        k1_kernel("w5", (0.5, 0.1), MU_W4)
    with pytest.raises(SingularSpectrum):
        k1_kernel("wl", (0.01, 0.01), np.array([0.3j, 0.3j, -0.6j]))


@pytest.mark.parametrize("y", [(0.01, 0.02), (-0.01, 0.02), (0.015, -0.01), (-0.02, -0.01)])
def test_k1_wl_w2_invariant(y):
    assert _close(k1_kernel("wl", y, MU_J), k1_kernel("wl", y, weyl_act("w2", MU_J)), 1e-10)


@pytest.mark.parametrize("y1", [0.1, -0.1])
def test_k1_w4_mellin_barnes_matches_series(y1):
    assert _close(k1_w4_mellin_barnes(y1, MU_W4), k1_kernel("w4", (y1, 1.0), MU_W4), 1e-6)


def test_k1_w4_mellin_barnes_needs_nonzero_argument():
    with pytest.raises(PreconditionError):
        k1_w4_mellin_barnes(0.0, MU_W4)


def test_k_wl_plus_plus_against_weyl_sum():
    mu = np.array([0.8j, 0.1j, -0.9j])
    y = (0.02, 0.03)
    assert _close(k_wl_mellin_barnes((1, 1), y, mu), k_pm_series((1, 1), y, mu), 1e-6)


def test_k_minus_plus_against_series():
    mu = np.array([0.8j, 0.1j, -0.9j])
    y = (-0.02, 0.03)
    series = j_wl_series(y, mu) - j_wl_series(y, weyl_act("w2", mu))
    assert _close(k_wl_mellin_barnes((-1, 1), y, mu), series, 1e-6)


def test_k_minus_plus_zero_prefactor():
    assert k_wl_mellin_barnes((-1, 1), (0.02, 0.03), np.array([0.4j, 0.4j, -0.8j])) == 0


def test_combination_cases_at_documented_points():
    assert verify_combination_proposition(4, (0.02, 0.02), np.array([0.9j, 0.3j, -1.2j])) < 1e-6
    assert verify_combination_proposition(1, (-0.02, 0.03), MU_J) < 1e-6
    assert verify_combination_proposition(2, (0.03, -0.02), MU_J) < 1e-6
    assert verify_combination_proposition(3, (-0.02, -0.03), MU_J) < 1e-6


def test_combination_wrong_sign_region():
    with pytest.raises(PreconditionError):
        verify_combination_proposition(4, (-0.02, 0.02), MU_J)
    with pytest.raises(PreconditionError):
        verify_combination_proposition(1, (0.02, 0.02), MU_J)


@pytest.mark.parametrize("case", [1, 2, 3, 4])
def test_combination_series_route(case):
    y = {1: (-0.02, 0.03), 2: (0.03, -0.02), 3: (-0.02, -0.03), 4: (0.02, 0.03)}[case]
    lhs = combination_lhs(y, MU_J)
    assert _close(lhs, combination_rhs(case, y, MU_J, route="series"), 1e-10)


@pytest.fixture(scope="module")
def bump():
    return gaussian_test_function((0.5, -0.2), 0.7)


def test_h_identity_is_main_term(bump):
    h = h_w_transform(bump, "I", (1.0, 1.0), spacing=0.05)
    ref = spectral_integral(bump, bump.box, spacing=0.05)
    assert _close(h, ref, 1e-8)


def test_h_linearity(bump):
    other = gaussian_test_function((-0.4, 0.9), 0.5)
    both = gaussian_test_function((0.5, -0.2), 0.7)
    combo = type(both)(lambda mu: 2 * bump(mu) - 3j * other(mu), (-6.0, 6.0, -6.0, 6.0))
    y = (0.05, 1.0)
    lhs = h_w_transform(combo, "w4", y, spacing=0.2)
    rhs = 2 * h_w_transform(type(both)(bump.evaluator, combo.box), "w4", y, spacing=0.2) \
        - 3j * h_w_transform(type(both)(other.evaluator, combo.box), "w4", y, spacing=0.2)
    assert _close(lhs, rhs, 1e-12)


def test_h_w4_node_doubling(bump):
    a = h_w_transform(bump, "w4", (0.05, 1.0), spacing=0.3)
    b = h_w_transform(bump, "w4", (0.05, 1.0), spacing=0.15)
    assert _close(a, b, 1e-4)


@pytest.mark.slow
def test_h_wl_node_doubling(bump):
    a = h_w_transform(bump, "wl", (0.05, 0.05), spacing=0.3)
    b = h_w_transform(bump, "wl", (0.05, 0.05), spacing=0.15)
    assert np.isfinite(a) and _close(a, b, 1e-4)
