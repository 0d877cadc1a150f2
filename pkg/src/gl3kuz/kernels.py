"""Kuznetsov kernel functions: power series, signed combinations, Mellin-Barnes forms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexgamma import DEFAULT_POLICY as GAMMA_POLICY
from .complexgamma import log_gamma
from .errors import (DegenerateSpectrum, PreconditionError, SeriesDiverged, SingularSpectrum, SubspaceViolated,
                     UnsupportedWeylElement)
from .group import TorusPoint, WeylElement, as_mu, weyl_act
from .mellin import ContourSpec, integrate_line, grid_from_values
from .stade import specmu1

_FOUR_PI2 = 4 * np.pi ** 2
_EIGHT_PI3 = 8 * np.pi ** 3


@dataclass(frozen=True)
class KernelEvalPolicy:
    series_terms: int = 400
    series_radius: float = 1.5
    w4_series_radius: float = 200.0
    singular_tolerance: float = 1e-8
    series_tol: float = 1e-17

    def __post_init__(self):
        if self.series_terms < 20:
            raise ValueError("series_terms must be at least 20")


DEFAULT_KERNEL_POLICY = KernelEvalPolicy()


@dataclass(frozen=True)
class CasimirEigenvalues:
    lambda1: complex
    lambda2: complex


def casimir_eigenvalues(mu) -> CasimirEigenvalues:
    m = as_mu(mu)
    return CasimirEigenvalues(complex(1 - np.sum(m * m) / 2), complex(np.prod(m)))


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    tail: float
    terms: int


def cosmu(mu) -> complex:
    """Product of cos(pi/2 (mu_j - mu_k)) over j < k."""
    m = as_mu(mu)
    return np.cos(np.pi / 2 * (m[0] - m[1])) * np.cos(np.pi / 2 * (m[0] - m[2])) * np.cos(np.pi / 2 * (m[1] - m[2]))


def sinmu(mu) -> complex:
    """Product of sin(pi/2 (mu_j - mu_k)) over j < k."""
    m = as_mu(mu)
    return np.sin(np.pi / 2 * (m[0] - m[1])) * np.sin(np.pi / 2 * (m[0] - m[2])) * np.sin(np.pi / 2 * (m[1] - m[2]))


def _check_gamma_denominators(diffs, tol):
    for d in diffs:
        k = np.round(d.real)
        if k < 0 and abs(d - k) < tol:
            raise DegenerateSpectrum(f"spectral difference {d} is a negative integer")


def _lg_shift(n, a):
    # log Gamma(n + a) for integer array n; callers guarantee no poles
    return log_gamma(n + a, GAMMA_POLICY, check=False)


def j_wl_series_result(y, mu, policy: KernelEvalPolicy = DEFAULT_KERNEL_POLICY,
                       enforce_radius: bool = True) -> SeriesResult:
    y = TorusPoint.of(y)
    m1, m2, m3 = as_mu(mu)
    x1, x2 = _FOUR_PI2 * y.y1, _FOUR_PI2 * y.y2
    if enforce_radius and max(abs(x1), abs(x2)) > policy.series_radius:
        raise SeriesDiverged(f"|4 pi^2 y| = {max(abs(x1), abs(x2)):.3g} exceeds series_radius")
    _check_gamma_denominators((m1 - m3, m2 - m3, m1 - m2), policy.singular_tolerance)
    n_terms = 24
    while True:
        n = np.arange(n_terms)
        la = -(_lg_shift(n, m1 - m3 + 1) + _lg_shift(n, m2 - m3 + 1) + _lg_shift(n, 1.0)) + n * np.log(abs(x1))
        lb = -(_lg_shift(n, 1.0) + _lg_shift(n, m1 - m2 + 1) + _lg_shift(n, m1 - m3 + 1)) + n * np.log(abs(x2))
        lnum = _lg_shift(np.arange(2 * n_terms - 1), m1 - m3 + 1)
        logt = la[:, None] + lb[None, :] + lnum[n[:, None] + n[None, :]]
        sa = np.where(n % 2 == 1, np.sign(x1), 1.0)
        sb = np.where(n % 2 == 1, np.sign(x2), 1.0)
        terms = np.exp(logt) * sa[:, None] * sb[None, :]
        mags = np.abs(terms)
        edge = max(mags[-1, :].max(), mags[:, -1].max())
        total = terms.sum()
        scale = max(mags.max(), 1e-300)
        if edge <= policy.series_tol * scale or n_terms >= policy.series_terms:
            break
        n_terms = min(2 * n_terms, policy.series_terms)
    if edge > policy.series_tol * scale * 1e3:
        raise SeriesDiverged("double series did not converge within series_terms")
    pref = np.exp((1 - m3) * np.log(abs(x1)) + (1 + m1) * np.log(abs(x2)))
    tail = float(abs(pref) * (mags[-1, :].sum() + mags[:, -1].sum()))
    return SeriesResult(complex(pref * total), tail, n_terms)


def j_wl_series(y, mu, policy: KernelEvalPolicy = DEFAULT_KERNEL_POLICY, enforce_radius: bool = True) -> complex:
    """Long-element power-series solution J_wl(y, mu) at signed y."""
    return j_wl_series_result(y, mu, policy, enforce_radius).value


def j_w4_series_result(y1: float, mu, policy: KernelEvalPolicy = DEFAULT_KERNEL_POLICY) -> SeriesResult:
    y1 = float(y1)
    if y1 == 0:
        raise PreconditionError("y1 must be nonzero")
    m1, m2, m3 = as_mu(mu)
    x = _EIGHT_PI3 * y1
    if abs(x) > policy.w4_series_radius:
        raise SeriesDiverged(f"|8 pi^3 y1| = {abs(x):.3g} exceeds w4_series_radius")
    _check_gamma_denominators((m1 - m3, m2 - m3), policy.singular_tolerance)
    n_terms = 40
    while True:
        n = np.arange(n_terms)
        logt = n * np.log(abs(x)) - (_lg_shift(n, 1.0) + _lg_shift(n, 1 + m1 - m3) + _lg_shift(n, 1 + m2 - m3))
        # (-i x)^n phase
        phase = (-1j * np.sign(x)) ** (n % 4)
        terms = np.exp(logt) * phase
        mags = np.abs(terms)
        scale = max(mags.max(), 1e-300)
        if mags[-5:].max() <= policy.series_tol * scale or n_terms >= policy.series_terms:
            break
        n_terms = min(2 * n_terms, policy.series_terms)
    pref = np.exp((1 - m3) * np.log(abs(x)))
    return SeriesResult(complex(pref * terms.sum()), float(abs(pref) * mags[-5:].sum()), n_terms)


def j_w4_series(y1: float, mu, policy: KernelEvalPolicy = DEFAULT_KERNEL_POLICY) -> complex:
    """w4 power-series solution on the subspace y2 = 1."""
    return j_w4_series_result(y1, mu, policy).value


def _require_w4_subspace(y):
    if y.y2 != 1.0:
        raise SubspaceViolated("w4 kernels are defined on the subspace y2 = 1")


def j1_combination(w, y, mu, policy: KernelEvalPolicy = DEFAULT_KERNEL_POLICY) -> complex:
    """Signed weight-one combinations of the power-series solutions."""
    w = WeylElement.get(w)
    y = TorusPoint.of(y)
    mu = as_mu(mu)
    e1, e2 = y.signs
    if w.name == "wl":
        return (e2 * j_wl_series(y, mu, policy) + e1 * j_wl_series(y, weyl_act("w4", mu), policy)
                + e1 * e2 * j_wl_series(y, weyl_act("w5", mu), policy))
    if w.name == "w4":
        _require_w4_subspace(y)
        m1, m2, m3 = mu
        return (-np.sin(np.pi / 2 * (m1 - m2)) * j_w4_series(y.y1, mu, policy)
                - 1j * e1 * np.cos(np.pi / 2 * (m1 - m3)) * j_w4_series(y.y1, weyl_act("w4", mu), policy)
                + 1j * e1 * np.cos(np.pi / 2 * (m2 - m3)) * j_w4_series(y.y1, weyl_act("w5", mu), policy))
    raise UnsupportedWeylElement(f"no J1 combination for {w.name}")


def _kernel_denominator(mu, policy):
    m1, m2, m3 = mu
    den = np.cos(np.pi / 2 * (m1 - m3)) * np.cos(np.pi / 2 * (m2 - m3)) * np.sin(np.pi / 2 * (m1 - m2))
    if abs(den) < policy.singular_tolerance:
        raise SingularSpectrum("trigonometric denominator of the kernel vanishes")
    return den


def _within_wl_radius(y, policy):
    return max(abs(y.y1), abs(y.y2)) * _FOUR_PI2 <= policy.series_radius


def k1_kernel(w, y, mu, policy: KernelEvalPolicy = DEFAULT_KERNEL_POLICY, ctl: ContourSpec | None = None) -> complex:
    """Normalized weight-one kernel K1_w(y, mu).

    Outside the series radius the w_l kernel is assembled from the Mellin-Barnes
    forms through the combination identities and w4 uses its contour integral.
    """
    w = WeylElement.get(w)
    y = TorusPoint.of(y)
    mu = as_mu(mu)
    if w.name == "I":
        return 1.0 + 0j
    if w.name == "w4":
        _require_w4_subspace(y)
        den = _kernel_denominator(mu, policy)
        if abs(_EIGHT_PI3 * y.y1) > policy.w4_series_radius:
            return k1_w4_mellin_barnes(y.y1, mu, ctl)
        return complex(j1_combination("w4", y, mu, policy) / (8 * np.pi * den))
    if w.name == "w5":
        if y.y1 != 1.0:
            raise SubspaceViolated("w5 kernels are evaluated at y1 = 1")
        return k1_kernel("w4", (-y.y2, 1.0), -mu, policy, ctl)
    if w.name == "wl":
        den = _kernel_denominator(mu, policy)
        if _within_wl_radius(y, policy):
            num = j1_combination("wl", y, mu, policy) - j1_combination("wl", y, weyl_act("w2", mu), policy)
        else:
            num = combination_rhs(_case_for_signs(y.signs), y, mu, route="mellin-barnes", ctl=ctl)
        return complex(-num / (16 * np.pi * den))
    raise UnsupportedWeylElement(f"no kernel for {w.name}")


def default_w4_contour(mu, rel_tol: float = 1e-12) -> ContourSpec:
    mu = as_mu(mu)
    sigma = float(np.max(mu.real)) + 0.5
    flat = float(np.max(np.abs(mu.imag))) + 1.0
    return ContourSpec((sigma,), 40.0, 1601, rel_tol, bend=1.0, bend_width=1.0, flat=flat)


def k1_w4_mellin_barnes(y1: float, mu, ctl: ContourSpec | None = None) -> complex:
    """Single contour integral for K1_w4((y1, 1), mu)."""
    y1 = float(y1)
    if y1 == 0:
        raise PreconditionError("y1 must be nonzero")
    mu = as_mu(mu)
    ctl = ctl if ctl is not None else default_w4_contour(mu)
    if ctl.re_parts[0] <= np.max(mu.real):
        raise PreconditionError("contour must lie right of the poles of Gamma(s - mu_i)")
    eps = 1.0 if y1 > 0 else -1.0
    log_x = np.log(abs(_EIGHT_PI3 * y1))

    def f(s):
        lg = (1 - s) * log_x + sum(log_gamma(s - m) for m in mu)
        phase = (np.exp(1.5j * np.pi * eps * s) - np.exp(-0.5j * np.pi * eps * (s + 2 * mu[0]))
                 - np.exp(-0.5j * np.pi * eps * (s + 2 * mu[1])) + np.exp(-0.5j * np.pi * eps * (s + 2 * mu[2])))
        return np.exp(lg) * phase

    return integrate_line(f, ctl).value / _EIGHT_PI3


def default_wl_contour(sign_pair, mu, rel_tol: float = 1e-12) -> ContourSpec:
    mu = as_mu(mu)
    flat = float(np.max(np.abs(mu.imag))) + 1.0
    sign_pair = tuple(sign_pair)
    if sign_pair == (1, 1):
        return ContourSpec((2.0, 2.0), 25.0, 251, rel_tol)
    sigma = 0.5 if sign_pair == (-1, -1) else 1.0 / 3.0
    return ContourSpec((sigma, sigma), 30.0, 751, rel_tol, bend=1.0, bend_width=0.5, flat=flat)


def _mb_minus_minus(s1, s2, mu):
    m1, m2, m3 = mu
    a = log_gamma(s1 - m3) + log_gamma(s1 - m1) - log_gamma(1 - s1 + m2)
    b = log_gamma(s2 + m1) + log_gamma(s2 + m3) - log_gamma(1 - s2 - m2)
    return a, b, lambda s_sum: -log_gamma(s_sum)


def _mb_minus_plus(s1, s2, mu):
    m1, m2, m3 = mu
    a = log_gamma(s1 - m3) - log_gamma(1 + m1 - s1) - log_gamma(1 + m2 - s1)
    b = log_gamma(s2 + m1) + log_gamma(s2 + m2) - log_gamma(1 - s2 - m3)
    return a, b, lambda s_sum: log_gamma(1 - s_sum)


def _mb_plus_minus(s1, s2, mu):
    m1, m2, m3 = mu
    a = log_gamma(s1 - m2) + log_gamma(s1 - m3) - log_gamma(1 - s1 + m1)
    b = log_gamma(s2 + m1) - log_gamma(1 - m2 - s2) - log_gamma(1 - m3 - s2)
    return a, b, lambda s_sum: log_gamma(1 - s_sum)


def _mb_plus_plus(s1, s2, mu):
    a = sum(log_gamma(s1 - m) for m in mu)
    b = sum(log_gamma(s2 + m) for m in mu)
    return a, b, lambda s_sum: -log_gamma(s_sum)


_MB_FORMS = {
    (-1, -1): (_mb_minus_minus, lambda mu: -np.sin(np.pi * (mu[0] - mu[2])) / np.pi),
    (-1, 1): (_mb_minus_plus, lambda mu: -np.sin(np.pi * (mu[0] - mu[1])) / np.pi),
    (1, -1): (_mb_plus_minus, lambda mu: -np.sin(np.pi * (mu[1] - mu[2])) / np.pi),
    (1, 1): (_mb_plus_plus, lambda mu: cosmu(mu) / 4),
}


def _mb_pole_gaps(sign_pair, sigma, mu):
    m1, m2, m3 = mu
    r = mu.real
    s1, s2 = sigma
    if sign_pair == (1, 1):
        return [s1 - np.max(r), s2 + np.min(r), s1 + s2]
    if sign_pair == (-1, -1):
        return [s1 - max(r[0], r[2]), s2 + min(r[0], r[2]), s1 + s2]
    left = [s1 - r[2], s2 + min(r[0], r[1]), 1 - s1 - s2] if sign_pair == (-1, 1) else \
        [s1 - max(r[1], r[2]), s2 + r[0], 1 - s1 - s2]
    return left


def k_wl_mellin_barnes(sign_pair, y, mu, ctl: ContourSpec | None = None) -> complex:
    """The four two-variable Mellin-Barnes integrals of the long-element kernels.

    (1, 1) gives K_wl; the mixed pairs give K^{-+}, K^{+-}, K^{--} (sign of y1, y2).
    Only |y| enters.
    """
    sign_pair = tuple(int(s) for s in sign_pair)
    if sign_pair not in _MB_FORMS:
        raise ValueError("sign_pair must be in {+-1}^2")
    y = TorusPoint.of(y)
    mu = as_mu(mu)
    form, prefactor = _MB_FORMS[sign_pair]
    pref = prefactor(mu)
    if pref == 0:
        return 0j
    ctl = ctl if ctl is not None else default_wl_contour(sign_pair, mu)
    if min(_mb_pole_gaps(sign_pair, ctl.re_parts, mu)) <= 0:
        from .errors import ContourPinch
        raise ContourPinch("contour does not separate the gamma pole families")
    s1, w1 = ctl.nodes_and_weights(0)
    s2, w2 = ctl.nodes_and_weights(1)
    la, lb, joint = form(s1, s2, mu)
    la = la + (1 - s1) * np.log(_FOUR_PI2 * abs(y.y1))
    lb = lb + (1 - s2) * np.log(_FOUR_PI2 * abs(y.y2))
    if ctl.bend == 0.0 and ctl.node_count(0) == ctl.node_count(1):
        # vertical equal grids: s1 + s2 depends only on the node-index sum
        n = ctl.node_count(0)
        tau = ctl.tau(0)
        ssum = ctl.re_parts[0] + ctl.re_parts[1] + 1j * (2 * tau[0] + ctl.spacing(0) * np.arange(2 * n - 1))
        lj = joint(ssum)[np.arange(n)[:, None] + np.arange(n)[None, :]]
    else:
        lj = joint(s1[:, None] + s2[None, :])
    vals = np.exp(la[:, None] + lb[None, :] + lj)
    grid = grid_from_values(s1, s2, w1, w2, vals, ctl)
    return complex(pref * np.sum(grid.values))


def k_pm_series(sign_pair, y, mu, policy: KernelEvalPolicy = DEFAULT_KERNEL_POLICY) -> complex:
    """K^{+-+-} through their defining J_wl differences (K_wl through the Weyl sum for (1, 1))."""
    sign_pair = tuple(int(s) for s in sign_pair)
    mu = as_mu(mu)
    y = TorusPoint.of(y)
    if sign_pair == (1, 1):
        return complex(-(np.pi ** 3 / 32) * sum(j_wl_series(y, weyl_act(w, mu), policy) / sinmu(weyl_act(w, mu))
                                               for w in ("I", "w2", "w3", "w4", "w5", "wl")))
    other = {(-1, 1): "w2", (1, -1): "w3", (-1, -1): "wl"}[sign_pair]
    return complex(j_wl_series(y, mu, policy) - j_wl_series(y, weyl_act(other, mu), policy))


_CASE_SIGNS = {1: (-1, 1), 2: (1, -1), 3: (-1, -1), 4: (1, 1)}
# signed Weyl translates on the right-hand side of the combination identities
_CASE_TERMS = {
    1: ((1, "I"), (1, "w3"), (1, "wl")),
    2: ((-1, "I"), (1, "w2"), (-1, "wl")),
    3: ((-1, "I"), (1, "w2"), (-1, "w3")),
}


def _case_for_signs(signs) -> int:
    for case, s in _CASE_SIGNS.items():
        if s == tuple(signs):
            return case
    raise ValueError(signs)


def combination_lhs(y, mu, policy: KernelEvalPolicy = DEFAULT_KERNEL_POLICY) -> complex:
    mu = as_mu(mu)
    return complex(j1_combination("wl", y, mu, policy) - j1_combination("wl", y, weyl_act("w2", mu), policy))


def combination_rhs(case: int, y, mu, route: str = "mellin-barnes", ctl: ContourSpec | None = None,
                    policy: KernelEvalPolicy = DEFAULT_KERNEL_POLICY) -> complex:
    """Right-hand side of combination identity `case` from K^{+-+-} (Mellin-Barnes or series)."""
    y = TorusPoint.of(y)
    mu = as_mu(mu)
    signs = _CASE_SIGNS[case]
    if route == "mellin-barnes":
        def kern(m):
            return k_wl_mellin_barnes(signs, y, m, ctl)
    elif route == "series":
        def kern(m):
            return k_pm_series(signs, y, m, policy)
    else:
        raise ValueError(f"unknown route {route!r}")
    if case == 4:
        return complex(-(32 / np.pi ** 3) * sinmu(mu) * kern(mu))
    return complex(sum(sign * kern(weyl_act(w, mu)) for sign, w in _CASE_TERMS[case]))


def verify_combination_proposition(case: int, y, mu, ctl: ContourSpec | None = None, route: str = "mellin-barnes",
                                   policy: KernelEvalPolicy = DEFAULT_KERNEL_POLICY) -> float:
    """Relative residual of combination identity `case` (1..4) at y in its sign region."""
    if case not in _CASE_SIGNS:
        raise ValueError("case must be 1, 2, 3 or 4")
    y = TorusPoint.of(y)
    if y.signs != _CASE_SIGNS[case]:
        raise PreconditionError(f"case {case} needs sign pattern {_CASE_SIGNS[case]}, got {y.signs}")
    lhs = combination_lhs(y, mu, policy)
    rhs = combination_rhs(case, y, mu, route, ctl, policy)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def h_w_transform(F, w, y, spacing: float = 0.25, policy: KernelEvalPolicy = DEFAULT_KERNEL_POLICY,
                  ctl: ContourSpec | None = None) -> complex:
    """(1/|y1 y2|) int_{Re mu = 0} F(mu) K1_w(y, mu) specmu1(mu) dmu over F's certified box."""
    w = WeylElement.get(w)
    y = TorusPoint.of(y)
    grid = F.grid(spacing)
    mu = grid.mu()
    fvals = np.asarray(F(mu))
    dens = specmu1(mu)
    if w.name == "I":
        kvals = np.ones(fvals.shape)
    else:
        kvals = np.empty(fvals.shape, dtype=complex)
        flat_mu = mu.reshape(3, -1)
        flat_f = fvals.reshape(-1)
        out = kvals.reshape(-1)
        for k in range(flat_mu.shape[1]):
            # skip nodes where F is below its certified tail level
            if abs(flat_f[k]) < F.tail_tol * 1e-3:
                out[k] = 0.0
                continue
            out[k] = k1_kernel(w, y, flat_mu[:, k], policy, ctl)
    # dmu1 dmu2 = -dx1 dx2 on the tempered plane
    total = -np.sum(fvals * kvals * dens) * grid.weight
    return complex(total / abs(y.y1 * y.y2))
