"""Weyl-law main terms, the analytic error functionals, the smoothed indicator test function,
and numeric audits of the elementary integral bounds."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import erf

from .errors import PoleProximity, PreconditionError, SingularMeasure, TailTooLarge
from .group import WEYL_GROUP, as_mu, weyl_act
from .stade import spectral_density
from .testfunctions import TestFunction, TemperedGrid, tempered_mu

# exponent slack in all bound audits
EPSILON = 0.01
MAIN_TERM_CONSTANT = 3 / (2 * np.pi)


def _composite_gauss(lo: float, hi: float, panel: float = 1.0, order: int = 16):
    if hi <= lo:
        return np.zeros(0), np.zeros(0)
    n = max(1, int(np.ceil((hi - lo) / panel)))
    edges = np.linspace(lo, hi, n + 1)
    t, w = leggauss(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


# q(d) = |(d1, d2, -d1-d2)|^2 = d^T Q d; A = Q^{-1/2} maps the unit disc onto q < 1
_BALL_Q = np.array([[2.0, 1.0], [1.0, 2.0]])
_evals, _evecs = np.linalg.eigh(_BALL_Q)
_BALL_A = _evecs @ np.diag(_evals ** -0.5) @ _evecs.T


@dataclass(frozen=True)
class SpectralRegion:
    """A bounded region of the tempered plane in coordinates x = Im(mu1, mu2).

    box: base box (lo1, hi1, lo2, hi2), dilated by T.
    ball: {x : |x - T center|_3 < M}, with |.|_3 the Euclidean norm of (x1, x2, -x1-x2).
    dilated: T * {x : indicator(x)} with indicator supported in the base bounding box.
    """

    kind: str
    T: float = 1.0
    box: tuple | None = None
    M: float | None = None
    center: tuple | None = None
    indicator: object = None

    def __post_init__(self):
        if self.kind not in ("box", "ball", "dilated"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        if self.T < 1:
            raise ValueError("T must be at least 1")
        if self.kind in ("box", "dilated") and self.box is None:
            raise ValueError(f"{self.kind} region needs a (bounding) box")
        if self.kind == "dilated" and self.indicator is None:
            raise ValueError("dilated region needs an indicator")
        if self.kind == "ball" and (self.M is None or self.center is None):
            raise ValueError("ball region needs M and center")

    @classmethod
    def from_box(cls, box, T: float = 1.0) -> "SpectralRegion":
        return cls("box", T, box=tuple(box))

    @classmethod
    def ball(cls, center, M: float, T: float = 1.0) -> "SpectralRegion":
        return cls("ball", T, M=float(M), center=tuple(center))

    @classmethod
    def dilated(cls, indicator, bounding_box, T: float = 1.0) -> "SpectralRegion":
        return cls("dilated", T, box=tuple(bounding_box), indicator=indicator)

    def scaled(self, T: float) -> "SpectralRegion":
        return SpectralRegion(self.kind, T, self.box, self.M, self.center, self.indicator)

    def with_radius(self, M: float) -> "SpectralRegion":
        return SpectralRegion(self.kind, self.T, self.box, M, self.center, self.indicator)

    @property
    def is_empty(self) -> bool:
        if self.kind == "ball":
            return self.M <= 0
        lo1, hi1, lo2, hi2 = self.box
        return hi1 <= lo1 or hi2 <= lo2

    def bounding_box(self) -> tuple:
        """Bounding box of the dilated region in x coordinates."""
        if self.kind == "ball":
            c = self.T * np.asarray(self.center, dtype=float)
            # max of d1 over q(d) < M^2 is M sqrt(2/3)
            r = self.M * np.sqrt(2.0 / 3.0)
            return (c[0] - r, c[0] + r, c[1] - r, c[1] + r)
        return tuple(self.T * v for v in self.box)

    def contains(self, x1, x2) -> np.ndarray:
        x1, x2 = np.broadcast_arrays(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))
        if self.kind == "box":
            lo1, hi1, lo2, hi2 = self.bounding_box()
            return (x1 > lo1) & (x1 < hi1) & (x2 > lo2) & (x2 < hi2)
        if self.kind == "ball":
            c = self.T * np.asarray(self.center, dtype=float)
            d1, d2 = x1 - c[0], x2 - c[1]
            return 2 * (d1 * d1 + d1 * d2 + d2 * d2) < self.M ** 2
        return np.asarray(self.indicator(x1 / self.T, x2 / self.T), dtype=bool)

    def is_symmetric(self) -> bool:
        if self.kind == "box":
            lo1, hi1, lo2, hi2 = self.box
            return lo1 == lo2 and hi1 == hi2
        if self.kind == "ball":
            return self.center[0] == self.center[1]
        lo1, hi1, lo2, hi2 = self.box
        rng = np.random.default_rng(0)
        x = rng.uniform(min(lo1, lo2), max(hi1, hi2), (2, 400))
        return bool(np.all(self.indicator(x[0], x[1]) == self.indicator(x[1], x[0])))


def _region_nodes(region: SpectralRegion, spacing: float):
    if region.kind == "box":
        lo1, hi1, lo2, hi2 = region.bounding_box()
        n1, w1 = _composite_gauss(lo1, hi1)
        n2, w2 = _composite_gauss(lo2, hi2)
        x1, x2 = np.meshgrid(n1, n2, indexing="ij")
        return x1, x2, np.outer(w1, w2)
    if region.kind == "ball":
        c = region.T * np.asarray(region.center, dtype=float)
        r, wr = _composite_gauss(0.0, region.M)
        n_theta = max(64, int(np.ceil(2 * np.pi * region.M / 0.25)))
        theta = 2 * np.pi * np.arange(n_theta) / n_theta
        rr, tt = np.meshgrid(r, theta, indexing="ij")
        z = np.stack([rr * np.cos(tt), rr * np.sin(tt)])
        d = np.einsum("ij,j...->i...", _BALL_A, z)
        jac = abs(np.linalg.det(_BALL_A))
        weights = np.outer(wr * r, np.full(n_theta, 2 * np.pi / n_theta)) * jac
        return c[0] + d[0], c[1] + d[1], weights
    lo1, hi1, lo2, hi2 = region.bounding_box()
    n1 = max(1, int(np.ceil((hi1 - lo1) / spacing)))
    n2 = max(1, int(np.ceil((hi2 - lo2) / spacing)))
    h1, h2 = (hi1 - lo1) / n1, (hi2 - lo2) / n2
    x1, x2 = np.meshgrid(lo1 + h1 * (np.arange(n1) + 0.5), lo2 + h2 * (np.arange(n2) + 0.5), indexing="ij")
    mask = region.contains(x1, x2)
    return x1, x2, np.where(mask, h1 * h2, 0.0)


def spectral_main_term(region: SpectralRegion, with_constant: bool = False, spacing: float = 0.05) -> float:
    """int over the region of specmu1(mu) dmu, optionally times 3/(2 pi).

    With the complex orientation dmu = -dx1 dx2 this is the integral of the
    non-negative spectral density; spacing only matters for dilated regions.
    """
    if region.is_empty:
        return 0.0
    x1, x2, w = _region_nodes(region, spacing)
    density = spectral_density(x1, x2)
    if not np.all(np.isfinite(density)):
        raise SingularMeasure("spectral density is not finite on the region")
    value = float(np.sum(density * w))
    return MAIN_TERM_CONSTANT * value if with_constant else value


def spectral_integral(F, region_box, spacing: float = 0.05) -> complex:
    """int_{Re mu = 0} F(mu) specmu1(mu) dmu over a box of the tempered plane."""
    grid = TemperedGrid.on_box(region_box, spacing)
    x1, x2 = grid.mesh()
    return complex(np.sum(F(tempered_mu(x1, x2)) * spectral_density(x1, x2)) * grid.weight)


ETA = EPSILON

EF_PRESETS = {
    1: ((0.0, 0.0, 0.0), (0.0, 0.5)),
    2: ((0.25 + 2 * ETA, 0.25 + 2 * ETA, -0.5 - 4 * ETA), (-0.25, 0.75)),
    3: ((0.5 + 4 * ETA, -0.25 - 2 * ETA, -0.25 - 2 * ETA), (-0.25, 0.75)),
    4: ((0.5 + ETA, 0.0, -0.5 - ETA), (-0.5, 0.0)),
}


def _weyl_orbit_box(box, margin: float = 1.0):
    # every coordinate of an orbit point, including the third, must land in the box
    lo1, hi1, lo2, hi2 = box
    lo = min(lo1, lo2, -hi1 - hi2) - margin
    hi = max(hi1, hi2, -lo1 - lo2) + margin
    return (lo, hi, lo, hi)


def ef_error(F: TestFunction, s, t, spacing: float = 0.1, eps: float = EPSILON, rel_tol: float = 1e-8) -> float:
    """The absolute error functional E_F(s, t) on the shifted plane Re mu = s."""
    s = np.asarray(s, dtype=float)
    if abs(s.sum()) > 1e-12:
        raise PreconditionError("shift s must sum to zero")
    t1, t2 = float(t[0]), float(t[1])
    grid = TemperedGrid.on_box(_weyl_orbit_box(F.box), spacing)
    x1, x2 = grid.mesh()
    mu = tempered_mu(x1, x2) + s.reshape(3, 1, 1)
    f_sum = np.zeros(x1.shape)
    weight_sum = np.zeros(x1.shape)
    for w in WEYL_GROUP:
        mw = weyl_act(w, mu)
        f_sum += np.abs(F(mw))
        weight_sum += (1 + np.abs(mw[0] - mw[1])) ** (t1 + eps) * (1 + np.abs(mw[1] - mw[2])) ** (t2 + eps)
    integrand = f_sum * weight_sum
    value = float(integrand.sum() * grid.weight)
    edge = (integrand[0, :].sum() + integrand[-1, :].sum() + integrand[:, 0].sum()
            + integrand[:, -1].sum()) * grid.spacing
    if edge > rel_tol * max(value, 1e-300) and edge > 0:
        raise TailTooLarge(edge, value, rel_tol)
    return value


def ef_preset(F: TestFunction, row: int, spacing: float = 0.1) -> float:
    s, t = EF_PRESETS[row]
    return ef_error(F, s, t, spacing)


def ef_monotonicity_audit(F: TestFunction, s, t_pairs, spacing: float = 0.1) -> list:
    """Rows (t, t', E_F(s,t), E_F(s,t'), holds) for the comparable pairs of t_pairs.

    A pair is comparable when t2 >= t1, t2' >= t2 and t1' + t2' >= t1 + t2.
    """
    rows = []
    for t, tp in t_pairs:
        if not (t[1] >= t[0] and tp[1] >= t[1] and tp[0] + tp[1] >= t[0] + t[1]):
            raise PreconditionError(f"pair {t}, {tp} is not comparable")
        a = ef_error(F, s, t, spacing)
        b = ef_error(F, s, tp, spacing)
        rows.append((tuple(t), tuple(tp), a, b, a <= b * (1 + 1e-12)))
    return rows


def omega_weight(mu, pole_tolerance: float = 1e-8):
    """(1 - (mu1 - mu2)^2) / (100 - (mu1 - mu2)^2)."""
    mu = as_mu(mu)
    a2 = (mu[0] - mu[1]) ** 2
    den = 100 - a2
    if np.any(np.abs(den) < pole_tolerance):
        raise PoleProximity(complex(np.ravel(a2)[np.argmin(np.abs(np.ravel(den)))]))
    val = (1 - a2) / den
    return complex(val) if np.ndim(val) == 0 else val


# Gaussian window of H_T is exp(-log T |.|^2); quadrature covers 6 half-widths
WINDOW_HALF_WIDTHS = 6.0


def _box_convolution(box, z1, z2, log_t):
    r = np.sqrt(log_t)
    lo1, hi1, lo2, hi2 = box
    p1 = 0.5 * (erf(r * (hi1 - z1)) - erf(r * (lo1 - z1)))
    p2 = 0.5 * (erf(r * (hi2 - z2)) - erf(r * (lo2 - z2)))
    return p1 * p2


def _window_convolution(region: SpectralRegion, z1, z2, log_t, spacing):
    # H(z) = (log T / pi) int chi(x) exp(-log T ((z1 - x1)^2 + (z2 - x2)^2)) dx over a window at Re z
    half = WINDOW_HALF_WIDTHS / np.sqrt(log_t)
    h = spacing if spacing is not None else 0.1 / np.sqrt(log_t)
    offs = np.arange(-half, half + h / 2, h)
    shape = np.shape(z1)
    z1f, z2f = np.ravel(z1), np.ravel(z2)
    out = np.empty(z1f.shape, dtype=complex)
    for k in range(z1f.size):
        c1, c2 = np.real(z1f[k]), np.real(z2f[k])
        x1, x2 = np.meshgrid(c1 + offs, c2 + offs, indexing="ij")
        mask = region.contains(x1, x2)
        if not mask.any():
            out[k] = 0.0
            continue
        g = np.exp(-log_t * ((z1f[k] - x1[mask]) ** 2 + (z2f[k] - x2[mask]) ** 2))
        out[k] = (log_t / np.pi) * g.sum() * h * h
    return out.reshape(shape)


def smoothed_indicator(region: SpectralRegion, T: float | None = None, spacing: float | None = None,
                       tube: float = 0.4) -> TestFunction:
    """F = omega * H_T, H_T the Gaussian smoothing of the indicator of T*Omega at width 1/sqrt(log T).

    Boxes use the closed erf product; balls and dilated sets use window quadrature
    with grid spacing `spacing` (default 0.1/sqrt(log T)).
    """
    T = region.T if T is None else float(T)
    if T <= 1:
        raise PreconditionError("smoothing needs T > 1")
    region = region.scaled(T)
    log_t = np.log(T)

    def evaluator(mu):
        mu = as_mu(mu)
        # z_j = mu_j / i; the substitution mu' -> mu - mu' makes H entire in mu
        z1, z2 = -1j * mu[0], -1j * mu[1]
        if region.kind == "box":
            h = _box_convolution(region.bounding_box(), z1, z2, log_t)
        else:
            h = _window_convolution(region, z1, z2, log_t, spacing)
        return omega_weight(mu) * h

    lo1, hi1, lo2, hi2 = region.bounding_box()
    pad = WINDOW_HALF_WIDTHS / np.sqrt(log_t) + 1.0
    box = (lo1 - pad, hi1 + pad, lo2 - pad, hi2 + pad)
    return TestFunction(evaluator, box, tube=tube, symmetric=region.is_symmetric())


def offaxis_bound_check(F: TestFunction, region: SpectralRegion, T: float, mu, eps: float = EPSILON):
    """Both sides of |F(mu)| <= T^{Re(mu1)^2 + Re(mu2)^2 + eps} chi_{T Omega + B(10)}(i Im mu) + (|mu| + T)^{-97}."""
    mu = as_mu(mu)
    lhs = np.abs(F(mu))
    x1, x2 = mu[0].imag, mu[1].imag
    near = _within_distance(region.scaled(T), x1, x2, 10.0)
    norm = np.sqrt(np.sum(np.abs(mu) ** 2, axis=0))
    rhs = T ** (mu[0].real ** 2 + mu[1].real ** 2 + eps) * near + (norm + T) ** -97.0
    return lhs, rhs


def _within_distance(region: SpectralRegion, x1, x2, r: float, samples: int = 64):
    # B(r) is measured in the smoothing kernel's norm sqrt(x1^2 + x2^2), so T^{-r^2} bounds the kernel outside it
    x1, x2 = np.broadcast_arrays(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))
    hit = region.contains(x1, x2)
    for rad in np.linspace(r / 8, r, 8):
        theta = 2 * np.pi * np.arange(samples) / samples
        d = np.stack([rad * np.cos(theta), rad * np.sin(theta)])
        for k in range(samples):
            hit = hit | region.contains(x1 + d[0, k], x2 + d[1, k])
    return hit.astype(float)


def _line_nodes(points, core_margin: float = 10.0, panel: float = 1.0, order: int = 8,
                tail_span: float = 60.0):
    # panels on the core plus exponential maps u = b +- (e^tau - 1) on the two tails
    lo, hi = min(points) - core_margin, max(points) + core_margin
    core, wc = _composite_gauss(lo, hi, panel, order)
    tau, wt = _composite_gauss(0.0, tail_span, 0.5, order)
    jac = np.exp(tau)
    right = hi + jac - 1
    left = lo - (jac - 1)
    nodes = np.concatenate([left[::-1], core, right])
    weights = np.concatenate([(wt * jac)[::-1], wc, wt * jac])
    return nodes, weights


def _bracket(x):
    return np.sqrt(1 + np.asarray(x, dtype=float) ** 2)


@dataclass(frozen=True)
class ElemBoundRow:
    v: tuple
    lhs: tuple
    rhs: tuple
    ratio: tuple


def elem_bounds_lhs_rhs(v, eps: float = EPSILON):
    """Numeric left sides and displayed right sides of the three inequalities at v.

    The first inequality needs v1 < v2 < v3 and v3 - v2 > v2 - v1.
    """
    v = np.asarray(v, dtype=float)
    if not (v[2] > v[1] > v[0] and v[2] - v[1] > v[1] - v[0]):
        raise PreconditionError("first inequality needs v1 < v2 < v3 and v3 - v2 > v2 - v1")
    u, wu = _line_nodes(v)
    # inequality 1 (two-dimensional)
    per = np.prod([_bracket(u - vi) ** (-1 + eps) for vi in v], axis=0)
    lhs1 = 0.0
    for k in range(0, u.size, 512):
        blk = slice(k, k + 512)
        coupling = _bracket(u[blk, None] - u[None, :]) ** (1.5 + eps)
        lhs1 += float(np.sum((wu[blk] * per[blk])[:, None] * coupling * (wu * per)[None, :]))
    rhs1 = _bracket(v[1] - v[0]) ** (-1 + eps) * _bracket(v[2] - v[1]) ** (-1.5 + eps)
    lhs2 = float(np.sum(wu * _bracket(u - v[0]) ** (-0.75 + eps) * _bracket(u - v[1]) ** (-0.75 + eps)))
    rhs2 = _bracket(v[1] - v[0]) ** (-0.5 + eps)
    lhs3 = float(np.sum(wu * np.prod([_bracket(u - vi) ** (-1.5 + eps) for vi in v], axis=0)))
    rhs3 = _bracket(v[1] - v[0]) ** (-1.5 + eps) * _bracket(v[2] - v[1]) ** (-1.5 + eps)
    return (lhs1, lhs2, lhs3), (float(rhs1), float(rhs2), float(rhs3))


def elem_bounds_audit(samples, eps: float = EPSILON) -> dict:
    """LHS/RHS ratios of the three elementary bounds over the sample vectors v."""
    rows = []
    for v in samples:
        lhs, rhs = elem_bounds_lhs_rhs(v, eps)
        if not all(np.isfinite(lhs)):
            raise TailTooLarge(np.inf, lhs, 0.0)
        rows.append(ElemBoundRow(tuple(float(x) for x in v), lhs, rhs, tuple(a / b for a, b in zip(lhs, rhs))))
    ratios = np.array([r.ratio for r in rows])
    # log2 of successive ratio quotients; meaningful for a doubling sweep of gaps
    slopes = np.log2(ratios[1:] / ratios[:-1]) if len(rows) > 1 else np.zeros((0, 3))
    return {"rows": rows, "max_ratio": tuple(float(x) for x in ratios.max(axis=0)),
            "growth_exponents": [tuple(float(x) for x in row) for row in slopes]}
