"""Truncated trapezoid quadrature on vertical (optionally bent) contours.

All integrals carry the ds/(2 pi i) normalization. A contour variable is
parametrized as s(tau) = re + i tau - bend * f(tau), tau in [-height, height],
where f vanishes on |tau| <= flat and grows linearly beyond it, so a positive
bend turns the line into the left half-plane far from the real axis. This keeps
integrands whose decay on a straight line is only polynomial exponentially
small at the truncation points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonFinite, TailTooLarge

# minimum decay rate (per unit of tau) considered genuine decay
_MIN_DECAY_RATE = 0.05
# probe offset (in tau units) used to measure end decay
_PROBE = 1.0


def _per_variable(value, k):
    if np.ndim(value) == 0:
        return value
    return value[k]


@dataclass(frozen=True)
class ContourSpec:
    """Real parts, truncation height and node counts of a product contour."""

    re_parts: tuple
    height: float
    nodes: int | tuple = 601
    rel_tol: float = 1e-10
    bend: float = 0.0
    bend_width: float = 0.5
    flat: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "re_parts", tuple(float(r) for r in np.atleast_1d(self.re_parts)))
        if not self.height > 0:
            raise ValueError("height must be positive")
        if min(np.atleast_1d(self.nodes)) < 16:
            raise ValueError("nodes must be at least 16 per variable")
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.bend < 0 or self.bend_width <= 0 or self.flat < 0:
            raise ValueError("bend, bend_width, flat must be non-negative (bend_width positive)")

    @property
    def dim(self) -> int:
        return len(self.re_parts)

    def node_count(self, k: int = 0) -> int:
        return int(_per_variable(self.nodes, k))

    def spacing(self, k: int = 0) -> float:
        return 2.0 * self.height / (self.node_count(k) - 1)

    def refined(self, factor: int = 2) -> "ContourSpec":
        """Same contour with the node spacing divided by factor."""
        nodes = tuple((self.node_count(k) - 1) * factor + 1 for k in range(self.dim))
        return ContourSpec(self.re_parts, self.height, nodes, self.rel_tol, self.bend, self.bend_width, self.flat)

    def with_re_parts(self, re_parts) -> "ContourSpec":
        return ContourSpec(tuple(re_parts), self.height, self.nodes, self.rel_tol, self.bend, self.bend_width, self.flat)

    def tau(self, k: int = 0) -> np.ndarray:
        return np.linspace(-self.height, self.height, self.node_count(k))

    def _bend_profile(self, tau):
        b, t0 = self.bend_width, self.flat
        ra = np.sqrt((tau - t0) ** 2 + b * b)
        rb = np.sqrt((tau + t0) ** 2 + b * b)
        f = 0.5 * (ra + rb) - np.sqrt(t0 * t0 + b * b)
        df = 0.5 * ((tau - t0) / ra + (tau + t0) / rb)
        return f, df

    def points(self, k: int = 0, tau=None):
        """Contour points s and derivative ds/dtau for variable k."""
        tau = self.tau(k) if tau is None else np.asarray(tau, dtype=float)
        if self.bend == 0.0:
            return self.re_parts[k] + 1j * tau, np.full(tau.shape, 1j)
        f, df = self._bend_profile(tau)
        return self.re_parts[k] + 1j * tau - self.bend * f, 1j - self.bend * df

    def nodes_and_weights(self, k: int = 0):
        """Abscissae and trapezoid weights for int f(s) ds/(2 pi i)."""
        s, ds = self.points(k)
        w = ds * self.spacing(k) / (2j * np.pi)
        w[0] *= 0.5
        w[-1] *= 0.5
        return s, w


def default_height(rel_tol: float, max_im_mu: float = 0.0) -> float:
    """Truncation height for integrands decaying at least like exp(-(pi/2)|Im s|)."""
    return max(30.0, 4.0 / np.pi * np.log(1.0 / rel_tol) + 2.0 * max_im_mu)


def vertical(re_parts, rel_tol: float = 1e-10, spacing: float = 0.1, max_im_mu: float = 0.0,
             height: float | None = None) -> ContourSpec:
    height = default_height(rel_tol, max_im_mu) if height is None else height
    nodes = int(np.ceil(2 * height / spacing)) + 1
    return ContourSpec(tuple(re_parts), height, nodes, rel_tol)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    tail: float

    def __complex__(self):
        return complex(self.value)


def _ensure_finite(values):
    if not np.all(np.isfinite(values)):
        raise NonFinite("integrand returned NaN or infinity on the contour")


def _end_tail(g_end: float, g_probe: float, spacing: float) -> float:
    # geometric-tail bound beyond the truncation point from the measured decay rate
    if g_end == 0.0:
        return 0.0
    if g_probe <= g_end:
        return np.inf
    rate = np.log(g_probe / g_end) / _PROBE
    if rate < _MIN_DECAY_RATE:
        return np.inf
    return g_end / rate


def _line_tail(abs_integrand: np.ndarray, spacing: float) -> float:
    probe = max(1, int(round(_PROBE / spacing)))
    probe = min(probe, abs_integrand.size // 2)
    lo = _end_tail(abs_integrand[0], abs_integrand[probe], spacing)
    hi = _end_tail(abs_integrand[-1], abs_integrand[-1 - probe], spacing)
    return (lo + hi) / (2 * np.pi)


def _check_tail(value, tail, ctl: ContourSpec, scale=None):
    ref = abs(value) if scale is None else scale
    if tail > ctl.rel_tol * ref and tail > 0:
        raise TailTooLarge(tail, value, ctl.rel_tol)


def integrate_line(f, ctl: ContourSpec, k: int = 0, check_tail: bool = True) -> QuadratureResult:
    """Integral of f(s) ds/(2 pi i) along variable k of ctl."""
    s, w = ctl.nodes_and_weights(k)
    vals = np.asarray(f(s), dtype=complex)
    _ensure_finite(vals)
    value = complex(np.sum(vals * w))
    _, ds = ctl.points(k)
    tail = _line_tail(np.abs(vals * ds), ctl.spacing(k))
    if check_tail:
        _check_tail(value, tail, ctl)
    return QuadratureResult(value, tail)


def _plane_tail(abs_vals: np.ndarray, h1: float, h2: float) -> float:
    # marginal magnitudes along each axis, each bounded by a 1D end-tail estimate
    m1 = abs_vals.sum(axis=1) * h2
    m2 = abs_vals.sum(axis=0) * h1
    return (_line_tail(m1, h1) + _line_tail(m2, h2)) / (2 * np.pi)


@dataclass(frozen=True)
class IntegrandGrid:
    """Weighted integrand samples on a tensor contour, reusable across torus points.

    values has shape (..., n1, n2) and already includes quadrature weights;
    s_nodes/weights are per-variable arrays. tail is the truncation estimate
    at y = (1, 1); it scales with the real-part power of y.
    """

    s_nodes: tuple
    weights: tuple
    values: np.ndarray
    tail: float = 0.0
    scale: float = field(default=0.0)

    def __post_init__(self):
        n1, n2 = self.values.shape[-2:]
        if len(self.s_nodes[0]) != n1 or len(self.s_nodes[1]) != n2:
            raise ValueError("grid node and value shapes disagree")


def build_grid(f, ctl: ContourSpec, check_tail: bool = True) -> IntegrandGrid:
    """Sample f(s1, s2) (vectorized over a mesh) once with product weights."""
    s1, w1 = ctl.nodes_and_weights(0)
    s2, w2 = ctl.nodes_and_weights(1)
    vals = np.asarray(f(s1[:, None], s2[None, :]), dtype=complex)
    return grid_from_values(s1, s2, w1, w2, vals, ctl, check_tail)


def grid_from_values(s1, s2, w1, w2, vals, ctl: ContourSpec, check_tail: bool = True) -> IntegrandGrid:
    _ensure_finite(vals)
    _, d1 = ctl.points(0)
    _, d2 = ctl.points(1)
    mag = np.abs(vals)
    if mag.ndim > 2:
        mag = mag.reshape(-1, *mag.shape[-2:]).max(axis=0)
    mag = mag * np.abs(d1)[:, None] * np.abs(d2)[None, :]
    h1, h2 = ctl.spacing(0), ctl.spacing(1)
    tail = _plane_tail(mag, h1, h2)
    scale = float(mag.sum() * h1 * h2 / (4 * np.pi ** 2))
    if check_tail and tail > ctl.rel_tol * scale and tail > 0:
        raise TailTooLarge(tail, scale, ctl.rel_tol)
    weighted = vals * w1[:, None] * w2[None, :]
    return IntegrandGrid((s1, s2), (w1, w2), weighted, tail, scale)


def eval_powers(grid: IntegrandGrid, y) -> np.ndarray | complex:
    """Sum of grid values times y1^(1-s1) y2^(1-s2) for a positive torus point."""
    y1, y2 = float(y[0]), float(y[1])
    if y1 <= 0 or y2 <= 0:
        raise ValueError("eval_powers needs positive torus coordinates")
    p1 = np.exp((1.0 - grid.s_nodes[0]) * np.log(y1))
    p2 = np.exp((1.0 - grid.s_nodes[1]) * np.log(y2))
    out = np.einsum("...ij,i,j->...", grid.values, p1, p2)
    return complex(out) if np.ndim(out) == 0 else out


def eval_powers_mesh(grid: IntegrandGrid, y1s, y2s) -> np.ndarray:
    """eval_powers on the tensor mesh y1s x y2s; result shape (..., len(y1s), len(y2s))."""
    lp1 = np.log(np.asarray(y1s, dtype=float))
    lp2 = np.log(np.asarray(y2s, dtype=float))
    p1 = np.exp((1.0 - grid.s_nodes[0])[None, :] * lp1[:, None])
    p2 = np.exp((1.0 - grid.s_nodes[1])[None, :] * lp2[:, None])
    return p1 @ grid.values @ p2.T


def integrate_plane(f, ctl: ContourSpec, check_tail: bool = True) -> QuadratureResult:
    """Integral of f(s1, s2) ds1 ds2/(2 pi i)^2 on the product contour."""
    grid = build_grid(f, ctl, check_tail=False)
    value = complex(np.sum(grid.values))
    if check_tail:
        _check_tail(value, grid.tail, ctl, scale=max(abs(value), grid.scale))
    return QuadratureResult(value, grid.tail)
