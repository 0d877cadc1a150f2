"""Stade's formula (closed and numeric) and the weight-one spectral measures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexgamma import DEFAULT_POLICY, GammaEvalPolicy, log_gamma
from .errors import PreconditionError, SingularMeasure, TailTooLarge
from .group import as_mu
from .mellin import ContourSpec
from .whittaker import WhittakerGrid

# distance below which a trig factor counts as vanishing
SINGULAR_TOL = 1e-10


def _c1(i: int, j: int) -> int:
    # 1 iff exactly one of the indices is the third coordinate
    return int((i == 2) != (j == 2))


def log_psi1_closed(mu, mu_prime, t, policy: GammaEvalPolicy = DEFAULT_POLICY):
    mu, mup = as_mu(mu), as_mu(mu_prime)
    t = complex(t)
    total = -np.log(2.0) - 3 * t * np.log(np.pi) - log_gamma(1.5 * t, policy)
    for i in range(3):
        for j in range(3):
            total = total + log_gamma((_c1(i, j) + t + mup[i] + mu[j]) / 2, policy)
    return total


def psi1_closed(mu, mu_prime, t, policy: GammaEvalPolicy = DEFAULT_POLICY) -> complex:
    """Gamma-product evaluation of the weight-one Rankin-Selberg integral."""
    val = np.exp(log_psi1_closed(mu, mu_prime, t, policy))
    return complex(val) if np.ndim(val) == 0 else val


@dataclass(frozen=True)
class YGrid:
    """Uniform grid in u = log y on [u_min, u_max]^2."""

    u_min: float
    u_max: float
    du: float
    rel_tol: float = 1e-6

    def __post_init__(self):
        if not (self.u_max > self.u_min and self.du > 0):
            raise ValueError("invalid y-grid")

    @classmethod
    def for_exponent(cls, t, rel_tol: float = 1e-6, du: float = 0.05, u_max: float = 2.5) -> "YGrid":
        # integrand ~ y2^{Re t} near 0 along the slowest direction
        u_min = -(np.log(1.0 / rel_tol) + 10.0) / complex(t).real
        return cls(u_min, u_max, du, rel_tol)

    @property
    def u(self) -> np.ndarray:
        n = int(round((self.u_max - self.u_min) / self.du)) + 1
        return self.u_min + self.du * np.arange(n)

    @property
    def y(self) -> np.ndarray:
        return np.exp(self.u)

    def refined(self) -> "YGrid":
        return YGrid(self.u_min, self.u_max, self.du / 2, self.rel_tol)

    def measure_weights(self) -> np.ndarray:
        """Weights of dy1 dy2 / (y1 y2)^3 on the mesh (du^2 / (y1 y2)^2)."""
        y = self.y
        return (self.du * self.du) / np.outer(y * y, y * y)


def _check_y_tail(integrand: np.ndarray, value, grid: YGrid, t):
    # lower tails decay like y1^{2t} y2^{t}; upper tails super-exponentially
    rate = complex(t).real
    mag = np.abs(integrand)
    du = grid.du
    tail = (mag[0, :].sum() * du / (2 * rate) + mag[:, 0].sum() * du / rate
            + mag[-1, :].sum() * du + mag[:, -1].sum() * du)
    if tail > grid.rel_tol * abs(value):
        raise TailTooLarge(tail, value, grid.rel_tol)
    return tail


def psi1_numeric(mu, mu_prime, t, ctl: ContourSpec | None = None, ygrid: YGrid | None = None,
                 grids: tuple | None = None) -> complex:
    """Direct quadrature of int W1*(y,mu) . W1*(y,mu') (y1^2 y2)^t dy over the positive torus."""
    mu, mup = as_mu(mu), as_mu(mu_prime)
    t = complex(t)
    if np.any(np.abs(mu.real) > 1e-12) or np.any(np.abs(mup.real) > 1e-12):
        raise PreconditionError("numeric Stade integral needs tempered mu and mu'")
    if not 0.6 <= t.real <= 3.0:
        raise PreconditionError("numeric Stade integral needs Re t in [0.6, 3]")
    ygrid = ygrid if ygrid is not None else YGrid.for_exponent(t)
    if grids is None:
        grids = (WhittakerGrid(mu, ctl), WhittakerGrid(mup, ctl))
    y = ygrid.y
    wa = grids[0].evaluate_mesh(y, y)
    wb = grids[1].evaluate_mesh(y, y)
    weight = np.exp(2 * t * np.log(y))[:, None] * np.exp(t * np.log(y))[None, :]
    integrand = np.sum(wa * wb, axis=0) * weight * ygrid.measure_weights()
    value = complex(integrand.sum())
    _check_y_tail(integrand / (ygrid.du ** 2), value, ygrid, t)
    return value


def _gaps(mu):
    mu = as_mu(mu)
    return mu[0] - mu[1], mu[0] - mu[2], mu[1] - mu[2]


def _sinc(z):
    # np.sinc divides complex denormals into inf/nan; the Taylor value is exact to double precision below 1e-5
    z = np.asarray(z)
    small = np.abs(z) < 1e-5
    safe = np.where(small, 1.0, z)
    return np.where(small, 1 - (np.pi * z) ** 2 / 6, np.sinc(safe))


def _x_cot(a):
    # a cot(pi a/2), continuous at a = 0
    den = _sinc(a / 2)
    if np.any(np.abs(den) < SINGULAR_TOL):
        raise SingularMeasure("cot factor has a pole")
    return (2 / np.pi) * np.cos(np.pi * a / 2) / den


def cosmu1(mu) -> complex:
    """Normalization factor; its reciprocal is the Stade value at (mu, -mu, 1)."""
    a12, a13, a23 = _gaps(mu)
    val = np.pi * _sinc(a13 / 2) * _sinc(a23 / 2) * np.cos(np.pi * a12 / 2)
    if np.any(np.abs(val) < SINGULAR_TOL):
        raise SingularMeasure("cosmu1 vanishes")
    return complex(val) if np.ndim(val) == 0 else val


def inv_cosmu1(mu) -> complex:
    return 1.0 / cosmu1(mu)


def inv_cosmu1_gamma(mu, policy: GammaEvalPolicy = DEFAULT_POLICY) -> complex:
    """Second route to 1/cosmu1 through the Stade gamma product."""
    mu = as_mu(mu)
    return psi1_closed(mu, -mu, 1.0, policy)


def sinmu1(mu) -> complex:
    """Kontorovich-Lebedev spectral density (entire in mu)."""
    a12, a13, a23 = _gaps(mu)
    val = a12 * np.cos(np.pi * a13 / 2) * np.cos(np.pi * a23 / 2) * np.sin(np.pi * a12 / 2) / (16 * np.pi ** 5)
    return complex(val) if np.ndim(val) == 0 else val


RESIDUE_STEPS = (1e-2, 1e-3)


def sinmu1_residue(mu, steps=RESIDUE_STEPS, policy: GammaEvalPolicy = DEFAULT_POLICY) -> complex:
    """sinmu1 from the double pole of the Stade value at t = 0.

    Order-1 Richardson in t applied to log(t^2 Psi(mu, -mu, t)); the expansion
    radius in t is the smallest gap |mu_i - mu_j|, so steps must be well below it.
    """
    mu = as_mu(mu)
    t_a, t_b = steps
    log_a = 2 * np.log(t_a) + log_psi1_closed(mu, -mu, t_a, policy)
    log_b = 2 * np.log(t_b) + log_psi1_closed(mu, -mu, t_b, policy)
    log_limit = log_b + t_b * (log_b - log_a) / (t_a - t_b)
    val = 1.0 / ((2j * np.pi) ** 2 / 3 * np.exp(log_limit))
    return complex(val) if np.ndim(val) == 0 else val


def specmu1(mu) -> complex:
    """Weight-one spectral measure, product form."""
    a12, a13, a23 = _gaps(mu)
    cos12 = np.cos(np.pi * a12 / 2)
    if np.any(np.abs(cos12) < SINGULAR_TOL):
        raise SingularMeasure("tan factor has a pole")
    val = a12 * np.tan(np.pi * a12 / 2) * _x_cot(a13) * _x_cot(a23) / (64 * np.pi ** 4)
    return complex(val) if np.ndim(val) == 0 else val


def specmu1_quotient(mu) -> complex:
    """Weight-one spectral measure as sinmu1 / cosmu1."""
    return sinmu1(mu) / cosmu1(mu)


def spectral_density(x1, x2) -> np.ndarray | float:
    """Non-negative density of specmu1(mu) dmu on the tempered plane mu = i(x1, x2, -x1-x2).

    dmu1 dmu2 = -dx1 dx2 there, so the density is -specmu1(i x).
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    mu = np.stack(np.broadcast_arrays(1j * x1, 1j * x2, -1j * (x1 + x2)))
    val = -specmu1(mu)
    val = np.real(val)
    return float(val) if np.ndim(val) == 0 else val
