"""Completed weight-one Whittaker vector by its two-variable Mellin-Barnes integral.

Vector components are indexed m' = -1, 0, +1 (array positions 0, 1, 2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexgamma import DEFAULT_POLICY, GammaEvalPolicy, log_gamma
from .errors import ContourPinch, DegenerateSpectrum, PreconditionError
from .group import (SpectralParameter, TorusPoint, WeylElement, WEYL_GROUP, W2_SUBGROUP, as_mu,
                    weyl_act)
from .mellin import ContourSpec, IntegrandGrid, default_height, eval_powers_mesh, grid_from_values

__all__ = [
    "SpectralParameter", "TorusPoint", "WeylElement", "weyl_act", "GammaShift", "g_tilde", "g1_vector",
    "default_whittaker_contour", "WhittakerGrid", "whittaker_w1star", "lambda_alpha", "FE_CONSTANTS",
    "FEConstant", "whittaker_leading", "U_VECTORS",
]

_SHIFT_A = ((0, 0, 1), (0, 0, 1))
_SHIFT_B = ((0, 0, 1), (1, 1, 0))
_SHIFT_C = ((1, 1, 0), (0, 0, 1))
_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class GammaShift:
    beta: tuple
    eta: tuple

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(int(b) for b in self.beta))
        object.__setattr__(self, "eta", tuple(int(e) for e in self.eta))
        if len(self.beta) != 3 or len(self.eta) != 3:
            raise ValueError("beta and eta are integer 3-vectors")


def _log_g_tilde(beta, eta, s1, s2, mu, policy):
    num = 0
    for i in range(3):
        num = num + log_gamma((beta[i] + s1 - mu[i]) / 2, policy)
        num = num + log_gamma((eta[i] + s2 + mu[i]) / 2, policy)
    return num - log_gamma((s1 + s2 + sum(beta) + sum(eta) - 2) / 2, policy)


def g_tilde(shift: GammaShift, s, mu, policy: GammaEvalPolicy = DEFAULT_POLICY):
    """Six-gamma over one-gamma kernel of the Whittaker integrand."""
    mu = as_mu(mu)
    s1, s2 = (np.asarray(x, dtype=complex) for x in s)
    val = np.exp(_log_g_tilde(shift.beta, shift.eta, s1, s2, mu, policy))
    return complex(val) if np.ndim(val) == 0 else val


def g1_vector(s, mu, policy: GammaEvalPolicy = DEFAULT_POLICY) -> np.ndarray:
    """(G_-1, G_0, G_1) at s = (s1, s2); components stacked along axis 0."""
    mu = as_mu(mu)
    s1, s2 = (np.asarray(x, dtype=complex) for x in s)
    a = np.exp(_log_g_tilde(*_SHIFT_A, s1, s2, mu, policy))
    b = np.exp(_log_g_tilde(*_SHIFT_B, s1, s2, mu, policy))
    c = np.exp(_log_g_tilde(*_SHIFT_C, s1, s2, mu, policy))
    return np.stack([a - b, _SQRT2 * c, a + b])


def default_whittaker_contour(mu, rel_tol: float = 1e-10, spacing: float = 0.1) -> ContourSpec:
    mu = as_mu(mu)
    height = default_height(rel_tol, float(np.max(np.abs(mu.imag))))
    nodes = int(np.ceil(2 * height / spacing)) + 1
    return ContourSpec((0.75, 0.75), height, nodes, rel_tol)


def _separable_component(beta, eta, tau, sig1, sig2, spacing, mu, policy):
    # numerator splits in s1 and s2; the denominator depends only on the node-index sum
    s1 = sig1 + 1j * tau
    s2 = sig2 + 1j * tau
    a = sum(log_gamma((beta[i] + s1 - mu[i]) / 2, policy) for i in range(3))
    b = sum(log_gamma((eta[i] + s2 + mu[i]) / 2, policy) for i in range(3))
    n = tau.size
    tsum = 2 * tau[0] + np.arange(2 * n - 1) * spacing
    d = log_gamma((sig1 + sig2 + 1j * tsum + sum(beta) + sum(eta) - 2) / 2, policy)
    idx = np.arange(n)[:, None] + np.arange(n)[None, :]
    return np.exp(a[:, None] + b[None, :] - d[idx])


def _check_whittaker_preconditions(mu, ctl):
    if np.any(np.abs(mu.real) >= 0.5):
        raise PreconditionError("Whittaker evaluation needs |Re mu_i| < 1/2")
    if ctl.dim != 2 or ctl.bend != 0.0:
        raise PreconditionError("Whittaker contour must be a vertical product of two lines")
    if ctl.re_parts[0] <= np.max(mu.real) or ctl.re_parts[1] <= np.max(-mu.real):
        raise ContourPinch("Whittaker contour must lie right of all gamma poles")


class WhittakerGrid:
    """Cached weighted G1 samples for one spectral parameter; evaluates W1* at any y > 0."""

    def __init__(self, mu, ctl: ContourSpec | None = None, policy: GammaEvalPolicy = DEFAULT_POLICY,
                 check_tail: bool = True):
        self.mu = as_mu(mu)
        self.ctl = ctl if ctl is not None else default_whittaker_contour(self.mu)
        _check_whittaker_preconditions(self.mu, self.ctl)
        self.grid = self._build(policy, check_tail)

    def _build(self, policy, check_tail) -> IntegrandGrid:
        ctl, mu = self.ctl, self.mu
        s1, w1 = ctl.nodes_and_weights(0)
        s2, w2 = ctl.nodes_and_weights(1)
        if ctl.node_count(0) == ctl.node_count(1):
            tau = ctl.tau(0)
            sig1, sig2 = ctl.re_parts
            h = ctl.spacing(0)
            a = _separable_component(*_SHIFT_A, tau, sig1, sig2, h, mu, policy)
            b = _separable_component(*_SHIFT_B, tau, sig1, sig2, h, mu, policy)
            c = _separable_component(*_SHIFT_C, tau, sig1, sig2, h, mu, policy)
            vals = np.stack([a - b, _SQRT2 * c, a + b])
        else:
            vals = g1_vector((s1[:, None], s2[None, :]), mu, policy)
        return grid_from_values(s1, s2, w1, w2, vals, ctl, check_tail)

    def evaluate_mesh(self, y1s, y2s) -> np.ndarray:
        """W1* on the tensor mesh; shape (3, len(y1s), len(y2s))."""
        y1s = np.atleast_1d(np.asarray(y1s, dtype=float))
        y2s = np.atleast_1d(np.asarray(y2s, dtype=float))
        if np.any(y1s <= 0) or np.any(y2s <= 0):
            raise PreconditionError("W1* is evaluated only on positive torus points")
        return eval_powers_mesh(self.grid, np.pi * y1s, np.pi * y2s) / (4 * np.pi ** 2)

    def __call__(self, y) -> np.ndarray:
        y = TorusPoint.of(y)
        return self.evaluate_mesh([y.y1], [y.y2])[:, 0, 0]


def whittaker_w1star(y, mu, ctl: ContourSpec | None = None,
                     policy: GammaEvalPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Completed weight-one Whittaker vector at a positive torus point."""
    return WhittakerGrid(mu, ctl, policy)(y)


def lambda_alpha(alpha, mu, policy: GammaEvalPolicy = DEFAULT_POLICY) -> complex:
    m1, m2, m3 = as_mu(mu)
    args = [(1 + alpha[0] + m1 - m2) / 2, (1 + alpha[1] + m1 - m3) / 2, (1 + alpha[2] + m2 - m3) / 2]
    log_val = (-1.5 + m3 - m1) * np.log(np.pi) + sum(log_gamma(a, policy) for a in args)
    return complex(np.exp(log_val))


_E = np.eye(3)
U_VECTORS = {
    "u0-": _E[1],
    "u1+": 0.5 * (_E[2] - _E[0]),
    "u1-": 0.5 * (_E[2] + _E[0]),
}


@dataclass(frozen=True)
class FEConstant:
    c_w: float
    alpha: tuple
    u: str


_FE_BASE = {
    "I": FEConstant(np.sqrt(2.0), (0, 1, 1), "u0-"),
    "w4": FEConstant(2.0, (1, 1, 0), "u1+"),
    "w5": FEConstant(-2.0, (1, 0, 1), "u1-"),
}


def _extend_fe_table():
    table = dict(_FE_BASE)
    w2 = WeylElement.get("w2")
    for name, const in _FE_BASE.items():
        table[(w2 * WeylElement.get(name)).name] = const
    return table


# left w2-extension: constants at w2*w copy those at w
FE_CONSTANTS = _extend_fe_table()


def _check_distinct(mu, tol):
    for i in range(3):
        for j in range(i + 1, 3):
            if abs(mu[i] - mu[j]) < tol:
                raise DegenerateSpectrum(f"mu_{i + 1} and mu_{j + 1} coincide")


def whittaker_leading(y, mu, policy: GammaEvalPolicy = DEFAULT_POLICY) -> np.ndarray:
    """Six-term small-y leading behaviour of W1* built from the functional-equation table."""
    y = TorusPoint.of(y)
    if y.y1 <= 0 or y.y2 <= 0:
        raise PreconditionError("leading asymptotics are for positive torus points")
    mu = as_mu(mu)
    if np.any(np.abs(mu.real) > 1e-12):
        raise PreconditionError("leading asymptotics need tempered mu")
    _check_distinct(mu, policy.pole_tolerance)
    wl = WeylElement.get("wl")
    out = np.zeros(3, dtype=complex)
    for w in WEYL_GROUP:
        const = FE_CONSTANTS[w.name]
        mw = weyl_act(w, mu)
        power = y.y1 ** (1 - mw[2]) * y.y2 ** (1 + mw[0])
        alpha_t = tuple(a - 1 for a in reversed(const.alpha))
        lam = lambda_alpha(alpha_t, weyl_act(w * wl, mu), policy)
        out += np.pi ** 1.5 * abs(const.c_w) * power * lam * U_VECTORS[const.u]
    return out
