"""Weight-one Kontorovich-Lebedev transform pair and the smoothed inversion check.

The smoothed value

    F(mu, eps) = int_{Re mu' = 0} F(mu') Psi1(mu', -mu, eps) sinmu1(mu') dmu'

is computed from the closed Stade product. Its integrand develops poles at
mu'_j = mu_i - eps (i, j in {1, 2}) that pinch the tempered plane as eps -> 0,
so the evaluation shifts the contour to Re mu' = (-eta, -eta, 2 eta) with
eps < eta and adds the residues that are crossed: two one-dimensional
families per pole pair and the two double residues at (mu_k - eps, mu_k' - eps).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexgamma import log_gamma
from .errors import PreconditionError
from .group import as_mu, weyl_act
from .stade import YGrid, sinmu1
from .testfunctions import TestFunction, TemperedGrid
from .whittaker import WhittakerGrid

_LOG2 = np.log(2.0)


def _flat_nodes(F: TestFunction, spacing: float):
    grid = F.grid(spacing)
    mu = grid.mu().reshape(3, -1)
    fvals = np.asarray(F(mu)).reshape(-1)
    keep = np.abs(fvals) >= F.tail_tol * 1e-3
    return mu[:, keep], fvals[keep], grid.weight


def f_flat_mesh(F: TestFunction, y1s, y2s, spacing: float = 0.1, ctl=None) -> np.ndarray:
    """F-flat on the tensor mesh y1s x y2s; shape (3, len(y1s), len(y2s))."""
    mu, fvals, weight = _flat_nodes(F, spacing)
    out = np.zeros((3, len(np.atleast_1d(y1s)), len(np.atleast_1d(y2s))), dtype=complex)
    if mu.shape[1] == 0:
        return out
    dens = sinmu1(mu)
    for k in range(mu.shape[1]):
        wk = WhittakerGrid(mu[:, k], ctl).evaluate_mesh(y1s, y2s)
        out += fvals[k] * dens[k] * wk
    # dmu1 dmu2 = -dx1 dx2 on the tempered plane
    return -weight * out


def f_flat(F: TestFunction, y, spacing: float = 0.1, ctl=None) -> np.ndarray:
    """int_{Re mu = 0} F(mu) W1*(y, mu) sinmu1(mu) dmu at one positive torus point."""
    y1, y2 = float(y[0]), float(y[1])
    return f_flat_mesh(F, [y1], [y2], spacing, ctl)[:, 0, 0]


def f_sharp(f, mu, ygrid: YGrid, ctl=None) -> complex:
    """int_{Y+} f(y) . conj W1*(y, mu) dy.

    f is a callable (y1s, y2s) -> (3, n1, n2) on the mesh, or an array of that
    shape sampled on ygrid.
    """
    y = ygrid.y
    vals = f(y, y) if callable(f) else np.asarray(f)
    w = WhittakerGrid(as_mu(mu), ctl).evaluate_mesh(y, y)
    integrand = np.sum(vals * np.conj(w), axis=0) * ygrid.measure_weights()
    return complex(integrand.sum())


_C1 = np.array([[0, 0, 1], [0, 0, 1], [1, 1, 0]])


def _log_psi_pair(mup, mu, t, skip=()):
    # log Psi1(mu', -mu, t); factors (i, j) in `skip` are replaced by their pole residue 2
    total = -np.log(2.0) - 3 * t * np.log(np.pi) - log_gamma(1.5 * t)
    for i in range(3):
        for j in range(3):
            if (i, j) in skip:
                total = total + _LOG2
                continue
            total = total + log_gamma((_C1[i, j] + t - mu[i] + mup[j]) / 2)
    return total


def _pair_mu(m1, m2):
    m1, m2 = np.broadcast_arrays(np.asarray(m1, dtype=complex), np.asarray(m2, dtype=complex))
    return np.stack([m1, m2, -m1 - m2])


def _smoothed_integrand(F, m1, m2, mu, eps, skip=()):
    mup = _pair_mu(m1, m2)
    return F(mup) * sinmu1(mup) * np.exp(_log_psi_pair(mup, mu, eps, skip))


@dataclass(frozen=True)
class SmoothedValue:
    value: complex
    shifted: complex
    mixed: complex
    double_residues: complex


def _check_kl_preconditions(F, mu, eps):
    if np.any(np.abs(mu.real) > 1e-12):
        raise PreconditionError("mu must be tempered")
    if abs(mu[0] - mu[1]) < 1e-8:
        raise PreconditionError("the inversion check needs mu1 != mu2")
    if not 0 < eps < F.tube / 2:
        raise PreconditionError(f"eps must lie in (0, tube/2) = (0, {F.tube / 2})")


def smoothed_value(F: TestFunction, mu, eps: float, spacing: float = 0.02) -> SmoothedValue:
    """F(mu, eps) by the shifted-contour decomposition."""
    mu = as_mu(mu)
    _check_kl_preconditions(F, mu, eps)
    eta = 0.5 * (eps + F.tube)
    grid = TemperedGrid.on_box(F.box, spacing)
    x1, x2 = grid.mesh()
    shifted = -np.sum(_smoothed_integrand(F, -eta + 1j * x1, -eta + 1j * x2, mu, eps)) * spacing ** 2
    mixed = 0j
    lines = (grid.x1, grid.x2)
    for i in (0, 1):
        pole = mu[i] - eps
        z2 = -eta + 1j * lines[0]
        mixed += 2j * np.pi * 1j * np.sum(_smoothed_integrand(F, z2, pole, mu, eps, ((i, 1),))) * spacing
        z1 = -eta + 1j * lines[1]
        mixed += 2j * np.pi * 1j * np.sum(_smoothed_integrand(F, pole, z1, mu, eps, ((i, 0),))) * spacing
    double = 0j
    for k, kp in ((0, 1), (1, 0)):
        val = _smoothed_integrand(F, mu[k] - eps, mu[kp] - eps, mu, eps, ((k, 0), (kp, 1)))
        double += (2j * np.pi) ** 2 * complex(val)
    total = complex(shifted + mixed + double)
    return SmoothedValue(total, complex(shifted), complex(mixed), complex(double))


def smoothed_value_direct(F: TestFunction, mu, eps: float, spacing: float = 0.01) -> complex:
    """F(mu, eps) by plain quadrature on the tempered plane (only sensible for eps >~ 0.05)."""
    mu = as_mu(mu)
    _check_kl_preconditions(F, mu, eps)
    grid = TemperedGrid.on_box(F.box, spacing)
    x1, x2 = grid.mesh()
    return complex(-np.sum(_smoothed_integrand(F, 1j * x1, 1j * x2, mu, eps)) * spacing ** 2)


@dataclass(frozen=True)
class KLResidue:
    eps: float
    smoothed: complex
    target: complex
    residual: float
    symmetrized_target: complex
    symmetrized_residual: float


def kl_residue_check(F: TestFunction, mu, eps: float, spacing: float = 0.02) -> KLResidue:
    """|F(mu, eps) - F(mu)| together with the distance to F(mu) + F(mu^{w2})."""
    mu = as_mu(mu)
    val = smoothed_value(F, mu, eps, spacing).value
    target = complex(F(mu))
    sym = target + complex(F(weyl_act("w2", mu)))
    return KLResidue(eps, val, target, abs(val - target), sym, abs(val - sym))


def round_trip(F: TestFunction, mu, ygrid: YGrid, spacing: float = 0.1, ctl=None) -> complex:
    """(F-flat)-sharp at mu on the given y-grid."""
    y = ygrid.y
    flat = f_flat_mesh(F, y, y, spacing, ctl)
    return f_sharp(flat, mu, ygrid, ctl)
