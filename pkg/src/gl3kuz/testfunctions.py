"""Spectral test functions F(mu) with a certified truncation box, and tempered-plane quadrature."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .group import as_mu, weyl_act


def tempered_mu(x1, x2) -> np.ndarray:
    """mu = i(x1, x2, -x1-x2), stacked along axis 0."""
    x1, x2 = np.broadcast_arrays(np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))
    return np.stack([1j * x1, 1j * x2, -1j * (x1 + x2)])


@dataclass(frozen=True)
class TemperedGrid:
    """Midpoint-offset trapezoid nodes on a box of the tempered plane.

    The two coordinate grids are offset by half a step relative to each other so
    that no node lies on the wall x1 = x2 where mu1 = mu2.
    """

    x1: np.ndarray
    x2: np.ndarray
    spacing: float

    @classmethod
    def on_box(cls, box, spacing: float) -> "TemperedGrid":
        lo1, hi1, lo2, hi2 = box
        n1 = max(2, int(np.ceil((hi1 - lo1) / spacing)))
        x1 = lo1 + spacing * np.arange(n1 + 1)
        # x2 nodes sit on the x1 lattice shifted by half a step
        offset = lo1 + 0.5 * spacing
        j = np.arange(np.floor((lo2 - offset) / spacing), np.ceil((hi2 - offset) / spacing) + 1)
        x2 = offset + spacing * j
        return cls(x1, x2, spacing)

    def mesh(self):
        return np.meshgrid(self.x1, self.x2, indexing="ij")

    def mu(self) -> np.ndarray:
        return tempered_mu(*self.mesh())

    @property
    def weight(self) -> float:
        # |dmu| = dx1 dx2; the complex measure dmu1 dmu2 equals -dx1 dx2
        return self.spacing ** 2


@dataclass(frozen=True)
class TestFunction:
    """F(mu) holomorphic on |Re mu_i| < 1/2 + tube, negligible (< tail_tol) outside box on Re mu = 0."""

    __test__ = False

    evaluator: object
    box: tuple
    tube: float = 0.4
    symmetric: bool = True
    tail_tol: float = 1e-14
    verify_seed: int = 0

    def __post_init__(self):
        lo1, hi1, lo2, hi2 = self.box
        if not (hi1 > lo1 and hi2 > lo2):
            raise ValueError("box must be non-empty")
        if self.symmetric:
            self._verify_symmetry()

    def _verify_symmetry(self):
        rng = np.random.default_rng(self.verify_seed)
        lo1, hi1, lo2, hi2 = self.box
        x1 = rng.uniform(lo1, hi1, 100)
        x2 = rng.uniform(lo2, hi2, 100)
        re = rng.uniform(-0.3, 0.3, (2, 100))
        mu = tempered_mu(x1, x2)
        mu = mu + np.stack([re[0], re[1], -re[0] - re[1]])
        a = np.asarray(self.evaluator(mu))
        b = np.asarray(self.evaluator(weyl_act("w2", mu)))
        scale = max(1e-300, float(np.max(np.abs(a))))
        if np.max(np.abs(a - b)) > 1e-12 * max(1.0, scale):
            raise PreconditionError("test function is not invariant under mu1 <-> mu2")

    def __call__(self, mu):
        return self.evaluator(as_mu(mu))

    def grid(self, spacing: float) -> TemperedGrid:
        return TemperedGrid.on_box(self.box, spacing)


def _gaussian_bump(center, width):
    nu = tempered_mu(center[0], center[1])

    def g(mu):
        mu = as_mu(mu)
        nu_b = nu.reshape((3,) + (1,) * (mu.ndim - 1))
        return np.exp(np.sum(((mu - nu_b) / width) ** 2, axis=0))

    return g


def gaussian_test_function(center=(0.5, -0.2), width: float = 1.0, symmetric: bool = True,
                           tube: float = 0.4, tail_tol: float = 1e-14) -> TestFunction:
    """exp(sum_i ((mu_i - i nu_i)/width)^2), symmetrized over mu1 <-> mu2 when requested."""
    g = _gaussian_bump(center, width)
    if symmetric:
        def f(mu):
            return g(mu) + g(weyl_act("w2", mu))
    else:
        f = g
    # on the tempered plane |g| = exp(-|x - nu|^2 / width^2) with |x|^2 over three coordinates
    radius = width * np.sqrt(np.log(2.0 / tail_tol))
    c = (center[0], center[1])
    lo = min(c) - radius if symmetric else None
    hi = max(c) + radius if symmetric else None
    box = (lo, hi, lo, hi) if symmetric else (c[0] - radius, c[0] + radius, c[1] - radius, c[1] + radius)
    return TestFunction(f, box, tube, symmetric, tail_tol)


def zero_test_function(box=(-1.0, 1.0, -1.0, 1.0)) -> TestFunction:
    return TestFunction(lambda mu: np.zeros(np.shape(as_mu(mu))[1:], dtype=complex), box)
