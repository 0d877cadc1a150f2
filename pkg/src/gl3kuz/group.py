"""Spectral parameters, torus points and the Weyl group S3 acting on them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# (mu^w)_i = mu_{perm[i]}; products satisfy (mu^a)^b = mu^{ab}
_PERMS = {
    "I": (0, 1, 2),
    "w2": (1, 0, 2),
    "w3": (0, 2, 1),
    "w4": (2, 0, 1),
    "w5": (1, 2, 0),
    "wl": (2, 1, 0),
}
_ALIASES = {"id": "I", "e": "I", "w_l": "wl", "w6": "wl"}


@dataclass(frozen=True)
class WeylElement:
    name: str
    perm: tuple

    @classmethod
    def get(cls, name) -> "WeylElement":
        if isinstance(name, WeylElement):
            return name
        key = _ALIASES.get(name, name)
        if key not in _PERMS:
            raise ValueError(f"unknown Weyl element {name!r}")
        return _ELEMENTS[key]

    @classmethod
    def from_perm(cls, perm) -> "WeylElement":
        perm = tuple(int(p) for p in perm)
        for el in _ELEMENTS.values():
            if el.perm == perm:
                return el
        raise ValueError(f"not a permutation of (0,1,2): {perm}")

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        other = WeylElement.get(other)
        return WeylElement.from_perm(tuple(self.perm[other.perm[i]] for i in range(3)))

    def inverse(self) -> "WeylElement":
        inv = [0, 0, 0]
        for i, p in enumerate(self.perm):
            inv[p] = i
        return WeylElement.from_perm(inv)

    def act(self, mu):
        return weyl_act(self, mu)

    def act_vector(self, vec):
        """Permute a generic 3-vector (e.g. integer shifts) the same way as mu."""
        return tuple(vec[p] for p in self.perm)

    def __repr__(self):
        return f"WeylElement({self.name})"


_ELEMENTS = {name: WeylElement(name, perm) for name, perm in _PERMS.items()}
WEYL_GROUP = tuple(_ELEMENTS.values())
W2_SUBGROUP = (_ELEMENTS["I"], _ELEMENTS["w2"])
W3_SUBGROUP = (_ELEMENTS["I"], _ELEMENTS["w4"], _ELEMENTS["w5"])


@dataclass(frozen=True)
class SpectralParameter:
    mu: tuple

    def __post_init__(self):
        mu = tuple(complex(m) for m in self.mu)
        if len(mu) != 3:
            raise ValueError("a spectral parameter has three coordinates")
        if abs(sum(mu)) > 1e-12 * max(1.0, max(abs(m) for m in mu)):
            raise ValueError(f"coordinates must sum to zero, got {sum(mu)}")
        object.__setattr__(self, "mu", mu)

    @classmethod
    def from_imaginary(cls, x1: float, x2: float) -> "SpectralParameter":
        return cls((1j * x1, 1j * x2, -1j * (x1 + x2)))

    @classmethod
    def from_pair(cls, mu1: complex, mu2: complex) -> "SpectralParameter":
        return cls((mu1, mu2, -mu1 - mu2))

    def __getitem__(self, i):
        return self.mu[i]

    def __iter__(self):
        return iter(self.mu)

    def __neg__(self):
        return SpectralParameter(tuple(-m for m in self.mu))

    def conj(self) -> "SpectralParameter":
        return SpectralParameter(tuple(m.conjugate() for m in self.mu))

    def array(self) -> np.ndarray:
        return np.array(self.mu, dtype=complex)

    def is_tempered(self, tol: float = 1e-12) -> bool:
        return all(abs(m.real) <= tol for m in self.mu)

    def act(self, w) -> "SpectralParameter":
        return weyl_act(w, self)


def as_mu(mu) -> np.ndarray:
    """Coordinates as a complex array of shape (3, ...) (broadcast-friendly)."""
    if isinstance(mu, SpectralParameter):
        return mu.array()
    arr = np.asarray(mu, dtype=complex)
    if arr.shape[0] != 3:
        raise ValueError("spectral coordinates must have leading dimension 3")
    return arr


def weyl_act(w, mu):
    """mu^w; returns the same kind it was given (SpectralParameter or array)."""
    w = WeylElement.get(w)
    if isinstance(mu, SpectralParameter):
        return SpectralParameter(tuple(mu.mu[p] for p in w.perm))
    arr = as_mu(mu)
    return arr[list(w.perm)]


@dataclass(frozen=True)
class TorusPoint:
    y1: float
    y2: float

    def __post_init__(self):
        object.__setattr__(self, "y1", float(self.y1))
        object.__setattr__(self, "y2", float(self.y2))
        if self.y1 == 0 or self.y2 == 0:
            raise ValueError("torus coordinates must be nonzero")

    @classmethod
    def of(cls, y) -> "TorusPoint":
        return y if isinstance(y, TorusPoint) else cls(*y)

    @property
    def signs(self) -> tuple:
        return (1 if self.y1 > 0 else -1, 1 if self.y2 > 0 else -1)

    @property
    def abs(self) -> tuple:
        return (abs(self.y1), abs(self.y2))

    def __iter__(self):
        return iter((self.y1, self.y2))

    def __getitem__(self, i):
        return (self.y1, self.y2)[i]
