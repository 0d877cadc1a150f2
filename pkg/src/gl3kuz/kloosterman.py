"""Exact SL(3,Z) Kloosterman sums by enumeration of residue classes.

Every phase is reduced to an integer numerator over a fixed denominator q, so
each term is a table lookup of exp(2 pi i k / q); no floating-point phase ever
accumulates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np
from sympy import divisor_count

from .errors import BoundViolated, DivisibilityViolated, UnsupportedWeylElement
from .group import WeylElement


@dataclass(frozen=True)
class ExponentialSumValue:
    value: complex
    term_count: int


@dataclass(frozen=True)
class KloostermanArgs:
    m: tuple
    n: tuple
    c: tuple
    w: WeylElement

    def __post_init__(self):
        object.__setattr__(self, "w", WeylElement.get(self.w))
        object.__setattr__(self, "m", tuple(int(v) for v in self.m))
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        object.__setattr__(self, "c", tuple(int(v) for v in self.c))
        if min(self.c) < 1:
            raise ValueError("moduli must be positive")


@lru_cache(maxsize=None)
def _roots_of_unity(q: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(q) / q)


def _sum_phases(numerators: np.ndarray, q: int) -> ExponentialSumValue:
    k = np.mod(numerators, q)
    # fixed summation order keeps results reproducible
    value = complex(np.sum(_roots_of_unity(q)[k]))
    return ExponentialSumValue(value, int(k.size))


def _inverse(a: int, d: int) -> int:
    return pow(a % d, -1, d) if d > 1 else 0


@lru_cache(maxsize=None)
def _s_tilde_classes(d1: int, d2: int):
    # admissible (C1, C2) with (C1,D1) = (C2,D2/D1) = 1, and the inverses entering the phase
    r = d2 // d1
    c1s = [c for c in range(d1) if gcd(c, d1) == 1]
    c2s = [c for c in range(d2) if gcd(c, r) == 1]
    rows = [(c1, _inverse(c1, d1), c2, _inverse(c2, r)) for c1 in c1s for c2 in c2s]
    return np.array(rows, dtype=np.int64).reshape(-1, 4)


def s_tilde(m1: int, n1: int, n2: int, D1: int, D2: int) -> ExponentialSumValue:
    """Degenerate GL(3) exponential sum attached to the short Weyl elements."""
    if D1 < 1 or D2 < 1:
        raise ValueError("moduli must be positive")
    if D2 % D1:
        raise DivisibilityViolated(f"D1 = {D1} does not divide D2 = {D2}")
    r = D2 // D1
    rows = _s_tilde_classes(D1, D2)
    c1, c1_inv, c2, c2_inv = rows.T
    # common denominator D2 = D1 * r
    num = n1 * ((c1_inv * c2) % D1) * r + n2 * c2_inv * D1 + m1 * c1 * r
    return _sum_phases(num, D2)


def _yz(b: int, c: int, d: int):
    # any (Y, Z) with Y b + Z c = 1 mod d, given gcd(b, c, d) = 1
    if d == 1:
        return 0, 0
    g, u, v = _ext_gcd(b, c)
    g_inv = pow(g % d, -1, d)
    return (u * g_inv) % d, (v * g_inv) % d


def _ext_gcd(a: int, b: int):
    if b == 0:
        return (a, 1, 0) if a else (0, 0, 0)
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


@lru_cache(maxsize=None)
def _s_big_classes(d1: int, d2: int):
    # rows (B1, C1, B2, C2, Y1, Z1, Y2, Z2) satisfying the congruence and coprimality conditions
    rows = []
    for b1 in range(d1):
        for c1 in range(d1):
            if gcd(gcd(b1, c1), d1) != 1:
                continue
            y1, z1 = _yz(b1, c1, d1)
            for b2 in range(d2):
                k = b1 * b2 + d2 * c1
                if k % d1:
                    continue
                # D1 C2 = -(B1 B2 + D2 C1) mod D1 D2 fixes C2 mod D2
                c2 = (-(k // d1)) % d2
                if gcd(gcd(b2, c2), d2) != 1:
                    continue
                y2, z2 = _yz(b2, c2, d2)
                rows.append((b1, c1, b2, c2, y1, z1, y2, z2))
    return np.array(rows, dtype=np.int64).reshape(-1, 8)


def _randomize_yz(rows, d1, d2, rng):
    # (Y + kC + jD, Z - kB + lD) solves the same congruence
    rows = rows.copy()
    b1, c1, b2, c2 = rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]
    k = rng.integers(-5, 6, size=(4, len(rows)))
    j = rng.integers(-5, 6, size=(4, len(rows)))
    rows[:, 4] += k[0] * c1 + j[0] * d1
    rows[:, 5] += -k[0] * b1 + j[1] * d1
    rows[:, 6] += k[1] * c2 + j[2] * d2
    rows[:, 7] += -k[1] * b2 + j[3] * d2
    return rows


def s_big(m1: int, m2: int, n1: int, n2: int, D1: int, D2: int, rng=None) -> ExponentialSumValue:
    """Long-element GL(3) exponential sum; rng randomizes the (Y, Z) representatives."""
    if D1 < 1 or D2 < 1:
        raise ValueError("moduli must be positive")
    rows = _s_big_classes(D1, D2)
    if rng is not None:
        rows = _randomize_yz(rows, D1, D2, rng)
    b1, c1, b2, c2, y1, z1, y2, z2 = rows.T
    q = D1 * D2
    num = (m1 * b1 + n1 * (y1 * D2 - z1 * b2)) * D2 + (m2 * b2 + n2 * (y2 * D1 - z2 * b1)) * D1
    return _sum_phases(num, q)


_ZERO = ExponentialSumValue(0j, 0)


def kloosterman_sw(args: KloostermanArgs) -> ExponentialSumValue:
    (m1, m2), (n1, n2), (c1, c2) = args.m, args.n, args.c
    name = args.w.name
    if name == "w4":
        if n2 * c1 != m1 * c2 * c2 or c1 % c2:
            return _ZERO
        return s_tilde(-n2, m2, m1, c2, c1)
    if name == "w5":
        if n1 * c2 != m2 * c1 * c1 or c2 % c1:
            return _ZERO
        return s_tilde(n1, m1, m2, c1, c2)
    if name == "wl":
        return s_big(-n2, -n1, m1, m2, c1, c2)
    raise UnsupportedWeylElement(f"no Kloosterman sum for {name}")


def kloosterman(w, m, n, c) -> ExponentialSumValue:
    return kloosterman_sw(KloostermanArgs(tuple(m), tuple(n), tuple(c), w))


def bound_w4(m, n, c) -> float:
    return float(divisor_count(c[0]) * gcd(gcd(abs(m[1]), abs(n[1])), c[1]) * c[0])


def bound_w5(m, n, c) -> float:
    return float(divisor_count(c[1]) * gcd(gcd(abs(m[1]), abs(n[0])), c[0]) * c[1])


def bound_wl_squared(m, n, c) -> float:
    c1, c2 = c
    g = gcd(c1, c2)
    d = c1 * c2 // g
    return float(divisor_count(c1) ** 2 * divisor_count(c2) ** 2 * gcd(abs(m[0] * n[1]), d)
                 * gcd(abs(m[1] * n[0]), d) * g * c1 * c2)


@dataclass
class AuditReport:
    modulus_bound: int
    checked: dict = field(default_factory=dict)
    nonzero: dict = field(default_factory=dict)
    max_ratio: dict = field(default_factory=dict)
    argmax: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"modulus_bound": self.modulus_bound, "checked": self.checked, "nonzero": self.nonzero,
                "max_ratio": self.max_ratio, "argmax": {k: list(map(list, v)) for k, v in self.argmax.items()}}


def audit_bounds(C: int, entries=(1, 2, 3), slack: float = 1e-9) -> AuditReport:
    """Check the three Kloosterman bounds on every m, n in entries^2 and c_i <= C."""
    if C > 50:
        raise ValueError("audit modulus bound must be at most 50")
    report = AuditReport(C)
    tuples = [(m1, m2) for m1 in entries for m2 in entries]
    checks = (
        ("w4", lambda m, n, c, v: abs(v) / bound_w4(m, n, c)),
        ("w5", lambda m, n, c, v: abs(v) / bound_w5(m, n, c)),
        ("wl", lambda m, n, c, v: abs(v) ** 2 / bound_wl_squared(m, n, c)),
    )
    for name, ratio_fn in checks:
        report.checked[name] = 0
        report.nonzero[name] = 0
        report.max_ratio[name] = 0.0
        report.argmax[name] = None
        for c1 in range(1, C + 1):
            for c2 in range(1, C + 1):
                for m in tuples:
                    for n in tuples:
                        val = kloosterman(name, m, n, (c1, c2))
                        report.checked[name] += 1
                        if val.term_count == 0:
                            continue
                        report.nonzero[name] += 1
                        ratio = ratio_fn(m, n, (c1, c2), val.value)
                        if ratio > 1 + slack:
                            raise BoundViolated({"w": name, "m": m, "n": n, "c": (c1, c2), "value": val.value,
                                                 "ratio": ratio})
                        if ratio > report.max_ratio[name]:
                            report.max_ratio[name] = ratio
                            report.argmax[name] = (m, n, (c1, c2))
    return report


def tabulate(w, m_values, n_values, c_values):
    """Rows (w, m1, m2, n1, n2, c1, c2, Re S, Im S, term_count)."""
    w = WeylElement.get(w)
    rows = []
    for m in m_values:
        for n in n_values:
            for c in c_values:
                val = kloosterman(w, m, n, c)
                rows.append((w.name, m[0], m[1], n[0], n[1], c[0], c[1], val.value.real, val.value.imag,
                             val.term_count))
    return rows
