"""Brute-force exponential sums straight from the residue-class definitions (fractions + mpmath)."""

from fractions import Fraction
from math import gcd

import mpmath as mp


def e(x: Fraction):
    x = x - (x.numerator // x.denominator)
    return mp.expjpi(2 * mp.mpf(x.numerator) / x.denominator)


def s_tilde(m1, n1, n2, D1, D2):
    q = D2 // D1
    total = mp.mpc(0)
    for C1 in range(D1):
        if gcd(C1, D1) != 1:
            continue
        inv1 = pow(C1, -1, D1) if D1 > 1 else 0
        for C2 in range(D2):
            if gcd(C2, q) != 1:
                continue
            inv2 = pow(C2, -1, q) if q > 1 else 0
            total += e(Fraction(n1 * inv1 * C2, D1) + Fraction(n2 * inv2, q) + Fraction(m1 * C1, D1))
    return total


def _yz(B, C, D):
    # any (Y, Z) with Y B + Z C = 1 mod D, found by search
    for Y in range(D):
        for Z in range(D):
            if (Y * B + Z * C - 1) % D == 0:
                return Y, Z
    raise ValueError


def s_big(m1, m2, n1, n2, D1, D2):
    total = mp.mpc(0)
    count = 0
    for B1 in range(D1):
        for C1 in range(D1):
            if gcd(gcd(B1, C1), D1) != 1:
                continue
            for B2 in range(D2):
                for C2 in range(D2):
                    if gcd(gcd(B2, C2), D2) != 1:
                        continue
                    if (D1 * C2 + B1 * B2 + D2 * C1) % (D1 * D2):
                        continue
                    Y1, Z1 = _yz(B1, C1, D1)
                    Y2, Z2 = _yz(B2, C2, D2)
                    ph = (Fraction(m1 * B1 + n1 * (Y1 * D2 - Z1 * B2), D1)
                          + Fraction(m2 * B2 + n2 * (Y2 * D1 - Z2 * B1), D2))
                    total += e(ph)
                    count += 1
    return total, count


if __name__ == "__main__":
    print("s_tilde(1,1,1;2,4) =", s_tilde(1, 1, 1, 2, 4))
    print("s_tilde(1,1,1;1,5) =", s_tilde(1, 1, 1, 1, 5))
    print("s_big(1,1,1,1;2,2) =", s_big(1, 1, 1, 1, 2, 2))
    print("s_big(1,2,1,3;2,4) =", s_big(1, 2, 1, 3, 2, 4))
    print("s_big(2,1,1,1;3,6) =", s_big(2, 1, 1, 1, 3, 6))
