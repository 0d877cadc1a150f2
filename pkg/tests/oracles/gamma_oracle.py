"""Independent multiple-precision values for gamma factors and Barnes integrals.

Run as a script; prints the values frozen in the test suite. Uses mpmath only.
"""

import mpmath as mp

mp.mp.dps = 30


def barnes_first_line(a, b, c, d):
    f = lambda t: mp.gamma(a + 1j * t) * mp.gamma(b + 1j * t) * mp.gamma(c - 1j * t) * mp.gamma(d - 1j * t)
    return mp.quad(f, [-mp.inf, -20, 0, 20, mp.inf]) / (2 * mp.pi)


def barnes_second_line(a, b, c, d, e, f):
    g = lambda t: (mp.gamma(a + 1j * t) * mp.gamma(b + 1j * t) * mp.gamma(c + 1j * t)
                   * mp.gamma(d - 1j * t) * mp.gamma(e - 1j * t) / mp.gamma(f + 1j * t))
    return mp.quad(g, [-mp.inf, -20, 0, 20, mp.inf]) / (2 * mp.pi)


if __name__ == "__main__":
    print("log_gamma(1+2i) =", mp.loggamma(1 + 2j))
    print("gamma_R(1+i) =", mp.pi ** (-(1 + 1j) / 2) * mp.gamma((1 + 1j) / 2))
    print("barnes1 (3/4,1/2+i,1/2,3/4-i) line =", barnes_first_line(0.75, 0.5 + 1j, 0.5, 0.75 - 1j))
    print("barnes2 (1,1/2,1/2,1/2,1/2,3) line =", barnes_second_line(1, 0.5, 0.5, 0.5, 0.5, 3))
