"""Independent reference values frozen into the C++ unit tests.

Everything here uses mpmath at 30 digits and brute-force definitions, never the
library under test. Run: python3 tests/reference/make_reference.py
"""
import mpmath as mp
import numpy as np

mp.mp.dps = 30


def e1_quad(x):
    return mp.quad(lambda u: mp.exp(-u) / u, [x, x + 1, x + 10, mp.inf])


def a_sq_hyp(L, n):
    return mp.gamma(n + L) / (mp.gamma(L) * mp.gamma(n + 1))


def sigma_sq_series(L, r):
    return mp.nsum(lambda n: a_sq_hyp(L, n) * r ** (2 * n), [0, mp.inf])


def s_planar(L, r):
    total, n = mp.mpf(0), 0
    while True:
        t = mp.log(a_sq_hyp(L, n)) + 2 * n * mp.log(r)
        if t > 0:
            total += t
        elif n > 10 and t < 0 and n > (L - 1) / (1 - r * r) * 2:
            break
        n += 1
    return total


def neg_moment_2d(theta, t, w):
    # E|w + zeta/t|^{-theta}, zeta standard complex Gaussian, as a plain
    # double integral over the Gaussian in Cartesian coordinates.
    def f(x, y):
        z = w + mp.mpc(x, y) / t
        return abs(z) ** (-theta) * mp.exp(-(x * x + y * y)) / mp.pi
    sx, sy = -t * mp.re(w), -t * mp.im(w)
    xs = sorted(set([-8, sx, 8]))
    ys = sorted(set([-8, sy, 8]))
    return mp.quad(f, xs, ys)


def determinantal(r):
    return mp.nprod(lambda k: 1 - r ** (2 * k), [1, mp.inf])


def lemma6_defect(coeffs, k):
    deg = len(coeffs) - 1
    M = k * k * deg
    p = np.poly1d(list(reversed(coeffs)))
    best = -np.inf
    w = np.exp(2j * np.pi / k)
    for i in range(M):
        tau = np.exp(2j * np.pi * i / M)
        with np.errstate(divide="ignore"):
            avg = np.mean([np.log(abs(p(tau * w ** j))) for j in range(1, k + 1)])
        best = max(best, avg)
    return np.log(abs(coeffs[0])) - best


def gap_ratio(L, r0, N):
    sf = (1 - r0 ** 2) ** (-L)
    sg = N * mp.nsum(lambda k: a_sq_hyp(L, k * N) * r0 ** (2 * k * N), [1, mp.inf])
    return (sf - sg) / sf


def main():
    for x in (0.5, 1, 2, 9, 50):
        print(f"E1({x}) = {mp.nstr(e1_quad(mp.mpf(x)), 17)}")
    print("a_10^2 (L=2.5) =", mp.nstr(a_sq_hyp(mp.mpf(2.5), 10), 17))
    print("a_1000^2 (L=0.5) =", mp.nstr(a_sq_hyp(mp.mpf(0.5), 1000), 17))
    print("sigma^2 series (L=0.5, r=0.9) =", mp.nstr(sigma_sq_series(mp.mpf(0.5), mp.mpf(0.9)), 17))
    print("power-law sigma^2 (L=0.5, r=0.6) =",
          mp.nstr(1 + mp.nsum(lambda n: n ** (-0.5) * mp.mpf(0.36) ** n, [1, mp.inf]), 17))
    print("S_F (L=2, r=0.9) =", mp.nstr(s_planar(mp.mpf(2), mp.mpf(0.9)), 17))
    print("S_F (L=3, r=0.99) =", mp.nstr(s_planar(mp.mpf(3), mp.mpf(0.99)), 17))
    for th, t, w in ((0.5, 1.0, 1.0), (0.25, 2.0, mp.mpc(1, 1)), (1.0, 0.5, 0.3)):
        print(f"neg_moment({th}, {t}, {w}) =", mp.nstr(neg_moment_2d(mp.mpf(th), mp.mpf(t), mp.mpc(w)), 15))
    for r in (0.3, 0.5, 0.7):
        print(f"determinantal({r}) =", mp.nstr(determinantal(mp.mpf(r)), 17))
    print("lemma6 (1 + 0.5z, k=4) =", repr(lemma6_defect([1, 0.5], 4)))
    print("gap ratio (L=0.5, r0=0.99, N=64) =", mp.nstr(gap_ratio(mp.mpf(0.5), mp.mpf("0.99"), 64), 17))
    print("lemma6 (2 - z + 0.25 z^3, k=5) =", repr(lemma6_defect([2, -1, 0, 0.25], 5)))


if __name__ == "__main__":
    main()

