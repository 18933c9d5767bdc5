"""Reference values for the unit tests, computed independently with mpmath.

Kernels come straight from their integral / derivative definitions (mpmath
quadrature and numerical differentiation at 30 digits); tails integrate the
radial density.  Run once and paste the printed values into the tests:

    python3 tests/oracles/compute_oracles.py
"""
from mpmath import mp, mpf, exp, sinh, cosh, sqrt, pi, quad, diff, inf, erfc, log, gamma

mp.dps = 30


def normal_tail(x):
    return erfc(mpf(x) / sqrt(2)) / 2


def q3(t, r):
    t, r = mpf(t), mpf(r)
    ratio = r / sinh(r) if r != 0 else mpf(1)
    return exp(-t / 2) / (2 * pi * t) ** 1.5 * ratio * exp(-r * r / (2 * t))


def q2(t, r):
    t, r = mpf(t), mpf(r)

    def f(w):
        s = r + w * w
        return 2 * w * s * exp(-s * s / (2 * t)) / sqrt(2 * sinh(r + w * w / 2) * sinh(w * w / 2))

    return sqrt(2) * exp(-t / 8) / (2 * pi * t) ** 1.5 * quad(f, [0, 0.5, 2, inf])


def millson(q, d):
    def qd(t, r):
        t, r = mpf(t), mpf(r)
        return -exp(-(d - 2) * t / 2) / (2 * pi * sinh(r)) * diff(lambda s: q(t, s), r)

    return qd


q5 = millson(q3, 5)
q7 = millson(q5, 7)
q4 = millson(q2, 4)
q6 = millson(q4, 6)
KERNELS = {2: q2, 3: q3, 4: q4, 5: q5, 6: q6, 7: q7}


def omega(d):
    return 2 * pi ** (mpf(d) / 2) / gamma(mpf(d) / 2)


def tail(d, t, x):
    t, x = mpf(t), mpf(x)
    T = max(x * sqrt(t) + (d - 1) * t / 2, 0)
    peak = max(T, (d - 1) * t / 2)
    f = lambda r: omega(d) * KERNELS[d](t, r) * sinh(r) ** (d - 1)
    return quad(f, [T, peak, peak + 15 * sqrt(t) + 1])


def sharp1(t):
    t = mpf(t)

    def f(w):
        u = w * w
        y = u * sqrt(t) + t / 2
        a = 2 * sinh((u * sqrt(t) + t) / 2) * sinh(u * sqrt(t) / 2) / cosh(y)
        ft = a ** -0.5 * (1 - exp(-2 * y)) / sqrt(1 + exp(-2 * y)) - 1
        return 2 * w * exp(-u * u / 2) * ft

    return quad(f, [0, 0.1, 1, sqrt(12)]) / sqrt(2 * pi)


def show(label, v):
    print(f"{label:32s} {mp.nstr(v, 17)}")


if __name__ == "__main__":
    for x in [1, -2, 5, 10, 30]:
        show(f"Phi({x})", normal_tail(x))
    for x in [38, 40]:
        show(f"log Phi({x})", log(normal_tail(x)))
    show("q3(1,1)", q3(1, 1))
    show("q3(0.5,2)", q3(0.5, 2))
    show("q2(1,0)", q2(1, 0))
    show("q2(1,1)", q2(1, 1))
    show("q2(0.1,0.5)", q2(0.1, 0.5))
    show("log q2(100,50)", log(q2(100, 50)))
    show("q5(1,1)", q5(1, 1))
    show("q5(2,0.5)", q5(2, 0.5))
    show("q7(1,1)", q7(1, 1))
    show("q4(1,1)", q4(1, 1))
    show("q4(2,0.5)", q4(2, 0.5))
    mp.dps = 20
    show("q6(1,1)", q6(1, 1))
    mp.dps = 30
    show("tail3(1,0)", tail(3, 1, 0))
    show("tail3(5,1.3)", tail(3, 5, 1.3))
    show("tail3(100,0)", tail(3, 100, 0))
    show("tail5(2,0.5)", tail(5, 2, 0.5))
    show("tail7(1,-0.5)", tail(7, 1, -0.5))
    show("tail2(5,0.3)", tail(2, 5, 0.3))
    show("tail2(1,0)", tail(2, 1, 0))
    show("sharp1(1)", sharp1(1))
    show("sharp1(10)", sharp1(10))
    mp.dps = 15
    show("tail4(2,1)", tail(4, 2, 1))
