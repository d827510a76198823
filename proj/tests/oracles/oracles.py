"""Independent scalar oracles for the frozen expected values in the C++ tests.

Run with `python3 tests/oracles/oracles.py`; the printed numbers are the
constants pasted into tests/unit/*.cpp and tests/acceptance/acceptance.cpp.
Everything here uses mpmath quadrature or closed forms, never the library.
"""
import mpmath as mp

mp.mp.dps = 30
pi = mp.pi


def smooth_step(t):
    if t <= 0:
        return mp.mpf(0)
    if t >= 1:
        return mp.mpf(1)
    a, b = mp.e ** (-1 / t), mp.e ** (-1 / (1 - t))
    return a / (a + b)


def m_below(rho, A):
    return 1 - smooth_step((rho - A / 2) / (A / 2))


def section(name):
    print(f"\n# {name}")


section("geometric grid (1e-3, 1e2, 6)")
print([mp.nstr(mp.mpf("1e-3") * mp.mpf(10) ** k, 17) for k in range(6)])

section("Gaussian e^{-|x|^2/2}: ||.||^2_{Hdot^s} by quadrature of the rho integral")
for s in [0, mp.mpf(1) / 2, mp.mpf(5) / 6, 1]:
    # fhat = (2 pi)^{3/2} e^{-rho^2/2}
    q = 4 * pi / (2 * pi) ** 3 * mp.quad(
        lambda r: r ** (2 * s + 2) * (2 * pi) ** 3 * mp.e ** (-r * r), [0, mp.inf])
    print(f"s={mp.nstr(s, 6)}: quad={mp.nstr(q, 17)} 2piGamma={mp.nstr(2 * pi * mp.gamma(s + 1.5), 17)}")

section("||P_{>A} e^{-|x|^2/2}||_{L2}^2")
for A in [1, 2, 4]:
    q = 4 * pi / (2 * pi) ** 3 * mp.quad(
        lambda r: (1 - m_below(r, A)) ** 2 * r * r * (2 * pi) ** 3 * mp.e ** (-r * r),
        [0, A / 2, A, mp.inf])
    print(f"A={A}: {mp.nstr(q, 17)}")

section("ring energy of u = e^{-r^2} on (0, inf): 4 pi int r^2 (2r e^{-r^2})^2 dr")
G = 4 * pi * mp.quad(lambda r: r * r * (2 * r * mp.e ** (-r * r)) ** 2, [0, mp.inf])
print(mp.nstr(G, 17), "closed form", mp.nstr(3 * pi ** 1.5 / (2 * mp.sqrt(2)), 17))

section("energy of u = e^{-r^2}, ut = 0, p = 4")
P = 4 * pi * mp.quad(lambda r: r * r * mp.e ** (-5 * r * r), [0, mp.inf])
print("||u||_5^5 =", mp.nstr(P, 17))
print("E defocusing =", mp.nstr(G / 2 + P / 5, 17))
print("E focusing =", mp.nstr(G / 2 - P / 5, 17))
Astar = (5 * G / (2 * P)) ** (mp.mpf(1) / 3)
print("focusing zero-energy amplitude A* =", mp.nstr(Astar, 17))

section("reduction identity, u = 1/r on [1,2]")
print("LHS =", mp.quad(lambda r: r * r * (1 / r ** 2) ** 2, [1, 2]))

section("explicit singular constant C = (theta(1-theta))^{1/(p-1)}")
for p in [mp.mpf("3.5"), mp.mpf(4), mp.mpf("4.5")]:
    th = 2 / (p - 1)
    print(f"p={p}: C={mp.nstr((th * (1 - th)) ** (1 / (p - 1)), 17)}")

section("p = 5 tail: phi(r) = sqrt(3) r (1 + 3 r^2)^{-1/2} - 1")
for r in [10, 20, 100]:
    print(r, mp.nstr(mp.sqrt(3) * r / mp.sqrt(1 + 3 * r * r) - 1, 17))

section("ladder g(beta)")
g = lambda b: (mp.mpf(1.5) ** (1 - b) + mp.mpf(0.5) ** (1 - b)) / 2
print("g(0.5) =", mp.nstr(g(0.5), 17), "increment =", mp.nstr(mp.log(2 / (1 + g(0.5)), 2), 17))

section("Y_{s_p} exponents p=4")
p = mp.mpf(4)
sp = mp.mpf(3) / 2 - 2 / (p - 1)
print("time", 2 * p / (sp + 1), "space", 2 * p / (2 - sp))

section("V_R norm slopes, W = 1/r model")
for (q, r) in [(mp.mpf(48) / 11, mp.mpf(48) / 7), (8, 8)]:
    print(q, r, "slope", 3 / r + 1 / q - 1)

section("radial pointwise ratio, Gaussian e^{-r^2/2}, s = 5/6")
s = mp.mpf(5) / 6
sup = mp.findroot(lambda r: mp.diff(lambda x: x ** (mp.mpf(1.5) - s) * mp.e ** (-x * x / 2), r), 0.8)
val = sup ** (mp.mpf(1.5) - s) * mp.e ** (-sup * sup / 2)
print("sup at r =", mp.nstr(sup, 17), "ratio =", mp.nstr(val / mp.sqrt(2 * pi * mp.gamma(s + 1.5)), 17))
