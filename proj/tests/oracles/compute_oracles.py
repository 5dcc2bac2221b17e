"""Independent arbitrary-precision oracle for the frozen values in tests/oracle_values.hpp.

Every number here comes from mpmath quadrature or direct high-precision
evaluation of the defining integrals, never from the C++ closed forms.
Run: python3 tests/oracles/compute_oracles.py
"""
import mpmath as mp

mp.mp.dps = 40
PI = mp.pi


def u(s, x):
    return x * mp.exp(-x**2 / (2 * s**2))


def du(s, x):
    return mp.exp(-x**2 / (2 * s**2)) * (1 - x**2 / s**2)


def sinc2(c, t):
    # sin^2(c t) / (pi^2 t^2) with the removable point patched
    if t == 0:
        return c**2 / PI**2
    return mp.sin(c * t)**2 / (PI**2 * t**2)


def quad_line(f, width, period=1):
    cut = 14 * width
    pts = [-cut + k * period for k in range(int(2 * cut / period) + 1)] + [cut]
    return mp.quad(f, pts)


def eq5(s):
    return quad_line(lambda x: mp.exp(-x**2 / (2 * s**2)) * mp.sin(mp.sqrt(2) * PI * x)**2 / PI**2, s, 0.5)


def J(s):
    return quad_line(lambda x: mp.exp(-x**2 / (2 * s**2)) * sinc2(mp.sqrt(2) * PI, x), s, 0.5)


def term_I(s):
    # (1/4) * int e^{-v^2/2s^2} dv * eq5 integral; the v-integral by quadrature too
    gv = quad_line(lambda v: mp.exp(-v**2 / (2 * s**2)), s, max(s, 1))
    return gv * eq5(s) / 4


def l2(s):
    return quad_line(lambda x: u(s, x)**2, s, max(s, 1))


def var_exact(s):
    v2 = quad_line(lambda v: v**2 * mp.exp(-v**2 / (2 * s**2)), s, max(s, 1))
    return l2(s) + term_I(s) - v2 * J(s) / 4


def energy(s):
    return quad_line(lambda x: du(s, x)**2, s, max(s, 1)) / 2


def energy_ub(s):
    return quad_line(lambda x: mp.exp(-x**2 / s**2) * (1 + x**4 / s**4), s, max(s, 1))


def gcos(a, b):
    w = 1 / mp.sqrt(2 * b)
    return quad_line(lambda x: mp.exp(-b * x**2) * mp.cos(a * x), w, 0.25)


def number_variance(R):
    # int_{[-R,R]^2} K^2 = int_{-2R}^{2R} (2R - |t|) sinc^2(pi t) dt
    pts = [k * mp.mpf(1) / 2 for k in range(0, int(4 * R) + 1)]
    half = mp.quad(lambda t: (2 * R - t) * sinc2(PI, t), pts)
    return 2 * R - 2 * half


def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")


show("eval_u(1,1)", u(1, 1))
show("eval_u(2,-2)", u(2, -2))
show("eval_du(1,2)", du(1, 2))
show("linear_stat(1,[0.5,2])", u(1, mp.mpf('0.5')) + u(1, 2))
grid = [mp.mpf(x) for x in ['0.1', '0.5', '1', '2', '5', '10', '20']]
for s in grid:
    show(f"eq5({s})", eq5(s))
for s in grid:
    show(f"term_I({s})", term_I(s))
for s in grid:
    show(f"u_l2({s})", l2(s))
for s in grid:
    show(f"energy({s})", energy(s))
for s in grid:
    show(f"energy_ub({s})", energy_ub(s))
for s in grid:
    show(f"J({s})", J(s))
for s in [mp.mpf(x) for x in ['0.1', '0.5', '1', '2', '4', '5', '8', '10', '16', '20']]:
    show(f"var_exact({s})", var_exact(s))
for a, b in [(0, 1), (2 * mp.sqrt(2) * PI, mp.mpf(1) / 2), (1, 1), (3, mp.mpf('0.25')), (5, 2)]:
    show(f"gcos({mp.nstr(a, 8)},{b})", gcos(a, b))
# The 1/t^2 tail is not alternating, which defeats quadosc's acceleration.
# Integrating by parts turns int_0^inf sin^2(ct)/t^2 into c * int_0^inf sin(2ct)/t,
# whose alternating tail quadosc handles to full precision.
def sinc2_line(c):
    return 2 * c * mp.quadosc(lambda t: mp.sin(2 * c * t) / t if t != 0 else 2 * c, [0, mp.inf], omega=2 * c)


show("sinc2_integral(1)", sinc2_line(mp.mpf(1)))
show("sinc2_integral(sqrt2 pi)/pi^2", sinc2_line(mp.sqrt(2) * PI) / PI**2)
for R in [1, 2, 5, 10]:
    show(f"number_variance({R})", number_variance(mp.mpf(R)))
