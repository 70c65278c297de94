"""High-precision reference values for the golden tests.

Run with `python3 golden.py`; every number printed here is frozen into
`tests/golden.rs`. Everything is computed from the defining integrals or
from mpmath's arbitrary-precision special functions, never from the
crate's own evaluation paths.
"""
from mpmath import mp, mpf, mpc, sqrt, pi, exp, erfc, quad, quadosc, inf, conj, re, im, hyp2f1, gammainc, nsum

mp.dps = 40


def gauss_series_with_tail(a, b, c, z, n_terms=20000):
    """Truncated Gauss series plus a geometric tail bound (terms positive)."""
    t = mpf(1)
    s = mpf(1)
    for n in range(n_terms):
        t = t * (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        s += t
    ratio = z * (a + n_terms) * (b + n_terms) / ((c + n_terms) * (n_terms + 1))
    bound = abs(t) * max(ratio, z) / (1 - max(ratio, z))
    return s, bound


def half_line_norm(q, p, hbar=1):
    e = q - 1
    c = hbar * sqrt(2 * (q + 1))
    mu = 2 / e
    f = lambda x: (1 + 2 * e * abs(im(p)) * x / c + e**2 * abs(p) ** 2 * x**2 / c**2) ** (-mu)
    return quad(f, [0, 1, 10, 100, 1000, inf])


def mean_energy(q, p, hbar=1, m=1):
    e = q - 1
    c = hbar * sqrt(2 * (q + 1))
    mu = 2 / e
    s = 1 if im(p) > 0 else -1
    f = lambda x: (1 - s * 1j * e * p * x / c) ** (-mu * q) * (1 + s * 1j * e * conj(p) * x / c) ** (-mu)
    integral = quad(f, [0, 1, 10, 100, 1000, inf])
    return re(integral * p**2 / (2 * m) / half_line_norm(q, p, hbar))


def overlap_integral(q, p, k, hbar=1):
    """Raw half-line Fourier integral of the q-Gamow profile (no normalization)."""
    e = q - 1
    c = hbar * sqrt(2 * (q + 1))
    mu = 2 / e
    if im(p) < 0:
        f = lambda y: -((1 + 1j * e * p * y / c) ** (-mu)) * exp(1j * k * y / hbar)
    else:
        f = lambda y: (1 - 1j * e * p * y / c) ** (-mu) * exp(-1j * k * y / hbar)
    return quadosc(f, [0, inf], omega=abs(k) / hbar)


def overlap(q, p, k, hbar=1):
    a = sqrt(half_line_norm(q, p, hbar))
    return overlap_integral(q, p, k, hbar) / (a * sqrt(2 * pi * hbar))


def show(name, v):
    if isinstance(v, mpc):
        print(f"{name} = ({mp.nstr(re(v), 17)}, {mp.nstr(im(v), 17)})")
    else:
        print(f"{name} = {mp.nstr(v, 17)}")


q = mpf("1.15")
p = mpc(1, "-0.1")

a, b, c = mpf(1) / 2, (5 - q) / (2 * (q - 1)), (3 + q) / (2 * (q - 1))
z = re(p) ** 2 / abs(p) ** 2
series, bound = gauss_series_with_tail(a, b, c, z)
show("hyp2f1_norm_q115", series)
print("  tail bound", mp.nstr(bound, 3), " mpmath diff", mp.nstr(series - hyp2f1(a, b, c, z), 3))

g_half_1 = sqrt(pi) * erfc(1)
show("gamma_upper_m05_1", 2 * (exp(-1) - g_half_1))

e = q - 1
cc = sqrt(2 * (q + 1))
show("q_wavefunction_q115_xm3", -((1 - 1j * e * p * (-3) / cc) ** (2 / (1 - q))))

norm = half_line_norm(q, p)
show("q_norm_q115", norm)
show("normalization_a_q115", sqrt(norm))
show("q_energy_q115", mean_energy(q, p))
show("q_energy_q15_imag", mean_energy(mpf("1.5"), mpc(0, "-0.5")))

show("q_overlap_q115_k08", overlap(q, p, mpf("0.8")))
show("q_osc_integral_q115_k08", overlap_integral(q, p, mpf("0.8")))
show("q_bw_q115_peak", abs(overlap(q, p, mpf(1))) ** 2)
show("gamow_overlap_p1m01_k08", 1j * sqrt(mpf("0.1") / pi) / (p - mpf("0.8")))


def overlap_closed(q, p, k, hbar=1):
    a2 = hbar / (5 - q) * sqrt(2 * (q + 1)) / abs(p) * hyp2f1(mpf(1) / 2, (5 - q) / (2 * (q - 1)), (3 + q) / (2 * (q - 1)), re(p) ** 2 / abs(p) ** 2)
    amp = sqrt(a2)
    zz = sqrt(2 * (q + 1)) * k / ((1 - q) * p)
    return (-1j * sqrt(hbar / (2 * pi * amp)) * (sqrt(2 * (q + 1)) / ((1 - q) * p)) ** (2 / (q - 1))
            * k ** ((3 - q) / (q - 1)) * exp(zz) * gammainc((3 - q) / (1 - q), zz))


show("q_overlap_closed_q15_p1m05_k1", overlap_closed(mpf("1.5"), mpc(1, "-0.5"), mpf(1)))
print("  sqrt(A) at q=1.5, p=1-0.5i:", mp.nstr(sqrt(sqrt(half_line_norm(mpf("1.5"), mpc(1, "-0.5")))), 17))

# sampled rows of the q = 1.15 curve on k in [0, 3], 300 steps
for i in [0, 27, 100, 180, 299]:
    k = mpf(3) * i / 299
    v = abs(overlap(q, p, k)) ** 2 if k != 0 else abs(quad(lambda y: -((1 + 1j * e * p * y / cc) ** (-2 / e)), [0, inf]) / (sqrt(norm) * sqrt(2 * pi))) ** 2
    print(f"curve_row {i} k={mp.nstr(k, 17)} density={mp.nstr(v, 17)}")
