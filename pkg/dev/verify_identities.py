"""Dev oracle: verify the paper's displayed identities with exact discrete algebra.

Setup: u = random trig polynomial (kmax small), w = band-limited periodic
weight.  All products stay below Nyquist, so spectral derivatives and the
rectangle rule are exact; any residual beyond ~1e-12 means the displayed
coefficients are wrong.  Integration by parts is exact on the torus, and the
identities hold for arbitrary smooth weights, so a periodic w is a valid
stand-in for the cutoff.
"""
import numpy as np

N = 512
L = 2 * np.pi
x = np.arange(N) * L / N
k = np.fft.fftfreq(N, d=1.0 / N) * (2 * np.pi / L)


def D(u, order=1):
    return np.real(np.fft.ifft((1j * k) ** order * np.fft.fft(u)))


def I(f):
    return (L / N) * np.sum(f)


rng = np.random.default_rng(0)


def randu(kmax=6):
    u = np.zeros(N)
    for m in range(1, kmax + 1):
        a, b = rng.standard_normal(2)
        u += a * np.cos(m * x) + b * np.sin(m * x)
    return u / kmax


w = 2.0 + np.sin(x) + 0.3 * np.cos(2 * x)
wd = [D(w, j) if j else w for j in range(6)]


def check(name, lhs, rhs_terms, u):
    # rhs_terms: list of (coeff, orders tuple, wj)
    rhs = sum(c * I(np.prod([D(u, o) if o else u for o in orders], axis=0) * wd[j])
              for c, orders, j in rhs_terms)
    scale = max(abs(lhs), max(abs(c * I(np.prod([D(u, o) if o else u for o in orders], axis=0) * wd[j]))
                              for c, orders, j in rhs_terms))
    print(f"{name}: rel residual = {abs(lhs - rhs) / scale:.3e}")
    return abs(lhs - rhs) / scale


u = randu()

# ---- KATO identity, KdV convention u_t = -u''' - u u' ----
for kk in (1, 2, 3):
    ut = -D(u, 3) - u * D(u, 1)
    # d/dt int (d^k u)^2 w = 2 int d^k u d^k(u_t) w
    lhs = 2 * I(D(u, kk) * D(ut, kk) * w) + 3 * I(D(u, kk + 1) ** 2 * wd[1])
    # rhs: int (d^k u)^2 w''' + int d_x(w u)(d^k u)^2 + int d^k u [d^k; u] u_x w
    comm = D(u * D(u, 1), kk) - u * D(u, kk + 1)
    rhs = I(D(u, kk) ** 2 * wd[3]) + I((wd[1] * u + w * D(u, 1)) * D(u, kk) ** 2) \
        + I(D(u, kk) * comm * w)
    print(f"KATO k={kk}: rel residual = {abs(lhs - rhs) / max(abs(lhs), 1e-30):.3e}")

# ---- fifth-order convention u_t = d^5 u + u d^3 u ----
ut = D(u, 5) + u * D(u, 3)
utx = D(ut, 1)

# P2B_KWON: d/dt int u (u_x)^2 w
lhs = I(ut * D(u, 1) ** 2 * w) + 2 * I(u * D(u, 1) * utx * w)
terms_p2b = [
    (-5, (1, 3, 3), 0),
    (-5, (0, 3, 3), 1),
    (28 / 3, (2, 2, 2), 1),
    (21, (1, 2, 2), 2),
    (5, (0, 2, 2), 3),
    (-10 / 3, (1, 1, 1), 4),
    (-1, (0, 1, 1), 5),
    (4, (0, 1, 2, 2), 0),
    (3, (0, 0, 2, 2), 1),
    (-9 / 4, (1, 1, 1, 1), 1),
    (-1, (0, 2, 1, 1), 1),
    (-4, (0, 1, 1, 1), 2),
    (-1, (0, 0, 1, 1), 3),
]
check("P2B_KWON", lhs, terms_p2b, u)

# P3B_KWON: d/dt int u (u_xx)^2 w  (misprint read as (u_xx)^2 w'')
lhs = I(ut * D(u, 2) ** 2 * w) + 2 * I(u * D(u, 2) * D(ut, 2) * w)
terms_p3b = [
    (-5, (1, 4, 4), 0),
    (-5, (0, 4, 4), 1),
    (5, (3, 3, 3), 0),
    (25, (2, 3, 3), 1),
    (15, (1, 3, 3), 2),
    (5, (0, 3, 3), 3),
    (2, (0, 1, 3, 3), 0),
    (3, (0, 0, 3, 3), 1),
    (-25 / 3, (2, 2, 2), 3),
    (-5, (1, 2, 2), 4),
    (-1, (0, 2, 2), 5),
    (-1, (1, 2, 2, 2), 0),
    (-3, (0, 2, 2), 1),
    (-2, (1, 1, 2, 2), 1),
    (-4, (0, 1, 2, 2), 2),
    (-1, (0, 0, 2, 2), 3),
]
check("P3B_KWON", lhs, terms_p3b, u)

# D1B_KWON: d/dt int u^3 w
lhs = I(3 * u ** 2 * ut * w)
terms_d1b = [
    (-15, (1, 2, 2), 0),
    (-9, (0, 2, 2), 1),
    (10, (1, 1, 1), 2),
    (12, (0, 1, 1), 3),
    (-1, (0, 0, 0), 5),
    (9, (0, 1, 1, 1), 0),
    (27 / 2, (0, 0, 1, 1), 1),
    (-3 / 4, (0, 0, 0, 0), 3),
]
check("D1B_KWON", lhs, terms_d1b, u)

# ENERGY exact identity: d/dt int u^2 psi = -5 int (u'')^2 psi' + 5 int (u')^2 psi''' - int u^2 psi^(5) + 2 int u F psi
F = randu()
ut2 = D(u, 5) + F
lhs = I(2 * u * ut2 * w)
rhs = -5 * I(D(u, 2) ** 2 * wd[1]) + 5 * I(D(u, 1) ** 2 * wd[3]) - I(u ** 2 * wd[5]) + 2 * I(u * F * w)
print(f"ENERGY base identity: rel residual = {abs(lhs - rhs) / abs(lhs):.3e}")
