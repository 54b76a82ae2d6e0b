"""Fit identity coefficients over random fields to locate paper misprints.

For each identity: build the matrix of displayed-term values over many random
(u, w) pairs, least-squares fit LHS = T c.  If the residual is ~machine eps
and the system is well conditioned, the fitted c is the unique correct
coefficient vector for that term set.
"""
import numpy as np

N = 512
L = 2 * np.pi
xg = np.arange(N) * L / N
k = np.fft.fftfreq(N, d=1.0 / N) * (2 * np.pi / L)


def D(u, order=1):
    return np.real(np.fft.ifft((1j * k) ** order * np.fft.fft(u)))


def I(f):
    return (L / N) * np.sum(f)


rng = np.random.default_rng(42)


def randu(kmax=6):
    u = np.zeros(N)
    for m in range(1, kmax + 1):
        a, b = rng.standard_normal(2)
        u += a * np.cos(m * xg) + b * np.sin(m * xg)
    return u / kmax


def randw():
    c = rng.standard_normal(5) * [1, 0.5, 0.3, 0.2, 0.1]
    s = rng.standard_normal(5) * [1, 0.5, 0.3, 0.2, 0.1]
    w = 3.0 + sum(c[m - 1] * np.cos(m * xg) + s[m - 1] * np.sin(m * xg) for m in range(1, 6))
    return w


def term_val(u, wd, orders, j):
    return I(np.prod([D(u, o) if o else u for o in orders], axis=0) * wd[j])


def fit(name, lhs_fn, terms, displayed, nsamp=80):
    A = np.zeros((nsamp, len(terms)))
    b = np.zeros(nsamp)
    for i in range(nsamp):
        u = randu()
        w = randw()
        wd = [D(w, j) if j else w for j in range(6)]
        b[i] = lhs_fn(u, w, wd)
        for jcol, (orders, j) in enumerate(terms):
            A[i, jcol] = term_val(u, wd, orders, j)
    c, res, rank, sv = np.linalg.lstsq(A, b, rcond=None)
    resid = np.linalg.norm(A @ c - b) / np.linalg.norm(b)
    print(f"\n{name}: fit residual {resid:.2e}, rank {rank}/{len(terms)}, cond {sv[0]/sv[-1]:.2e}")
    for (orders, j), ci, di in zip(terms, c, displayed):
        mark = "" if abs(ci - di) < 1e-8 else "   <-- paper says %s" % str(di)
        print(f"  {str(orders):>14s} w^({j}) : {ci:+.6f}{mark}")
    return c


# ---- KATO ----
for kk in (1, 2, 3):
    def lhs_kato(u, w, wd, kk=kk):
        ut = -D(u, 3) - u * D(u, 1)
        return 2 * I(D(u, kk) * D(ut, kk) * w) + 3 * I(D(u, kk + 1) ** 2 * wd[1])

    def commterm(u, w, wd, kk=kk):
        comm = D(u * D(u, 1), kk) - u * D(u, kk + 1)
        return I(D(u, kk) * comm * w)

    # terms: (d^k u)^2 w''', d_x(wu)(d^k u)^2 split, comm
    nsamp = 40
    A = np.zeros((nsamp, 3))
    b = np.zeros(nsamp)
    for i in range(nsamp):
        u = randu()
        w = randw()
        wd = [D(w, j) if j else w for j in range(6)]
        b[i] = lhs_kato(u, w, wd)
        A[i, 0] = I(D(u, kk) ** 2 * wd[3])
        A[i, 1] = I((wd[1] * u + w * D(u, 1)) * D(u, kk) ** 2)
        A[i, 2] = commterm(u, w, wd)
    c, _, rank, sv = np.linalg.lstsq(A, b, rcond=None)
    resid = np.linalg.norm(A @ c - b) / np.linalg.norm(b)
    print(f"KATO k={kk}: coeffs {c}, residual {resid:.2e}, cond {sv[0]/sv[-1]:.2e}")


# ---- P2B_KWON ----
terms_p2b = [
    ((1, 3, 3), 0), ((0, 3, 3), 1), ((2, 2, 2), 1), ((1, 2, 2), 2),
    ((0, 2, 2), 3), ((1, 1, 1), 4), ((0, 1, 1), 5), ((0, 1, 2, 2), 0),
    ((0, 0, 2, 2), 1), ((1, 1, 1, 1), 1), ((0, 2, 1, 1), 1),
    ((0, 1, 1, 1), 2), ((0, 0, 1, 1), 3),
]
disp_p2b = [-5, -5, 28 / 3, 21, 5, -10 / 3, -1, 4, 3, -9 / 4, -1, -4, -1]


def lhs_p2b(u, w, wd):
    ut = D(u, 5) + u * D(u, 3)
    return I(ut * D(u, 1) ** 2 * w) + 2 * I(u * D(u, 1) * D(ut, 1) * w)


fit("P2B_KWON", lhs_p2b, terms_p2b, disp_p2b)

# ---- P3B_KWON ----
terms_p3b = [
    ((1, 4, 4), 0), ((0, 4, 4), 1), ((3, 3, 3), 0), ((2, 3, 3), 1),
    ((1, 3, 3), 2), ((0, 3, 3), 3), ((0, 1, 3, 3), 0), ((0, 0, 3, 3), 1),
    ((2, 2, 2), 3), ((1, 2, 2), 4), ((0, 2, 2), 5), ((1, 2, 2, 2), 0),
    ((0, 2, 2), 1), ((1, 1, 2, 2), 1), ((0, 1, 2, 2), 2), ((0, 0, 2, 2), 3),
]
disp_p3b = [-5, -5, 5, 25, 15, 5, 2, 3, -25 / 3, -5, -1, -1, -3, -2, -4, -1]


def lhs_p3b(u, w, wd):
    ut = D(u, 5) + u * D(u, 3)
    return I(ut * D(u, 2) ** 2 * w) + 2 * I(u * D(u, 2) * D(ut, 2) * w)


fit("P3B_KWON", lhs_p3b, terms_p3b, disp_p3b)

# ---- D1B_KWON ----
terms_d1b = [
    ((1, 2, 2), 0), ((0, 2, 2), 1), ((1, 1, 1), 2), ((0, 1, 1), 3),
    ((0, 0, 0), 5), ((0, 1, 1, 1), 0), ((0, 0, 1, 1), 1), ((0, 0, 0, 0), 3),
]
disp_d1b = [-15, -9, 10, 12, -1, 9, 27 / 2, -3 / 4]


def lhs_d1b(u, w, wd):
    ut = D(u, 5) + u * D(u, 3)
    return I(3 * u ** 2 * ut * w)


fit("D1B_KWON", lhs_d1b, terms_d1b, disp_d1b)
