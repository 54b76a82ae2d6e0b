"""Periodic grids, fields, spectral calculus, quadrature, and test fields.

A Field is a real sample vector on a uniform periodic grid [0, L).  All
derivatives are Fourier multipliers (exact for band-limited data, Nyquist
zeroed for odd orders).  Quadrature is the trapezoid rule, which is
spectrally accurate for smooth periodic integrands; weighted quadrature
against non-periodic cutoff weights adds the explicit right-endpoint sample
u(x_0) * w(L + shift) so that the Euler-Maclaurin boundary terms vanish
whenever the weight is flat at both window ends.

Discrete Fourier normalization used throughout: u_hat = fft(samples) / N are
the Fourier *coefficients* of the trigonometric interpolant, so Parseval
reads integral(u^2) = L * sum |u_hat_k|^2.
"""

import json

import numpy as np

from .cutoffs import ContractViolation, CutoffSpec, eval_cutoff


class SupportViolationError(ValueError):
    """A cutoff weight's ramp left the valid part of the periodic window."""


class Grid:
    """Uniform periodic grid on [0, L) with N (even) points."""

    def __init__(self, L, N):
        if N % 2 != 0 or N <= 0:
            raise ContractViolation("N must be a positive even integer")
        if L <= 0:
            raise ContractViolation("L must be positive")
        self.L = float(L)
        self.N = int(N)
        self.h = self.L / self.N
        self.x = self.h * np.arange(self.N)
        self.k = 2.0 * np.pi * np.fft.fftfreq(self.N, d=self.h)

    def __eq__(self, other):
        return isinstance(other, Grid) and self.L == other.L and self.N == other.N

    def __repr__(self):
        return f"Grid(L={self.L}, N={self.N})"


class Field:
    """Immutable real sample vector on a Grid."""

    def __init__(self, grid, samples):
        samples = np.array(samples, dtype=float)
        if samples.shape != (grid.N,):
            raise ContractViolation("sample vector must have grid.N entries")
        if not np.all(np.isfinite(samples)):
            raise ContractViolation("field samples must be finite")
        samples.flags.writeable = False
        self.grid = grid
        self.samples = samples

    @property
    def hat(self):
        """Fourier coefficients of the trigonometric interpolant."""
        return np.fft.fft(self.samples) / self.grid.N

    def __repr__(self):
        return f"Field({self.grid!r}, max|u|={np.max(np.abs(self.samples)):.3g})"


def from_function(grid, f):
    return Field(grid, f(grid.x))


def derivative(u, order):
    """Spectral derivative of the given order (0..6)."""
    if not isinstance(order, (int, np.integer)) or not 0 <= order <= 6:
        raise ContractViolation(f"derivative order must be in 0..6, got {order}")
    if order == 0:
        return u
    mult = (1j * u.grid.k) ** order
    if order % 2 == 1:
        mult[u.grid.N // 2] = 0.0  # Nyquist mode has no well-defined odd derivative
    return Field(u.grid, np.real(np.fft.ifft(mult * np.fft.fft(u.samples))))


def integrate(u):
    """Trapezoid (= rectangle, by periodicity) rule over one period."""
    return float(u.grid.h * np.sum(u.samples))


class WeightFunction:
    """A weight for quadrature: a CutoffSpec or an arbitrary C^5 sampler.

    For callable weights pass func(x, order) -> values.  nondecreasing
    declares the sign condition w' >= 0 used by energy functionals.
    """

    def __init__(self, cutoff=None, func=None, nondecreasing=False):
        if (cutoff is None) == (func is None):
            raise ContractViolation("provide exactly one of cutoff, func")
        self.cutoff = cutoff
        self.func = func
        self.nondecreasing = nondecreasing or cutoff is not None

    def __call__(self, x, order=0):
        if self.cutoff is not None:
            return self.cutoff(np.asarray(x, dtype=float), order)
        return self.func(np.asarray(x, dtype=float), order)


def _as_weight(w):
    if isinstance(w, WeightFunction):
        return w
    if isinstance(w, CutoffSpec):
        return WeightFunction(cutoff=w)
    return WeightFunction(func=w)


def weighted_integral(u, w, shift=0.0, order=0, check_support=True):
    """integral u(x) * w(x + shift) dx by endpoint-corrected trapezoid.

    order selects a derivative of the weight (used by smoothing and
    transport terms).  For cutoff weights the translated ramp
    [eps - shift, eps + b - shift] must stay inside [2h, L - 2h]; otherwise
    a SupportViolationError is raised.
    """
    w = _as_weight(w)
    grid = u.grid
    if check_support and w.cutoff is not None:
        lo = w.cutoff.support_start - shift
        hi = w.cutoff.ramp_end - shift
        margin = 2.0 * grid.h
        if lo < margin or hi > grid.L - margin:
            raise SupportViolationError(
                f"translated ramp [{lo:.6g}, {hi:.6g}] leaves the window "
                f"[{margin:.6g}, {grid.L - margin:.6g}]"
            )
    wvals = w(grid.x + shift, order)
    # trapezoid on [0, L] with the explicit endpoint f(L) = u(x_0) w(L+shift)
    f = u.samples * wvals
    f_L = u.samples[0] * float(np.atleast_1d(w(np.array([grid.L + shift]), order))[0])
    return float(grid.h * (np.sum(f) - 0.5 * f[0] + 0.5 * f_L))


def sobolev_norm(u, s):
    """H^s norm via Parseval: sqrt(L * sum <k>^{2s} |u_hat_k|^2)."""
    uh = u.hat
    k = u.grid.k
    return float(np.sqrt(u.grid.L * np.sum((1.0 + k * k) ** s * np.abs(uh) ** 2)))


def band_limited_random(grid, kmax, seed, amplitude=1.0):
    """Deterministic zero-mean random trig polynomial with modes 1..kmax.

    Samples are rescaled so the L-infinity norm equals amplitude exactly
    (the documented constant C in the bound Linf <= amplitude * C is 1).
    kmax must satisfy kmax <= N/3 so cubic products remain dealias-safe.
    """
    if kmax > grid.N // 3:
        raise ContractViolation(f"kmax={kmax} exceeds N/3={grid.N // 3}")
    if kmax < 1:
        raise ContractViolation("kmax must be >= 1")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(kmax)
    b = rng.standard_normal(kmax)
    theta = 2.0 * np.pi * np.outer(np.arange(1, kmax + 1), grid.x) / grid.L
    samples = a @ np.cos(theta) + b @ np.sin(theta)
    samples *= amplitude / np.max(np.abs(samples))
    return Field(grid, samples)


def save_field(u, path, t=0.0):
    """Binary float64 column plus a JSON sidecar {L, N, t}."""
    with open(path + ".bin", "wb") as fh:
        fh.write(u.samples.astype("<f8").tobytes())
    with open(path + ".json", "w") as fh:
        json.dump({"L": u.grid.L, "N": u.grid.N, "t": t}, fh, sort_keys=True)


def load_field(path):
    with open(path + ".json") as fh:
        meta = json.load(fh)
    samples = np.frombuffer(open(path + ".bin", "rb").read(), dtype="<f8")
    return Field(Grid(meta["L"], meta["N"]), samples.copy()), meta["t"]


def export_csv(u, path):
    with open(path, "w") as fh:
        fh.write("x,u\n")
        for xj, uj in zip(u.grid.x, u.samples):
            fh.write(f"{float(xj)!r},{float(uj)!r}\n")
