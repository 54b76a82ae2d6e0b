"""Dispersive model catalog and right-hand-side evaluation.

Every model is stored in solved-for-u_t form

    u_t = a5 u_xxxxx + a3 u_xxx + a1 u_x + sum_m c_m prod_i d^{o_i} u,

with monomial derivative orders capped at 3.  The quadratic/cubic family

    u_t = u_xxxxx - c1 u^2 u_x - c2 u_x u_xx - c3 u u_xxx

conserves the L^2 norm exactly when c2 = 2 c3 (the Hamiltonian case); for
general coefficients integral(u * u_t) = (2 c3 - c2) integral(u u_x u_xx).
"""

from dataclasses import dataclass, field

import numpy as np

from .cutoffs import ContractViolation
from .spectral import Field, derivative


@dataclass(frozen=True)
class Monomial:
    coeff: float
    orders: tuple  # derivative order of each factor, each in 0..3

    def __post_init__(self):
        if len(self.orders) == 0:
            raise ContractViolation("monomial needs at least one factor")
        if any(o < 0 or o > 3 for o in self.orders):
            raise ContractViolation("monomial derivative orders must be in 0..3")


@dataclass(frozen=True)
class Model:
    name: str
    a5: float = 0.0
    a3: float = 0.0
    a1: float = 0.0
    monomials: tuple = ()

    @property
    def hamiltonian(self):
        """True iff the nonlinearity has the u^2 u_x / u_x u_xx / u u_xxx
        shape with c2 = 2 c3, which makes integral(u^2) time-invariant."""
        if self.a5 == 0.0:
            return False
        c2 = c3 = 0.0
        for m in self.monomials:
            key = tuple(sorted(m.orders))
            if key == (0, 0, 1):
                continue
            elif key == (1, 2):
                c2 += -m.coeff / self.a5
            elif key == (0, 3):
                c3 += -m.coeff / self.a5
            else:
                return False
        return abs(c2 - 2.0 * c3) <= 1e-14 * max(1.0, abs(c2), abs(c3))

    @property
    def mass_conserving(self):
        """True iff every nonlinear term is a perfect x-derivative."""
        for m in self.monomials:
            key = tuple(sorted(m.orders))
            if key not in ((0, 1), (0, 0, 1), (1, 2), (0, 3)):
                return False
        return True


def general_c(c1, c2, c3):
    return Model(
        name=f"general_c({c1},{c2},{c3})",
        a5=1.0,
        monomials=(
            Monomial(-float(c1), (0, 0, 1)),
            Monomial(-float(c2), (1, 2)),
            Monomial(-float(c3), (0, 3)),
        ),
    )


def water_wave(c1, c2, c3, c4, c5):
    # u_t = -u_x - c1 u u_x - c2 u_xxx - c3 u_x u_xx - c4 u u_xxx - c5 u_xxxxx
    return Model(
        name=f"water_wave({c1},{c2},{c3},{c4},{c5})",
        a5=-float(c5),
        a3=-float(c2),
        a1=-1.0,
        monomials=(
            Monomial(-float(c1), (0, 1)),
            Monomial(-float(c3), (1, 2)),
            Monomial(-float(c4), (0, 3)),
        ),
    )


_CATALOG = {
    # fifth-order hierarchy flow: u_t = u5 + 30 u^2 u_x - 20 u_x u_xx - 10 u u_xxx
    "kdv5": lambda: Model(
        name="kdv5",
        a5=1.0,
        monomials=(
            Monomial(30.0, (0, 0, 1)),
            Monomial(-20.0, (1, 2)),
            Monomial(-10.0, (0, 3)),
        ),
    ),
    # short/long wave interaction: u_t = -u5 + 2 u_x u_xx + u u_xxx
    "benney": lambda: Model(
        name="benney",
        a5=-1.0,
        monomials=(Monomial(2.0, (1, 2)), Monomial(1.0, (0, 3))),
    ),
    # anharmonic oscillator lattice:
    # u_t = -u5 - (u + u^2) u_x - (1 + u)(u_x u_xx + u u_xxx)
    "lisher": lambda: Model(
        name="lisher",
        a5=-1.0,
        monomials=(
            Monomial(-1.0, (0, 1)),
            Monomial(-1.0, (0, 0, 1)),
            Monomial(-1.0, (1, 2)),
            Monomial(-1.0, (0, 3)),
            Monomial(-1.0, (0, 1, 2)),
            Monomial(-1.0, (0, 0, 3)),
        ),
    ),
    # u_t = -u_xxx - u u_x
    "kdv": lambda: Model(name="kdv", a3=-1.0, monomials=(Monomial(-1.0, (0, 1)),)),
    # loss-of-derivatives example: u_t = u5 + u u_xx
    "example_xx": lambda: Model(name="example_xx", a5=1.0, monomials=(Monomial(1.0, (0, 2)),)),
}


def catalog(name, *args):
    """Look up a model by name; general_c and water_wave take coefficients."""
    if name == "general_c":
        return general_c(*args)
    if name == "water_wave":
        return water_wave(*args)
    try:
        return _CATALOG[name]()
    except KeyError:
        raise ContractViolation(f"unknown model {name!r}") from None


def _dealias_twothirds(grid, fhat):
    m = np.abs(np.fft.fftfreq(grid.N, d=1.0 / grid.N))
    fhat = fhat.copy()
    fhat[m > grid.N / 3.0] = 0.0
    return fhat


def _product(fields, mode):
    """Pointwise product of fields with dealiasing.

    mode "2/3": multiply at grid resolution, then zero modes above N/3.
    mode "pad": zero-pad each factor to 2N before multiplying (exact for
    quadratic and cubic products of fields band-limited to N/3).
    """
    grid = fields[0].grid
    if mode == "pad":
        M = 2 * grid.N
        prod = np.ones(M)
        for f in fields:
            fh = np.fft.fft(f.samples)
            padded = np.zeros(M, dtype=complex)
            half = grid.N // 2
            padded[:half] = fh[:half]
            padded[-half:] = fh[-half:]
            prod = prod * np.real(np.fft.ifft(padded)) * (M / grid.N)
        ph = np.fft.fft(prod) / (M / grid.N)
        out = np.concatenate([ph[: grid.N // 2], ph[-grid.N // 2:]])
        return np.real(np.fft.ifft(out))
    prod = np.ones(grid.N)
    for f in fields:
        prod = prod * f.samples
    return np.real(np.fft.ifft(_dealias_twothirds(grid, np.fft.fft(prod))))


def eval_rhs(model, u, dealias="2/3"):
    """u_t evaluated pseudospectrally; dealias is "2/3", "pad" or "none"."""
    if dealias not in ("2/3", "pad", "none"):
        raise ContractViolation(f"unknown dealias mode {dealias!r}")
    grid = u.grid
    uhat = np.fft.fft(u.samples)
    lam = (
        model.a5 * (1j * grid.k) ** 5
        + model.a3 * (1j * grid.k) ** 3
        + model.a1 * (1j * grid.k)
    )
    lam[grid.N // 2] = 0.0  # odd multipliers are ill-defined at Nyquist
    out = np.real(np.fft.ifft(lam * uhat))
    derivs = {}
    for m in model.monomials:
        factors = []
        for o in m.orders:
            if o not in derivs:
                derivs[o] = derivative(u, o)
            factors.append(derivs[o])
        if dealias == "none":
            term = np.ones(grid.N)
            for f in factors:
                term = term * f.samples
        else:
            term = _product(factors, "pad" if dealias == "pad" else "2/3")
        out = out + m.coeff * term
    return Field(grid, out)
