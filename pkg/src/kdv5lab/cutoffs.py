"""C^5 cutoff / weight families and certification of their bounds.

The basic ramp is the degree-11 polynomial

    rho(x) = 2772 * integral_0^x y^5 (1-y)^5 dy,

which rises monotonically from rho(0)=0 to rho(1)=1 with five vanishing
derivatives at both endpoints.  From it we build

    chi(x; eps, b)   -- 0 for x <= eps, rho((x-eps)/b) on the ramp, 1 beyond,
    chi_n(x; eps, b) = x^n * chi(x; eps, b),

whose derivatives up to order 5 are evaluated in closed form from exact
rational coefficient tables (never by numerical differentiation).  The
module also certifies the sup-constant inequalities these weights satisfy:
ratio bounds such as (chi''')^2/chi' <= c, derivative bounds, and the
domination inequalities against wider ramps chi(.; eps/3, b+eps) and lower
weights chi_{n-1}(.; eps/3, b+eps) used in the inductive energy arguments.
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np


class ContractViolation(ValueError):
    """An operation was called outside its documented domain."""


def _binom(n, k):
    return math.comb(n, k)


def _rho_fraction_coeffs():
    # rho(x) = 2772 * sum_j (-1)^j C(5,j) x^(6+j) / (6+j),  j = 0..5
    coeffs = {}
    for j in range(6):
        coeffs[6 + j] = Fraction(2772 * (-1) ** j * _binom(5, j), 6 + j)
    return coeffs


def _poly_derivative(coeffs):
    out = {}
    for power, c in coeffs.items():
        if power >= 1:
            out[power - 1] = c * power
    return out


def _tables():
    """Float coefficient arrays (ascending powers) of rho^(d), d = 0..6."""
    tables = []
    coeffs = _rho_fraction_coeffs()
    for _ in range(7):
        deg = max(coeffs) if coeffs else 0
        arr = np.zeros(deg + 1)
        for power, c in coeffs.items():
            arr[power] = float(c)
        tables.append(arr)
        coeffs = _poly_derivative(coeffs)
    return tables


RHO_TABLES = _tables()
RHO_EXACT = _rho_fraction_coeffs()

# Quintic factor in rho(x) = x^6 * p(x); p's only real root is ~1.29727.
P_COEFFS = np.array([462.0, -1980.0, 3465.0, -3080.0, 1386.0, -252.0])


def rho(x, order=0):
    """rho^(order) evaluated on [0, 1] data (no clamping applied).

    Derivatives use fully factored forms, which stay accurate to machine
    precision near the endpoints where the expanded polynomials cancel.
    """
    x = np.asarray(x, dtype=float)
    if 1 <= order <= 5:
        s = x * (1.0 - x)
        if order == 1:
            return 2772.0 * s ** 5
        if order == 2:
            return 13860.0 * s ** 4 * (1.0 - 2.0 * x)
        if order == 3:
            return 27720.0 * s ** 3 * (2.0 - 9.0 * s)
        if order == 4:
            return -166320.0 * s ** 2 * (2.0 * x - 1.0) * (1.0 - 6.0 * s)
        return 166320.0 * s * (2.0 - 28.0 * s + 84.0 * s * s)
    table = RHO_TABLES[order]
    # ascending-power Horner
    out = np.zeros_like(x)
    for c in table[::-1]:
        out = out * x + c
    return out


def rho_exact(x, order=0):
    """Exact rational evaluation of rho^(order) at a Fraction/int point."""
    coeffs = RHO_EXACT
    for _ in range(order):
        coeffs = _poly_derivative(coeffs)
    x = Fraction(x)
    return sum(c * x ** p for p, c in coeffs.items())


def rho_ratio_closed(x):
    """Closed form of (rho''')^2 / rho' on [0, 1]."""
    x = np.asarray(x, dtype=float)
    return -277200.0 * x * (x - 1.0) * (2.0 - 9.0 * x + 9.0 * x * x) ** 2


@dataclass(frozen=True)
class CutoffSpec:
    """A member of the weight family: plain chi or weighted chi_n = x^n chi.

    kind is "plain" or "weighted"; n is ignored for plain specs (and n = 0
    weighted is identical to plain).  eps > 0 locates the foot of the ramp,
    b > 0 is the ramp width.
    """

    kind: str = "plain"
    n: int = 0
    eps: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        if self.kind not in ("plain", "weighted"):
            raise ContractViolation(f"unknown cutoff kind {self.kind!r}")
        if self.eps <= 0 and self.kind == "weighted":
            raise ContractViolation("weighted cutoffs require eps > 0")
        if self.eps < 0 or self.b <= 0:
            raise ContractViolation("need eps >= 0 and b > 0")
        if self.kind == "weighted" and (self.n < 0 or self.n != int(self.n)):
            raise ContractViolation("weight exponent n must be a nonneg integer")

    @property
    def support_start(self):
        return self.eps

    @property
    def ramp_end(self):
        return self.eps + self.b

    def _chi(self, x, order):
        """Plain chi^(order); derivatives supported on [eps, eps+b]."""
        x = np.asarray(x, dtype=float)
        y = (x - self.eps) / self.b
        on_ramp = (y > 0.0) & (y < 1.0)
        out = np.zeros_like(x)
        yr = np.where(on_ramp, y, 0.0)
        vals = rho(yr, order) / self.b ** order
        out = np.where(on_ramp, vals, 0.0)
        if order == 0:
            out = np.where(y >= 1.0, 1.0, out)
        return out

    def __call__(self, x, order=0):
        x = np.asarray(x, dtype=float)
        if self.kind == "plain" or self.n == 0:
            return self._chi(x, order)
        n = self.n
        out = np.zeros_like(x)
        for i in range(order + 1):
            if i > n:
                continue
            mono = math.perm(n, i) * x ** (n - i)  # d^i/dx^i of x^n
            out = out + _binom(order, i) * mono * self._chi(x, order - i)
        return out


def eval_cutoff(spec, x, order=0):
    """Closed-form chi^(order) or chi_n^(order); order must be in 0..5."""
    if not isinstance(order, (int, np.integer)) or not 0 <= order <= 5:
        raise ContractViolation(f"derivative order must be in 0..5, got {order}")
    scalar = np.isscalar(x)
    out = spec(np.atleast_1d(x), order)
    return float(out[0]) if scalar else out


def ratio_third(spec, x):
    """(chi''')^2 / chi' as a total function.

    Removable singularities at the ramp endpoints take their limit value 0.
    For plain specs the ratio vanishes outside [eps, eps+b]; for weighted
    specs beyond the ramp it equals n(n-1)^2(n-2)^2 x^(n-5) exactly (chi_n
    coincides with x^n there).
    """
    scalar = np.isscalar(x)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d1 = spec(x, 1)
    d3 = spec(x, 3)
    out = np.zeros_like(x)
    ok = d1 > 0.0
    out[ok] = d3[ok] ** 2 / d1[ok]
    return float(out[0]) if scalar else out


@dataclass
class SupConstantReport:
    """Measured sup constant for one inequality, with a pointwise re-check."""

    inequality: str
    sup_value: float
    resolution: int
    margin: float
    passed: bool
    worst_x: float

    def as_dict(self):
        return {
            "inequality": self.inequality,
            "sup_value": self.sup_value,
            "resolution": self.resolution,
            "margin": self.margin,
            "passed": self.passed,
            "worst_x": self.worst_x,
        }


_MARGIN = 1e-9  # slack factor built into every report's re-verification


def _sup_report(name, num, den, x, resolution):
    """sup |num|/den over scan points with den > 0; re-check pointwise."""
    num = np.abs(np.asarray(num, dtype=float))
    den = np.asarray(den, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), np.where(num == 0.0, 0.0, np.inf))
    if not np.all(np.isfinite(ratio)):
        bad = x[~np.isfinite(ratio)][0]
        return SupConstantReport(name, float("inf"), resolution, _MARGIN, False, float(bad))
    i = int(np.argmax(ratio))
    sup = float(ratio[i])
    passed = bool(np.all(num <= sup * (1.0 + _MARGIN) * den + 1e-300))
    return SupConstantReport(name, sup, resolution, _MARGIN, passed, float(x[i]))


def _ramp_scan(spec, resolution):
    # uniform in the rescaled variable y so the scan is identical (up to the
    # 1/b^j scale factors) for every eps at fixed b
    npts = int(round(resolution * spec.b)) + 1
    return spec.eps + spec.b * np.linspace(0.0, 1.0, npts)


def certify_inequalities(spec, resolution=10_000, tail=10.0):
    """Scan-certify the nine weight inequalities; returns SupConstantReports.

    resolution is the number of scan points per unit length (>= 1000).  The
    chi_n family uses spec.n for weighted specs and n = 1 for plain specs.
    The unbounded-domain inequalities are scanned on [eps, eps+b+tail].
    """
    if resolution < 1000:
        raise ContractViolation("resolution must be >= 1000 points per unit")
    eps, b = spec.eps, spec.b
    n = spec.n if (spec.kind == "weighted" and spec.n >= 1) else 1
    plain = CutoffSpec("plain", 0, eps, b)
    weighted = CutoffSpec("weighted", n, eps, b)
    wide = CutoffSpec("plain", 0, eps / 3.0, b + eps)          # chi(.; eps/3, b+eps)
    lower = CutoffSpec("weighted", n - 1, eps / 3.0, b + eps)  # chi_{n-1}(.; eps/3, b+eps)

    xr = _ramp_scan(plain, resolution)
    npts = int(round(resolution * (b + tail))) + 1
    xg = np.linspace(eps, eps + b + tail, npts)

    reports = []

    # 1. (chi''')^2/chi' bounded on the ramp
    reports.append(_sup_report("cutoff_ratio", ratio_third(plain, xr), np.ones_like(xr), xr, resolution))
    # 2. |chi^(j)| bounded, j=1..5
    dmax = np.max([np.abs(plain(xr, j)) for j in range(1, 6)], axis=0)
    reports.append(_sup_report("cutoff_bounded", dmax, np.ones_like(xr), xr, resolution))
    # 3. (chi''')^2/chi' <= c * chi'(.; eps/3, b+eps) on the ramp
    reports.append(_sup_report("cutoff_ratio_expanded", ratio_third(plain, xr), wide(xr, 1), xr, resolution))
    # 4. |chi^(j)| <= c(j) * chi'(.; eps/3, b+eps) on the ramp
    reports.append(_sup_report("cutoff_expanded", dmax, wide(xr, 1), xr, resolution))
    # 5. (chi_n''')^2/chi_n' bounded on the ramp
    reports.append(_sup_report("cutoff_n_ratio", ratio_third(weighted, xr), np.ones_like(xr), xr, resolution))
    # 6. (chi_n''')^2/chi_n' <= c (1 + chi_n) globally
    reports.append(_sup_report("cutoff_n_ratio2", ratio_third(weighted, xg), 1.0 + weighted(xg, 0), xg, resolution))
    # 7. |chi_n^(j)| <= c (1 + chi_n) globally, j=1..5
    dmax_n = np.max([np.abs(weighted(xg, j)) for j in range(1, 6)], axis=0)
    reports.append(_sup_report("cutoff_n_derivatives", dmax_n, 1.0 + weighted(xg, 0), xg, resolution))
    # 8. (chi_n''')^2/chi_n' <= c * chi_{n-1}(.; eps/3, b+eps) globally
    reports.append(_sup_report("cutoff_n_ratio_to_minus_one", ratio_third(weighted, xg), lower(xg, 0), xg, resolution))
    # 9. |chi_n^(j)| <= c * chi_{n-1}(.; eps/3, b+eps) globally, j=1..5
    reports.append(_sup_report("cutoff_n_prime_to_minus_one", dmax_n, lower(xg, 0), xg, resolution))

    return reports
