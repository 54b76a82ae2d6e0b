"""Reproducible experiment drivers: propagation of regularity, persistence
of decay, the combinatorial bookkeeping of the bootstrap, manifests, and
flat key=value configuration files.

Every run is fully determined by (config, seed): initial data use seeded
generators, outputs are written with repr() float formatting so reruns are
byte-identical, and a manifest records sha256 digests of all outputs.
"""

import csv
import hashlib
import io
import json
import platform
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .cutoffs import ContractViolation, CutoffSpec
from .functionals import SmoothingAccumulator, WeightedFunctional, evaluate
from .models import catalog
from .solver import SolverConfig, kdv_soliton, simulate
from .spectral import Field, Grid, band_limited_random, sobolev_norm

# -- combinatorial bookkeeping ------------------------------------------------

_NU_DEGREE_SMALL = {1: 1, 2: 1, 3: 2, 4: 2, 5: 4, 6: 8}


def nu_degree(l):
    """Polynomial degree in the frame speed of the l-th induction constant."""
    if not isinstance(l, (int, np.integer)) or l < 1:
        raise ContractViolation("l must be a positive integer")
    if l <= 6:
        return _NU_DEGREE_SMALL[int(l)]
    return 8 * (int(l) - 5)


def bootstrap_schedule(n):
    """Stages (weight_power, extra_derivatives) ending at regularity 2n+1.

    Stage k trades two powers of the spatial weight for one derivative:
    the pairs are (0, n), (2, n-1), ..., (2n, 0), and the final attained
    derivative index is 2n + 1.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ContractViolation("n must be a positive integer")
    pairs = [(2 * k, int(n) - k) for k in range(int(n) + 1)]
    return {"pairs": pairs, "final_l": 2 * int(n) + 1}


# -- initial data -------------------------------------------------------------


def build_data(kind, grid, seed=0, **kw):
    """Seeded initial-data families.

    kinds: soliton(c, x0); gaussian(amplitude, width, x0);
    smooth_right_rough_left(l_break): H^l_break-critical roughness carried
    only on the left half; one_sided_decay(n): <x>^{-(n+1)/2 - 0.1} envelope
    on the right, O(1) oscillation elsewhere.
    """
    x = grid.x
    if kind == "soliton":
        return kdv_soliton(grid, kw.get("c", 1.0), kw.get("x0", grid.L / 2.0))
    if kind == "gaussian":
        a = kw.get("amplitude", 1.0)
        w = kw.get("width", 1.0)
        x0 = kw.get("x0", grid.L / 2.0)
        return Field(grid, a * np.exp(-((x - x0) / w) ** 2))
    if kind == "smooth_right_rough_left":
        l_break = kw.get("l_break", 2)
        amp = kw.get("amplitude", 0.1)
        rng = np.random.default_rng(seed)
        kmax = grid.N // 3
        # roughness in the top spectral band: the H^{l_break + 0.1} critical
        # decay m^{-(l_break + 0.6)} makes H^{l_break + 1} diverge as the
        # resolution grows, while keeping low-frequency content out of the
        # rough part so windowed lower-order norms stay dominated by the
        # smooth component
        # the band stops short of the dealiasing cutoff kmax: windowing in x
        # smears each mode over a few dozen neighbours, and that smear must
        # decay before the grid truncation or it rings across the domain
        m_lo = max(1, int(0.6 * kmax))
        m_hi = max(m_lo, int(0.85 * kmax))
        modes = np.arange(m_lo, m_hi + 1)
        phases = rng.uniform(0.0, 2.0 * np.pi, len(modes))
        spectrum = modes.astype(float) ** (-(l_break + 0.6))
        # evaluate on a 4x refined grid so the physical-space windowing is
        # alias-free, then restrict spectrally to modes <= kmax; otherwise
        # the above-Nyquist content of rough * left aliases into low modes
        # and spectral derivatives smear the roughness across the domain
        nf = 4 * grid.N
        xf = grid.L * np.arange(nf) / nf
        theta = 2.0 * np.pi * np.outer(modes, xf) / grid.L + phases[:, None]
        rough = (spectrum[:, None] * np.cos(theta)).sum(axis=0)
        rough *= amp / np.max(np.abs(rough))
        # rough-region window: rises from 0 near the left edge (keeping the
        # data continuous across the periodic seam) and falls to 0 by 0.45 L
        left = CutoffSpec("plain", 0, 0.025 * grid.L, 0.1 * grid.L)(xf, 0) * (
            1.0 - CutoffSpec("plain", 0, 0.35 * grid.L, 0.1 * grid.L)(xf, 0)
        )
        smooth = kw.get("smooth_amplitude", amp) * np.exp(
            -((xf - 0.5 * grid.L) / (grid.L / 8.0)) ** 2
        )
        hat_fine = np.fft.fft(rough * left + smooth) / nf
        hat = np.zeros(grid.N, dtype=complex)
        hat[: kmax + 1] = hat_fine[: kmax + 1]
        hat[-kmax:] = hat_fine[-kmax:]
        return Field(grid, np.real(np.fft.ifft(hat)) * grid.N)
    if kind == "one_sided_decay":
        n = kw.get("n", 2)
        amp = kw.get("amplitude", 0.1)
        rng = np.random.default_rng(seed)
        xc = x - 0.5 * grid.L
        envelope = (1.0 + np.maximum(xc, 0.0) ** 2) ** (-((n + 1) / 2.0 + 0.1) / 2.0)
        osc = np.cos(3.0 * x + rng.uniform(0.0, 2.0 * np.pi))
        taper = 1.0 - CutoffSpec("plain", 0, 0.7 * grid.L / 2.0, 0.1 * grid.L)(xc, 0)
        return Field(grid, amp * envelope * osc * taper)
    raise ContractViolation(f"unknown data kind {kind!r}")


# -- manifests and reports -----------------------------------------------------


@dataclass
class RunManifest:
    experiment: str
    config: dict
    seed: int
    code_version: str = __version__
    python: str = platform.python_version()
    convention: str = "u_t as produced by the model catalog"
    tolerances: dict = field(default_factory=dict)
    output_digests: dict = field(default_factory=dict)
    passes: dict = field(default_factory=dict)

    @property
    def config_digest(self):
        blob = json.dumps(self.config, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def add_output(self, name, data):
        if isinstance(data, str):
            data = data.encode()
        self.output_digests[name] = hashlib.sha256(data).hexdigest()

    def as_dict(self):
        return {
            "experiment": self.experiment,
            "config": self.config,
            "config_digest": self.config_digest,
            "seed": self.seed,
            "code_version": self.code_version,
            "python": self.python,
            "convention": self.convention,
            "tolerances": self.tolerances,
            "output_digests": self.output_digests,
            "passes": self.passes,
        }

    def write(self, path):
        with open(path, "w") as fh:
            json.dump(self.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def report_csv(rows):
    """Render (t, functional_id, value) rows byte-reproducibly."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "functional_id", "value"])
    for t, fid, value in rows:
        writer.writerow([repr(float(t)), fid, repr(float(value))])
    return buf.getvalue()


# -- experiment drivers --------------------------------------------------------


def _observe(functionals, accumulators, rows):
    def observer(t, u):
        for f in functionals:
            rows.append((t, f.name, evaluate(f, u, t)))
        for acc in accumulators:
            rows.append((t, acc.functional.name + "_acc", acc.update(t, u)))
    return observer


def run_propagation(config):
    """Propagation of regularity for rough-left/smooth-right data.

    Tracks windowed energies int (d^l u)^2 chi(x + nu t) on a frame moving
    with speed nu >= 0 (so regularity present on the right at t = 0 is seen
    inside the window for t > 0) plus the accumulated smoothing terms, and
    contrasts with the global H^l norm, which stays at the rough level.
    """
    grid = Grid(config["L"], config["N"])
    model = catalog(config.get("model", "kdv5"))
    u0 = build_data(
        "smooth_right_rough_left",
        grid,
        seed=config.get("seed", 0),
        l_break=config.get("l_break", 2),
        amplitude=config.get("amplitude", 0.05),
        smooth_amplitude=config.get("smooth_amplitude",
                                    config.get("amplitude", 0.05)),
    )
    nu = config.get("nu", 1.0)
    eps = config.get("eps", 1.0)
    radius = config.get("radius", 4.0)
    # window plateau must start right of the rough region (which the data
    # builder confines to x < 0.45 L)
    x0 = config.get("x0", 0.5 * config["L"])
    lmax = config.get("lmax", 4)
    # ramp [x0 + eps, x0 + radius]: smoothing is certified on (x0 + radius, inf)
    chi = CutoffSpec("plain", 0, x0 + eps, radius - eps)
    functionals = [
        WeightedFunctional("energy", l, chi, nu=nu, name=f"window_h{l}")
        for l in range(lmax + 1)
    ]
    accumulators = [
        WeightedFunctional("smoothing", l, chi, nu=nu, name=f"smooth_l{l}")
        for l in range(max(0, lmax - 2), lmax - 1)
    ]
    accumulators = [SmoothingAccumulator(f) for f in accumulators]
    rows = []

    def observer(t, u):
        _observe(functionals, accumulators, rows)(t, u)
        rows.append((t, f"global_h{lmax}", sobolev_norm(u, lmax) ** 2))

    cfg = SolverConfig(
        dt=config.get("dt", 1e-5),
        t_end=config.get("t_end", 0.01),
        scheme=config.get("scheme", "ETDRK4"),
        stride=config.get("stride", 100),
    )
    traj = simulate(model, u0, cfg, observers=[observer])
    return rows, traj


def run_decay(config):
    """Persistence of one-sided polynomial decay.

    Tracks the x^n-weighted energies int x^n (d^m u)^2 chi and the cubic
    decay functional int u^3 chi_n on a moving frame.
    """
    grid = Grid(config["L"], config["N"])
    model = catalog(config.get("model", "kdv5"))
    n = config.get("n", 2)
    u0 = build_data(
        "one_sided_decay",
        grid,
        seed=config.get("seed", 0),
        n=n,
        amplitude=config.get("amplitude", 0.05),
    )
    nu = config.get("nu", 1.0)
    eps = config.get("eps", 1.0)
    b = config.get("b", 2.0)
    x0 = config.get("x0", 0.55 * config["L"])
    chi_n = CutoffSpec("weighted", n, x0 + eps, b)
    chi = CutoffSpec("plain", 0, x0 + eps, b)
    functionals = [
        WeightedFunctional("xweighted", m, chi_n, nu=nu, name=f"xw_n{n}_m{m}")
        for m in range(3)
    ]
    functionals.append(
        WeightedFunctional("cubic_decay", 0, chi_n, nu=nu, name=f"cubic_n{n}")
    )
    functionals.append(WeightedFunctional("energy", 0, chi, nu=nu, name="window_h0"))
    rows = []
    cfg = SolverConfig(
        dt=config.get("dt", 1e-5),
        t_end=config.get("t_end", 0.01),
        scheme=config.get("scheme", "ETDRK4"),
        stride=config.get("stride", 100),
    )
    traj = simulate(model, u0, cfg, observers=[_observe(functionals, [], rows)])
    return rows, traj


def run_bootstrap(config):
    """Qualitative bootstrap ledger: for each stage (2k, n-k) of the
    schedule, record the corresponding weighted functional at t=0 and t_end
    and mark the stage usable when both are finite."""
    grid = Grid(config["L"], config["N"])
    model = catalog(config.get("model", "kdv5"))
    n = config.get("n", 2)
    sched = bootstrap_schedule(n)
    u0 = build_data(
        "one_sided_decay",
        grid,
        seed=config.get("seed", 0),
        n=n,
        amplitude=config.get("amplitude", 0.05),
    )
    cfg = SolverConfig(
        dt=config.get("dt", 1e-5),
        t_end=config.get("t_end", 0.005),
        scheme="ETDRK4",
        stride=max(1, int(round(config.get("t_end", 0.005) / config.get("dt", 1e-5)))),
    )
    traj = simulate(model, u0, cfg)
    x0 = config.get("x0", 0.55 * config["L"])
    rows = []
    stages = []
    for m, weight_power in sched["pairs"]:
        if weight_power == 0:
            w = CutoffSpec("plain", 0, x0 + 1.0, 2.0)
        else:
            w = CutoffSpec("weighted", weight_power, x0 + 1.0, 2.0)
        f = WeightedFunctional(
            "xweighted", m, w, nu=0.0, name=f"stage_w{weight_power}_d{m}"
        )
        v0 = evaluate(f, traj.snapshots[0], traj.times[0])
        v1 = evaluate(f, traj.final, traj.times[-1])
        rows.append((traj.times[0], f.name, v0))
        rows.append((traj.times[-1], f.name, v1))
        stages.append(
            {
                "weight_power": weight_power,
                "derivatives": m,
                "initial": v0,
                "final": v1,
                "usable": bool(np.isfinite(v0) and np.isfinite(v1)),
            }
        )
    return {"schedule": sched, "stages": stages, "rows": rows}


# -- flat configuration files ---------------------------------------------------


def parse_config(text):
    """key = value lines; '#' comments; values parsed as int, float, or str."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ContractViolation(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key:
            raise ContractViolation(f"line {lineno}: empty key")
        for cast in (int, float):
            try:
                out[key] = cast(value)
                break
            except ValueError:
                continue
        else:
            out[key] = value
    return out


def load_config(path):
    with open(path) as fh:
        return parse_config(fh.read())
