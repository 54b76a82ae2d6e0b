"""Command-line surface.

Subcommands: simulate, check-cutoffs, check-identities, propagation, decay,
bootstrap, report.  Every run writes report.csv and manifest.json into the
--out directory; the process exits 0 only if all pass flags in the manifest
are set.
"""

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from .cutoffs import CutoffSpec, certify_inequalities
from .experiments import (
    RunManifest,
    load_config,
    report_csv,
    run_bootstrap,
    run_decay,
    run_propagation,
)
from .functionals import check_identity, make_identity_field
from .models import catalog
from .solver import SolverConfig, simulate
from .spectral import Field, Grid, integrate, save_field, sobolev_norm
from .experiments import build_data

IDENTITY_TOL = 1e-8

_KEY_MAP = {"R": "radius", "id": "data_id"}


def _flatten(cfg):
    """Strip the grid./solver./window./data. prefixes of documented keys."""
    out = {}
    for key, value in cfg.items():
        short = key.split(".", 1)[-1]
        out[_KEY_MAP.get(short, short)] = value
    return out


def _write_atomic(path, data):
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(data)
    os.replace(tmp, path)


def _finish(outdir, manifest, csv_text=None):
    os.makedirs(outdir, exist_ok=True)
    if csv_text is not None:
        manifest.add_output("report.csv", csv_text)
        _write_atomic(os.path.join(outdir, "report.csv"), csv_text)
    blob = json.dumps(manifest.as_dict(), indent=2, sort_keys=True) + "\n"
    _write_atomic(os.path.join(outdir, "manifest.json"), blob)
    ok = all(manifest.passes.values()) if manifest.passes else True
    status = "PASS" if ok else "FAIL"
    print(f"{manifest.experiment}: {status} -> {outdir}/manifest.json")
    return 0 if ok else 1


def cmd_simulate(args):
    cfg = _flatten(load_config(args.config))
    grid = Grid(cfg.get("L", 40.0), int(cfg.get("N", 1024)))
    model = catalog(cfg.get("model", "kdv5"))
    u0 = build_data(
        cfg.get("data_id", "gaussian"),
        grid,
        seed=int(cfg.get("seed", 0)),
        **{
            k: cfg[k]
            for k in ("amplitude", "width", "x0", "c", "l_break", "n")
            if k in cfg
        },
    )
    scfg = SolverConfig(
        dt=cfg.get("dt", 1e-5),
        t_end=cfg.get("t_end", 0.01),
        scheme=cfg.get("scheme", "ETDRK4"),
        stride=int(cfg.get("stride", 100)),
    )
    rows = []

    def observer(t, u):
        rows.append((t, "l2_norm", sobolev_norm(u, 0)))
        rows.append((t, "mass", integrate(u)))

    manifest = RunManifest("simulate", cfg, int(cfg.get("seed", 0)))
    os.makedirs(args.out, exist_ok=True)
    try:
        traj = simulate(model, u0, scfg, observers=[observer])
    except Exception as exc:  # blow-up or seam violation: failed run
        manifest.passes["completed"] = False
        manifest.config["error"] = f"{type(exc).__name__}: {exc}"
        return _finish(args.out, manifest, report_csv(rows))
    for t, snap in zip(traj.times, traj.snapshots):
        save_field(snap, os.path.join(args.out, f"snapshot_{t:.6f}.f64"), t=t)
    manifest.passes["completed"] = True
    return _finish(args.out, manifest, report_csv(rows))


def cmd_check_cutoffs(args):
    specs = []
    if args.n == 0:
        specs.append(CutoffSpec("plain", 0, args.eps, args.b))
    else:
        specs.append(CutoffSpec("weighted", args.n, args.eps, args.b))
    reports = []
    for spec in specs:
        reports.extend(certify_inequalities(spec, resolution=args.resolution))
    payload = json.dumps([r.as_dict() for r in reports], indent=2, sort_keys=True)
    payload += "\n"
    _write_atomic(args.out, payload)
    ok = all(r.passed for r in reports)
    print(f"check-cutoffs: {'PASS' if ok else 'FAIL'} -> {args.out}")
    return 0 if ok else 1


_IDENTITY_CASES = (
    ("kato_k", 1), ("kato_k", 2), ("kato_k", 3),
    ("kwon_l1", 0), ("kwon_l2", 0),
    ("decay_n", 1), ("decay_n", 2),
)


def identity_rows(seeds, N, L=20.0, kmax=40, eps=0.5, b=17.5):
    grid = Grid(L, N)
    plain = CutoffSpec("plain", 0, eps, b)
    rows = []
    for ident, kn in _IDENTITY_CASES:
        weight = CutoffSpec("weighted", kn, eps, b) if ident == "decay_n" else plain
        rid = ident.replace("_k", "_").replace("_n", "_") + (str(kn) if kn else "")
        for seed in range(seeds):
            u = make_identity_field(grid, kmax, seed, plain)
            for nu in (0.0, 1.0):
                res = check_identity(ident, u, weight, nu=nu, k_or_n=kn, seed=seed)
                rows.append((rid, seed, nu, res))
    return rows


def cmd_check_identities(args):
    rows = identity_rows(args.seeds, args.N)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "seed", "scale", "abs_residual", "rel_residual", "convention"])
    worst = 0.0
    for rid, seed, nu, res in rows:
        if args.id != "all" and not rid.startswith(args.id):
            continue
        worst = max(worst, res.rel_residual)
        writer.writerow(
            [rid, seed, repr(float(res.scale)), repr(float(res.abs_residual)),
             repr(float(res.rel_residual)), res.convention]
        )
    _write_atomic(args.out, buf.getvalue())
    ok = worst <= IDENTITY_TOL
    print(f"check-identities: {'PASS' if ok else 'FAIL'} "
          f"(worst rel residual {worst:.3e}) -> {args.out}")
    return 0 if ok else 1


def _run_driver(args, name, driver):
    cfg = _flatten(load_config(args.config))
    manifest = RunManifest(name, cfg, int(cfg.get("seed", 0)))
    try:
        rows, traj = driver(cfg)
    except Exception as exc:
        manifest.passes["completed"] = False
        manifest.config["error"] = f"{type(exc).__name__}: {exc}"
        return _finish(args.out, manifest, report_csv([]))
    values = [v for _, _, v in rows]
    manifest.passes["completed"] = True
    manifest.passes["finite"] = bool(np.all(np.isfinite(values)))
    return _finish(args.out, manifest, report_csv(rows))


def cmd_propagation(args):
    return _run_driver(args, "propagation", run_propagation)


def cmd_decay(args):
    return _run_driver(args, "decay", run_decay)


def cmd_bootstrap(args):
    cfg = _flatten(load_config(args.config))
    manifest = RunManifest("bootstrap", cfg, int(cfg.get("seed", 0)))
    result = run_bootstrap(cfg)
    manifest.passes["completed"] = True
    manifest.passes["all_stages_usable"] = all(s["usable"] for s in result["stages"])
    manifest.config["final_l"] = result["schedule"]["final_l"]
    return _finish(args.out, manifest, report_csv(result["rows"]))


def cmd_report(args):
    """Merge report.csv files into one long-format CSV (run, t, id, value)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["run", "t", "functional_id", "value"])
    for path in args.inputs:
        run = os.path.basename(os.path.dirname(os.path.abspath(path))) or path
        with open(path) as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            for row in reader:
                writer.writerow([run] + row)
    _write_atomic(args.out, buf.getvalue())
    print(f"report: merged {len(args.inputs)} files -> {args.out}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="kdv5lab",
        description="Numerical laboratory for fifth-order dispersive models.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("simulate", help="run a model and record observers")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("check-cutoffs", help="certify the cutoff inequalities")
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--b", type=float, default=2.0)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--resolution", type=int, default=10000)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_check_cutoffs)

    p = sub.add_parser("check-identities", help="residuals of the energy identities")
    p.add_argument("--id", default="all")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--N", type=int, default=256)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_check_identities)

    for name, fn in (("propagation", cmd_propagation), ("decay", cmd_decay),
                     ("bootstrap", cmd_bootstrap)):
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", required=True)
        p.add_argument("--out", required=True)
        p.set_defaults(func=fn)

    p = sub.add_parser("report", help="merge report.csv files")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
