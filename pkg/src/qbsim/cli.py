"""Command-line entry point: ``qbsim {modes,dispersion,design,hom,validate}``.

Exit codes: 0 success, 1 numerical failure, 2 usage or configuration error.
"""

import argparse
import datetime as _dt
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .assembly import assemble
from .experiments import CASES, run_hom, solve_hom_basis
from .mesh import PermittivityProfile, build_mesh
from .modes import EigensolverError, check_orthonormality, fold_dispersion, solve_modes
from .tmm import band_frequencies, design_scan

log = logging.getLogger("qbsim")

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17e}"


def write_csv(path: Path, header, rows, stamp: bool):
    with open(path, "w", newline="\n") as fh:
        if stamp:
            fh.write(f"# generated {_dt.datetime.now(_dt.timezone.utc).isoformat(timespec='seconds')}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def _geometry(cfg):
    mesh = build_mesh(cfg.mesh.Rx, cfg.mesh.n0)
    profile = PermittivityProfile(cfg.medium.eps_s, cfg.medium.Rs, cfg.medium.background)
    return mesh, profile


def cmd_modes(cfg, out: Path, stamp: bool, threads: int):
    mesh, profile = _geometry(cfg)
    basis = solve_modes(assemble(mesh, profile, cfg.theta0, cfg.method), cfg.modes.omega_floor)
    res = basis.residuals()
    p = np.rint((basis.kappa_labels * mesh.Rx - cfg.theta0) / (2 * np.pi)).astype(int)
    write_csv(
        out / "modes.csv",
        ["p", "kappa_rad_per_m", "omega_rad_per_s", "residual"],
        zip(p, basis.kappa_labels, basis.omega, res),
        stamp,
    )
    off, diag = check_orthonormality(basis)
    write_csv(out / "orthonormality.csv", ["max_offdiag", "max_diag_dev"], [(off, diag)], stamp)
    log.info("%d modes, max offdiag %.3e, max diag dev %.3e", basis.n_modes, off, diag)


def cmd_dispersion(cfg, out: Path, stamp: bool, threads: int):
    phases = cfg.dispersion.phases()
    if len(phases) == 0:
        raise UsageError("dispersion sweep has no theta0 values")
    mesh, profile = _geometry(cfg)
    bands = cfg.dispersion.bands

    def one(th):
        return fold_dispersion([assemble(mesh, profile, th, cfg.method)], bands, cfg.modes.omega_floor)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        diagrams = list(pool.map(one, phases))
    c = profile.constants.c
    num_rows, tmm_rows = [], []
    for th, diagram in zip(phases, diagrams):
        ref = band_frequencies(profile.eps_s, profile.Rs, mesh.Rx, th, bands, c)
        for pt in diagram.points:
            w_ref = ref[pt.band]
            num_rows.append((pt.theta0, pt.band, pt.kappa, pt.omega, abs(pt.omega - w_ref) / w_ref))
            tmm_rows.append((th, pt.band, pt.kappa, w_ref))
    write_csv(out / "dispersion_numeric.csv", ["theta0_rad", "band", "kappa_rad_per_m", "omega_rad_per_s", "rel_err_vs_tmm"], num_rows, stamp)
    write_csv(out / "dispersion_tmm.csv", ["theta0_rad", "band", "kappa_rad_per_m", "omega_rad_per_s"], tmm_rows, stamp)
    (out / "plot_dispersion.py").write_text(_PLOT_DISPERSION.format(Rx=mesh.Rx, c=c))
    worst = max(r[-1] for r in num_rows)
    log.info("max relative band error vs TMM: %.3e", worst)


def cmd_design(cfg, out: Path, stamp: bool, threads: int):
    table = design_scan(cfg.medium.eps_s, cfg.medium.Rs, cfg.design.kappa.values())
    write_csv(out / "design.csv", ["kappa", "R2", "T2", "phase_diff_deg"], table.tolist(), stamp)
    (out / "plot_design.py").write_text(_PLOT_DESIGN)


def cmd_hom(cfg, out: Path, stamp: bool, threads: int):
    cases = list(cfg.hom.cases)
    base = cfg.hom_config()
    basis = solve_hom_basis(base)
    curves = {}
    if not cases:
        curves[""] = run_hom(base, basis)
    else:
        for name in cases:
            left, right = CASES[name]
            curves[name] = run_hom(cfg.hom_config(left.value, right.value), basis)
    summary = []
    for name, curve in curves.items():
        fname = f"hom_{name}.csv" if name else "hom.csv"
        write_csv(out / fname, ["tau_s", "delta_x0_m", "g2"], zip(curve.tau, curve.delta_x0, curve.g2), stamp)
        summary.append((name or "-", curve.visibility, curve.baseline, curve.dip))
        log.info("case %s: visibility %.4f baseline %.4f dip %.4e", name or "-", curve.visibility, curve.baseline, curve.dip)
    with open(out / "hom_summary.csv", "w") as fh:
        if stamp:
            fh.write(f"# generated {_dt.datetime.now(_dt.timezone.utc).isoformat(timespec='seconds')}\n")
        fh.write("case,visibility,baseline,dip_g2\n")
        for name, vis, b, d in summary:
            fh.write(f"{name},{fmt(vis)},{fmt(b)},{fmt(d)}\n")
        if "A" in curves and "C" in curves:
            rel = abs(curves["C"].visibility - curves["A"].visibility) / curves["A"].visibility
            verdict = "within" if rel <= 0.15 else "outside"
            fh.write(f"# case C visibility differs from case A by {rel:.2%} ({verdict} 15%)\n")
    (out / "plot_hom.py").write_text(_PLOT_HOM)


def cmd_validate(cfg, out: Path, stamp: bool, threads: int, corrupt_phi=False):
    from .validation import run_validation

    checks = run_validation(cfg, corrupt_phi=corrupt_phi)
    lines = [c.line() for c in checks]
    (out / "validation.txt").write_text("\n".join(lines) + "\n")
    for line in lines:
        print(line)
    failed = [c for c in checks if not c.passed]
    if failed:
        raise NumericalFailure(f"{len(failed)} validation check(s) failed")


class NumericalFailure(RuntimeError):
    pass


COMMANDS = {
    "modes": cmd_modes,
    "dispersion": cmd_dispersion,
    "design": cmd_design,
    "hom": cmd_hom,
    "validate": cmd_validate,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="qbsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="YAML run configuration")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--method", choices=["fdm", "fem"], help="override the discretisation")
        p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp header line")
        p.add_argument("--threads", type=int, default=1, help="parallel sweep workers")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "validate":
            p.add_argument("--corrupt-phi", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = cfgmod.load(args.config) if args.config else cfgmod.from_dict({})
        if args.method:
            cfg = cfgmod.override(cfg, method=args.method)
            cfgmod.check(cfg)
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        if args.command == "dispersion" and len(cfg.dispersion.phases()) == 0:
            raise UsageError("dispersion sweep has no theta0 values")
    except (cfgmod.ConfigError, UsageError) as exc:
        print(f"qbsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    args.out.mkdir(parents=True, exist_ok=True)
    kwargs = {"corrupt_phi": args.corrupt_phi} if args.command == "validate" else {}
    try:
        COMMANDS[args.command](cfg, args.out, not args.no_timestamp, args.threads, **kwargs)
    except UsageError as exc:
        print(f"qbsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EigensolverError, NumericalFailure, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"qbsim: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


_PLOT_DISPERSION = '''"""Dispersion diagram from dispersion_numeric.csv and dispersion_tmm.csv."""
import numpy as np
import matplotlib.pyplot as plt

Rx, c = {Rx!r}, {c!r}
num = np.genfromtxt("dispersion_numeric.csv", delimiter=",", names=True, comments="#")
ref = np.genfromtxt("dispersion_tmm.csv", delimiter=",", names=True, comments="#")
fig, ax = plt.subplots(figsize=(5, 4))
for data, style, label in ((ref, "k-", "TMM"), (num, "o", "numerical")):
    for b in np.unique(data["band"]):
        sel = data["band"] == b
        order = np.argsort(data["kappa_rad_per_m"][sel])
        ax.plot(data["kappa_rad_per_m"][sel][order] * Rx / np.pi,
                data["omega_rad_per_s"][sel][order] * Rx / (2 * np.pi * c),
                style, ms=3, label=label if b == 0 else None)
ax.set_xlabel(r"$\\kappa R_x / \\pi$")
ax.set_ylabel(r"$\\omega R_x / 2\\pi c$")
ax.legend()
fig.tight_layout()
fig.savefig("dispersion.png", dpi=150)
'''

_PLOT_DESIGN = '''"""Slab reflectivity, transmissivity and phase difference from design.csv."""
import numpy as np
import matplotlib.pyplot as plt

d = np.genfromtxt("design.csv", delimiter=",", names=True, comments="#")
fig, ax = plt.subplots(figsize=(5, 4))
ax.plot(d["kappa"], d["R2"], label="|R|^2")
ax.plot(d["kappa"], d["T2"], label="|T|^2")
ax.set_xlabel("wavenumber (rad/m)")
ax2 = ax.twinx()
ax2.plot(d["kappa"], d["phase_diff_deg"], "k--", label="arg R - arg T")
ax2.set_ylabel("degrees")
ax.legend(loc="upper left")
fig.tight_layout()
fig.savefig("design.png", dpi=150)
'''

_PLOT_HOM = '''"""g2 versus delay from every hom*.csv in this directory."""
import glob
import numpy as np
import matplotlib.pyplot as plt

fig, ax = plt.subplots(figsize=(5, 4))
for path in sorted(glob.glob("hom*.csv")):
    if path.endswith("summary.csv"):
        continue
    d = np.genfromtxt(path, delimiter=",", names=True, comments="#")
    ax.plot(d["tau_s"] * 1e9, d["g2"], "o-", ms=3, label=path[:-4])
ax.set_xlabel("tau (ns)")
ax.set_ylabel("g2")
ax.legend()
fig.tight_layout()
fig.savefig("hom.png", dpi=150)
'''


if __name__ == "__main__":
    sys.exit(main())
