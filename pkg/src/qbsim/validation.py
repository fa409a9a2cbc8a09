"""Aggregated self-checks behind ``qbsim validate``."""

from dataclasses import dataclass

import numpy as np

from . import correlations as corr
from .assembly import assemble
from .config import RunConfig
from .experiments import FockKet2Port, stokes_apply
from .fock import random_product, vacuum_expectation_dense
from .ladder import vacuum_expectation
from .mesh import PermittivityProfile, build_mesh
from .modes import check_orthonormality, fold_dispersion, solve_modes
from .tmm import band_frequencies


@dataclass(frozen=True)
class Check:
    module: str
    invariant: str
    observed: float
    limit: float
    passed: bool

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.module:<12} {self.invariant:<48} observed={self.observed:.3e} limit={self.limit:.1e}"


def _check(module, invariant, observed, limit):
    return Check(module, invariant, float(observed), float(limit), bool(observed <= limit))


def orthonormality_checks(cfg: RunConfig, corrupt_phi=False):
    mesh = build_mesh(cfg.mesh.Rx, cfg.mesh.n0)
    profile = PermittivityProfile(cfg.medium.eps_s, cfg.medium.Rs, cfg.medium.background)
    tol = cfg.validate.tolerance_orthonormality
    out = []
    for method in ("fdm", "fem"):
        system = assemble(mesh, profile, cfg.theta0, method)
        out.append(_check("assembly", f"{method}: hermiticity", system.hermiticity_error(), 1e-12))
        basis = solve_modes(system, cfg.modes.omega_floor)
        if corrupt_phi:
            basis.Phi[:, 0] *= 1.5
            basis.Phi[:, 1] += basis.Phi[:, 2]
        off, diag = check_orthonormality(basis)
        out.append(_check("modes", f"{method}: max offdiag Phi^H M Phi", off, tol))
        out.append(_check("modes", f"{method}: max |diag - 1| Phi^H M Phi", diag, tol))
    return out


def dispersion_checks(cfg: RunConfig, methods=("fdm", "fem")):
    mesh = build_mesh(cfg.mesh.Rx, cfg.mesh.n0)
    profile = PermittivityProfile(cfg.medium.eps_s, cfg.medium.Rs, cfg.medium.background)
    bands = cfg.dispersion.bands
    phases = cfg.dispersion.phases()
    out = []
    for method in methods:
        diagram = fold_dispersion(
            (assemble(mesh, profile, th, method) for th in phases), bands, cfg.modes.omega_floor
        )
        worst = dispersion_error(diagram, cfg)
        out.append(_check("modes/tmm", f"{method}: max rel. band error, {bands} bands", worst, cfg.validate.tolerance_dispersion))
    return out


def dispersion_error(diagram, cfg: RunConfig) -> float:
    worst = 0.0
    c = PermittivityProfile(cfg.medium.eps_s, cfg.medium.Rs).constants.c
    for th in sorted({p.theta0 for p in diagram.points}):
        pts = sorted((p for p in diagram.points if p.theta0 == th), key=lambda p: p.band)
        ref = band_frequencies(cfg.medium.eps_s, cfg.medium.Rs, cfg.mesh.Rx, th, len(pts), c)
        num = np.array([p.omega for p in pts])
        worst = max(worst, float(np.max(np.abs(num - ref) / ref)))
    return worst


def ladder_checks(cfg: RunConfig):
    rng = np.random.default_rng(cfg.validate.seed)
    worst = 0.0
    for _ in range(cfg.validate.ladder_cases):
        expr = random_product(rng)
        engine = vacuum_expectation(expr)
        dense = vacuum_expectation_dense(expr)
        scale = np.prod([np.linalg.norm(f.coeff) for f in expr.factors])
        worst = max(worst, abs(engine - dense) / max(abs(dense), scale, 1e-300))
    out = [_check("correlations", f"engine vs dense Fock, {cfg.validate.ladder_cases} cases", worst, 1e-10)]

    worst_first = worst_second = 0.0
    for _ in range(cfg.validate.closed_form_cases):
        n = int(rng.integers(1, 7))
        a, ai, aj, b1, b2 = (rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(5))
        e1 = vacuum_expectation(corr.first_order_product(a, b1, b2))
        c1 = corr.first_order_two_photon(a, b1, b2)
        e2 = vacuum_expectation(corr.second_order_product(ai, aj, b1, b2))
        c2 = abs(corr.two_event_amplitude(ai, aj, b1, b2)) ** 2
        worst_first = max(worst_first, abs(e1 - c1) / abs(c1))
        worst_second = max(worst_second, abs(e2 - c2) / abs(c2))
    out.append(_check("correlations", "first-order closed form vs engine", worst_first, 1e-10))
    out.append(_check("correlations", "two-event amplitude vs engine", worst_second, 1e-10))
    return out


def stokes_checks(cfg: RunConfig):
    rng = np.random.default_rng(cfg.validate.seed + 1)
    worst = 0.0
    keys = [(a, b) for a in range(3) for b in range(3) if a + b <= 4]
    for _ in range(200):
        v = rng.normal(size=len(keys)) + 1j * rng.normal(size=len(keys))
        v /= np.linalg.norm(v)
        out_ket = stokes_apply(FockKet2Port(dict(zip(keys, v))))
        worst = max(worst, abs(out_ket.norm() - 1.0))
    ket = stokes_apply(FockKet2Port({(1, 1): 1.0}))
    target = {(2, 0): 1j / np.sqrt(2), (1, 1): 0.0, (0, 2): 1j / np.sqrt(2)}
    err = max(abs(ket[k] - v) for k, v in target.items())
    return [
        _check("experiments", "beam splitter preserves norm", worst, 1e-12),
        _check("experiments", "|1,1> -> i/sqrt2 (|2,0> + |0,2>)", err, 1e-15),
    ]


def convergence_checks(cfg: RunConfig):
    """Vacuum cell on the refinement ladder: error of the lowest four bands falls as dx^2."""
    import math

    from .constants import SI

    out = []
    for method in ("fdm", "fem"):
        errs = []
        for n0 in cfg.validate.refinement:
            mesh = build_mesh(cfg.mesh.Rx, n0)
            b = solve_modes(assemble(mesh, PermittivityProfile(1.0, cfg.medium.Rs), math.pi / 2, method))
            errs.append(np.max(np.abs(b.omega[:4] / (SI.c * np.abs(b.kappa_labels[:4])) - 1)))
        h = cfg.mesh.Rx / (np.asarray(cfg.validate.refinement) - 1.0)
        slopes = np.diff(np.log(errs)) / np.diff(np.log(h))
        out.append(_check("modes", f"{method}: |convergence order - 2|", np.max(np.abs(slopes - 2)), 0.2))
    return out


def run_validation(cfg: RunConfig, corrupt_phi=False):
    checks = []
    checks += orthonormality_checks(cfg, corrupt_phi)
    checks += dispersion_checks(cfg)
    checks += convergence_checks(cfg)
    checks += ladder_checks(cfg)
    checks += stokes_checks(cfg)
    return checks
