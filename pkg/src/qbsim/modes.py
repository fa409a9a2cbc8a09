"""Mass-orthonormal Bloch mode basis and dispersion folding."""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .assembly import BlochSystem


class EigensolverError(RuntimeError):
    """The dense Hermitian eigensolver failed or the mass matrix is not SPD."""


@dataclass(frozen=True)
class ModeBasis:
    Phi: np.ndarray = field(repr=False)
    omega: np.ndarray
    kappa_labels: np.ndarray
    theta0: float
    system: BlochSystem = field(repr=False)

    @property
    def n_modes(self) -> int:
        return self.omega.size

    def residuals(self) -> np.ndarray:
        """``||S phi + omega^2 mu0 M phi|| / (omega^2 mu0 ||M phi||)`` per mode."""
        mu0 = self.system.profile.constants.mu0
        MPhi = self.system.M @ self.Phi
        R = self.system.S @ self.Phi + MPhi * (self.omega**2 * mu0)
        return np.linalg.norm(R, axis=0) / (np.linalg.norm(MPhi, axis=0) * self.omega**2 * mu0)


def default_omega_floor(system: BlochSystem) -> float:
    c = system.profile.constants.c
    return 1e-6 * 2 * math.pi * c / system.mesh.Rx


def solve_modes(system: BlochSystem, omega_floor: float | None = None) -> ModeBasis:
    """Solve ``S phi = -omega^2 mu0 M phi`` densely and keep modes above ``omega_floor``."""
    if omega_floor is None:
        omega_floor = default_omega_floor(system)
    mu0 = system.profile.constants.mu0
    A = -system.S.toarray()
    B = system.M.toarray()
    try:
        lam, Phi = sla.eigh(A, B, overwrite_a=True, overwrite_b=True, check_finite=False)
    except sla.LinAlgError as exc:
        if "not positive definite" in str(exc):
            raise EigensolverError("mass matrix is not positive definite") from exc
        raise EigensolverError(f"eigensolver failed: {exc}") from exc
    del A, B

    omega = np.sqrt(np.clip(lam, 0.0, None) / mu0)
    keep = omega > omega_floor
    omega, Phi = omega[keep], np.ascontiguousarray(Phi[:, keep])

    _m_orthonormalize_clusters(Phi, lam[keep], system.M)
    _fix_phases(Phi)
    kappa = bloch_labels(Phi, system)
    return ModeBasis(Phi, omega, kappa, system.theta0, system)


def _m_orthonormalize_clusters(Phi, lam, M, rtol=1e-9):
    """Re-orthonormalise near-degenerate clusters in the M inner product, in place."""
    scale = np.maximum(np.abs(lam), np.abs(lam).max() * 1e-15)
    breaks = np.flatnonzero(np.diff(lam) > rtol * scale[:-1]) + 1
    for block_ids in np.split(np.arange(lam.size), breaks):
        if block_ids.size < 2:
            continue
        block = Phi[:, block_ids]
        L = np.linalg.cholesky(block.conj().T @ (M @ block))
        Phi[:, block_ids] = sla.solve_triangular(L, block.conj().T, lower=True).conj().T
    norms = np.sqrt(np.einsum("ij,ij->j", Phi.conj(), M @ Phi).real)
    Phi /= norms[None, :]


def _fix_phases(Phi):
    """Rotate each column so that its largest-magnitude entry is real positive."""
    idx = np.argmax(np.abs(Phi), axis=0)
    peak = Phi[idx, np.arange(Phi.shape[1])]
    Phi *= (np.abs(peak) / peak)[None, :]


def bloch_labels(Phi, system: BlochSystem, chunk: int = 512) -> np.ndarray:
    """Dominant Bloch wavenumber ``(theta0 + 2 pi p) / Rx`` of each column."""
    mesh = system.mesh
    n1 = mesh.n1
    envelope = np.exp(-1j * system.theta0 * mesh.dof_nodes / mesh.Rx)[:, None]
    p = np.empty(Phi.shape[1], dtype=int)
    for s in range(0, Phi.shape[1], chunk):
        spec = np.abs(np.fft.fft(Phi[:, s : s + chunk] * envelope, axis=0))
        p[s : s + chunk] = np.argmax(spec, axis=0)
    p = np.where(p >= (n1 + 1) // 2, p - n1, p)
    return (system.theta0 + 2 * math.pi * p) / mesh.Rx


def mass_gram(basis: ModeBasis) -> np.ndarray:
    return basis.Phi.conj().T @ (basis.system.M @ basis.Phi)


def check_orthonormality(basis: ModeBasis) -> tuple[float, float]:
    """Return ``(max off-diagonal, max diagonal deviation)`` of ``Phi^H M Phi - I``."""
    G = mass_gram(basis)
    diag = np.abs(np.diag(G) - 1.0)
    np.fill_diagonal(G, 0.0)
    return float(np.abs(G).max(initial=0.0)), float(diag.max(initial=0.0))


@dataclass(frozen=True)
class DispersionPoint:
    kappa: float
    omega: float
    theta0: float
    band: int


@dataclass(frozen=True)
class DispersionDiagram:
    points: list

    def band(self, b: int):
        pts = sorted((p for p in self.points if p.band == b), key=lambda p: p.theta0)
        return np.array([p.theta0 for p in pts]), np.array([p.omega for p in pts])


def fold_to_first_zone(kappa, Rx):
    """Fold wavenumbers into ``[-pi/Rx, pi/Rx]``."""
    G = 2 * math.pi / Rx
    k = np.asarray(kappa, dtype=float)
    folded = k - G * np.round(k / G)
    return float(folded) if folded.ndim == 0 else folded


def fold_dispersion(systems, bands: int, omega_floor=None) -> DispersionDiagram:
    """Lowest ``bands`` frequencies of each system, folded into the first zone."""
    systems = list(systems)
    if not systems:
        return DispersionDiagram([])
    ref = systems[0]
    points = []
    for system in systems:
        if system.mesh != ref.mesh or system.profile != ref.profile:
            raise ValueError("all systems in a sweep must share mesh and profile")
        basis = solve_modes(system, omega_floor)
        kf = fold_to_first_zone(basis.kappa_labels[:bands], system.mesh.Rx)
        for b, (k, w) in enumerate(zip(np.atleast_1d(kf), basis.omega[:bands])):
            points.append(DispersionPoint(float(k), float(w), system.theta0, b))
    return DispersionDiagram(points)
