"""Analytic transfer-matrix results for a single dielectric slab.

``slab_rt`` gives normal-incidence reflection and transmission of a slab in
vacuum; ``bloch_dispersion`` solves the two-layer unit-cell trace condition
of the periodically repeated slab.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .constants import SI


@dataclass(frozen=True)
class SlabResponse:
    """Reflection ``R`` is referenced to the front face, transmission ``T`` to
    the incident wave continued to the back face (``T = E_t / E_inc`` there)."""

    kappa: float
    R: complex
    T: complex

    @property
    def R2(self) -> float:
        return abs(self.R) ** 2

    @property
    def T2(self) -> float:
        return abs(self.T) ** 2

    @property
    def phase_difference_deg(self) -> float:
        """``arg(R) - arg(T)`` wrapped into ``(-180, 180]`` degrees."""
        d = math.degrees(np.angle(self.R) - np.angle(self.T))
        d = math.remainder(d, 360.0)
        return 180.0 if d == -180.0 else d


def _airy(eps_s, Rs, kappa):
    n = np.sqrt(eps_s)
    r = (1 - n) / (1 + n)
    p = np.exp(1j * n * kappa * Rs)
    den = 1 - r**2 * p**2
    R = r * (1 - p**2) / den
    # p * exp(-i kappa Rs) folded into one exponential so that n = 1 gives T = 1 exactly
    T = (1 - r**2) * np.exp(1j * (n - 1) * kappa * Rs) / den
    return R, T


def slab_rt(eps_s: float, Rs: float, kappa: float) -> SlabResponse:
    if not kappa > 0:
        raise ValueError("wavenumber must be positive")
    if eps_s < 1:
        raise ValueError("slab permittivity must be >= 1")
    R, T = _airy(eps_s, Rs, kappa)
    return SlabResponse(float(kappa), complex(R), complex(T))


def design_scan(eps_s: float, Rs: float, kappas) -> np.ndarray:
    """Structured array with fields ``kappa, R2, T2, phase_diff_deg``."""
    kappas = np.atleast_1d(np.asarray(kappas, dtype=float))
    out = np.zeros(kappas.size, dtype=[("kappa", float), ("R2", float), ("T2", float), ("phase_diff_deg", float)])
    for row, k in zip(out, kappas):
        resp = slab_rt(eps_s, Rs, k)
        row["kappa"], row["R2"], row["T2"] = k, resp.R2, resp.T2
        row["phase_diff_deg"] = resp.phase_difference_deg
    return out


class _Gap:
    """Marker returned by :func:`bloch_dispersion` inside a band gap."""

    def __repr__(self):
        return "GAP"

    def __bool__(self):
        return False


GAP = _Gap()


def half_trace(eps_s, Rs, Rx, omega, c=SI.c):
    """``cos(k1 d1) cos(k2 d2) - (k1/k2 + k2/k1)/2 sin(k1 d1) sin(k2 d2)``."""
    omega = np.asarray(omega, dtype=float)
    n = math.sqrt(eps_s)
    k1, k2 = omega / c, n * omega / c
    d1, d2 = Rx - Rs, Rs
    ratio = 0.5 * (1.0 / n + n)
    return np.cos(k1 * d1) * np.cos(k2 * d2) - ratio * np.sin(k1 * d1) * np.sin(k2 * d2)


def bloch_dispersion(eps_s, Rs, Rx, omega, c=SI.c):
    """Bloch wavenumber in ``[0, pi/Rx]`` at angular frequency ``omega``, or ``GAP``."""
    if not omega > 0:
        raise ValueError("frequency must be positive")
    t = float(half_trace(eps_s, Rs, Rx, omega, c))
    if abs(t) > 1.0:
        return GAP
    return math.acos(t) / Rx


def band_frequencies(eps_s, Rs, Rx, theta0, n_bands, c=SI.c, samples_per_rad=40):
    """Lowest ``n_bands`` positive frequencies whose Bloch phase is ``theta0``.

    Roots of ``half_trace(omega) - cos(theta0)``; tangential roots at band
    edges of an empty lattice are picked up by local minimisation.
    """
    target = math.cos(theta0)
    n = math.sqrt(eps_s)
    optical = (Rx - Rs) + n * Rs
    step = c / (optical * samples_per_rad)

    def f(w):
        return float(half_trace(eps_s, Rs, Rx, w, c)) - target

    roots = []
    w_lo = step * 1e-3
    f_lo = f(w_lo)
    while len(roots) < n_bands:
        w_grid = w_lo + step * np.arange(1, 401)
        f_grid = half_trace(eps_s, Rs, Rx, w_grid, c) - target
        ws = np.concatenate([[w_lo], w_grid])
        fs = np.concatenate([[f_lo], f_grid])
        for k in range(ws.size - 1):
            if fs[k] == 0.0:
                roots.append(ws[k])
            elif fs[k] * fs[k + 1] < 0:
                roots.append(brentq(f, ws[k], ws[k + 1], xtol=1e-14 * ws[k + 1], rtol=1e-15))
            elif k > 0 and _touches_zero(fs[k - 1], fs[k], fs[k + 1]):
                res = minimize_scalar(
                    lambda w: abs(f(w)),
                    bounds=(ws[k - 1], ws[k + 1]),
                    method="bounded",
                    options={"xatol": 1e-12 * ws[k]},
                )
                if abs(f(res.x)) < 1e-9:
                    roots.extend([res.x, res.x])
        w_lo, f_lo = ws[-1], fs[-1]
    return np.array(sorted(roots)[:n_bands])


def _touches_zero(prev, cur, nxt, tol=1e-3):
    """Local minimum of ``|f|`` close to zero without a sign change on either side."""
    same_sign = prev * cur > 0 and cur * nxt > 0
    return same_sign and abs(cur) < abs(prev) and abs(cur) <= abs(nxt) and abs(cur) < tol
