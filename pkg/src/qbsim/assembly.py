"""Stiffness/mass matrix pairs under Bloch-periodic boundary conditions.

Both discretisations produce ``S phi + omega**2 mu0 M phi = 0`` on the
``n1 = n0 - 1`` independent nodes; the node at ``+Rx/2`` is eliminated
through ``phi[n0-1] = exp(1j*theta0) * phi[0]``.
"""

import math
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.sparse as sp

from .mesh import Mesh1D, PermittivityProfile


class Method(str, Enum):
    FDM = "fdm"
    FEM = "fem"


def wrap_phase(theta0: float) -> float:
    """Map a Bloch phase into ``(-pi, pi]``."""
    t = math.remainder(float(theta0), 2 * math.pi)
    return math.pi if t == -math.pi else t


@dataclass(frozen=True)
class BlochSystem:
    S: sp.csr_matrix
    M: sp.csr_matrix
    theta0: float
    method: Method
    mesh: Mesh1D
    profile: PermittivityProfile

    @property
    def n1(self) -> int:
        return self.mesh.n1

    def hermiticity_error(self) -> float:
        """Largest of ``max|X - X^H| / max|X|`` over S and M."""
        errs = []
        for X in (self.S, self.M):
            d = (X - X.conj().T).tocoo()
            scale = abs(X).max()
            errs.append((abs(d.data).max() if d.nnz else 0.0) / scale)
        return max(errs)


def _neighbour_pairs(n1: int, theta0: float):
    """Row, column and Bloch factor for each (i, i+1) link, including the wrap."""
    i = np.arange(n1)
    j = (i + 1) % n1
    phase = np.ones(n1, dtype=complex)
    phase[-1] = np.exp(1j * theta0)
    return i, j, phase


def assemble_fdm(mesh: Mesh1D, profile: PermittivityProfile, theta0: float) -> BlochSystem:
    """Central-difference stencil with node-sampled permittivity."""
    profile.check_fits(mesh)
    theta0 = _checked_phase(theta0)
    n1, dx = mesh.n1, mesh.dx
    i, j, ph = _neighbour_pairs(n1, theta0)
    rows = np.concatenate([i, i, j])
    cols = np.concatenate([i, j, i])
    vals = np.concatenate([np.full(n1, -2.0 + 0j), ph, ph.conj()]) / dx
    S = sp.coo_matrix((vals, (rows, cols)), shape=(n1, n1)).tocsr()
    eps = profile.relative(mesh.dof_nodes) * profile.constants.eps0
    M = sp.diags(eps * dx + 0j, format="csr")
    return BlochSystem(S, M, theta0, Method.FDM, mesh, profile)


def assemble_fem(mesh: Mesh1D, profile: PermittivityProfile, theta0: float) -> BlochSystem:
    """Linear (hat-function) Galerkin elements, permittivity constant per element.

    The basis function of node 0 continues over the last element multiplied by
    ``exp(1j*theta0)``, which carries the Bloch condition into the matrices.
    """
    profile.check_aligned(mesh)
    theta0 = _checked_phase(theta0)
    n1, dx = mesh.n1, mesh.dx
    a, b, ph = _neighbour_pairs(n1, theta0)
    mid = 0.5 * (mesh.nodes[:-1] + mesh.nodes[1:])
    eps_elem = profile.relative(mid) * profile.constants.eps0

    # local blocks: stiffness (1/dx)[[-1, 1], [1, -1]], mass (eps dx/6)[[2, 1], [1, 2]]
    rows = np.concatenate([a, b, a, b])
    cols = np.concatenate([a, b, b, a])
    one = np.ones(n1)
    s_vals = np.concatenate([-one, -one, ph, ph.conj()]) / dx
    m_loc = eps_elem * dx / 6.0
    m_vals = np.concatenate([2 * m_loc, 2 * m_loc, m_loc * ph, m_loc * ph.conj()])
    S = sp.coo_matrix((s_vals.astype(complex), (rows, cols)), shape=(n1, n1)).tocsr()
    M = sp.coo_matrix((m_vals.astype(complex), (rows, cols)), shape=(n1, n1)).tocsr()
    return BlochSystem(S, M, theta0, Method.FEM, mesh, profile)


def assemble(mesh, profile, theta0, method="fem") -> BlochSystem:
    method = Method(method)
    if method is Method.FDM:
        return assemble_fdm(mesh, profile, theta0)
    return assemble_fem(mesh, profile, theta0)


def _checked_phase(theta0):
    theta0 = wrap_phase(theta0)
    if theta0 == 0.0:
        warnings.warn(
            "theta0 = 0 gives plain periodic conditions; the constant null mode "
            "is dropped by the mode solver",
            stacklevel=3,
        )
    return theta0
