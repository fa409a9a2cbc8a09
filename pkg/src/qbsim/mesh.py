"""Uniform 1-D mesh of the primitive cell and the slab permittivity profile."""

from dataclasses import dataclass, field

import numpy as np

from .constants import SI, PhysicalConstants


class MeshError(ValueError):
    """Invalid mesh or profile parameters."""


class MeshAlignmentError(MeshError):
    """Slab interfaces do not coincide with mesh nodes."""


@dataclass(frozen=True)
class Mesh1D:
    """Evenly spaced nodes on ``[-Rx/2, Rx/2]``.

    The last node is the Bloch image of the first one, so the number of
    unknowns is ``n1 = n0 - 1``.
    """

    Rx: float
    n0: int
    nodes: np.ndarray = field(repr=False, compare=False)

    @property
    def dx(self) -> float:
        return self.Rx / (self.n0 - 1)

    @property
    def n1(self) -> int:
        return self.n0 - 1

    @property
    def dof_nodes(self) -> np.ndarray:
        """Coordinates of the ``n1`` independent unknowns."""
        return self.nodes[:-1]

    def nearest_node(self, x: float) -> int:
        """Index of the unknown closest to ``x`` (the right boundary maps to 0)."""
        i = int(round((x + 0.5 * self.Rx) / self.dx))
        if i < 0 or i > self.n1:
            raise MeshError(f"coordinate {x} lies outside the cell")
        return i % self.n1


def build_mesh(Rx: float, n0: int) -> Mesh1D:
    if not Rx > 0:
        raise MeshError(f"cell length must be positive, got {Rx}")
    if int(n0) != n0 or n0 < 3:
        raise MeshError(f"need at least 3 grid points, got {n0}")
    n0 = int(n0)
    dx = Rx / (n0 - 1)
    nodes = -0.5 * Rx + np.arange(n0) * dx
    nodes[-1] = 0.5 * Rx
    nodes.setflags(write=False)
    return Mesh1D(Rx=float(Rx), n0=n0, nodes=nodes)


@dataclass(frozen=True)
class PermittivityProfile:
    """Single centred slab of relative permittivity ``eps_s`` and thickness ``Rs``."""

    eps_s: float
    Rs: float
    background: float = 1.0
    constants: PhysicalConstants = SI

    def __post_init__(self):
        if self.eps_s < 1:
            raise MeshError(f"slab permittivity must be >= 1, got {self.eps_s}")
        if not self.Rs > 0:
            raise MeshError(f"slab thickness must be positive, got {self.Rs}")
        if self.background <= 0:
            raise MeshError("background permittivity must be positive")

    def check_fits(self, mesh: Mesh1D) -> None:
        if not self.Rs < mesh.Rx:
            raise MeshError(f"slab thickness {self.Rs} must be smaller than cell {mesh.Rx}")

    def check_aligned(self, mesh: Mesh1D, rtol: float = 1e-9) -> None:
        """Raise unless both slab faces sit on mesh nodes."""
        self.check_fits(mesh)
        steps = (0.5 * mesh.Rx - 0.5 * self.Rs) / mesh.dx
        if abs(steps - round(steps)) > rtol * max(1.0, steps):
            raise MeshAlignmentError(
                f"slab faces at +-{self.Rs / 2} fall inside elements of width {mesh.dx}"
            )

    def relative(self, x):
        """Relative permittivity at ``x``; the slab faces belong to the slab."""
        x = np.asarray(x, dtype=float)
        # tolerance absorbs node round-off so that face nodes count as slab
        inside = np.abs(x) <= 0.5 * self.Rs * (1 + 1e-12) + 1e-15
        return np.where(inside, self.eps_s, self.background)

    def slab_node_count(self, mesh: Mesh1D) -> int:
        return int(np.count_nonzero(self.relative(mesh.nodes) == self.eps_s))


def sample_eps(profile: PermittivityProfile, x):
    """Absolute permittivity (F/m) at ``x``."""
    out = profile.relative(x) * profile.constants.eps0
    return float(out) if np.ndim(out) == 0 else out
