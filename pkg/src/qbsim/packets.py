"""Wave-packet photons: envelopes, modal projection and photon states."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .modes import ModeBasis


class DegenerateProjectionError(ValueError):
    """The packet has (numerically) no weight on the retained modes."""


class Shape(str, Enum):
    GAUSSIAN = "gaussian"
    LORENTZIAN = "lorentzian"


@dataclass(frozen=True)
class WavePacket:
    shape: Shape
    kappa0: float
    x0: float
    dx0: float
    amplitude: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "shape", Shape(self.shape))
        if not self.dx0 > 0:
            raise ValueError(f"packet width must be positive, got {self.dx0}")

    def check_inside(self, Rx: float) -> None:
        if not abs(self.x0) < 0.5 * Rx:
            raise ValueError(f"packet centre {self.x0} outside the cell of length {Rx}")


def evaluate_packet(packet: WavePacket, x):
    u = np.asarray(x, dtype=float) - packet.x0
    if packet.shape is Shape.GAUSSIAN:
        envelope = np.exp(-((u / (np.sqrt(2.0) * packet.dx0)) ** 2))
    else:
        envelope = np.exp(-np.abs(u) / packet.dx0)
    return packet.amplitude * envelope * np.exp(1j * packet.kappa0 * u)


@dataclass(frozen=True)
class ModalAmplitudes:
    """Unit-norm probability amplitudes over the modes of one basis."""

    g: np.ndarray
    raw_norm: float = field(default=1.0, compare=False)

    def __post_init__(self):
        norm = np.linalg.norm(self.g)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"modal amplitudes must have unit norm, got {norm}")

    @classmethod
    def normalized(cls, g) -> "ModalAmplitudes":
        g = np.asarray(g, dtype=complex)
        n = np.linalg.norm(g)
        return cls(g / n, raw_norm=float(n))

    def support(self, rel: float = 1e-12) -> np.ndarray:
        a = np.abs(self.g)
        return np.flatnonzero(a >= rel * a.max())


def project_onto_modes(samples, basis: ModeBasis) -> np.ndarray:
    """``Phi^H M samples`` for node samples of length ``n1``."""
    return basis.Phi.conj().T @ (basis.system.M @ samples)


def project_packet(packet: WavePacket, basis: ModeBasis, rel_tol: float = 1e-12) -> ModalAmplitudes:
    """Project node samples of ``packet`` onto ``basis`` and normalise in mode space.

    Raises :class:`DegenerateProjectionError` when the projected norm is below
    ``rel_tol`` times the mass norm of the samples.
    """
    mesh = basis.system.mesh
    packet.check_inside(mesh.Rx)
    G = evaluate_packet(packet, mesh.dof_nodes)
    g = project_onto_modes(G, basis)
    norm = np.linalg.norm(g)
    mass_norm = np.sqrt(abs(np.vdot(G, basis.system.M @ G)))
    if mass_norm == 0 or norm < rel_tol * mass_norm:
        raise DegenerateProjectionError("packet is orthogonal to the retained modes")
    return ModalAmplitudes(g / norm, raw_norm=float(norm))


def reconstruct(amplitudes: ModalAmplitudes, basis: ModeBasis) -> np.ndarray:
    """Node-space field ``Phi g`` (up to the modal normalisation)."""
    return basis.Phi @ amplitudes.g


@dataclass(frozen=True)
class PhotonState:
    """Product state of zero, one or two wave-packet photons.

    For two photons the physical norm is ``1 + |beta1^H beta2|^2``; it is kept
    as-is and divided out by the correlation functions.
    """

    arity: int
    beta1: ModalAmplitudes | None = None
    beta2: ModalAmplitudes | None = None

    def __post_init__(self):
        if self.arity not in (0, 1, 2):
            raise ValueError(f"unsupported photon number {self.arity}")
        present = [b is not None for b in (self.beta1, self.beta2)]
        if present != [i < self.arity for i in range(2)]:
            raise ValueError("amplitude vectors do not match the photon number")
        if self.arity == 2 and self.beta1.g.shape != self.beta2.g.shape:
            raise ValueError("both photons must live on the same mode basis")

    @classmethod
    def vacuum(cls) -> "PhotonState":
        return cls(0)

    @classmethod
    def single(cls, beta: ModalAmplitudes) -> "PhotonState":
        return cls(1, beta)

    def amplitudes(self) -> list[ModalAmplitudes]:
        return [b for b in (self.beta1, self.beta2) if b is not None]

    def norm2(self) -> float:
        if self.arity < 2:
            return 1.0
        return 1.0 + abs(np.vdot(self.beta1.g, self.beta2.g)) ** 2


def make_two_photon(left: ModalAmplitudes, right: ModalAmplitudes) -> PhotonState:
    return PhotonState(2, left, right)
