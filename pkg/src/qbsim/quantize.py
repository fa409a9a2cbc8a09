"""Canonical quantisation of the numerical modes.

Every mode is an independent oscillator with energy quantum ``hbar*omega_p``;
the positive-frequency vector-potential operator at node ``i`` is the linear
form ``sum_p alpha_p a_p`` with ``alpha_p = sqrt(hbar/2 omega_p) exp(-i omega_p t) Phi[i, p]``.
"""

from dataclasses import dataclass, field

import numpy as np

from .constants import PhysicalConstants
from .modes import ModeBasis


class UnnormalizedStateError(ValueError):
    pass


@dataclass(frozen=True)
class QuantizedField:
    basis: ModeBasis = field(repr=False)
    constants: PhysicalConstants

    @classmethod
    def from_basis(cls, basis: ModeBasis) -> "QuantizedField":
        return cls(basis, basis.system.profile.constants)

    @property
    def dH(self) -> np.ndarray:
        return self.constants.hbar * self.basis.omega

    @property
    def amplitude_scale(self) -> np.ndarray:
        """``sqrt(hbar / 2 omega_p)``."""
        return np.sqrt(self.constants.hbar / (2.0 * self.basis.omega))

    def zero_point_energy(self) -> float:
        return 0.5 * float(self.dH.sum())


@dataclass(frozen=True)
class DetectorCoefficients:
    alpha: np.ndarray
    position_index: int
    time: float


def detector_alpha(field: QuantizedField, node: int, t: float) -> DetectorCoefficients:
    n1 = field.basis.Phi.shape[0]
    if not 0 <= node < n1:
        raise IndexError(f"node {node} outside 0..{n1 - 1}")
    omega = field.basis.omega
    alpha = field.amplitude_scale * np.exp(-1j * omega * t) * field.basis.Phi[node, :]
    return DetectorCoefficients(alpha, int(node), float(t))


def detector_alphas(field: QuantizedField, nodes, times) -> np.ndarray:
    """Stack of alpha vectors for paired ``nodes[k]``, ``times[k]``; shape ``(k, n_modes)``."""
    nodes = np.atleast_1d(np.asarray(nodes, dtype=int))
    times = np.atleast_1d(np.asarray(times, dtype=float))
    phase = np.exp(-1j * np.outer(times, field.basis.omega))
    return field.amplitude_scale[None, :] * phase * field.basis.Phi[nodes, :]


def hamiltonian_expectation(field: QuantizedField, state, tol: float = 1e-8) -> float:
    """Energy above the zero point, ``<H> - sum hbar omega / 2``.

    ``state`` is a :class:`~qbsim.packets.PhotonState` or ``None`` for vacuum.
    """
    if state is None:
        return 0.0
    from .correlations import number_weighted_expectation

    for beta in state.amplitudes():
        norm = float(np.vdot(beta.g, beta.g).real)
        if abs(norm - 1.0) > tol:
            raise UnnormalizedStateError(f"photon amplitudes have norm {norm}")
    return float(number_weighted_expectation(state, field.dH).real)
