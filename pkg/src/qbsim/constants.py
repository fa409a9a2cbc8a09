"""Physical constants in SI units."""

from dataclasses import dataclass

import numpy as np
from scipy import constants as _codata


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = _codata.hbar
    mu0: float = _codata.mu_0
    eps0: float = _codata.epsilon_0

    def __post_init__(self):
        if min(self.hbar, self.mu0, self.eps0) <= 0:
            raise ValueError("physical constants must be strictly positive")

    @property
    def c(self) -> float:
        # derived, never stored: keeps c*c*mu0*eps0 == 1 to round-off
        return 1.0 / np.sqrt(self.mu0 * self.eps0)


SI = PhysicalConstants()
