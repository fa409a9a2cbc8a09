"""Dense truncated Fock-space representation, used as an independent oracle."""

from functools import reduce

import numpy as np

from .ladder import Kind, LadderFactor, LadderProduct


def single_mode_annihilator(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)


def mode_annihilators(n_modes: int, dim: int) -> list[np.ndarray]:
    """``a_p`` on the tensor product of ``n_modes`` modes truncated at ``dim - 1`` photons."""
    a = single_mode_annihilator(dim)
    eye = np.eye(dim, dtype=complex)
    ops = []
    for p in range(n_modes):
        parts = [a if q == p else eye for q in range(n_modes)]
        ops.append(reduce(np.kron, parts))
    return ops


def vacuum_expectation_dense(expr: LadderProduct, dim: int | None = None) -> complex:
    """Evaluate ``<0|expr|0>`` by explicit matrix-vector products.

    The default cutoff holds every photon the creation factors can put into a
    single mode, so truncation never clips an intermediate state.
    """
    n = expr.n_modes
    n_cre = sum(f.kind is Kind.CREATION for f in expr.factors)
    dim = dim or n_cre + 1
    ops = mode_annihilators(n, dim)
    state = np.zeros(dim**n, dtype=complex)
    state[0] = 1.0
    for f in reversed(expr.factors):
        if f.kind is Kind.ANNIHILATION:
            state = sum(c * (op @ state) for c, op in zip(f.coeff, ops))
        else:
            state = sum(c * (op.conj().T @ state) for c, op in zip(f.coeff, ops))
    return complex(state[0])


def random_product(rng: np.random.Generator, max_modes=4, max_factors=6) -> LadderProduct:
    """Random product; most draws are particle-number balanced so they can be non-zero."""
    n_modes = int(rng.integers(1, max_modes + 1))
    if rng.random() < 0.8:
        half = int(rng.integers(1, max_factors // 2 + 1))
        kinds = [Kind.ANNIHILATION] * half + [Kind.CREATION] * half
        rng.shuffle(kinds)
    else:
        n_factors = int(rng.integers(1, max_factors + 1))
        kinds = [Kind.ANNIHILATION if rng.random() < 0.5 else Kind.CREATION for _ in range(n_factors)]
    factors = [
        LadderFactor(k, rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)) for k in kinds
    ]
    return LadderProduct(factors)
