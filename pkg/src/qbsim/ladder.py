"""Vacuum expectation values of products of linear forms in ladder operators.

A factor is either ``A = sum_p alpha_p a_p`` (annihilation) or
``B = sum_p beta_p a_p^dagger`` (creation).  The only non-trivial commutator
is ``[A, B] = alpha^t beta``, so ``<0| f_1 ... f_m |0>`` is the sum over all
complete pairings in which every annihilation factor is matched with a
creation factor to its right, each pair contributing ``alpha^t beta``.

Coefficient vectors may carry leading batch dimensions; contractions
broadcast over them.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np


class Kind(str, Enum):
    ANNIHILATION = "a"
    CREATION = "c"


@dataclass(frozen=True)
class LadderFactor:
    kind: Kind
    coeff: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "coeff", np.asarray(self.coeff, dtype=complex))


def ann(coeff) -> LadderFactor:
    return LadderFactor(Kind.ANNIHILATION, coeff)


def cre(coeff) -> LadderFactor:
    return LadderFactor(Kind.CREATION, coeff)


@dataclass(frozen=True)
class LadderProduct:
    """Ordered product; ``factors[0]`` is leftmost (applied last)."""

    factors: tuple

    def __init__(self, factors):
        factors = tuple(factors)
        sizes = {f.coeff.shape[-1] for f in factors}
        if len(sizes) > 1:
            raise ValueError(f"factors act on different mode counts: {sorted(sizes)}")
        object.__setattr__(self, "factors", factors)

    def __matmul__(self, other: "LadderProduct") -> "LadderProduct":
        return LadderProduct(self.factors + other.factors)

    @property
    def n_modes(self):
        return self.factors[0].coeff.shape[-1] if self.factors else 0


def contract(a, b):
    """Bilinear ``a^t b`` over the last axis, broadcasting leading axes."""
    return np.einsum("...i,...i->...", a, b)


def vacuum_expectation(expr: LadderProduct):
    """``<0|expr|0>`` by recursive contraction of the leftmost factor."""
    factors = expr.factors
    n_ann = sum(f.kind is Kind.ANNIHILATION for f in factors)
    shape = np.broadcast_shapes(*(f.coeff.shape[:-1] for f in factors)) if factors else ()
    if 2 * n_ann != len(factors):
        return np.zeros(shape, dtype=complex)[()]
    if not factors:
        return np.complex128(1.0)

    # pair table: contraction of annihilator i with creator j > i
    table = {}
    for i, fi in enumerate(factors):
        if fi.kind is not Kind.ANNIHILATION:
            continue
        for j in range(i + 1, len(factors)):
            if factors[j].kind is Kind.CREATION:
                table[i, j] = contract(fi.coeff, factors[j].coeff)

    @lru_cache(maxsize=None)
    def reduce(remaining):
        if not remaining:
            return 1.0
        first, rest = remaining[0], remaining[1:]
        # <0| a^dagger ... = 0
        if factors[first].kind is Kind.CREATION:
            return 0.0
        total = 0.0
        for k, j in enumerate(rest):
            if (first, j) in table:
                total = total + table[first, j] * reduce(rest[:k] + rest[k + 1 :])
        return total

    out = reduce(tuple(range(len(factors))))
    return np.broadcast_to(np.asarray(out, dtype=complex), shape)[()]


def normal_order_swap(expr: LadderProduct, position: int):
    """Rewrite ``... B A ...`` at ``position`` as ``(... A B ...) - (alpha^t beta)(... ...)``.

    Returns the pair of products and the scalar so that
    ``<expr> = <swapped> - scalar * <dropped>``.
    """
    f = list(expr.factors)
    B, A = f[position], f[position + 1]
    if B.kind is not Kind.CREATION or A.kind is not Kind.ANNIHILATION:
        raise ValueError("expected a creation factor followed by an annihilation factor")
    swapped = f[:position] + [A, B] + f[position + 2 :]
    dropped = f[:position] + f[position + 2 :]
    return LadderProduct(swapped), contract(A.coeff, B.coeff), LadderProduct(dropped)
