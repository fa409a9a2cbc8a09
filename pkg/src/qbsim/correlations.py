"""First- and second-order field correlations of one- and two-photon states.

Detector events enter through their ``alpha`` vectors (see
:func:`qbsim.quantize.detector_alpha`); a two-photon state
``(a^dag.beta1)(a^dag.beta2)|0>`` enters through ``beta1``, ``beta2``.
All expectation values are divided by the state norm ``<Psi|Psi>``.
"""

import numpy as np

from .ladder import LadderProduct, ann, contract, cre, vacuum_expectation
from .packets import PhotonState
from .quantize import QuantizedField, detector_alphas


class DegenerateDenominatorError(ZeroDivisionError):
    """A detector sees (numerically) no intensity."""


# closed forms -----------------------------------------------------------


def first_order_two_photon(alpha, b1, b2):
    """``<0|(b1* a)(b2* a)(alpha* a^dag)(alpha a)(b2 a^dag)(b1 a^dag)|0>``, unnormalised.

    Four pairings; the two cross terms are complex conjugates of each other.
    """
    z1, z2 = contract(alpha, b1), contract(alpha, b2)
    s = np.vdot(b1, b2)
    n1, n2 = np.vdot(b1, b1).real, np.vdot(b2, b2).real
    return np.abs(z1) ** 2 * n2 + np.abs(z2) ** 2 * n1 + 2 * np.real(z1 * np.conj(z2) * s)


def two_event_amplitude(alpha_i, alpha_j, b1, b2):
    """``<0|A+(j) A+(i)|Psi>``: the bosonic (symmetric) two-photon detection amplitude."""
    return contract(alpha_j, b2) * contract(alpha_i, b1) + contract(alpha_i, b2) * contract(alpha_j, b1)


def first_order_printed_signs(alpha, b1, b2):
    """Four-term expansion with the alternating signs ``+ - - +``.

    Kept only to document that this sign pattern disagrees with the bosonic
    commutator; it is not used by any computation.
    """
    z1, z2 = contract(alpha, b1), contract(alpha, b2)
    s = np.vdot(b1, b2)
    n1, n2 = np.vdot(b1, b1).real, np.vdot(b2, b2).real
    return np.abs(z1) ** 2 * n2 + np.abs(z2) ** 2 * n1 - 2 * np.real(z1 * np.conj(z2) * s)


def two_event_amplitude_antisymmetric(alpha_i, alpha_j, b1, b2):
    """Antisymmetrised variant of :func:`two_event_amplitude`; documentation only."""
    return contract(alpha_j, b2) * contract(alpha_i, b1) - contract(alpha_i, b2) * contract(alpha_j, b1)


# engine expressions ------------------------------------------------------


def first_order_product(alpha, b1, b2=None) -> LadderProduct:
    """``<Psi| A-(x,t) A+(x,t) |Psi>`` written as a ladder product."""
    inner = [cre(np.conj(alpha)), ann(alpha)]
    if b2 is None:
        return LadderProduct([ann(np.conj(b1)), *inner, cre(b1)])
    return LadderProduct([ann(np.conj(b1)), ann(np.conj(b2)), *inner, cre(b2), cre(b1)])


def second_order_product(alpha_i, alpha_j, b1, b2) -> LadderProduct:
    """``<Psi| A-(i) A-(j) A+(j) A+(i) |Psi>`` as a ladder product."""
    return LadderProduct(
        [
            ann(np.conj(b1)),
            ann(np.conj(b2)),
            cre(np.conj(alpha_i)),
            cre(np.conj(alpha_j)),
            ann(alpha_j),
            ann(alpha_i),
            cre(b2),
            cre(b1),
        ]
    )


def number_weighted_expectation(state: PhotonState, weights, chunk: int = 256):
    """``<Psi| sum_p w_p a_p^dag a_p |Psi> / <Psi|Psi>`` through the ladder engine.

    The sum over modes is evaluated as a batch of products with unit vectors.
    """
    if state.arity == 0:
        return 0.0
    weights = np.asarray(weights)
    betas = [b.g for b in state.amplitudes()]
    n = betas[0].size
    total = 0.0
    for s in range(0, n, chunk):
        idx = np.arange(s, min(s + chunk, n))
        unit = np.zeros((idx.size, n), dtype=complex)
        unit[np.arange(idx.size), idx] = 1.0
        middle = [cre(unit * weights[None, :]), ann(unit)]
        bra = [ann(np.conj(b)) for b in betas]
        ket = [cre(b) for b in reversed(betas)]
        total = total + vacuum_expectation(LadderProduct(bra + middle + ket)).sum()
    return total / state.norm2()


# state-level correlations -------------------------------------------------


def _betas(state: PhotonState):
    if state.arity not in (0, 1, 2):
        raise ValueError(f"unsupported photon number {state.arity}")
    return [b.g for b in state.amplitudes()]


def intensity_from_alpha(alpha, state: PhotonState):
    betas = _betas(state)
    if state.arity == 0:
        return np.zeros(np.shape(alpha)[:-1])[()]
    if state.arity == 1:
        return np.abs(contract(alpha, betas[0])) ** 2
    return first_order_two_photon(alpha, *betas) / state.norm2()


def first_order(field: QuantizedField, state: PhotonState, node: int, t: float) -> float:
    """Normalised ``<A-(x_node, t) A+(x_node, t)>``."""
    alpha = detector_alphas(field, [node], [t])[0]
    return float(intensity_from_alpha(alpha, state))


def numerator_from_alpha(alpha_i, alpha_j, state: PhotonState):
    if state.arity != 2:
        raise ValueError("second-order correlation needs a two-photon state")
    b1, b2 = _betas(state)
    return np.abs(two_event_amplitude(alpha_i, alpha_j, b1, b2)) ** 2 / state.norm2()


def second_order_numerator(field, state, node_i, t_i, node_j, t_j) -> float:
    ai, aj = detector_alphas(field, [node_i, node_j], [t_i, t_j])
    return float(numerator_from_alpha(ai, aj, state))


def g2_from_alpha(alpha_1, alpha_2, state, alpha_b1=None, tiny=1e-30):
    """``A / (B1 B2)``; ``alpha_b1`` overrides the event used for ``B1``."""
    A = numerator_from_alpha(alpha_1, alpha_2, state)
    B1 = intensity_from_alpha(alpha_1 if alpha_b1 is None else alpha_b1, state)
    B2 = intensity_from_alpha(alpha_2, state)
    # intensities are compared with the detector's own scale sum_p |alpha_p|^2
    ref1 = alpha_1 if alpha_b1 is None else alpha_b1
    for B, a in ((B1, ref1), (B2, alpha_2)):
        if np.any(B < tiny * np.sum(np.abs(a) ** 2, axis=-1)):
            raise DegenerateDenominatorError("detector intensity below threshold")
    return A / (B1 * B2)


def g2(field, state, event1, event2, literal_b1: bool = False, tiny: float = 1e-30) -> float:
    """Normalised second-order correlation of two detection events ``(node, t)``.

    With ``literal_b1`` the first intensity is taken at ``(node2, t1)``
    instead of ``(node1, t1)``.
    """
    (n1, t1), (n2, t2) = event1, event2
    nodes, times = [n1, n2], [t1, t2]
    if literal_b1:
        nodes.append(n2)
        times.append(t1)
    alphas = detector_alphas(field, nodes, times)
    alpha_b1 = alphas[2] if literal_b1 else None
    return float(g2_from_alpha(alphas[0], alphas[1], state, alpha_b1, tiny))
