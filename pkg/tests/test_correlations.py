import math

import numpy as np
import pytest

from qbsim import correlations as corr
from qbsim.fock import vacuum_expectation_dense
from qbsim.ladder import vacuum_expectation
from qbsim.packets import ModalAmplitudes, PhotonState, make_two_photon
from qbsim.quantize import QuantizedField

from conftest import small_basis


def _vec(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


@pytest.fixture(scope="module")
def field():
    return QuantizedField.from_basis(small_basis("fem", n0=101, Rx=1.0, eps_s=4.0, theta0=0.9))


def test_closed_forms_match_engine():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        a, ai, aj, b1, b2 = (_vec(rng, n) for _ in range(5))
        assert vacuum_expectation(corr.first_order_product(a, b1, b2)) == pytest.approx(
            corr.first_order_two_photon(a, b1, b2), rel=1e-10
        )
        assert vacuum_expectation(corr.second_order_product(ai, aj, b1, b2)) == pytest.approx(
            abs(corr.two_event_amplitude(ai, aj, b1, b2)) ** 2, rel=1e-10
        )


def test_closed_forms_match_dense_fock():
    rng = np.random.default_rng(8)
    a, ai, aj, b1, b2 = (_vec(rng, 2) for _ in range(5))
    assert vacuum_expectation_dense(corr.first_order_product(a, b1, b2)) == pytest.approx(
        corr.first_order_two_photon(a, b1, b2), rel=1e-10
    )
    assert vacuum_expectation_dense(corr.second_order_product(ai, aj, b1, b2)) == pytest.approx(
        abs(corr.two_event_amplitude(ai, aj, b1, b2)) ** 2, rel=1e-10
    )


def test_alternating_sign_variants_disagree_with_oracle():
    rng = np.random.default_rng(9)
    a, ai, aj, b1, b2 = (_vec(rng, 3) for _ in range(5))
    dense1 = vacuum_expectation_dense(corr.first_order_product(a, b1, b2))
    dense2 = vacuum_expectation_dense(corr.second_order_product(ai, aj, b1, b2))
    assert abs(corr.first_order_printed_signs(a, b1, b2) - dense1) > 1e-3 * abs(dense1)
    assert abs(abs(corr.two_event_amplitude_antisymmetric(ai, aj, b1, b2)) ** 2 - dense2) > 1e-3 * abs(dense2)


def test_single_photon_intensity():
    rng = np.random.default_rng(10)
    a, b = _vec(rng, 4), ModalAmplitudes.normalized(_vec(rng, 4))
    got = corr.intensity_from_alpha(a, PhotonState.single(b))
    assert got == pytest.approx(vacuum_expectation(corr.first_order_product(a, b.g)).real)
    assert corr.intensity_from_alpha(a, PhotonState.vacuum()) == 0


def test_positivity():
    rng = np.random.default_rng(11)
    for _ in range(200):
        n = 5
        state = make_two_photon(ModalAmplitudes.normalized(_vec(rng, n)), ModalAmplitudes.normalized(_vec(rng, n)))
        assert corr.intensity_from_alpha(_vec(rng, n), state) >= -1e-12
        assert corr.numerator_from_alpha(_vec(rng, n), _vec(rng, n), state) >= 0


def test_identical_single_mode_photons():
    """Two photons in one mode: g2 = 1/2 for equal-time detection of that mode."""
    e = ModalAmplitudes(np.array([1.0 + 0j, 0.0]))
    state = make_two_photon(e, e)
    a = np.array([1.0 + 0j, 0.0])
    assert corr.g2_from_alpha(a, a, state) == pytest.approx(0.5)


def test_distinguishable_photons_give_one():
    """Photons on disjoint mode blocks, each detector seeing one block only."""
    b1 = ModalAmplitudes.normalized([1, 2, 0, 0])
    b2 = ModalAmplitudes.normalized([0, 0, 1j, 1])
    state = make_two_photon(b1, b2)
    a1 = np.array([1, 1, 0, 0], complex)
    a2 = np.array([0, 0, 2, 1], complex)
    assert corr.g2_from_alpha(a1, a2, state) == pytest.approx(1.0, rel=1e-12)


def test_exchange_symmetry(field):
    rng = np.random.default_rng(12)
    n = field.basis.n_modes
    state = make_two_photon(ModalAmplitudes.normalized(_vec(rng, n)), ModalAmplitudes.normalized(_vec(rng, n)))
    e1, e2 = (10, 1e-9), (60, 2.5e-9)
    assert corr.g2(field, state, e1, e2) == pytest.approx(corr.g2(field, state, e2, e1), rel=1e-12)
    swapped = make_two_photon(state.beta2, state.beta1)
    assert corr.g2(field, swapped, e1, e2) == pytest.approx(corr.g2(field, state, e1, e2), rel=1e-12)


def test_g2_by_engine(field):
    rng = np.random.default_rng(13)
    n = field.basis.n_modes
    b1, b2 = ModalAmplitudes.normalized(_vec(rng, n)), ModalAmplitudes.normalized(_vec(rng, n))
    state = make_two_photon(b1, b2)
    N = state.norm2()
    from qbsim.quantize import detector_alphas

    ai, aj = detector_alphas(field, [5, 70], [0.0, 1e-9])
    A = vacuum_expectation(corr.second_order_product(ai, aj, b1.g, b2.g)).real / N
    B1 = vacuum_expectation(corr.first_order_product(ai, b1.g, b2.g)).real / N
    B2 = vacuum_expectation(corr.first_order_product(aj, b1.g, b2.g)).real / N
    assert corr.g2(field, state, (5, 0.0), (70, 1e-9)) == pytest.approx(A / (B1 * B2), rel=1e-10)
    assert corr.first_order(field, state, 5, 0.0) == pytest.approx(B1, rel=1e-10)
    assert corr.second_order_numerator(field, state, 5, 0.0, 70, 1e-9) == pytest.approx(A, rel=1e-10)


def test_literal_b1(field):
    rng = np.random.default_rng(14)
    n = field.basis.n_modes
    state = make_two_photon(ModalAmplitudes.normalized(_vec(rng, n)), ModalAmplitudes.normalized(_vec(rng, n)))
    e1, e2 = (10, 0.0), (60, 1e-9)
    lit = corr.g2(field, state, e1, e2, literal_b1=True)
    ratio = corr.first_order(field, state, 10, 0.0) / corr.first_order(field, state, 60, 0.0)
    assert lit == pytest.approx(corr.g2(field, state, e1, e2) * ratio, rel=1e-10)


def test_dark_detector_raises():
    state = make_two_photon(ModalAmplitudes.normalized([1, 0]), ModalAmplitudes.normalized([1, 0]))
    with pytest.raises(corr.DegenerateDenominatorError):
        corr.g2_from_alpha(np.array([0, 1.0 + 0j]), np.array([1.0 + 0j, 0]), state)


def test_second_order_needs_two_photons():
    with pytest.raises(ValueError):
        corr.numerator_from_alpha(np.ones(2), np.ones(2), PhotonState.single(ModalAmplitudes.normalized([1, 0])))


def test_number_weighted_expectation_by_dense_oracle():
    rng = np.random.default_rng(15)
    b1, b2 = ModalAmplitudes.normalized(_vec(rng, 3)), ModalAmplitudes.normalized(_vec(rng, 3))
    w = rng.uniform(1, 2, size=3)
    state = make_two_photon(b1, b2)
    got = corr.number_weighted_expectation(state, w, chunk=2)
    from qbsim.ladder import LadderProduct, ann, cre

    ref = 0
    for p in range(3):
        e = np.eye(3)[p]
        ref += w[p] * vacuum_expectation_dense(
            LadderProduct([ann(b1.g.conj()), ann(b2.g.conj()), cre(e), ann(e), cre(b2.g), cre(b1.g)])
        )
    assert got == pytest.approx(ref / state.norm2(), rel=1e-10)
