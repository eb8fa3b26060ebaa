import numpy as np
import pytest
import scipy.signal

from hosmdesign import (
    LtiSystem,
    augment_with_integrators,
    design_sliding_variable,
    normal_form,
    relative_degree,
    to_controller_canonical,
    transfer_function,
)
from hosmdesign.errors import RelativeDegreeError, UncontrollableError
from hosmdesign.linalg import Polynomial, controllability_matrix, polynomial_roots
from hosmdesign.lti import canonical_pair, pad_row
from hosmdesign.systems import PENDULUM_GAMMA, PENDULUM_PUBLISHED_C, integrator_chain

from conftest import random_controllable


def random_monic(rng, degree, lo=-10.0, hi=-0.1):
    return Polynomial(np.atleast_1d(np.real(np.poly(rng.uniform(lo, hi, degree))))[::-1])


class TestRelativeDegree:
    def test_pendulum_published_first_order_row(self, pend):
        assert relative_degree(pend, PENDULUM_PUBLISHED_C[1]) == 1

    def test_pendulum_published_rows_are_rounded(self, pend):
        # 4-decimal rounding leaves C B ~ 1e-4, so the printed r = 2, 3 rows
        # are relative degree one; the exact designs are not
        for r in (2, 3):
            assert relative_degree(pend, PENDULUM_PUBLISHED_C[r]) == 1
            assert relative_degree(pend, design_sliding_variable(pend, PENDULUM_GAMMA[r]).C) == r

    def test_chain_first_state(self, chain3):
        assert relative_degree(chain3, [1, 0, 0]) == 3

    def test_zero_output(self, pend):
        with pytest.raises(RelativeDegreeError):
            relative_degree(pend, np.zeros(4))

    def test_scale_invariance(self, pend):
        # absolute thresholds would misclassify a tiny but genuine C B
        C = np.array(PENDULUM_PUBLISHED_C[1]) * 1e-12
        assert relative_degree(pend, C) == 1


class TestTransferFunction:
    def test_pendulum_r1(self, pend):
        tf = transfer_function(pend, design_sliding_variable(pend, PENDULUM_GAMMA[1]).C)
        np.testing.assert_allclose(tf.numerator.coeffs, [125, 75, 15, 1], rtol=1e-9)
        np.testing.assert_allclose(tf.denominator.coeffs, [0, 0, -46.87, 0, 1], atol=1e-12)

    def test_pendulum_r3(self, pend):
        tf = transfer_function(pend, design_sliding_variable(pend, PENDULUM_GAMMA[3]).C)
        np.testing.assert_allclose(tf.numerator.coeffs, [5.0, 1.0], rtol=1e-9)

    def test_double_integrator(self):
        tf = transfer_function(integrator_chain(2), [1, 0])
        assert tf.numerator.coeffs == (1.0,)
        assert tf.denominator.coeffs == (0.0, 0.0, 1.0)
        assert tf.relative_degree == 2

    def test_against_scipy(self, rng):
        for _ in range(20):
            sys = random_controllable(rng, int(rng.integers(2, 7)))
            C = rng.normal(size=sys.n)
            num, den = scipy.signal.ss2tf(sys.A, sys.B, C.reshape(1, -1), np.zeros((1, 1)))
            tf = transfer_function(sys, C)
            oracle_num = np.trim_zeros(num[0], "f")[::-1]
            np.testing.assert_allclose(tf.denominator.as_array(), den[::-1], atol=1e-8)
            np.testing.assert_allclose(tf.numerator.as_array(), oracle_num, atol=1e-8 * np.max(np.abs(oracle_num)))

    def test_realization_invariance(self, rng):
        for _ in range(30):
            sys = random_controllable(rng, int(rng.integers(2, 8)))
            C = rng.normal(size=sys.n)
            S = rng.normal(size=(sys.n, sys.n)) + 3 * np.eye(sys.n)
            Sinv = np.linalg.inv(S)
            a = transfer_function(sys, C)
            b = transfer_function(LtiSystem(S @ sys.A @ Sinv, S @ sys.B), C @ Sinv)
            assert a.numerator.relative_error(b.numerator) < 1e-7
            assert a.denominator.relative_error(b.denominator) < 1e-7


class TestCanonicalForm:
    def test_already_canonical(self):
        A_hat, B_hat = canonical_pair(Polynomial([2.0, -1.0, 3.0, 1.0]))
        _, T = to_controller_canonical(LtiSystem(A_hat, B_hat))
        np.testing.assert_allclose(T, np.eye(3), atol=1e-10)

    def test_pendulum_reconstruction(self, pend):
        canon, T = to_controller_canonical(pend)
        expected = np.zeros((4, 4))
        expected[:3, 1:] = np.eye(3)
        expected[3, 2] = 46.87
        np.testing.assert_allclose(canon.A, expected, atol=1e-12)
        np.testing.assert_array_equal(canon.b, [0, 0, 0, 1])
        Tinv = np.linalg.inv(T)
        np.testing.assert_allclose(Tinv @ pend.A @ T, canon.A, atol=1e-8)
        np.testing.assert_allclose(Tinv @ pend.B, canon.B, atol=1e-8)

    def test_uncontrollable(self):
        with pytest.raises(UncontrollableError):
            to_controller_canonical(LtiSystem(np.eye(2), [1, 0]))

    def test_as_identities(self, rng):
        for sys in [random_controllable(rng, n) for n in (2, 3, 5, 7)]:
            canon, _ = to_controller_canonical(sys)
            n = sys.n
            P_hat = controllability_matrix(canon.A, canon.B)
            e_last = np.zeros(n)
            e_last[-1] = 1.0
            first = np.zeros(n)
            first[0] = 1.0
            np.testing.assert_allclose(e_last @ np.linalg.inv(P_hat), first, atol=1e-9)
            for k in range(1, n):
                np.testing.assert_allclose(first @ np.linalg.matrix_power(canon.A, k), np.eye(n)[k], atol=1e-9)


class TestNormalForm:
    def test_pendulum_r1_zero_dynamics(self, pend):
        C = design_sliding_variable(pend, PENDULUM_GAMMA[1]).C
        nf = normal_form(pend, C)
        assert nf.A0.shape == (3, 3) and nf.B0.shape == (3, 1)
        zeros = polynomial_roots(transfer_function(pend, C).numerator)
        # triple eigenvalue: compare the characteristic polynomial, well-conditioned
        np.testing.assert_allclose(np.poly(nf.A0)[::-1], np.real(np.poly(zeros))[::-1], rtol=1e-8)
        np.testing.assert_allclose(np.linalg.eigvals(nf.A0), -5, atol=1e-4)

    def test_pendulum_r3(self, pend):
        nf = normal_form(pend, design_sliding_variable(pend, PENDULUM_GAMMA[3]).C)
        assert nf.A0.shape == (1, 1)
        assert nf.A0[0, 0] == pytest.approx(-5.0, abs=1e-9)

    def test_structure(self, pend):
        C = design_sliding_variable(pend, PENDULUM_GAMMA[2]).C
        nf = normal_form(pend, C)
        assert np.max(np.abs(nf.B_perp @ pend.B)) < 1e-10
        np.testing.assert_allclose(nf.T[2], C)
        np.testing.assert_allclose(nf.T[3], C @ pend.A)
        np.testing.assert_allclose(nf.B_perp @ nf.B_perp.T, np.eye(2), atol=1e-12)
        # transformed dynamics are in normal form: xi chain plus eta block without input
        Ab = nf.T @ pend.A @ np.linalg.inv(nf.T)
        Bb = nf.T @ pend.B
        np.testing.assert_allclose(Ab[2, :], [0, 0, 0, 1], atol=1e-10)
        np.testing.assert_allclose(Bb[:3, 0], 0, atol=1e-10)

    def test_full_relative_degree(self, chain3):
        nf = normal_form(chain3, [1, 0, 0])
        assert nf.B_perp.shape == (0, 3)
        assert nf.A0.shape == (0, 0)
        np.testing.assert_allclose(nf.T, np.eye(3))

    def test_zero_dynamics_match_zeros_random(self, rng):
        for _ in range(30):
            n = int(rng.integers(3, 7))
            sys = random_controllable(rng, n)
            gamma = random_monic(rng, int(rng.integers(0, n)))
            C = design_sliding_variable(sys, gamma).C
            nf = normal_form(sys, C)
            num = transfer_function(sys, C).numerator
            charpoly = np.poly(nf.A0) if nf.A0.size else np.ones(1)
            np.testing.assert_allclose(
                charpoly[::-1], num.as_array(), atol=1e-6 * np.max(np.abs(num.as_array()))
            )


class TestAugmentation:
    def test_single_integrator_to_double(self):
        aug = augment_with_integrators(integrator_chain(1), 1)
        np.testing.assert_array_equal(aug.A, [[0, 1], [0, 0]])
        np.testing.assert_array_equal(aug.b, [0, 1])

    def test_pendulum_two_integrators(self, pend):
        C = design_sliding_variable(pend, PENDULUM_GAMMA[1]).C
        aug = augment_with_integrators(pend, 2)
        assert aug.n == 6
        assert relative_degree(aug, pad_row(C, 2)) == 3

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_relative_degree_shift(self, rng, k):
        for _ in range(10):
            sys = random_controllable(rng, 4)
            C = rng.normal(size=4)
            assert relative_degree(augment_with_integrators(sys, k), pad_row(C, k)) == relative_degree(sys, C) + k

    def test_zero_rejected(self, pend):
        with pytest.raises(ValueError):
            augment_with_integrators(pend, 0)
