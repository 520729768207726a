import numpy as np
import pytest
from numpy.testing import assert_allclose

from utils.boundary_utils import BoundaryCondition, equivalent, greens_matrices, is_wellposed, random_wellposed
from utils.errors import NotInPibar, NotWellPosed
from utils.greens_utils import GridFunction, beam_rule, boundary_trace
from utils.matrix_utils import build_constants, is_pibar, random_pibar
from utils.representation_utils import (
    boundary_form_factor,
    gamma,
    gamma_boundary_form,
    gamma_definition_form,
    gamma_inverse,
    gamma_inverse_real,
    gamma_minus_inverse,
    gamma_minus_inverse_real,
    gamma_pm,
    gamma_pm_inverse,
    gamma_plus_inverse,
    gamma_plus_inverse_real,
    gamma_rep,
)


def random_matrix(rng):
    return rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))


class TestGamma:
    def test_q_is_origin(self, params, q_bc):
        assert np.max(np.abs(gamma(q_bc, params))) <= 1e-10

    def test_direct_matches_definition(self, rng, params):
        for _ in range(20):
            bc = random_wellposed(rng, params)
            assert_allclose(gamma(bc, params), gamma_definition_form(bc, params), atol=1e-10)

    def test_class_invariant(self, rng, params, complex_bc):
        P = random_matrix(rng)
        assert_allclose(gamma(complex_bc.left_multiply(P), params), gamma(complex_bc, params), atol=1e-9)

    def test_real_condition_lands_in_pibar(self, rng, params):
        for _ in range(100):
            assert is_pibar(gamma(random_wellposed(rng, params, real=True), params), 1e-9)

    def test_not_wellposed(self, params):
        with pytest.raises(NotWellPosed):
            gamma(BoundaryCondition(np.zeros((4, 8))), params)

    def test_rep_carries_blocks(self, params, complex_bc):
        rep = gamma_rep(complex_bc, params)
        g_minus, g_plus = gamma_pm(complex_bc, params)
        assert_allclose(rep.g_gamma, gamma(complex_bc, params))
        assert_allclose(rep.g_minus, g_minus)
        assert_allclose(rep.g_plus, g_plus)


class TestGammaInverse:
    def test_round_trip(self, rng, params):
        for _ in range(100):
            G = random_matrix(rng)
            bc = gamma_inverse(G, params)
            assert is_wellposed(bc, params)
            assert_allclose(gamma(bc, params), G, atol=1e-9)

    def test_preimage_is_equivalent(self, params, complex_bc):
        assert equivalent(gamma_inverse(gamma(complex_bc, params), params), complex_bc, params)

    def test_real_branch(self, rng, params):
        for _ in range(100):
            G = random_pibar(rng)
            bc = gamma_inverse_real(G, params)
            assert bc.is_real
            assert_allclose(gamma(bc, params), G, atol=1e-9)

    def test_real_branch_needs_pibar(self, rng, params):
        with pytest.raises(NotInPibar):
            gamma_inverse_real(random_matrix(rng), params)

    def test_shape(self, params):
        with pytest.raises(ValueError):
            gamma_inverse(np.eye(3), params)


class TestOneSidedInverses:
    def test_minus_block(self, rng, params):
        G = random_matrix(rng)
        assert_allclose(greens_matrices(gamma_minus_inverse(G, params), params).g_minus, G, atol=1e-9)

    def test_plus_block(self, rng, params):
        G = random_matrix(rng)
        assert_allclose(greens_matrices(gamma_plus_inverse(G, params), params).g_plus, G, atol=1e-9)

    def test_pair(self, params, complex_bc):
        g_minus, g_plus = gamma_pm(complex_bc, params)
        assert equivalent(gamma_pm_inverse(g_minus, g_plus, params), complex_bc, params)

    def test_pair_must_sum_to_omega_l2(self, rng, params):
        with pytest.raises(ValueError):
            gamma_pm_inverse(random_matrix(rng), random_matrix(rng), params)

    def test_real_variants(self, rng, params):
        G = random_pibar(rng)
        minus = gamma_minus_inverse_real(G, params)
        plus = gamma_plus_inverse_real(G, params)
        assert minus.is_real and plus.is_real
        assert_allclose(greens_matrices(minus, params).g_minus, G, atol=1e-9)
        assert_allclose(greens_matrices(plus, params).g_plus, G, atol=1e-9)
        with pytest.raises(NotInPibar):
            gamma_plus_inverse_real(random_matrix(rng), params)

    def test_q_from_either_side(self, params, q_bc):
        c = build_constants()
        assert equivalent(gamma_plus_inverse(c.GQ_plus, params), q_bc, params)
        assert equivalent(gamma_minus_inverse(c.GQ_minus, params), q_bc, params)


class TestBoundaryForm:
    def test_vanishes_on_solutions(self, rng, params, complex_bc):
        rule = beam_rule(params, 100)
        w = GridFunction(rng.standard_normal(rule.size), rule)
        trace = boundary_trace(complex_bc, params, w)
        form = gamma_boundary_form(gamma(complex_bc, params), trace[:4], trace[4:], params)
        assert np.max(np.abs(form)) <= 1e-9 * max(1.0, np.max(np.abs(trace)))

    def test_factorization(self, rng, params, complex_bc):
        trace = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        form = gamma_boundary_form(gamma(complex_bc, params), trace[:4], trace[4:], params)
        assert_allclose(complex_bc.M @ trace, boundary_form_factor(complex_bc, params) @ form, atol=1e-9)
