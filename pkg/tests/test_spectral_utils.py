import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from utils.boundary_utils import named_bc, random_wellposed
from utils.errors import SingularX, ZeroLambda
from utils.greens_utils import apply_K, beam_rule
from utils.matrix_utils import BeamParams, build_constants, is_pibar, wronskian_W_inv
from utils.nystrom_utils import nystrom_spectrum
from utils.spectral_utils import (
    X_matrix,
    Y_matrix,
    char_det,
    char_det_Y,
    eigen_basis,
    eigen_matrix,
    eigenfunction,
    exp_sum_profile,
    p_blocks,
    p_matrix,
    p_matrix_explicit,
    p_poly,
    refine_complex_eigenvalue,
    scan_complex_spectrum,
    scan_real_spectrum,
    scan_real_spectrum_detailed,
    singular_ratio,
    spec_Q,
    spectral_point,
    x_closed,
    x_degenerate,
    x_direct,
)


@pytest.fixture(scope="module")
def q_pairs():
    return spec_Q(BeamParams(l=1.0, alpha=1.0, k=1.0), 10)


class TestEigenBasis:
    def test_generic_branch(self, params):
        basis = eigen_basis(2.0, params)
        assert not basis.degenerate
        # y'''' = alpha^4 kappa^4 (-1) y with kappa^4 = 1 - 1/(lambda k)
        roots = build_constants().omega * basis.kappa * params.alpha
        assert_allclose(roots ** 4, -(1.0 - 1.0 / 2.0) * np.ones(4), atol=1e-14)

    def test_degenerate_branch(self, params):
        basis = eigen_basis(1.0 / params.k, params)
        assert basis.degenerate
        assert_allclose(basis.y(2.0), [1.0, 2.0, 2.0, 4.0 / 3.0])

    def test_zero(self, params):
        with pytest.raises(ZeroLambda):
            eigen_basis(0.0, params)


class TestXMatrix:
    @pytest.mark.parametrize("lam", [-1.5, 0.3, 2.5, 0.4 + 0.9j])
    def test_closed_matches_direct(self, params, lam):
        for x in (0.4, params.l):
            assert_allclose(X_matrix(lam, x, params), x_direct(lam, x, params), atol=1e-12)

    def test_quarter_turn_in_kappa(self):
        c = build_constants()
        kappa = 0.7 + 0.2j
        assert_allclose(x_closed(0.8, 1j * kappa), x_closed(0.8, kappa) @ c.L_inv, atol=1e-13)

    def test_conjugation_in_kappa(self):
        c = build_constants()
        kappa = 0.7 + 0.2j
        assert_allclose(c.R4 @ x_closed(0.8, kappa).conj() @ c.R4, x_closed(0.8, np.conj(kappa)), atol=1e-13)

    def test_vectorised(self):
        kappas = np.array([0.3, 0.5 + 0.1j])
        stacked = x_closed(1.1, kappas)
        assert stacked.shape == (2, 4, 4)
        assert_allclose(stacked[1], x_closed(1.1, kappas[1]))

    def test_pibar_off_band(self, params):
        for lam in (-2.0, -0.3, 1.4, 6.0):
            assert is_pibar(X_matrix(lam, 0.9, params))

    def test_odd_part(self, params):
        c = build_constants()
        lam, x = 0.6 - 0.4j, 0.7
        basis = eigen_basis(lam, params)
        expected = c.Eps @ (wronskian_W_inv(params, x) @ basis.W(x) - wronskian_W_inv(params, -x) @ basis.W(-x))
        assert_allclose(X_matrix(lam, x, params) - X_matrix(lam, -x, params), expected, atol=1e-12)


class TestDegenerateBranch:
    def test_p_forms(self):
        for z in (0.0, 0.5, 2.0):
            assert_allclose(p_matrix(z), p_matrix_explicit(z), atol=1e-12)

    def test_p_poly_low_orders(self):
        omega1 = build_constants().omega[0]
        assert p_poly(0, 3.0) == pytest.approx(1.0)
        assert p_poly(1, 3.0) == pytest.approx(omega1 + 3.0)

    def test_block_factorization(self):
        c = build_constants()
        z = 1.3
        p_plus, p_minus = p_blocks(z)
        blocks = np.zeros((4, 4), dtype=complex)
        blocks[:2, :2], blocks[2:, 2:] = p_plus, p_minus
        assert_allclose(c.V @ p_matrix(z) @ c.Vhat, math.sqrt(2.0) * blocks, atol=1e-12)

    def test_determinant_formula(self, params):
        for x in (0.2, 1.0, 3.0):
            z = params.alpha * x
            p_plus, p_minus = p_blocks(z)
            scale = -np.exp(-2 * math.sqrt(2.0) * z) / (4 ** 3 * params.alpha ** 6)
            expected = scale * np.linalg.det(p_plus) * np.linalg.det(p_minus)
            assert_allclose(np.linalg.det(x_degenerate(x, params)), expected, rtol=1e-10)

    def test_well_conditioned(self, params):
        for x in np.linspace(0.05, 5.0, 40):
            assert singular_ratio(x_degenerate(x, params)) > 1e-8

    def test_branch_continuity_of_y(self, params):
        inverse_k = 1.0 / params.k
        at = Y_matrix(inverse_k, params.l, params)
        for offset in (-1e-7, 1e-7):
            near = Y_matrix(inverse_k * (1.0 + offset), params.l, params)
            assert np.max(np.abs(near - at)) <= 1e-5 * max(1.0, np.max(np.abs(at)))


class TestYMatrix:
    def test_real_lambda_gives_pibar(self, rng, params):
        tested = 0
        while tested < 50:
            lam = rng.uniform(-3.0, 3.0)
            if abs(lam) < 1e-3:
                continue
            try:
                Y = Y_matrix(lam, params.l, params)
            except SingularX:
                continue
            assert is_pibar(Y, 1e-9)
            tested += 1

    def test_char_det_forms_agree(self, params, real_bc):
        lam = 2.2
        X = X_matrix(lam, params.l, params)
        assert_allclose(char_det(real_bc, params, lam), char_det_Y(real_bc, params, lam) * np.linalg.det(X),
                        rtol=1e-8)

    def test_singular_on_spec_q(self, params, q_pairs):
        with pytest.raises(SingularX):
            Y_matrix(q_pairs[0][0], params.l, params, singular_tol=1e-8)


class TestEigenMatrix:
    def test_y_present_off_spec_q(self, params):
        em = eigen_matrix(2.0, params)
        assert not em.degenerate
        assert_allclose(em.X_at_l, X_matrix(2.0, params.l, params))
        assert_allclose(em.X_at_minus_l, X_matrix(2.0, -params.l, params))
        assert_allclose(em.Y, Y_matrix(2.0, params.l, params))

    def test_y_absent_on_spec_q(self, params, q_pairs):
        em = eigen_matrix(q_pairs[0][0], params, singular_tol=1e-8)
        assert em.Y is None
        assert singular_ratio(em.X_at_l) < 1e-8

    def test_degenerate_tag(self, params):
        em = eigen_matrix(1.0 / params.k, params)
        assert em.degenerate
        assert em.Y is not None


class TestSpecQ:
    def test_containment_and_interlacing(self, q_pairs):
        values = np.array(q_pairs[:6]).ravel()
        assert np.all((values > 0) & (values < 1.0))
        assert np.all(np.diff(values) < 0)

    def test_roots_of_x(self, params, q_pairs):
        for mu, nu in q_pairs[:4]:
            assert spectral_point(np.zeros((4, 4)), mu, params).residual <= 1e-8
            assert spectral_point(np.zeros((4, 4)), nu, params).residual <= 1e-8

    def test_fourth_power_decay(self, q_pairs):
        mu = np.array([pair[0] for pair in q_pairs])
        n = np.arange(1, mu.size + 1)
        selected = slice(2, 10)
        slope = np.polyfit(np.log(n[selected] - 1.25), np.log(mu[selected]), 1)[0]
        assert abs(slope + 4.0) <= 0.15

    def test_approaches_asymptotics(self, q_pairs):
        L = 2.0
        mu = np.array([pair[0] for pair in q_pairs])
        n = np.arange(1, mu.size + 1)
        approx = 1.0 / (1.0 + ((2 * np.pi * (n - 1) - np.pi / 2) / L) ** 4)
        gap = np.abs(mu - approx) / mu
        assert gap[-1] < gap[2]

    def test_count_validation(self, params):
        with pytest.raises(ValueError):
            spec_Q(params, 0)

    def test_depends_only_on_intrinsic_length(self):
        # (l, alpha) = (1, 1) and (0.5, 2) share L = 2 alpha l
        reference = np.array(spec_Q(BeamParams(l=1.0, alpha=1.0, k=2.0), 5)) * 2.0
        rescaled = np.array(spec_Q(BeamParams(l=0.5, alpha=2.0, k=2.0), 5)) * 2.0
        assert_allclose(rescaled, reference, rtol=1e-9)


class TestRealScan:
    @pytest.mark.parametrize("name", ["Q", "clamped", "hinged"])
    def test_matches_nystrom(self, params, name):
        bc = named_bc(name, params)
        roots = [point.lam.real for point in scan_real_spectrum(bc, params, [1e-7, 2.0])][:6]
        oracle = [ev.value.real for ev in nystrom_spectrum(bc, params, 400, 6)]
        assert len(roots) == 6
        assert_allclose(roots, oracle, rtol=1e-5)

    @pytest.mark.parametrize("seed", [11, 12, 13])
    def test_random_real_condition_matches_nystrom(self, params, seed):
        bc = random_wellposed(np.random.default_rng(seed), params, real=True)
        oracle = np.array([ev.value for ev in nystrom_spectrum(bc, params, 400)])
        bound = 1.1 * np.max(np.abs(oracle))
        roots = np.array([point.lam.real for point in scan_real_spectrum(bc, params, [-bound, bound])])
        floor = 0.01 / params.k

        for lam in roots[np.abs(roots) >= floor]:
            assert np.min(np.abs(oracle - lam)) <= 1e-5 * abs(lam)
        real_oracle = oracle[(oracle.imag == 0) & (np.abs(oracle) >= floor)].real
        for lam in real_oracle:
            assert roots.size and np.min(np.abs(roots - lam)) <= 1e-5 * abs(lam)

    @pytest.mark.parametrize("name", ["Q", "clamped"])
    def test_eigenpair_residual(self, params, name):
        bc = named_bc(name, params)
        rule = beam_rule(params, 300)
        for point in scan_real_spectrum(bc, params, [1e-4, 2.0])[:6]:
            u = eigenfunction(bc, params, point, rule)
            residual = apply_K(bc, params, u).values - point.lam * u.values
            assert np.max(np.abs(residual)) / u.max_norm() <= 1e-5

    def test_sorted_and_real(self, params, real_bc):
        report = scan_real_spectrum_detailed(real_bc, params, [-5.0, 5.0])
        lams = [point.lam for point in report.points]
        assert all(lam.imag == 0 for lam in lams)
        assert [lam.real for lam in lams] == sorted((lam.real for lam in lams), reverse=True)
        for point in report.points:
            assert point.residual <= 1e-8
            assert point.k_lambda == point.lam * params.k

    def test_complex_condition_rejected(self, params, complex_bc):
        with pytest.raises(ValueError):
            scan_real_spectrum(complex_bc, params, [0.1, 1.0])


class TestComplexSpectrum:
    def test_refines_nystrom_estimate(self, params, complex_bc):
        estimate = nystrom_spectrum(complex_bc, params, 200, 1)[0].value
        point = refine_complex_eigenvalue(complex_bc, params, estimate)
        assert point is not None
        assert abs(point.lam - estimate) <= 1e-4 * abs(estimate)

    def test_box_scan(self, params, complex_bc):
        estimate = nystrom_spectrum(complex_bc, params, 200, 1)[0].value
        box = [estimate.real - 0.2, estimate.real + 0.2, estimate.imag - 0.2, estimate.imag + 0.2]
        points = scan_complex_spectrum(complex_bc, params, box, grid=30)
        assert any(abs(point.lam - estimate) <= 1e-4 * abs(estimate) for point in points)
        for point in points:
            assert point.residual <= 1e-7


class TestExpSumProfile:
    def test_vanishes_only_at_zero(self):
        z = np.linspace(-1.0, 1.0, 9)
        assert np.max(np.abs(exp_sum_profile(0.0, z))) <= 1e-14
        assert np.max(np.abs(exp_sum_profile(0.5 + 0.2j, z))) > 1e-3

    def test_shape(self):
        assert exp_sum_profile(1.0, np.zeros(5)).shape == (3, 5)
