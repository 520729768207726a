import numpy as np
import pytest
from numpy.testing import assert_allclose

from utils.errors import DegenerateLambda, InvalidParams, NotInPibar
from utils.matrix_utils import (
    BeamParams,
    build_constants,
    chi,
    chi_array,
    chi_inverse,
    is_pibar,
    pibar_to_real,
    project_pibar,
    random_pibar,
    real_to_pibar,
    reversal,
    u2n,
    wronskian_W,
    wronskian_W_inv,
    y_vector,
)


class TestBeamParams:
    def test_intrinsic_length(self):
        assert BeamParams(l=1.5, alpha=2.0, k=3.0).intrinsic_length == pytest.approx(6.0)

    @pytest.mark.parametrize("field", ["l", "alpha", "k"])
    @pytest.mark.parametrize("value", [0.0, -1.0, float("nan"), float("inf")])
    def test_rejects_non_positive(self, field, value):
        values = {"l": 1.0, "alpha": 1.0, "k": 1.0, field: value}
        with pytest.raises(InvalidParams):
            BeamParams(**values)

    def test_dict_round_trip(self):
        params = BeamParams(l=0.5, alpha=1.25, k=2.0)
        assert BeamParams.from_dict(params.to_dict()) == params


class TestStructuredConstants:
    def test_roots_of_minus_one(self):
        c = build_constants()
        assert_allclose(c.omega ** 4, -np.ones(4), atol=1e-14)
        assert_allclose(np.abs(c.omega), np.ones(4), atol=1e-15)

    def test_w0_inverse(self):
        c = build_constants()
        assert_allclose(c.W0 @ c.W0_inv, np.eye(4), atol=1e-14)

    def test_shift_rotates_roots(self):
        c = build_constants()
        # omega_j i = omega_{j+1}
        assert_allclose(1j * c.omega, np.roll(c.omega, -1), atol=1e-15)
        assert_allclose(1j * c.omega, c.omega @ c.L_inv, atol=1e-15)
        assert_allclose(c.Lmat @ c.L_inv, np.eye(4), atol=0)

    def test_unitaries(self):
        c = build_constants()
        for n in (1, 2, 3):
            U = u2n(n)
            assert_allclose(U @ U.conj().T, np.eye(2 * n), atol=1e-14)
        assert_allclose(c.V @ c.V.T, np.eye(4), atol=1e-15)
        assert_allclose(c.Uhat @ c.Uhat.conj().T, np.eye(4), atol=1e-15)

    def test_constants_are_read_only(self):
        c = build_constants()
        with pytest.raises(ValueError):
            c.W0[0, 0] = 0.0

    def test_q_blocks_sum(self):
        c = build_constants()
        assert_allclose(c.GQ_minus + c.GQ_plus, c.OmegaL2, atol=0)


class TestWronskian:
    @pytest.mark.parametrize("x", [-1.0, -0.3, 0.0, 0.7, 1.0])
    def test_closed_form_inverse(self, params, x):
        assert_allclose(wronskian_W_inv(params, x) @ wronskian_W(params, x), np.eye(4), atol=1e-13)

    def test_columns_are_derivatives(self):
        params = BeamParams(l=1.0, alpha=1.7, k=1.0)
        c = build_constants()
        x = 0.4
        W = wronskian_W(params, x)
        y = y_vector(params, x)
        for i in range(4):
            assert_allclose(W[i], (c.omega * params.alpha) ** i * y, rtol=1e-14)

    def test_y_vector_shape(self, params):
        assert y_vector(params, np.zeros((3, 5))).shape == (3, 5, 4)


class TestPibar:
    def test_real_image_round_trip(self, rng):
        B = rng.standard_normal((4, 4))
        A = real_to_pibar(B)
        assert is_pibar(A)
        assert_allclose(pibar_to_real(A), B, atol=1e-14)

    def test_closed_under_products(self, rng):
        A, B = random_pibar(rng), random_pibar(rng)
        assert is_pibar(A @ B)
        assert is_pibar(np.linalg.inv(A))
        assert abs(np.linalg.det(A).imag) <= 1e-12 * max(1.0, abs(np.linalg.det(A)))

    def test_projection_is_idempotent(self, rng):
        A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        P = project_pibar(A)
        assert is_pibar(P)
        assert_allclose(project_pibar(P), P, atol=1e-15)

    def test_rejects_general_matrix(self, rng):
        A = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert not is_pibar(A)
        with pytest.raises(NotInPibar):
            pibar_to_real(A)

    def test_odd_size_rejected(self):
        with pytest.raises(ValueError):
            real_to_pibar(np.eye(3))

    def test_reversal(self):
        assert_allclose(reversal(3) @ np.arange(3), [2, 1, 0])

    def test_flag_is_plain_bool(self, rng):
        assert type(is_pibar(random_pibar(rng))) is bool


class TestChi:
    @pytest.mark.parametrize("lam", [-2.0, -0.5, 0.25, 0.75, 1.5, 4.0, 0.3 + 0.8j, -1.0 - 2.0j])
    def test_fourth_power(self, lam):
        k = 1.3
        kappa = chi(lam, k)
        assert_allclose(kappa ** 4, 1.0 - 1.0 / (lam * k), rtol=1e-13)
        assert 0.0 <= np.angle(kappa) % (2 * np.pi) < np.pi / 2 + 1e-15
        assert_allclose(chi_inverse(kappa, k), lam, rtol=1e-12)

    def test_band_gives_quarter_turn(self):
        # 1 - 1/(lambda k) < 0 on (0, 1/k)
        kappa = chi(0.5, 1.0)
        assert_allclose(np.angle(kappa), np.pi / 4, atol=1e-15)

    def test_off_band_is_real(self):
        for lam in (-3.0, 2.0):
            assert chi(lam, 1.0).imag == 0.0

    @pytest.mark.parametrize("lam", [0.0, 1.0])
    def test_degenerate_values(self, lam):
        with pytest.raises(DegenerateLambda):
            chi(lam, 1.0)

    def test_vectorised_matches_scalar(self):
        lams = np.array([-1.0, 0.3, 2.0, 0.5 + 0.5j])
        assert_allclose(chi_array(lams, 2.0), [chi(lam, 2.0) for lam in lams], rtol=1e-14)
