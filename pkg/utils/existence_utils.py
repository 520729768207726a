"""
Real boundary conditions with a prescribed real eigenvalue.

For real lambda off Spec K_Q, Y = Y_lambda(l) lies in pi-bar(4), and lambda
is an eigenvalue of K_M exactly when G_M Y has eigenvalue 1. Mapping Y to a
real matrix G0hat, any real Ghat with Ghat (G0hat r) = r gives
G = real_to_pibar(Ghat) with G Y r' = r' for the matching vector, and
gamma_inverse_real(G) is the requested condition.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from config.beam_config import get_solver_config
from utils.boundary_utils import BoundaryCondition
from utils.errors import InSpecQ, ZeroImage, ZeroLambda
from utils.matrix_utils import (
    BeamParams,
    is_pibar,
    pibar_to_real,
    project_pibar,
    real_to_pibar,
)
from utils.representation_utils import gamma_inverse_real
from utils.spectral_utils import (
    SpectralPoint,
    eigen_matrix,
    singular_ratio,
    spectral_point,
)

logger = logging.getLogger(__name__)


def rank_one_inverse_image(G0hat: ArrayLike, r: ArrayLike,
                           tol: Optional[float] = None) -> NDArray[np.float64]:
    """Minimal-norm Ghat = r (G0hat r)^T / ||G0hat r||^2, so Ghat (G0hat r) = r.

    Raises:
        ZeroImage: If G0hat r vanishes.
    """
    if tol is None:
        tol = get_solver_config("existence")["zero_image"]
    G0hat = np.asarray(G0hat, dtype=float)
    r = np.asarray(r, dtype=float)
    image = G0hat @ r
    image_norm = np.linalg.norm(image)
    if image_norm == 0 or image_norm < tol * np.linalg.norm(G0hat, 2) * np.linalg.norm(r):
        raise ZeroImage("G0hat r vanishes")
    return np.outer(r, image) / image_norm ** 2


def select_direction(G0hat: ArrayLike, threshold: Optional[float] = None) -> NDArray[np.float64]:
    """First standard basis vector e_i with ||G0hat e_i|| >= threshold ||G0hat||."""
    if threshold is None:
        threshold = get_solver_config("existence")["r_threshold"]
    G0hat = np.asarray(G0hat, dtype=float)
    scale = np.linalg.norm(G0hat, 2)
    for i in range(G0hat.shape[1]):
        if np.linalg.norm(G0hat[:, i]) >= threshold * scale and scale > 0:
            return np.eye(G0hat.shape[1])[i]
    raise ZeroImage("G0hat has no usable column")


def construct_bc_for_eigenvalue(lam: float, params: BeamParams) -> Tuple[BoundaryCondition, SpectralPoint]:
    """Real well-posed condition M with lam in Spec K_M.

    Raises:
        ZeroLambda: For lam = 0.
        InSpecQ: If lam is an eigenvalue of K_Q (or too close to one).
    """
    cfg = get_solver_config("existence")
    if isinstance(lam, complex) and lam.imag != 0:
        raise ValueError("only real eigenvalues can be prescribed")
    lam = float(np.real(lam))
    if lam == 0:
        raise ZeroLambda("lambda = 0 cannot be prescribed")

    em = eigen_matrix(lam, params, cfg["spec_q_guard"])
    if em.Y is None:
        ratio = singular_ratio(em.X_at_l)
        raise InSpecQ(f"lambda = {lam} is within reach of Spec K_Q (ratio {ratio:.2e})")

    logger.info(f"Constructing a real boundary condition with eigenvalue {lam:.12g}")
    Y = em.Y
    if not is_pibar(Y, cfg["pibar_tol"]):
        raise InSpecQ(f"Y_lambda(l) lost its real structure at lambda = {lam} (ill-conditioned)")
    G0hat = pibar_to_real(project_pibar(Y))
    r = select_direction(G0hat)
    Ghat = rank_one_inverse_image(G0hat, r)
    G = real_to_pibar(Ghat)
    bc = gamma_inverse_real(G, params)
    point = spectral_point(G, lam, params)
    logger.info(f"Constructed condition has residual {point.residual:.2e} at lambda = {lam:.12g}")
    return BoundaryCondition(bc.M, "constructed"), point


def eigenvalue_one_residual(G: ArrayLike, Y: ArrayLike) -> float:
    """min |mu - 1| over the eigenvalues mu of G Y."""
    mu = np.linalg.eigvals(np.asarray(G) @ np.asarray(Y))
    return float(np.min(np.abs(mu - 1.0)))
