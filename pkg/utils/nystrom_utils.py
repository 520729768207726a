"""
Nystrom discretization of K_M, used as an independent spectral oracle.

A_ij = G_M(x_i, x_j) w_j on a composite Gauss-Legendre rule. The kernel has
a third-derivative jump on the diagonal, so eigenvalues converge
algebraically; each reported eigenvalue carries the change observed when the
node count is doubled.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np
from numpy.typing import NDArray
from scipy import linalg

from config.beam_config import get_solver_config
from utils.boundary_utils import BoundaryCondition, greens_matrices
from utils.greens_utils import QuadratureRule, beam_rule, kernel_matrix
from utils.matrix_utils import BeamParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NystromEigenvalue:
    value: complex
    residual: float
    convergence_delta: float


def nystrom_matrix(bc: BoundaryCondition, params: BeamParams, rule: QuadratureRule) -> NDArray[np.complex128]:
    """A_ij = G_M(x_i, x_j) w_j."""
    rep = greens_matrices(bc, params)
    return kernel_matrix(bc, params, rule.nodes, rule.nodes, rep) * rule.weights[None, :]


def _eigensystem(bc: BoundaryCondition, params: BeamParams, nodes: int):
    rule = beam_rule(params, nodes)
    A = nystrom_matrix(bc, params, rule)
    if bc.is_real:
        A = A.real
    values, vectors = linalg.eig(A)
    order = np.argsort(-np.abs(values), kind="stable")
    return A, values[order], vectors[:, order]


def nystrom_spectrum(bc: BoundaryCondition, params: BeamParams, N: Optional[int] = None,
                     top: Optional[int] = None) -> List[NystromEigenvalue]:
    """Largest-modulus eigenvalues of the N-node Nystrom matrix.

    Args:
        bc: Well-posed boundary condition.
        params: Beam parameters.
        N: Node count (default from the "nystrom" config).
        top: How many eigenvalues to return; None returns all of them.

    Returns:
        Eigenvalues sorted by decreasing modulus, each with its residual
        ||A v - lambda v|| / ||v|| and the relative change to the nearest
        eigenvalue of the 2N-node matrix.
    """
    cfg = get_solver_config("nystrom")
    N = cfg["nodes"] if N is None else int(N)
    A, values, vectors = _eigensystem(bc, params, N)
    _, refined, _ = _eigensystem(bc, params, 2 * N)
    count = values.size if top is None else min(int(top), values.size)
    logger.info(f"Nystrom oracle: {N} nodes, reporting {count} eigenvalues")

    results = []
    for i in range(count):
        value, vector = values[i], vectors[:, i]
        residual = float(np.linalg.norm(A @ vector - value * vector) / np.linalg.norm(vector))
        nearest = refined[np.argmin(np.abs(refined - value))]
        delta = float(abs(value - nearest) / max(abs(nearest), np.finfo(float).tiny))
        results.append(NystromEigenvalue(complex(value), residual, delta))
    return results


def operator_profile(bc: BoundaryCondition, params: BeamParams, N: Optional[int] = None) -> Dict[str, Any]:
    """Positivity and contractivity of K_M in intrinsic units k lambda.

    Positive means every eigenvalue above the resolution floor is real and
    positive; contractive means the spectral radius of k K_M is below one.
    """
    cfg = get_solver_config("nystrom")
    N = cfg["nodes"] if N is None else int(N)
    _, values, _ = _eigensystem(bc, params, N)
    intrinsic = values * params.k
    resolved = intrinsic[np.abs(intrinsic) >= cfg["min_modulus"]]
    real_tol = 1e-8 * max(1.0, float(np.max(np.abs(resolved)))) if resolved.size else 0.0
    positive = bool(np.all((np.abs(resolved.imag) <= real_tol) & (resolved.real > 0)))
    radius = float(np.max(np.abs(intrinsic))) if intrinsic.size else 0.0
    return {
        "intrinsic_eigenvalues": resolved,
        "spectral_radius": radius,
        "positive": positive,
        "contractive": radius < 1.0,
    }
