"""
Matrix coordinates of well-posed boundary conditions.

Two conditions are equivalent when they differ by an invertible left factor.
Equivalence classes are in bijection with 4 x 4 complex matrices through

    gamma(M) = (G+ - G_Q+)(Omega L^2)^-1 Eps,

which vanishes exactly for Q. Real conditions land in pi-bar(4), and a real
representative of any pi-bar preimage is obtained by a left factor U4.
"""

import logging
from dataclasses import replace
from typing import Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from config.beam_config import get_solver_config
from utils.boundary_utils import (
    BoundaryCondition,
    GreensRep,
    greens_matrices,
    is_wellposed,
    tilde,
)
from utils.errors import ConsistencyError, NotInPibar, NotWellPosed
from utils.matrix_utils import (
    BeamParams,
    build_constants,
    is_pibar,
    max_abs,
    wronskian_W,
    wronskian_W_inv,
)

logger = logging.getLogger(__name__)


def gamma(bc: BoundaryCondition, params: BeamParams) -> NDArray[np.complex128]:
    """gamma(M) = {M- W(-l) + M+ W(l)}^-1 M+ W(l) Eps - diag(1,0,0,1).

    Raises:
        NotWellPosed: If bc is not well-posed.
    """
    if not is_wellposed(bc, params):
        raise NotWellPosed(f"boundary condition {bc.name or 'M'} is not well-posed")
    c = build_constants()
    tilde_plus = bc.plus @ wronskian_W(params, params.l)
    total = bc.minus @ wronskian_W(params, -params.l) + tilde_plus
    return linalg.solve(total, tilde_plus) @ c.Eps - c.D1001


def gamma_definition_form(bc: BoundaryCondition, params: BeamParams) -> NDArray[np.complex128]:
    """(G+ - G_Q+)(Omega L^2)^-1 Eps, composed from the Green's blocks."""
    c = build_constants()
    rep = greens_matrices(bc, params)
    return (rep.g_plus - c.GQ_plus) @ c.OmegaL2_inv @ c.Eps


def gamma_rep(bc: BoundaryCondition, params: BeamParams) -> GreensRep:
    """Green's blocks together with the gamma image."""
    return replace(greens_matrices(bc, params), g_gamma=gamma(bc, params))


def gamma_pm(bc: BoundaryCondition, params: BeamParams) -> Tuple[NDArray, NDArray]:
    """(G-, G+) of a well-posed condition."""
    rep = greens_matrices(bc, params)
    return rep.g_minus, rep.g_plus


def _gamma_inverse_blocks(G: NDArray, params: BeamParams) -> NDArray[np.complex128]:
    c = build_constants()
    GE = G @ c.Eps
    minus = (c.D0110 - GE) @ wronskian_W_inv(params, -params.l)
    plus = (c.D1001 + GE) @ wronskian_W_inv(params, params.l)
    return np.hstack([minus, plus])


def gamma_inverse(G: ArrayLike, params: BeamParams) -> BoundaryCondition:
    """A condition M with gamma(M) = G; its M~ is the identity."""
    G = np.asarray(G, dtype=complex)
    if G.shape != (4, 4):
        raise ValueError(f"gamma images are 4x4, got {G.shape}")
    return BoundaryCondition(_gamma_inverse_blocks(G, params), "gamma_inverse")


def _real_representative(M: NDArray, name: str) -> BoundaryCondition:
    """U4 M, with the rounding-level imaginary part removed."""
    c = build_constants()
    tol = get_solver_config("representation")["real_truncation"]
    M = c.U4 @ M
    residue = max_abs(M.imag)
    if residue > tol * max(1.0, max_abs(M)):
        raise ConsistencyError(f"real representative has imaginary residue {residue:.3e}")
    return BoundaryCondition(M.real, name)


def gamma_inverse_real(G: ArrayLike, params: BeamParams) -> BoundaryCondition:
    """Real condition M with gamma(M) = G for G in pi-bar(4).

    Raises:
        NotInPibar: If G is not in pi-bar(4).
    """
    G = np.asarray(G, dtype=complex)
    if not is_pibar(G):
        raise NotInPibar("gamma_inverse_real needs a pi-bar(4) matrix")
    return _real_representative(_gamma_inverse_blocks(G, params), "gamma_inverse_real")


def _check_pm_pair(g_minus: NDArray, g_plus: NDArray):
    c = build_constants()
    defect = max_abs(g_minus + g_plus - c.OmegaL2)
    if defect > get_solver_config("identity")["tol"]:
        raise ValueError(f"G- + G+ must equal Omega L^2 (defect {defect:.3e})")


def gamma_pm_inverse(g_minus: ArrayLike, g_plus: ArrayLike, params: BeamParams) -> BoundaryCondition:
    """M = (G- (Omega L^2)^-1 W(-l)^-1 | G+ (Omega L^2)^-1 W(l)^-1) for a pair summing to Omega L^2."""
    c = build_constants()
    g_minus = np.asarray(g_minus, dtype=complex)
    g_plus = np.asarray(g_plus, dtype=complex)
    _check_pm_pair(g_minus, g_plus)
    M = np.hstack([
        g_minus @ c.OmegaL2_inv @ wronskian_W_inv(params, -params.l),
        g_plus @ c.OmegaL2_inv @ wronskian_W_inv(params, params.l),
    ])
    return BoundaryCondition(M, "gamma_pm_inverse")


def _minus_blocks(G: NDArray, params: BeamParams) -> NDArray:
    c = build_constants()
    return np.hstack([
        G @ c.OmegaL2_inv @ wronskian_W_inv(params, -params.l),
        (c.OmegaL2 - G) @ c.OmegaL2_inv @ wronskian_W_inv(params, params.l),
    ])


def _plus_blocks(G: NDArray, params: BeamParams) -> NDArray:
    c = build_constants()
    return np.hstack([
        (c.OmegaL2 - G) @ c.OmegaL2_inv @ wronskian_W_inv(params, -params.l),
        G @ c.OmegaL2_inv @ wronskian_W_inv(params, params.l),
    ])


def gamma_minus_inverse(G: ArrayLike, params: BeamParams) -> BoundaryCondition:
    """Condition whose G- block is G."""
    return BoundaryCondition(_minus_blocks(np.asarray(G, dtype=complex), params), "gamma_minus_inverse")


def gamma_plus_inverse(G: ArrayLike, params: BeamParams) -> BoundaryCondition:
    """Condition whose G+ block is G."""
    return BoundaryCondition(_plus_blocks(np.asarray(G, dtype=complex), params), "gamma_plus_inverse")


def gamma_minus_inverse_real(G: ArrayLike, params: BeamParams) -> BoundaryCondition:
    G = np.asarray(G, dtype=complex)
    if not is_pibar(G):
        raise NotInPibar("G- must lie in pi-bar(4)")
    return _real_representative(_minus_blocks(G, params), "gamma_minus_inverse_real")


def gamma_plus_inverse_real(G: ArrayLike, params: BeamParams) -> BoundaryCondition:
    G = np.asarray(G, dtype=complex)
    if not is_pibar(G):
        raise NotInPibar("G+ must lie in pi-bar(4)")
    return _real_representative(_plus_blocks(G, params), "gamma_plus_inverse_real")


def gamma_boundary_form(G: ArrayLike, b_minus: ArrayLike, b_plus: ArrayLike,
                        params: BeamParams) -> NDArray[np.complex128]:
    """Boundary expression in gamma coordinates.

    G Eps {W(l)^-1 B+ - W(-l)^-1 B-} + diag(0,1,1,0) W(-l)^-1 B- + diag(1,0,0,1) W(l)^-1 B+,
    which vanishes exactly when M B[u] = 0 for any M with gamma(M) = G.
    """
    c = build_constants()
    G = np.asarray(G, dtype=complex)
    left = wronskian_W_inv(params, -params.l) @ np.asarray(b_minus, dtype=complex)
    right = wronskian_W_inv(params, params.l) @ np.asarray(b_plus, dtype=complex)
    return G @ c.Eps @ (right - left) + c.D0110 @ left + c.D1001 @ right


def boundary_form_factor(bc: BoundaryCondition, params: BeamParams) -> NDArray[np.complex128]:
    """P with M = P gamma_inverse(gamma(M)), so M B[u] = P (boundary form).

    gamma_inverse always has M~ = I, so P is the M~ of bc itself.
    """
    return tilde(bc, params).tilde
