"""
Two-point boundary conditions M B[u] = 0 for the beam on [-l, l].

B[u] stacks (u, u', u'', u''') at -l and at +l, so a condition is a 4 x 8
matrix M = (M- | M+). Well-posedness, the Green's blocks G-/G+ and the
canonical conditions (Q, clamped, free, hinged) live here.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from config.beam_config import get_solver_config
from utils.errors import NotWellPosed
from utils.matrix_utils import (
    SQRT2,
    BeamParams,
    build_constants,
    max_abs,
    wronskian_W,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundaryCondition:
    """A 4 x 8 boundary matrix M = (M- | M+)."""

    M: NDArray[np.complex128]
    name: Optional[str] = None

    def __post_init__(self):
        M = np.array(self.M, dtype=complex)
        if M.shape != (4, 8):
            raise ValueError(f"boundary matrix must be 4x8, got {M.shape}")
        if not np.all(np.isfinite(M)):
            raise ValueError("boundary matrix has non-finite entries")
        M.setflags(write=False)
        object.__setattr__(self, "M", M)

    @property
    def minus(self) -> NDArray[np.complex128]:
        return self.M[:, :4]

    @property
    def plus(self) -> NDArray[np.complex128]:
        return self.M[:, 4:]

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.M.imag == 0))

    def left_multiply(self, P: ArrayLike) -> "BoundaryCondition":
        """P M, an equivalent condition when P is invertible."""
        return BoundaryCondition(np.asarray(P) @ self.M, self.name)


@dataclass(frozen=True)
class TildeDecomposition:
    tilde_minus: NDArray[np.complex128]
    tilde_plus: NDArray[np.complex128]
    tilde: NDArray[np.complex128]
    det_tilde: complex


@dataclass(frozen=True)
class GreensRep:
    """Green's blocks of a well-posed condition; g_gamma is set by representation_utils."""

    g_minus: NDArray[np.complex128]
    g_plus: NDArray[np.complex128]
    g_gamma: Optional[NDArray[np.complex128]] = None


def tilde(bc: BoundaryCondition, params: BeamParams) -> TildeDecomposition:
    """M~- = M- W(-l), M~+ = M+ W(l) and their sum."""
    tilde_minus = bc.minus @ wronskian_W(params, -params.l)
    tilde_plus = bc.plus @ wronskian_W(params, params.l)
    total = tilde_minus + tilde_plus
    return TildeDecomposition(tilde_minus, tilde_plus, total, complex(np.linalg.det(total)))


def is_wellposed(bc: BoundaryCondition, params: BeamParams, tol: Optional[float] = None) -> bool:
    """|det M~| > tol ||M~||^4, a scale-free version of det M~ != 0."""
    if tol is None:
        tol = get_solver_config("wellposed")["tol"]
    decomposition = tilde(bc, params)
    norm = np.linalg.norm(decomposition.tilde, 2)
    if norm == 0:
        return False
    return bool(abs(decomposition.det_tilde) > tol * norm ** 4)


def greens_matrices(bc: BoundaryCondition, params: BeamParams) -> GreensRep:
    """G- = M~^-1 M~- Omega L^2 and G+ = M~^-1 M~+ Omega L^2.

    Raises:
        NotWellPosed: If det M~ vanishes.
    """
    if not is_wellposed(bc, params):
        raise NotWellPosed(f"boundary condition {bc.name or 'M'} is not well-posed")
    c = build_constants()
    decomposition = tilde(bc, params)
    g_minus = np.linalg.solve(decomposition.tilde, decomposition.tilde_minus) @ c.OmegaL2
    g_plus = np.linalg.solve(decomposition.tilde, decomposition.tilde_plus) @ c.OmegaL2
    return GreensRep(g_minus, g_plus)


def equivalent(a: BoundaryCondition, b: BoundaryCondition, params: BeamParams,
               tol: Optional[float] = None) -> bool:
    """Two conditions are equivalent iff their G+ blocks coincide."""
    if tol is None:
        tol = get_solver_config("equivalence")["tol"]
    g_a = greens_matrices(a, params).g_plus
    g_b = greens_matrices(b, params).g_plus
    return bool(max_abs(g_a - g_b) <= tol * max(1.0, max_abs(g_a)))


def _selector(columns) -> NDArray[np.float64]:
    M = np.zeros((4, 8))
    for row, column in enumerate(columns):
        M[row, column] = 1.0
    return M


def _q_matrix(params: BeamParams) -> NDArray[np.float64]:
    a = params.alpha
    M = np.zeros((4, 8))
    M[0, :4] = [0.0, a ** 2, -SQRT2 * a, 1.0]
    M[1, :4] = [SQRT2 * a ** 3, -a ** 2, 0.0, 1.0]
    M[2, 4:] = [0.0, a ** 2, SQRT2 * a, 1.0]
    M[3, 4:] = [-SQRT2 * a ** 3, -a ** 2, 0.0, 1.0]
    return M


# Columns of B = (u, u', u'', u''' at -l, then at +l) fixed to zero
NAMED_CONDITIONS: Dict[str, Callable[[BeamParams], NDArray[np.float64]]] = {
    "Q": _q_matrix,
    "clamped": lambda params: _selector([0, 1, 4, 5]),
    "free": lambda params: _selector([2, 3, 6, 7]),
    "hinged": lambda params: _selector([0, 2, 4, 6]),
}


def named_bc(name: str, params: BeamParams) -> BoundaryCondition:
    """Canonical boundary conditions.

    Q reproduces the infinite-beam kernel on [-l, l]; clamped fixes u and u',
    free fixes u'' and u''', hinged fixes u and u'' at both ends.
    """
    if name not in NAMED_CONDITIONS:
        raise ValueError(f"unknown boundary condition {name!r}, expected one of {sorted(NAMED_CONDITIONS)}")
    return BoundaryCondition(NAMED_CONDITIONS[name](params), name)


def random_wellposed(rng: np.random.Generator, params: BeamParams, real: bool = False,
                     max_tries: int = 100) -> BoundaryCondition:
    """Gaussian 4 x 8 condition, redrawn until well-posed."""
    for _ in range(max_tries):
        M = rng.standard_normal((4, 8))
        if not real:
            M = M + 1j * rng.standard_normal((4, 8))
        bc = BoundaryCondition(M, "random")
        if is_wellposed(bc, params):
            return bc
    raise NotWellPosed(f"no well-posed sample in {max_tries} draws")
