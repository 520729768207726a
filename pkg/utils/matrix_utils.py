"""
Structured constants, Wronskians and the pi-bar matrix algebra.

The beam equation u'''' + alpha^4 u = (alpha^4 / k) w is carried by the four
fourth roots of -1, omega_j = exp(i pi (2j - 1) / 4), and every other module
is written in terms of the constant matrices collected here.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from config.beam_config import DEFAULT_PARAMS, get_solver_config
from utils.errors import DegenerateLambda, InvalidParams, NotInPibar

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BeamParams:
    """Physical constants of the beam.

    Attributes:
        l: Half-length, the beam occupies [-l, l].
        alpha: Stiffness ratio (k / EI)^(1/4).
        k: Foundation spring density.
    """

    l: float
    alpha: float
    k: float

    def __post_init__(self):
        for name in ("l", "alpha", "k"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise InvalidParams(f"{name} must be a number, got {value!r}")
            if not (math.isfinite(value) and value > 0):
                raise InvalidParams(f"{name} must be finite and positive, got {value}")
            object.__setattr__(self, name, value)

    @property
    def intrinsic_length(self) -> float:
        """L = 2 l alpha."""
        return 2.0 * self.l * self.alpha

    @property
    def alpha_powers(self) -> NDArray[np.float64]:
        return self.alpha ** np.arange(4)

    def to_dict(self) -> Dict[str, float]:
        return {"l": self.l, "alpha": self.alpha, "k": self.k}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BeamParams":
        return cls(l=data["l"], alpha=data["alpha"], k=data["k"])

    @classmethod
    def defaults(cls) -> "BeamParams":
        return cls.from_dict(DEFAULT_PARAMS)


@dataclass(frozen=True)
class StructuredConstants:
    """Read-only constant matrices shared by every computation."""

    omega: NDArray[np.complex128]
    Omega: NDArray[np.complex128]
    W0: NDArray[np.complex128]
    W0_inv: NDArray[np.complex128]
    R4: NDArray[np.float64]
    R8: NDArray[np.float64]
    Lmat: NDArray[np.float64]
    L_inv: NDArray[np.float64]
    L2: NDArray[np.float64]
    eps: NDArray[np.float64]
    Eps: NDArray[np.float64]
    D0110: NDArray[np.float64]
    D1001: NDArray[np.float64]
    OmegaL2: NDArray[np.complex128]
    OmegaL2_inv: NDArray[np.complex128]
    U4: NDArray[np.complex128]
    V: NDArray[np.float64]
    Vhat: NDArray[np.float64]
    Uhat: NDArray[np.complex128]
    GQ_minus: NDArray[np.complex128]
    GQ_plus: NDArray[np.complex128]


def _readonly(array: ArrayLike, dtype=None) -> np.ndarray:
    result = np.array(array, dtype=dtype)
    result.setflags(write=False)
    return result


def reversal(n: int) -> NDArray[np.float64]:
    """Anti-identity R_n (ones on the anti-diagonal)."""
    return np.eye(n)[::-1].copy()


def u2n(n: int) -> NDArray[np.complex128]:
    """Unitary U_{2n} = (1/sqrt 2) [[I, R], [iR, -iI]] linking pi-bar(2n) to real matrices."""
    identity = np.eye(n)
    rev = reversal(n)
    return np.block([[identity, rev], [1j * rev, -1j * identity]]) / SQRT2


@lru_cache(maxsize=None)
def build_constants() -> StructuredConstants:
    """Build the structured constants once; the arrays are immutable."""
    omega = np.exp(1j * np.pi / 4.0 * (2.0 * np.arange(1, 5) - 1.0))
    Omega = np.diag(omega)
    # (i, j) entry is omega_j^(i-1)
    W0 = omega[np.newaxis, :] ** np.arange(4)[:, np.newaxis]
    Lmat = np.roll(np.eye(4), 1, axis=1)
    L2 = Lmat @ Lmat
    eps = np.array([1.0, -1.0, -1.0, 1.0])
    D0110 = np.diag([0.0, 1.0, 1.0, 0.0])
    D1001 = np.diag([1.0, 0.0, 0.0, 1.0])
    OmegaL2 = Omega @ L2
    identity2 = np.eye(2)
    V = np.block([[identity2, identity2], [-identity2, identity2]]) / SQRT2
    Vhat = np.eye(4)[:, [0, 2, 1, 3]]
    Uhat = np.array([
        [0, 1j, -1j, 0],
        [0, 1, 1, 0],
        [1j, 0, 0, -1j],
        [-1, 0, 0, -1],
    ]) / SQRT2

    return StructuredConstants(
        omega=_readonly(omega),
        Omega=_readonly(Omega),
        W0=_readonly(W0),
        W0_inv=_readonly(W0.conj().T / 4.0),
        R4=_readonly(reversal(4)),
        R8=_readonly(reversal(8)),
        Lmat=_readonly(Lmat),
        L_inv=_readonly(Lmat.T),
        L2=_readonly(L2),
        eps=_readonly(eps),
        Eps=_readonly(np.diag(eps)),
        D0110=_readonly(D0110),
        D1001=_readonly(D1001),
        OmegaL2=_readonly(OmegaL2),
        OmegaL2_inv=_readonly(np.linalg.inv(OmegaL2)),
        U4=_readonly(u2n(2)),
        V=_readonly(V),
        Vhat=_readonly(Vhat),
        Uhat=_readonly(Uhat),
        GQ_minus=_readonly(D0110 @ OmegaL2),
        GQ_plus=_readonly(D1001 @ OmegaL2),
    )


def max_abs(A: ArrayLike) -> float:
    """Max-norm of an array (0 for empty input)."""
    A = np.asarray(A)
    return float(np.max(np.abs(A))) if A.size else 0.0


def exp_diag(values: ArrayLike, z: complex) -> NDArray[np.complex128]:
    """e^{diag(values) z}, computed entrywise."""
    return np.diag(np.exp(np.asarray(values) * z))


def wronskian_W(params: BeamParams, x: float) -> NDArray[np.complex128]:
    """W(x) = diag(1, a, a^2, a^3) W0 e^{Omega a x}; entry (i, j) is (omega_j a)^(i-1) e^{omega_j a x}."""
    c = build_constants()
    return params.alpha_powers[:, None] * c.W0 * np.exp(c.omega * params.alpha * x)[None, :]


def wronskian_W_inv(params: BeamParams, x: float) -> NDArray[np.complex128]:
    """Closed-form inverse (1/4) e^{-Omega a x} W0* diag(1, a, a^2, a^3)^-1."""
    c = build_constants()
    scale = np.exp(-c.omega * params.alpha * x)[:, None]
    return 0.25 * scale * c.W0.conj().T / params.alpha_powers[None, :]


def y_vector(params: BeamParams, x: ArrayLike) -> NDArray[np.complex128]:
    """Fundamental solutions y_j(x) = e^{omega_j a x}, shape x.shape + (4,)."""
    c = build_constants()
    return np.exp(np.multiply.outer(np.asarray(x, dtype=float), c.omega * params.alpha))


def is_pibar(A: ArrayLike, tol: Optional[float] = None) -> bool:
    """True when R conj(A) R equals A within tol * max(1, ||A||_max)."""
    if tol is None:
        tol = get_solver_config("pibar")["tol"]
    A = np.asarray(A)
    rev = reversal(A.shape[0])
    defect = max_abs(rev @ A.conj() @ rev - A)
    return bool(defect <= tol * max(1.0, max_abs(A)))


def project_pibar(A: ArrayLike) -> NDArray[np.complex128]:
    """Nearest pi-bar matrix, (A + R conj(A) R) / 2."""
    A = np.asarray(A, dtype=complex)
    rev = reversal(A.shape[0])
    return 0.5 * (A + rev @ A.conj() @ rev)


def pibar_to_real(A: ArrayLike, tol: Optional[float] = None) -> NDArray[np.float64]:
    """Real image conj(U_2n) A U_2n^T of a pi-bar matrix.

    Args:
        A: Square complex matrix of even size in pi-bar(2n).
        tol: Membership tolerance, defaults to the "pibar" config.

    Returns:
        The real 2n x 2n matrix.

    Raises:
        NotInPibar: If A is not in pi-bar.
    """
    A = np.asarray(A, dtype=complex)
    if A.shape[0] % 2:
        raise ValueError(f"pi-bar matrices have even size, got {A.shape}")
    if not is_pibar(A, tol):
        raise NotInPibar("matrix is not fixed by R conj(.) R")
    U = u2n(A.shape[0] // 2)
    return (U.conj() @ A @ U.T).real


def real_to_pibar(B: ArrayLike) -> NDArray[np.complex128]:
    """Inverse of pibar_to_real: U_2n^T B conj(U_2n)."""
    B = np.asarray(B, dtype=float)
    if B.shape[0] % 2:
        raise ValueError(f"pi-bar matrices have even size, got {B.shape}")
    U = u2n(B.shape[0] // 2)
    return U.T @ B @ U.conj()


def random_pibar(rng: np.random.Generator, n: int = 4) -> NDArray[np.complex128]:
    """Random pi-bar(n) sample drawn through the real isomorphism."""
    return real_to_pibar(rng.standard_normal((n, n)))


def chi(lam: complex, k: float, tol: Optional[float] = None) -> complex:
    """Fourth root kappa of 1 - 1/(lam k) with argument in [0, pi/2).

    Raises:
        DegenerateLambda: For lam = 0 or lam = 1/k.
    """
    if tol is None:
        tol = get_solver_config("degenerate")["chi_tol"]
    lam = complex(lam)
    if lam == 0 or abs(lam * k - 1.0) <= tol:
        raise DegenerateLambda(f"chi is undefined at lambda = {lam}")
    w = 1.0 - 1.0 / (lam * k)
    theta = math.atan2(w.imag, w.real) % TWO_PI
    if theta >= TWO_PI:
        theta = 0.0
    return abs(w) ** 0.25 * cmath.exp(1j * theta / 4.0)


def chi_array(lams: ArrayLike, k: float) -> NDArray[np.complex128]:
    """Vectorised chi for grids that avoid 0 and 1/k."""
    w = 1.0 - 1.0 / (np.asarray(lams, dtype=complex) * k)
    theta = np.mod(np.angle(w), TWO_PI)
    theta = np.where(theta >= TWO_PI, 0.0, theta)
    return np.abs(w) ** 0.25 * np.exp(1j * theta / 4.0)


def chi_inverse(kappa: complex, k: float) -> complex:
    """lambda = 1 / (k (1 - kappa^4))."""
    return 1.0 / (k * (1.0 - complex(kappa) ** 4))
