"""
Eigenvalues of K_M through 4 x 4 characteristic determinants.

For lambda != 0 the eigen-equation of K_M is the beam equation with spring
term alpha^4 (1 - 1/(lambda k)). Its solutions are spanned by y_lambda, the
exponentials e^{omega_j kappa alpha x} with kappa = chi(lambda), or the
monomials x^(j-1)/(j-1)! when lambda = 1/k. Comparing them with the free
solutions at both ends gives X_lambda(x), and

    det[G (X(l) - X(-l)) + X(l)] = 0  <=>  lambda in Spec K_M,

with G = gamma(M). For Q (G = 0) this is det X_lambda(l) = 0.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg, optimize

from config.beam_config import get_solver_config
from utils.boundary_utils import BoundaryCondition
from utils.errors import ConsistencyError, SingularX, ZeroLambda
from utils.greens_utils import GridFunction, QuadratureRule
from utils.matrix_utils import (
    BeamParams,
    build_constants,
    chi,
    chi_array,
    wronskian_W_inv,
)
from utils.representation_utils import gamma

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EigenBasis:
    """Solutions of the eigen-equation; kappa is None on the lambda = 1/k branch."""

    lam: complex
    params: BeamParams
    kappa: Optional[complex]

    @property
    def degenerate(self) -> bool:
        return self.kappa is None

    def y(self, x: ArrayLike) -> NDArray[np.complex128]:
        x = np.asarray(x, dtype=float)
        if self.degenerate:
            powers = np.arange(4)
            factorials = np.array([math.factorial(n) for n in powers], dtype=float)
            return x[..., None] ** powers / factorials
        c = build_constants()
        return np.exp(np.multiply.outer(x, c.omega * self.kappa * self.params.alpha))

    def W(self, x: float) -> NDArray[np.complex128]:
        if self.degenerate:
            return polynomial_wronskian(x)
        c = build_constants()
        roots = c.omega * self.kappa * self.params.alpha
        return roots[None, :] ** np.arange(4)[:, None] * np.exp(roots * x)[None, :]


@dataclass(frozen=True)
class EigenMatrix:
    """X_lambda(+-l) with Y_lambda(l), which is None when X_lambda(l) is numerically singular."""

    lam: complex
    X_at_l: NDArray[np.complex128]
    X_at_minus_l: NDArray[np.complex128]
    Y: Optional[NDArray[np.complex128]] = None
    degenerate: bool = False


@dataclass(frozen=True)
class SpectralPoint:
    """An eigenvalue with the unit null vector c of the characteristic matrix."""

    lam: complex
    c: NDArray[np.complex128]
    residual: float
    k_lambda: complex
    multiplicity: int = 1
    on_spec_q: bool = False


@dataclass
class ScanReport:
    points: List[SpectralPoint] = field(default_factory=list)
    unresolved: List[float] = field(default_factory=list)


def is_degenerate(lam: complex, k: float, tol: Optional[float] = None) -> bool:
    if tol is None:
        tol = get_solver_config("degenerate")["tol"]
    return bool(abs(complex(lam) * k - 1.0) <= tol)


def eigen_basis(lam: complex, params: BeamParams) -> EigenBasis:
    lam = complex(lam)
    if lam == 0:
        raise ZeroLambda("lambda = 0 has no eigen-basis")
    if is_degenerate(lam, params.k):
        return EigenBasis(1.0 / params.k + 0j, params, None)
    return EigenBasis(lam, params, chi(lam, params.k))


def polynomial_wronskian(x: float) -> NDArray[np.float64]:
    """Upper-triangular x^(j-i)/(j-i)!, the Wronskian of 1, x, x^2/2, x^3/6."""
    W = np.zeros((4, 4))
    for i in range(4):
        for j in range(i, 4):
            W[i, j] = x ** (j - i) / math.factorial(j - i)
    return W


def x_closed(z: float, kappa: ArrayLike) -> NDArray[np.complex128]:
    """X(z, kappa), vectorised over kappa (shape kappa.shape + (4, 4)).

    (1/4) e^{-Eps Omega z} {diag(0,1,1,0) W0* D W0 e^{-Omega kappa z}
                            + diag(1,0,0,1) W0* D W0 e^{Omega kappa z}},  D = diag(1, kappa, kappa^2, kappa^3)
    """
    c = build_constants()
    kappa = np.asarray(kappa, dtype=complex)
    powers = kappa[..., None] ** np.arange(4)
    core = c.W0.conj().T @ (powers[..., :, None] * c.W0)
    exponent = np.multiply.outer(kappa, c.omega) * z
    plus = core * np.exp(exponent)[..., None, :]
    minus = core * np.exp(-exponent)[..., None, :]
    outer_rows = np.array([True, False, False, True])[:, None]
    rows = np.where(outer_rows, plus, minus)
    return 0.25 * np.exp(-c.eps * c.omega * z)[:, None] * rows


def p_poly(n: int, z: float) -> complex:
    """p_n(z) = sum_{r=0}^{n} omega_1^(n-r) z^r / r!."""
    omega1 = build_constants().omega[0]
    return complex(sum(omega1 ** (n - r) * z ** r / math.factorial(r) for r in range(n + 1)))


def p_matrix(z: float) -> NDArray[np.complex128]:
    """P(z) = diag(0,1,1,0) W0* W_poly(-z) + diag(1,0,0,1) W0* W_poly(z)."""
    c = build_constants()
    W0H = c.W0.conj().T
    return c.D0110 @ W0H @ polynomial_wronskian(-z) + c.D1001 @ W0H @ polynomial_wronskian(z)


def p_matrix_explicit(z: float) -> NDArray[np.complex128]:
    """Row form of P(z) in terms of p_0..p_3."""
    p = np.array([p_poly(n, z) for n in range(4)])
    sign = np.array([1.0, -1.0, 1.0, -1.0])
    return np.vstack([p.conj(), sign * p, sign * p.conj(), p])


def p_blocks(z: float) -> Tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """(P+, P-) with P+ = [[conj p0, conj p2], [p0, p2]] and P- = [[-conj p1, -conj p3], [p1, p3]]."""
    p = [p_poly(n, z) for n in range(4)]
    p_plus = np.array([[p[0].conjugate(), p[2].conjugate()], [p[0], p[2]]])
    p_minus = np.array([[-p[1].conjugate(), -p[3].conjugate()], [p[1], p[3]]])
    return p_plus, p_minus


def x_degenerate(x: float, params: BeamParams) -> NDArray[np.complex128]:
    """X_{1/k}(x) = (1/4) e^{-Eps Omega z} P(z) diag(1, a, a^2, a^3)^-1 with z = a x."""
    c = build_constants()
    z = params.alpha * x
    return 0.25 * np.exp(-c.eps * c.omega * z)[:, None] * p_matrix(z) / params.alpha_powers[None, :]


def x_direct(lam: complex, x: float, params: BeamParams) -> NDArray[np.complex128]:
    """diag(0,1,1,0) W(-x)^-1 W_lambda(-x) + diag(1,0,0,1) W(x)^-1 W_lambda(x)."""
    c = build_constants()
    basis = eigen_basis(lam, params)
    return (c.D0110 @ wronskian_W_inv(params, -x) @ basis.W(-x)
            + c.D1001 @ wronskian_W_inv(params, x) @ basis.W(x))


def X_matrix(lam: complex, x: float, params: BeamParams) -> NDArray[np.complex128]:
    """X_lambda(x) through the closed form of its branch.

    Raises:
        ZeroLambda: For lambda = 0.
    """
    basis = eigen_basis(lam, params)
    if basis.degenerate:
        return x_degenerate(x, params)
    return x_closed(params.alpha * x, basis.kappa)


def _column_scaled(A: NDArray) -> Tuple[NDArray, NDArray]:
    norms = np.linalg.norm(A, axis=-2)
    norms = np.where(norms == 0, 1.0, norms)
    return A / norms[..., None, :], norms


def singular_ratio(A: ArrayLike) -> float:
    """sigma_min / sigma_max after column equilibration."""
    scaled, _ = _column_scaled(np.asarray(A, dtype=complex))
    s = np.linalg.svd(scaled, compute_uv=False)
    return float(s[-1] / s[0]) if s[0] > 0 else 0.0


def Y_matrix(lam: complex, x: float, params: BeamParams,
             singular_tol: Optional[float] = None) -> NDArray[np.complex128]:
    """Y_lambda(x) = X_lambda(-x) X_lambda(x)^-1 - I.

    Raises:
        SingularX: If X_lambda(x) is numerically singular.
        ZeroLambda: For lambda = 0.
    """
    if singular_tol is None:
        singular_tol = get_solver_config("scan")["singular_tol"]
    X_plus = X_matrix(lam, x, params)
    X_minus = X_matrix(lam, -x, params)
    ratio = singular_ratio(X_plus)
    if ratio < singular_tol:
        raise SingularX(f"X_lambda({x}) is singular at lambda = {lam} (ratio {ratio:.2e})")
    # Same column scaling on both factors leaves X(-x) X(x)^-1 unchanged
    _, norms = _column_scaled(X_plus)
    product = linalg.solve((X_plus / norms).T, (X_minus / norms).T).T
    return product - np.eye(4)


def eigen_matrix(lam: complex, params: BeamParams, singular_tol: Optional[float] = None) -> EigenMatrix:
    X_plus = X_matrix(lam, params.l, params)
    X_minus = X_matrix(lam, -params.l, params)
    try:
        Y = Y_matrix(lam, params.l, params, singular_tol)
    except SingularX:
        Y = None
    return EigenMatrix(complex(lam), X_plus, X_minus, Y, is_degenerate(lam, params.k))


def characteristic_matrix(G: ArrayLike, lam: complex, params: BeamParams) -> NDArray[np.complex128]:
    """G (X(l) - X(-l)) + X(l)."""
    X_plus = X_matrix(lam, params.l, params)
    X_minus = X_matrix(lam, -params.l, params)
    return np.asarray(G) @ (X_plus - X_minus) + X_plus


def char_det(bc: BoundaryCondition, params: BeamParams, lam: complex) -> complex:
    """det[G_M (X(l) - X(-l)) + X(l)], zero exactly on Spec K_M."""
    G = gamma(bc, params)
    return complex(np.linalg.det(characteristic_matrix(G, lam, params)))


def char_det_Y(bc: BoundaryCondition, params: BeamParams, lam: complex) -> complex:
    """det(G_M Y_lambda(l) - I), defined off Spec K_Q."""
    G = gamma(bc, params)
    Y = Y_matrix(lam, params.l, params)
    return complex(np.linalg.det(G @ Y - np.eye(4)))


def _normalized_det_stack(G: NDArray, lams: ArrayLike, params: BeamParams) -> NDArray[np.complex128]:
    """Column-equilibrated characteristic determinant on a lambda grid (no lambda = 0, 1/k)."""
    kappas = chi_array(lams, params.k)
    z = params.alpha * params.l
    X_plus = x_closed(z, kappas)
    X_minus = x_closed(-z, kappas)
    scaled, _ = _column_scaled(G @ (X_plus - X_minus) + X_plus)
    return np.linalg.det(scaled)


def _real_char_values(G: NDArray, lams: ArrayLike, params: BeamParams) -> NDArray[np.float64]:
    """Real form of the determinant for real G-structure and real lambda.

    It is real off (0, 1/k) and purely imaginary inside, so the matching
    component carries every sign change.
    """
    lams = np.asarray(lams, dtype=float)
    values = _normalized_det_stack(G, lams, params)
    inside = (lams > 0) & (lams * params.k < 1.0)
    return np.where(inside, values.imag, values.real)


def spectral_point(G: ArrayLike, lam: complex, params: BeamParams) -> SpectralPoint:
    """Null direction of the characteristic matrix at lambda, from its SVD."""
    cfg = get_solver_config("scan")
    A = characteristic_matrix(G, lam, params)
    scaled, norms = _column_scaled(A)
    _, s, Vh = np.linalg.svd(scaled)
    c = Vh[-1].conj() / norms
    c = c / np.linalg.norm(c)
    residual = float(s[-1] / s[0]) if s[0] > 0 else 0.0
    multiplicity = int(np.sum(s / s[0] <= cfg["multiplicity_tol"])) if s[0] > 0 else 4
    on_spec_q = bool(singular_ratio(X_matrix(lam, params.l, params)) <= cfg["residual_tol"])
    return SpectralPoint(complex(lam), c, residual, complex(lam) * params.k,
                         max(multiplicity, 1), on_spec_q)


def _scan_grid(lo: float, hi: float, points_per_decade: int, linear_points: int) -> NDArray[np.float64]:
    """Log grid (dense near 0) merged with a uniform grid on [lo, hi], same-sign endpoints."""
    sign = 1.0 if hi > 0 else -1.0
    small, large = sorted([abs(lo), abs(hi)])
    decades = math.log10(large / small)
    count = max(2, int(math.ceil(points_per_decade * decades)) + 1)
    grid = np.concatenate([sign * np.geomspace(small, large, count),
                           np.linspace(lo, hi, max(2, linear_points))])
    return np.unique(grid)


def _split_interval(a: float, b: float, params: BeamParams) -> List[Tuple[float, float]]:
    """Sub-intervals avoiding 0 and 1/k."""
    inverse_k = 1.0 / params.k
    zero_margin = 1e-6 * inverse_k
    degenerate_margin = 1e-9 * inverse_k
    cuts = [(a, b)]
    if a < 0 < b:
        logger.warning(f"Splitting scan interval at 0; |lambda| < {zero_margin:.1e} is not resolved")
        cuts = [(a, -zero_margin), (zero_margin, b)]
    pieces = []
    for lo, hi in cuts:
        if lo < inverse_k < hi:
            pieces.extend([(lo, inverse_k - degenerate_margin), (inverse_k + degenerate_margin, hi)])
        else:
            pieces.append((lo, hi))
    return [(lo, hi) for lo, hi in pieces if hi > lo and lo * hi > 0]


def _bracket_roots(G: NDArray, lo: float, hi: float, params: BeamParams) -> Tuple[List[float], List[float]]:
    """Roots of the real characteristic function on [lo, hi] and touch-zero candidates."""
    cfg = get_solver_config("scan")
    lams = _scan_grid(lo, hi, cfg["points_per_decade"], cfg["linear_points"])
    values = _real_char_values(G, lams, params)
    logger.debug(f"Scanning {lams.size} points on [{lo:.6g}, {hi:.6g}]")

    def func(lam):
        return float(_real_char_values(G, [lam], params)[0])

    roots = [float(lam) for lam, value in zip(lams, values) if value == 0.0]
    signs = np.sign(values)
    for i in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
        roots.append(optimize.brentq(func, lams[i], lams[i + 1], xtol=cfg["xtol"], rtol=cfg["rtol"]))

    magnitude = np.abs(values)
    touches = []
    interior = np.arange(1, lams.size - 1)
    minima = interior[(magnitude[interior] < magnitude[interior - 1])
                      & (magnitude[interior] < magnitude[interior + 1])
                      & (signs[interior - 1] == signs[interior])
                      & (signs[interior + 1] == signs[interior])]
    for i in minima:
        if singular_ratio(characteristic_matrix(G, lams[i], params)) <= cfg["touch_tol"]:
            touches.append(float(lams[i]))
    return sorted(roots), touches


def scan_real_spectrum_detailed(bc: BoundaryCondition, params: BeamParams,
                                interval: Sequence[float]) -> ScanReport:
    """Real eigenvalues of K_M in an interval together with unresolved candidates."""
    if not bc.is_real:
        raise ValueError("real-line scanning needs a real boundary condition; use scan_complex_spectrum")
    cfg = get_solver_config("scan")
    a, b = sorted(float(v) for v in interval)
    G = gamma(bc, params)
    report = ScanReport()

    for lo, hi in _split_interval(a, b, params):
        roots, touches = _bracket_roots(G, lo, hi, params)
        for lam in roots:
            point = spectral_point(G, lam, params)
            if point.residual > cfg["residual_tol"]:
                logger.warning(f"Discarding lambda = {lam:.12g}: residual {point.residual:.2e}")
                continue
            report.points.append(point)
        for lam in touches:
            logger.warning(f"Unresolved bracket: determinant touches zero near lambda = {lam:.12g}")
            report.unresolved.append(lam)

    inverse_k = 1.0 / params.k
    if a <= inverse_k <= b:
        point = spectral_point(G, inverse_k, params)
        if point.residual <= cfg["residual_tol"]:
            report.points.append(point)

    report.points.sort(key=lambda point: -point.lam.real)
    logger.info(f"Found {len(report.points)} real eigenvalues on [{a:.6g}, {b:.6g}]")
    return report


def scan_real_spectrum(bc: BoundaryCondition, params: BeamParams,
                       interval: Sequence[float]) -> List[SpectralPoint]:
    """Real eigenvalues of K_M in an interval, largest first."""
    return scan_real_spectrum_detailed(bc, params, interval).points


def eigenfunction(bc: BoundaryCondition, params: BeamParams, point: SpectralPoint,
                  rule: QuadratureRule) -> GridFunction:
    """u = y_lambda^T c at the nodes of rule."""
    if point.residual > get_solver_config("scan")["residual_tol"]:
        logger.warning(f"Eigenfunction requested for a loose point (residual {point.residual:.2e})")
    basis = eigen_basis(point.lam, params)
    return GridFunction(basis.y(rule.nodes) @ point.c, rule)


def spec_Q(params: BeamParams, count: int, max_count: Optional[int] = None) -> List[Tuple[float, float]]:
    """The 2n largest eigenvalues of K_Q, paired as (mu_n, nu_n) with mu_1 > nu_1 > mu_2 > ..."""
    cfg = get_solver_config("spec_q")
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    max_count = cfg["max_count"] if max_count is None else max_count
    if count > max_count:
        logger.warning(f"count {count} exceeds the default cap {max_count}; close pairs may be missed")

    G = np.zeros((4, 4))
    # Eigenvalues sit near 1/(k(1 + (t/L)^4)) with t spaced by pi/2
    t = (4 * count + 1) * math.pi / 2.0
    lower = 1.0 / (params.k * (1.0 + (t / params.intrinsic_length) ** 4))
    upper = (1.0 - cfg["upper_margin"]) / params.k

    roots: List[float] = []
    for _ in range(cfg["extensions"] + 1):
        roots, _ = _bracket_roots(G, lower, upper, params)
        if len(roots) >= 2 * count:
            break
        logger.info(f"Found {len(roots)} Q-eigenvalues above {lower:.3e}, extending downward")
        lower /= 10.0
    else:
        raise ConsistencyError(f"only {len(roots)} eigenvalues of K_Q found, {2 * count} requested")

    largest = sorted(roots, reverse=True)[:2 * count]
    return [(largest[2 * n], largest[2 * n + 1]) for n in range(count)]


def refine_complex_eigenvalue(bc: BoundaryCondition, params: BeamParams, lam0: complex,
                              G: Optional[NDArray] = None) -> Optional[SpectralPoint]:
    """Secant iteration on the characteristic determinant started at lam0."""
    cfg = get_solver_config("complex_scan")
    if G is None:
        G = gamma(bc, params)
    lam0 = complex(lam0)
    scale = abs(np.linalg.det(characteristic_matrix(G, lam0, params))) or 1.0

    def func(lam):
        return complex(np.linalg.det(characteristic_matrix(G, lam, params))) / scale

    try:
        root = optimize.newton(func, lam0, x1=lam0 * (1.0 + 1e-6) + 1e-9,
                               tol=cfg["tol"], maxiter=cfg["maxiter"])
    except (RuntimeError, ArithmeticError, ValueError) as error:
        logger.debug(f"Refinement from {lam0} failed: {error}")
        return None
    root = complex(root)
    if root == 0 or not np.isfinite(root):
        return None
    point = spectral_point(G, root, params)
    if point.residual > cfg["accept"]:
        return None
    return point


def scan_complex_spectrum(bc: BoundaryCondition, params: BeamParams,
                          box: Sequence[float], grid: Optional[int] = None) -> List[SpectralPoint]:
    """Best-effort complex eigenvalues in box = (re_min, re_max, im_min, im_max).

    Local minima of the equilibrated determinant on a grid seed secant
    refinement; there is no completeness guarantee.
    """
    cfg = get_solver_config("complex_scan")
    n = cfg["grid"] if grid is None else int(grid)
    G = gamma(bc, params)
    re = np.linspace(box[0], box[1], n)
    im = np.linspace(box[2], box[3], n)
    lams = re[None, :] + 1j * im[:, None]
    bad = (np.abs(lams) < 1e-9) | (np.abs(lams * params.k - 1.0) < 1e-9)
    lams = np.where(bad, lams + 1e-7 * (1 + 1j), lams)
    magnitude = np.abs(_normalized_det_stack(G, lams.ravel(), params)).reshape(lams.shape)

    seeds = []
    for i in range(1, n - 1):
        for j in range(1, n - 1):
            window = magnitude[i - 1:i + 2, j - 1:j + 2]
            if magnitude[i, j] == window.min():
                seeds.append(lams[i, j])
    logger.info(f"Refining {len(seeds)} complex seeds")

    points: List[SpectralPoint] = []
    for seed in seeds:
        point = refine_complex_eigenvalue(bc, params, seed, G)
        if point is None:
            continue
        inside = box[0] <= point.lam.real <= box[1] and box[2] <= point.lam.imag <= box[3]
        duplicate = any(abs(point.lam - other.lam) <= 1e-8 * abs(point.lam) for other in points)
        if inside and not duplicate:
            points.append(point)
    points.sort(key=lambda point: (-abs(point.lam), point.lam.imag))
    return points


def exp_sum_profile(t0: complex, z: ArrayLike) -> NDArray[np.complex128]:
    """(sum_r omega_r^n e^{omega_r t0 z})_{n=1,2,3}, shape (3,) + z.shape.

    Vanishes for every z only when t0 = 0.
    """
    c = build_constants()
    z = np.asarray(z, dtype=float)
    exponentials = np.exp(np.multiply.outer(z, c.omega * t0))
    return np.stack([exponentials @ c.omega ** n for n in (1, 2, 3)])
