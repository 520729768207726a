"""
Green's kernel of a well-posed condition and the operator K_M.

For a load w the solution u = K_M[w] is written as

    u(x) = (alpha / 4k) y(x)^T f(x),
    f(x) = -G- int_{-l}^{x} y w + G+ int_{x}^{l} y w,

so every node splits the integral at x and only smooth integrands are
handed to the quadrature. Within a panel the load is interpolated by its
Legendre polynomial through the panel nodes.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial import legendre
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from config.beam_config import get_solver_config
from utils.boundary_utils import BoundaryCondition, GreensRep, greens_matrices
from utils.errors import OutOfDomain
from utils.matrix_utils import SQRT2, BeamParams, build_constants, wronskian_W, y_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadratureRule:
    """Composite Gauss-Legendre rule on [a, b] with equal panels."""

    nodes: NDArray[np.float64]
    weights: NDArray[np.float64]
    panel_edges: NDArray[np.float64]
    panel_order: int

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def panels(self) -> int:
        return self.panel_edges.size - 1


@dataclass(frozen=True)
class GridFunction:
    """Complex samples of a function at the nodes of a rule."""

    values: NDArray[np.complex128]
    rule: QuadratureRule

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != self.rule.nodes.shape:
            raise ValueError(f"expected {self.rule.size} values, got {values.shape}")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(cls, rule: QuadratureRule, func: Callable[[NDArray], ArrayLike]) -> "GridFunction":
        return cls(np.asarray(func(rule.nodes), dtype=complex) * np.ones(rule.size), rule)

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0


def composite_gauss_legendre(a: float, b: float, nodes: Optional[int] = None,
                             panel_order: Optional[int] = None) -> QuadratureRule:
    """Composite Gauss-Legendre rule.

    The node count is rounded to a whole number of panels of `panel_order`
    points each.
    """
    config = get_solver_config("quadrature")
    nodes = config["nodes"] if nodes is None else int(nodes)
    panel_order = config["panel_order"] if panel_order is None else int(panel_order)
    panels = max(1, int(round(nodes / panel_order)))
    if panels * panel_order != nodes:
        logger.info(f"Rounding {nodes} quadrature nodes to {panels * panel_order}")

    t, wt = legendre.leggauss(panel_order)
    edges = np.linspace(a, b, panels + 1)
    centers = 0.5 * (edges[1:] + edges[:-1])
    half_widths = 0.5 * (edges[1:] - edges[:-1])
    x = (centers[:, None] + half_widths[:, None] * t[None, :]).ravel()
    w = (half_widths[:, None] * wt[None, :]).ravel()
    return QuadratureRule(x, w, edges, panel_order)


def beam_rule(params: BeamParams, nodes: Optional[int] = None) -> QuadratureRule:
    """Default rule on [-l, l]."""
    return composite_gauss_legendre(-params.l, params.l, nodes)


@lru_cache(maxsize=16)
def _partial_panel_operators(order: int) -> Tuple[np.ndarray, ...]:
    """Reference sub-rules on [-1, t_m] and [t_m, 1] for every panel node t_m.

    Returns sub-node positions and weights for both sides together with the
    matrices that interpolate panel samples onto those sub-nodes.
    """
    t, wt = legendre.leggauss(order)
    vandermonde_inv = np.linalg.inv(legendre.legvander(t, order - 1))
    left_nodes = -1.0 + np.outer(t + 1.0, (t + 1.0) / 2.0)
    left_weights = np.outer((t + 1.0) / 2.0, wt)
    right_nodes = t[:, None] + np.outer(1.0 - t, (t + 1.0) / 2.0)
    right_weights = np.outer((1.0 - t) / 2.0, wt)
    left_interp = legendre.legvander(left_nodes, order - 1) @ vandermonde_inv
    right_interp = legendre.legvander(right_nodes, order - 1) @ vandermonde_inv
    return left_nodes, left_weights, left_interp, right_nodes, right_weights, right_interp


def cumulative_moments(params: BeamParams, w: GridFunction) -> Tuple[np.ndarray, np.ndarray]:
    """int_{-l}^{x_i} y w and int_{x_i}^{l} y w at every node, shape (N, 4) each."""
    rule = w.rule
    P, p = rule.panels, rule.panel_order
    values = w.values.reshape(P, p)
    y_nodes = y_vector(params, rule.nodes).reshape(P, p, 4)
    panel_moments = np.einsum("Pj,Pjc->Pc", values * rule.weights.reshape(P, p), y_nodes)

    # Moments of whole panels strictly to the left / right
    before = np.cumsum(panel_moments, axis=0) - panel_moments
    after = panel_moments.sum(axis=0)[None, :] - np.cumsum(panel_moments, axis=0)

    left_nodes, left_weights, left_interp, right_nodes, right_weights, right_interp = \
        _partial_panel_operators(p)
    centers = 0.5 * (rule.panel_edges[1:] + rule.panel_edges[:-1])
    half = 0.5 * (rule.panel_edges[1:] - rule.panel_edges[:-1])

    def partial(sub_nodes, sub_weights, interp):
        xi = centers[:, None, None] + half[:, None, None] * sub_nodes[None, :, :]
        w_sub = np.einsum("mqj,Pj->Pmq", interp, values)
        y_sub = y_vector(params, xi)
        return half[:, None, None] * np.einsum("mq,Pmq,Pmqc->Pmc", sub_weights, w_sub, y_sub)

    left = before[:, None, :] + partial(left_nodes, left_weights, left_interp)
    right = after[:, None, :] + partial(right_nodes, right_weights, right_interp)
    return left.reshape(-1, 4), right.reshape(-1, 4)


def _f_vectors(rep: GreensRep, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    # f(x_i) = -G- left_i + G+ right_i
    return -left @ rep.g_minus.T + right @ rep.g_plus.T


def kernel(bc: BoundaryCondition, params: BeamParams, x: float, xi: float,
           rep: Optional[GreensRep] = None) -> complex:
    """G_M(x, xi) = (a/4k) y(x)^T G+ y(xi) for x <= xi, -(a/4k) y(x)^T G- y(xi) otherwise.

    Raises:
        NotWellPosed: If bc is not well-posed.
        OutOfDomain: If x or xi lies outside [-l, l].
    """
    bound = params.l * (1.0 + 1e-12)
    if abs(x) > bound or abs(xi) > bound:
        raise OutOfDomain(f"({x}, {xi}) is outside [-{params.l}, {params.l}]")
    if rep is None:
        rep = greens_matrices(bc, params)
    y_x = y_vector(params, x)
    y_xi = y_vector(params, xi)
    scale = params.alpha / (4.0 * params.k)
    if x <= xi:
        return complex(scale * y_x @ rep.g_plus @ y_xi)
    return complex(-scale * y_x @ rep.g_minus @ y_xi)


def kernel_matrix(bc: BoundaryCondition, params: BeamParams, xs: ArrayLike, xis: ArrayLike,
                  rep: Optional[GreensRep] = None) -> NDArray[np.complex128]:
    """Kernel on the tensor grid xs x xis."""
    xs = np.asarray(xs, dtype=float)
    xis = np.asarray(xis, dtype=float)
    if rep is None:
        rep = greens_matrices(bc, params)
    Y = y_vector(params, xs)
    Yxi = y_vector(params, xis)
    scale = params.alpha / (4.0 * params.k)
    upper = Y @ rep.g_plus @ Yxi.T
    lower = -(Y @ rep.g_minus @ Yxi.T)
    return scale * np.where(xs[:, None] <= xis[None, :], upper, lower)


def closed_form_kernel(params: BeamParams, x: ArrayLike, xi: ArrayLike):
    """Infinite-beam kernel (a/2k) exp(-a|x-xi|/sqrt2) sin(a|x-xi|/sqrt2 + pi/4)."""
    r = params.alpha * np.abs(np.asarray(x) - np.asarray(xi)) / SQRT2
    return params.alpha / (2.0 * params.k) * np.exp(-r) * np.sin(r + np.pi / 4.0)


def apply_K(bc: BoundaryCondition, params: BeamParams, w: GridFunction,
            rep: Optional[GreensRep] = None) -> GridFunction:
    """K_M[w] at the nodes of w's rule, integral split at each node."""
    if rep is None:
        rep = greens_matrices(bc, params)
    left, right = cumulative_moments(params, w)
    f = _f_vectors(rep, left, right)
    y_nodes = y_vector(params, w.rule.nodes)
    values = params.alpha / (4.0 * params.k) * np.einsum("ic,ic->i", y_nodes, f)
    return GridFunction(values, w.rule)


def boundary_trace(bc: BoundaryCondition, params: BeamParams, w: GridFunction,
                   rep: Optional[GreensRep] = None) -> NDArray[np.complex128]:
    """B[K_M w] = (B-; B+) from the moment int y w, without differentiation.

    B- = (a/4k) W(-l) G+ m and B+ = -(a/4k) W(l) G- m.
    """
    if rep is None:
        rep = greens_matrices(bc, params)
    moment = y_vector(params, w.rule.nodes).T @ (w.values * w.rule.weights)
    scale = params.alpha / (4.0 * params.k)
    trace_minus = scale * wronskian_W(params, -params.l) @ rep.g_plus @ moment
    trace_plus = -scale * wronskian_W(params, params.l) @ rep.g_minus @ moment
    return np.concatenate([trace_minus, trace_plus])


def derivatives(bc: BoundaryCondition, params: BeamParams, w: GridFunction,
                rep: Optional[GreensRep] = None) -> NDArray[np.complex128]:
    """u, u', u'', u''', u'''' of u = K_M[w] at the nodes, shape (5, N).

    u^(n) = (a^(n+1)/4k) y^T Omega^n f for n <= 3; the fourth derivative adds
    (a^4/4k) y^T Omega^3 f' with f' = -Omega L^2 y w.
    """
    if rep is None:
        rep = greens_matrices(bc, params)
    c = build_constants()
    a, k = params.alpha, params.k
    left, right = cumulative_moments(params, w)
    f = _f_vectors(rep, left, right)
    y_nodes = y_vector(params, w.rule.nodes)
    f_prime = -(y_nodes @ c.OmegaL2.T) * w.values[:, None]

    result = np.empty((5, w.rule.size), dtype=complex)
    for n in range(5):
        result[n] = a ** (n + 1) / (4.0 * k) * np.einsum("ic,c,ic->i", y_nodes, c.omega ** n, f)
    result[4] += a ** 4 / (4.0 * k) * np.einsum("ic,c,ic->i", y_nodes, c.omega ** 3, f_prime)
    return result


def de_residual(bc: BoundaryCondition, params: BeamParams, w: GridFunction) -> float:
    """max |u'''' + a^4 u - (a^4/k) w| over the nodes for u = K_M[w]."""
    rep = greens_matrices(bc, params)
    u = apply_K(bc, params, w, rep).values
    u4 = derivatives(bc, params, w, rep)[4]
    a4 = params.alpha ** 4
    residual = u4 + a4 * u - a4 / params.k * w.values
    return float(np.max(np.abs(residual))) if residual.size else 0.0


def homogeneous_trace(params: BeamParams, c: ArrayLike) -> NDArray[np.complex128]:
    """B[y^T c] = (W(-l) c; W(l) c)."""
    c = np.asarray(c, dtype=complex)
    return np.concatenate([wronskian_W(params, -params.l) @ c, wronskian_W(params, params.l) @ c])


def solve_bvp(bc: BoundaryCondition, params: BeamParams, w: GridFunction,
              b: Optional[ArrayLike] = None) -> GridFunction:
    """Solve DE(w) with M B[u] = b.

    u = K_M[w] + y^T c where M~ c = b; b = None means homogeneous data.
    """
    rep = greens_matrices(bc, params)
    u = apply_K(bc, params, w, rep)
    if b is None:
        return u
    b = np.asarray(b, dtype=complex)
    if b.shape != (4,):
        raise ValueError(f"boundary data must have 4 entries, got {b.shape}")
    M_tilde = (bc.minus @ wronskian_W(params, -params.l)
               + bc.plus @ wronskian_W(params, params.l))
    c = linalg.solve(M_tilde, b)
    homogeneous = y_vector(params, w.rule.nodes) @ c
    return GridFunction(u.values + homogeneous, w.rule)
