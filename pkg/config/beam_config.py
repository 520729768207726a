"""
Solver configuration settings.

This file contains the physical defaults and every numeric tolerance used
across the library. Physical defaults can be overridden from the environment
(or a .env file) with BEAM_L, BEAM_ALPHA and BEAM_K.
"""

import os
from dotenv import load_dotenv

load_dotenv()

# Base tolerance for exact algebraic identities (max-norm)
DEFAULT_TOLERANCE = 1e-10

# Physical parameters: half-length l, stiffness ratio alpha, spring density k
DEFAULT_PARAMS = {
    "l": float(os.getenv("BEAM_L", "1.0")),
    "alpha": float(os.getenv("BEAM_ALPHA", "1.0")),
    "k": float(os.getenv("BEAM_K", "1.0")),
}

DEFAULT_LOG_LEVEL = os.getenv("BEAM_LOG_LEVEL", "WARNING")

# Per-task solver configurations
SOLVER_CONFIGS = {
    # Structured-constant and Wronskian identities
    "identity": {
        "tol": DEFAULT_TOLERANCE,
    },

    # Relative determinant threshold |det M~| > tol * ||M~||^4
    "wellposed": {
        "tol": 1e-10,
    },

    # Boundary-condition equivalence through G+ blocks
    "equivalence": {
        "tol": 1e-9,
    },

    # pi-bar membership
    "pibar": {
        "tol": 1e-10,
    },

    # Composite Gauss-Legendre rule for K_M
    "quadrature": {
        "nodes": 200,
        "panel_order": 5,
    },

    # lambda counts as 1/k when |lambda k - 1| <= tol
    "degenerate": {
        "tol": 1e-12,
        "chi_tol": 1e-14,
    },

    # Real-line eigenvalue scan
    "scan": {
        "points_per_decade": 2000,
        "linear_points": 2000,
        "xtol": 1e-15,
        "rtol": 1e-13,
        "residual_tol": 1e-8,
        "multiplicity_tol": 1e-8,
        "singular_tol": 1e-13,
        "touch_tol": 1e-6,
    },

    # Enumeration of Spec K_Q
    "spec_q": {
        "max_count": 8,
        "upper_margin": 1e-6,
        "extensions": 3,
    },

    # Nystrom oracle
    "nystrom": {
        "nodes": 400,
        "top": 10,
        "min_modulus": 0.01,
    },

    # Prescribed-eigenvalue construction
    "existence": {
        "r_threshold": 1e-8,
        "spec_q_guard": 1e-8,
        "zero_image": 1e-12,
        "pibar_tol": 1e-8,
    },

    # Real representative of Gamma inverse
    "representation": {
        "real_truncation": 1e-10,
    },

    # Complex eigenvalue search
    "complex_scan": {
        "grid": 40,
        "maxiter": 50,
        "tol": 1e-12,
        "accept": 1e-7,
    },
}


def get_solver_config(config_name: str) -> dict:
    """
    Get the solver configuration for a specific task.

    Args:
        config_name (str): Name of the configuration to retrieve

    Returns:
        dict: A copy of the configuration dictionary
    """
    return dict(SOLVER_CONFIGS.get(config_name, {
        "tol": DEFAULT_TOLERANCE,
    }))
