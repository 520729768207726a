"""
Symmetries of X(z, kappa) and X_lambda(x).
"""
import numpy as np
import pandas as pd

from checks import append_rows, identity_rows
from utils.matrix_utils import BeamParams, build_constants, chi, max_abs, wronskian_W_inv
from utils.spectral_utils import X_matrix, eigen_basis, x_closed, x_direct


def _relative(A, B):
    return max_abs(A - B) / max(1.0, max_abs(B))


def check(df: pd.DataFrame, params: BeamParams) -> pd.DataFrame:
    c = build_constants()
    rng = np.random.default_rng(5)
    rotation, conjugation, pibar, coupled, difference, forms = 0.0, 0.0, 0.0, 0.0, 0.0, 0.0
    for _ in range(10):
        z = rng.uniform(-2, 2)
        kappa = complex(*rng.uniform(0.1, 1.5, 2))
        X = x_closed(z, kappa)
        rotation = max(rotation, _relative(x_closed(z, 1j * kappa), X @ c.L_inv))
        conjugation = max(conjugation, _relative(c.R4 @ X.conj() @ c.R4, x_closed(z, np.conj(kappa))))

        x = rng.uniform(0.1, params.l)
        outside = rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 2.0) / params.k
        if outside > 0:
            outside += 1.0 / params.k
        Xo = X_matrix(outside, x, params)
        pibar = max(pibar, _relative(c.R4 @ Xo.conj() @ c.R4, Xo))
        inside = rng.uniform(0.05, 0.95) / params.k
        Xi = X_matrix(inside, x, params)
        coupled = max(coupled, _relative(c.R4 @ Xi.conj() @ c.R4, Xi @ c.Lmat))

        lam = complex(*rng.uniform(-2, 2, 2))
        basis = eigen_basis(lam, params)
        lhs = X_matrix(lam, x, params) - X_matrix(lam, -x, params)
        rhs = c.Eps @ (wronskian_W_inv(params, x) @ basis.W(x) - wronskian_W_inv(params, -x) @ basis.W(-x))
        difference = max(difference, _relative(lhs, rhs))
        forms = max(forms, _relative(x_direct(lam, x, params), X_matrix(lam, x, params)))
    pairs = [
        ("X-quarter-turn-in-kappa", rotation),
        ("X-conjugation-in-kappa", conjugation),
        ("X-pibar-off-band", pibar),
        ("X-conjugation-in-band", coupled),
        ("X-odd-part", difference),
        ("X-closed-vs-direct", forms),
    ]
    return append_rows(df, identity_rows(pairs))
