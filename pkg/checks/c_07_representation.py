"""
Gamma coordinates: Q at the origin, bijection, real branch.
"""
import numpy as np
import pandas as pd

from checks import append_rows
from utils.boundary_utils import named_bc, random_wellposed
from utils.matrix_utils import BeamParams, is_pibar, max_abs, random_pibar
from utils.representation_utils import gamma, gamma_definition_form, gamma_inverse, gamma_inverse_real


def check(df: pd.DataFrame, params: BeamParams) -> pd.DataFrame:
    rng = np.random.default_rng(11)
    forms, round_trip, real_round_trip, pibar = 0.0, 0.0, 0.0, 0.0
    for _ in range(20):
        bc = random_wellposed(rng, params)
        forms = max(forms, max_abs(gamma(bc, params) - gamma_definition_form(bc, params)))
        G = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        round_trip = max(round_trip, max_abs(gamma(gamma_inverse(G, params), params) - G))
        H = random_pibar(rng)
        real_bc = gamma_inverse_real(H, params)
        real_round_trip = max(real_round_trip, max_abs(gamma(real_bc, params) - H))
        real_image = gamma(random_wellposed(rng, params, real=True), params)
        pibar = max(pibar, 0.0 if is_pibar(real_image, 1e-9) else 1.0)
    rows = [
        ("gamma-of-Q-vanishes", max_abs(gamma(named_bc("Q", params), params)), 1e-10),
        ("gamma-direct-vs-definition", forms, 1e-10),
        ("gamma-inverse-round-trip", round_trip, 1e-9),
        ("gamma-inverse-real-round-trip", real_round_trip, 1e-9),
        ("real-condition-pibar-image", pibar, 0.0),
    ]
    return append_rows(df, rows)
