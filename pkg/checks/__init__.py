# Numbered invariant checks run in order by `beam.py verify`
import pandas as pd

from config.beam_config import DEFAULT_TOLERANCE

COLUMNS = ["check", "status", "max_error", "tolerance"]


def append_rows(df: pd.DataFrame, rows) -> pd.DataFrame:
    """
    Append check results to the report.

    Args:
        df (pd.DataFrame): The report built so far
        rows (list): (name, max_error, tolerance) tuples

    Returns:
        pd.DataFrame: Report with one PASS/FAIL row per tuple
    """
    new_rows = pd.DataFrame([
        {
            "check": name,
            "status": "PASS" if error <= tolerance else "FAIL",
            "max_error": float(error),
            "tolerance": float(tolerance),
        }
        for name, error, tolerance in rows
    ], columns=COLUMNS)
    if df.empty:
        return new_rows
    return pd.concat([df, new_rows], ignore_index=True)


def identity_rows(pairs, tolerance: float = DEFAULT_TOLERANCE):
    """(name, error) pairs checked against the identity tolerance."""
    return [(name, error, tolerance) for name, error in pairs]
