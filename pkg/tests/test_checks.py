import pandas as pd
import pytest

import beam
from checks import COLUMNS, append_rows


class TestAppendRows:
    def test_status(self):
        df = append_rows(pd.DataFrame(columns=COLUMNS), [("a", 1e-12, 1e-10), ("b", 1e-3, 1e-10)])
        assert df["status"].tolist() == ["PASS", "FAIL"]

    def test_appends(self):
        df = append_rows(pd.DataFrame(columns=COLUMNS), [("a", 0.0, 1.0)])
        df = append_rows(df, [("b", 0.0, 1.0)])
        assert df["check"].tolist() == ["a", "b"]


@pytest.mark.parametrize("check", beam.load_checks(), ids=lambda check: check.__module__.split(".")[-1])
def test_check_passes(check, params):
    df = check(pd.DataFrame(columns=COLUMNS), params)
    assert len(df) > 0
    failed = df[df["status"] != "PASS"]
    assert failed.empty, failed.to_string(index=False)
