import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from potevt.errors import InputError
from potevt.ingest import LossSeries, load_series, parse_series, write_series


def _write(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_bytes(text.encode("utf-8"))
    return p


def test_single_column(tmp_path):
    s = load_series(_write(tmp_path, "1.0\n2.5\n3.0"))
    assert s.values.tolist() == [1.0, 2.5, 3.0]
    assert s.n == 3


def test_negate(tmp_path):
    s = load_series(_write(tmp_path, "-0.02\n0.05"), sign="negate")
    assert s.values.tolist() == [0.02, -0.05]


def test_timestamp_value_with_header(tmp_path):
    s = load_series(_write(tmp_path, "a,b\n2020-01-01,1.5"), format="ts")
    assert s.values.tolist() == [1.5]
    assert s.timestamps == ("2020-01-01",)


def test_comments_crlf_bom_and_scientific():
    s = parse_series("﻿value\r\n# note\r\n1e-3\r\n-2.5E+2\r\n\r\n.5\r\n")
    assert s.values.tolist() == [1e-3, -250.0, 0.5]


@pytest.mark.parametrize("text, line", [
    ("1.0\n2.0\nnan\n", 3),
    ("1.0\nabc\n", 2),
    ("x\n1.0\n2,5\n", 3),
    ("1\n1_000\n", 2),
    ("1\n1e999\n", 2),
    ("1\ninf\n", 2),
])
def test_bad_row_names_line(text, line):
    with pytest.raises(InputError, match=f"line {line}"):
        parse_series(text)


def test_ts_wrong_field_count():
    with pytest.raises(InputError, match="line 2"):
        parse_series("t,v\n2020,1,2\n", format="ts")


def test_no_rows():
    with pytest.raises(InputError, match="no data"):
        parse_series("# only a comment\nheader\n")


def test_unreadable(tmp_path):
    with pytest.raises(InputError):
        load_series(tmp_path / "missing.csv")


def test_non_finite_series_rejected():
    with pytest.raises(InputError):
        LossSeries([1.0, np.inf])


def test_negate_is_involution():
    s = parse_series("1\n-2\n3.5\n")
    assert np.array_equal(s.negated().negated().values, s.values)
    twice = parse_series("1\n-2\n3.5\n", sign="negate").negated()
    assert np.array_equal(twice.values, s.values)


def test_values_read_only():
    s = parse_series("1\n2\n")
    with pytest.raises(ValueError):
        s.values[0] = 5.0


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=60, deadline=None)
@given(st.lists(finite, min_size=1, max_size=50))
def test_round_trip(tmp_path_factory, vals):
    path = tmp_path_factory.mktemp("rt") / "s.csv"
    write_series(LossSeries(vals), path)
    back = load_series(path)
    assert back.values.tolist() == [float(v) for v in vals]
