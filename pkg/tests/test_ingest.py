import math

import numpy as np
import pytest

from permplane.ingest import (
    Panel,
    PanelFormatError,
    TimeSeries,
    attach_attributes,
    clean_panel,
    clean_series,
    load_attributes,
    load_groups,
    load_panel,
    write_panel,
)


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadPanelWide:
    def test_basic_wide(self, tmp_path):
        path = write(tmp_path, "date,A,B\nd1,1.0,4.5\nd2,2.0,5.5\nd3,3.0,6.5\n")
        panel = load_panel(path)
        assert panel.names == ["A", "B"]
        assert panel.get("A").values.tolist() == [1.0, 2.0, 3.0]
        assert panel.get("B").values.tolist() == [4.5, 5.5, 6.5]
        assert panel.get("A").labels == ("d1", "d2", "d3")

    def test_missing_marker_positions(self, tmp_path):
        path = write(tmp_path, "date,A,B\nd1,1.0,4.5\nd2,2.0,NA\nd3,3.0,6.5\n")
        panel = load_panel(path)
        b = panel.get("B")
        assert b.n_missing == 1
        assert math.isnan(b.values[1])
        assert not b.is_clean
        assert panel.get("A").is_clean

    @pytest.mark.parametrize("token", ["", "NA", "na", "NaN", "nan", "Na"])
    def test_missing_tokens(self, tmp_path, token):
        path = write(tmp_path, f"date,A\nd1,1.0\nd2,{token}\n")
        assert load_panel(path).get("A").n_missing == 1

    def test_non_numeric_cell_is_parse_error(self, tmp_path):
        path = write(tmp_path, "date,A\nd1,1.0\nd2,oops\n")
        with pytest.raises(PanelFormatError, match="line 3"):
            load_panel(path)

    def test_infinite_cell_is_parse_error(self, tmp_path):
        path = write(tmp_path, "date,A\nd1,1.0\nd2,inf\n")
        with pytest.raises(PanelFormatError, match="non-finite"):
            load_panel(path)

    def test_duplicate_series_names(self, tmp_path):
        path = write(tmp_path, "date,A,A\nd1,1.0,2.0\n")
        with pytest.raises(PanelFormatError, match="duplicate"):
            load_panel(path)

    def test_zero_data_rows(self, tmp_path):
        path = write(tmp_path, "date,A,B\n")
        with pytest.raises(PanelFormatError, match="no data rows"):
            load_panel(path)

    def test_ragged_row(self, tmp_path):
        path = write(tmp_path, "date,A,B\nd1,1.0,2.0\nd2,3.0\n")
        with pytest.raises(PanelFormatError, match="expected 3 cells"):
            load_panel(path)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(PanelFormatError, match="cannot read"):
            load_panel(tmp_path / "absent.csv")

    def test_custom_delimiter(self, tmp_path):
        path = write(tmp_path, "date;A;B\nd1;1.0;2.0\nd2;3.0;4.0\n")
        panel = load_panel(path, delimiter=";")
        assert panel.get("B").values.tolist() == [2.0, 4.0]

    def test_deterministic(self, tmp_path):
        path = write(tmp_path, "date,A,B\nd1,0.1,0.2\nd2,0.3,0.4\n")
        p1, p2 = load_panel(path), load_panel(path)
        assert p1.names == p2.names
        for a, b in zip(p1.series, p2.series):
            assert np.array_equal(a.values, b.values)
            assert a.labels == b.labels


class TestLoadPanelLong:
    def test_basic_long(self, tmp_path):
        path = write(tmp_path, "series,date,value\nA,d1,1.0\nA,d2,2.0\nB,d1,5.0\n")
        panel = load_panel(path, layout="long")
        assert panel.names == ["A", "B"]
        assert panel.get("A").values.tolist() == [1.0, 2.0]
        assert panel.get("A").labels == ("d1", "d2")
        assert panel.get("B").values.tolist() == [5.0]

    def test_header_must_match(self, tmp_path):
        path = write(tmp_path, "name,when,val\nA,d1,1.0\n")
        with pytest.raises(PanelFormatError, match="series,date,value"):
            load_panel(path, layout="long")

    def test_missing_value_marker(self, tmp_path):
        path = write(tmp_path, "series,date,value\nA,d1,1.0\nA,d2,NaN\n")
        assert load_panel(path, layout="long").get("A").n_missing == 1

    def test_unknown_layout(self, tmp_path):
        path = write(tmp_path, "date,A\nd1,1.0\n")
        with pytest.raises(ValueError, match="layout"):
            load_panel(path, layout="diagonal")


class TestCleanSeries:
    def test_drop_removes_missing_and_labels(self):
        s = TimeSeries("x", np.array([1.0, np.nan, 3.0]), labels=("a", "b", "c"))
        out = clean_series(s, "drop")
        assert out.values.tolist() == [1.0, 3.0]
        assert out.labels == ("a", "c")

    def test_fail_policy_raises(self):
        s = TimeSeries("x", np.array([1.0, np.nan, 3.0]))
        with pytest.raises(ValueError, match="index 1"):
            clean_series(s, "fail")

    def test_clean_input_is_identity(self):
        s = TimeSeries("x", np.array([1.0, 2.0]))
        assert clean_series(s, "fail") is s
        assert clean_series(s, "drop") is s

    def test_all_missing_rejected(self):
        s = TimeSeries("x", np.array([np.nan, np.nan]))
        with pytest.raises(ValueError, match="empty"):
            clean_series(s, "drop")

    def test_unknown_policy(self):
        s = TimeSeries("x", np.array([1.0]))
        with pytest.raises(ValueError, match="policy"):
            clean_series(s, "interpolate")

    def test_length_accounting(self):
        rng = np.random.default_rng(5)
        values = rng.standard_normal(50)
        holes = rng.choice(50, size=9, replace=False)
        values[holes] = np.nan
        s = TimeSeries("x", values)
        assert len(clean_series(s, "drop")) == 50 - 9

    def test_clean_panel(self, tmp_path):
        path = write(tmp_path, "date,A,B\nd1,1.0,NA\nd2,2.0,5.0\n")
        panel = clean_panel(load_panel(path))
        assert panel.get("B").values.tolist() == [5.0]
        assert panel.get("A").values.tolist() == [1.0, 2.0]


class TestRoundTrip:
    def test_wide_round_trip_is_value_identical(self, tmp_path):
        rng = np.random.default_rng(31)
        series = tuple(
            TimeSeries(name, rng.standard_normal(17), labels=tuple(f"d{i}" for i in range(17)))
            for name in ("A", "B", "C")
        )
        panel = Panel(series=series)
        path = tmp_path / "out.csv"
        write_panel(panel, path)
        back = load_panel(path)
        assert back.names == panel.names
        for orig, re in zip(panel.series, back.series):
            assert np.array_equal(orig.values, re.values)
            assert orig.labels == re.labels

    def test_long_round_trip(self, tmp_path):
        series = (
            TimeSeries("A", np.array([0.1, 0.2, 0.30000000000000004])),
            TimeSeries("B", np.array([1e-17, 12345.6789])),
        )
        path = tmp_path / "out.csv"
        write_panel(Panel(series=series), path, layout="long")
        back = load_panel(path, layout="long")
        for orig, re in zip(series, back.series):
            assert np.array_equal(orig.values, re.values)

    def test_nan_round_trips_as_marker(self, tmp_path):
        series = (TimeSeries("A", np.array([1.0, np.nan, 3.0])),)
        path = tmp_path / "out.csv"
        write_panel(Panel(series=series), path)
        back = load_panel(path)
        assert back.get("A").n_missing == 1

    def test_wide_write_requires_aligned_series(self, tmp_path):
        panel = Panel(
            series=(TimeSeries("A", np.array([1.0])), TimeSeries("B", np.array([1.0, 2.0])))
        )
        with pytest.raises(ValueError, match="equal-length"):
            write_panel(panel, tmp_path / "x.csv")


class TestAttributesAndGroups:
    def test_load_attributes(self, tmp_path):
        path = write(tmp_path, "name,qr,ie\nA,1.5,0.2\nB,NA,0.4\n", name="attrs.csv")
        columns, table = load_attributes(path)
        assert columns == ("qr", "ie")
        assert table["A"] == {"qr": 1.5, "ie": 0.2}
        assert table["B"] == {"qr": None, "ie": 0.4}

    def test_attribute_errors(self, tmp_path):
        with pytest.raises(PanelFormatError, match="duplicate"):
            load_attributes(write(tmp_path, "name,a\nX,1\nX,2\n"))
        with pytest.raises(PanelFormatError, match="cannot parse"):
            load_attributes(write(tmp_path, "name,a\nX,oops\n"))
        with pytest.raises(PanelFormatError, match="name column"):
            load_attributes(write(tmp_path, "name\nX\n"))

    def test_attach_flags_orphans(self):
        panel = Panel(series=(TimeSeries("A", np.array([1.0])),))
        out = attach_attributes(panel, ["qr"], {"A": {"qr": 1.0}, "ghost": {"qr": 2.0}})
        assert out.attributes == {"A": {"qr": 1.0}}
        assert out.orphaned_attributes == ("ghost",)
        assert out.attribute_columns == ("qr",)

    def test_load_groups(self, tmp_path):
        path = write(tmp_path, "name,label\nA,investment\nB,speculative\n")
        assert load_groups(path) == {"A": "investment", "B": "speculative"}

    def test_group_errors(self, tmp_path):
        with pytest.raises(PanelFormatError, match="name,label"):
            load_groups(write(tmp_path, "name,label,extra\nA,x,y\n"))
        with pytest.raises(PanelFormatError, match="duplicate"):
            load_groups(write(tmp_path, "name,label\nA,x\nA,y\n"))
        with pytest.raises(PanelFormatError, match="blank"):
            load_groups(write(tmp_path, "name,label\nA,\n"))


class TestTimeSeriesInvariants:
    def test_requires_values(self):
        with pytest.raises(ValueError):
            TimeSeries("x", np.array([]))

    def test_label_length_must_match(self):
        with pytest.raises(ValueError, match="labels"):
            TimeSeries("x", np.array([1.0, 2.0]), labels=("only",))

    def test_values_read_only(self):
        s = TimeSeries("x", np.array([1.0, 2.0]))
        with pytest.raises(ValueError):
            s.values[0] = 9.0

    def test_panel_rejects_duplicate_names(self):
        with pytest.raises(PanelFormatError, match="duplicate"):
            Panel(series=(TimeSeries("A", np.array([1.0])), TimeSeries("A", np.array([2.0]))))
