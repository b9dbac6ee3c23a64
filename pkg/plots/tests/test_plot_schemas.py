"""Artifact readers: fixture round trips, and errors naming the missing piece."""

import json
from pathlib import Path

import numpy as np
import pytest

from bo4plot.schemas import (
    SchemaError,
    read_manifest,
    read_report,
    read_trajectory,
    read_xy_csv,
    require_columns,
)

FIXTURES = Path(__file__).parent / "fixtures"


class TestReadTrajectory:
    def test_fixture_round_trip(self):
        cols = read_trajectory(FIXTURES / "trajectory.csv")
        assert sorted(cols) == ["E_l2", "E_s", "hs_4", "l2", "mass", "t"]
        assert all(len(v) == 6 for v in cols.values())
        assert cols["t"][0] == 0.0 and cols["t"][-1] == 0.05

    def test_cells_parse_to_exact_floats(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("t,l2\n0,0.12990822920449061\n")
        assert read_trajectory(p)["l2"][0] == 0.12990822920449061

    def test_missing_file(self, tmp_path):
        with pytest.raises(SchemaError, match="no such file"):
            read_trajectory(tmp_path / "gone.csv")

    def test_empty_file(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("")
        with pytest.raises(SchemaError, match="header"):
            read_trajectory(p)

    def test_missing_t_column(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("a,b\n1,2\n")
        with pytest.raises(SchemaError, match="'t'"):
            read_trajectory(p)

    def test_ragged_row_counted_from_one(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("t,a\n1,2\n3\n")
        with pytest.raises(SchemaError, match="row 3"):
            read_trajectory(p)

    def test_non_numeric_cell_names_column(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("t,a\n1,spam\n")
        with pytest.raises(SchemaError, match="'a'"):
            read_trajectory(p)


def test_require_columns_names_first_missing():
    with pytest.raises(SchemaError, match="'E_s'"):
        require_columns({"t": np.zeros(1)}, ("E_s", "E_l2"), "x.csv")


class TestReadManifest:
    def test_fixture_round_trip(self):
        manifest, snaps = read_manifest(FIXTURES / "manifest.json")
        assert snaps.shape == (6, 64)
        assert snaps.dtype == np.float64
        assert manifest["times"] == [0.0, 0.01, 0.02, 0.03, 0.04, 0.05]
        raw = (FIXTURES / "snapshots.bin").read_bytes()
        assert np.array_equal(snaps, np.frombuffer(raw, "<f8").reshape(6, 64))

    def _write_variant(self, tmp_path, mutate):
        manifest = json.loads((FIXTURES / "manifest.json").read_text())
        mutate(manifest)
        (tmp_path / "manifest.json").write_text(json.dumps(manifest))
        (tmp_path / "snapshots.bin").write_bytes(
            (FIXTURES / "snapshots.bin").read_bytes()
        )
        return tmp_path / "manifest.json"

    def test_missing_key(self, tmp_path):
        p = self._write_variant(tmp_path, lambda m: m.pop("times"))
        with pytest.raises(SchemaError, match="'times'"):
            read_manifest(p)

    def test_unsupported_layout(self, tmp_path):
        p = self._write_variant(tmp_path, lambda m: m.update(layout="columns"))
        with pytest.raises(SchemaError, match="unsupported"):
            read_manifest(p)

    def test_times_length_mismatch(self, tmp_path):
        p = self._write_variant(tmp_path, lambda m: m["times"].append(9.9))
        with pytest.raises(SchemaError, match="7 times for 6 snapshots"):
            read_manifest(p)

    def test_byte_count_mismatch(self, tmp_path):
        p = self._write_variant(tmp_path, lambda m: None)
        (tmp_path / "snapshots.bin").write_bytes(b"\x00" * 100)
        with pytest.raises(SchemaError, match="100 bytes"):
            read_manifest(p)

    def test_missing_binary(self, tmp_path):
        p = self._write_variant(tmp_path, lambda m: None)
        (tmp_path / "snapshots.bin").unlink()
        with pytest.raises(SchemaError, match="snapshots.bin"):
            read_manifest(p)

    def test_invalid_json(self, tmp_path):
        p = tmp_path / "manifest.json"
        p.write_text("{nope")
        with pytest.raises(SchemaError, match="not valid JSON"):
            read_manifest(p)

    def test_non_object_top_level(self, tmp_path):
        p = tmp_path / "manifest.json"
        p.write_text("[1, 2]")
        with pytest.raises(SchemaError, match="JSON object"):
            read_manifest(p)

    def test_empty_run(self, tmp_path):
        def clear(m):
            m.update(grid_n=0, snapshot_count=0, times=[])

        p = self._write_variant(tmp_path, clear)
        (tmp_path / "snapshots.bin").write_bytes(b"")
        manifest, snaps = read_manifest(p)
        assert snaps.shape == (0, 0)


class TestReadReport:
    def test_fixture_round_trip(self):
        payload = read_report(FIXTURES / "loss_report.json")
        assert payload["all_passed"] is True
        assert payload["reports"][0]["name"] == "experiment:derivative-loss"

    def test_missing_reports_key(self, tmp_path):
        p = tmp_path / "r.json"
        p.write_text('{"all_passed": true}')
        with pytest.raises(SchemaError, match="'reports'"):
            read_report(p)

    def test_reports_not_a_list(self, tmp_path):
        p = tmp_path / "r.json"
        p.write_text('{"reports": 3}')
        with pytest.raises(SchemaError, match="list"):
            read_report(p)

    def test_invalid_json(self, tmp_path):
        p = tmp_path / "r.json"
        p.write_text("][")
        with pytest.raises(SchemaError, match="not valid JSON"):
            read_report(p)


class TestReadXY:
    def test_powerlaw_fixture(self):
        x, y, names = read_xy_csv(FIXTURES / "powerlaw.csv")
        assert names == ["x", "y"]
        assert len(x) == 25
        # written as %.17g of x**0.5, so the parse is exact
        assert np.array_equal(y, x**0.5)

    def test_extra_columns_ignored(self, tmp_path):
        p = tmp_path / "x.csv"
        p.write_text("a,b,c\n1,2,9\n3,4,9\n")
        x, y, names = read_xy_csv(p)
        assert names == ["a", "b"]
        assert list(x) == [1.0, 3.0] and list(y) == [2.0, 4.0]

    def test_single_column_rejected(self, tmp_path):
        p = tmp_path / "x.csv"
        p.write_text("a\n1\n")
        with pytest.raises(SchemaError, match="two columns"):
            read_xy_csv(p)

    def test_non_numeric_names_column(self, tmp_path):
        p = tmp_path / "x.csv"
        p.write_text("a,b\n1,spam\n")
        with pytest.raises(SchemaError, match="'b'"):
            read_xy_csv(p)
