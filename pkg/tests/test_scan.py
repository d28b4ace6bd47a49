from fractions import Fraction

import pytest

import betashift.scan as scan
from betashift.cli import main
from betashift.config import Settings
from betashift.errors import DomainError, NoProgress
from betashift.scan import CSV_COLUMNS, grid_cells, read_scan_csv, run_scan, write_scan_csv, write_scan_svg
from models.shift_models import ScanRecord, ShiftStatus


def _records():
    return [
        ScanRecord(
            beta="1.25",
            alpha="0.375",
            status=ShiftStatus.FINITE_TYPE,
            n_used=9,
            period_lower=9,
            period_upper=11,
            b="1.2504",
            a="0.3749",
            entropy="0.2234",
            err_beta="0.0004",
            err_alpha="0.0001",
        ),
        ScanRecord(beta="1.75", alpha="0.125", status=ShiftStatus.UNDETERMINED),
    ]


def test_grid_cells_are_exact_centers():
    cells = grid_cells("1", "2", 2, 2)
    assert [c[0] for c in cells] == [0, 1, 2, 3]
    assert cells[0][1:] == (Fraction(5, 4), Fraction(3, 16))
    assert cells[3][1:] == (Fraction(7, 4), Fraction(3, 16))
    for _, beta, alpha in cells:
        assert 1 < beta < 2 and 0 < alpha < 2 - beta


def test_grid_rejects_ranges_outside_the_parameter_space():
    with pytest.raises(DomainError):
        grid_cells("0.5", "2", 3, 3)
    with pytest.raises(DomainError):
        grid_cells("1.5", "1.5", 3, 3)
    assert grid_cells("1", "2", 0, 5) == []


def test_empty_grid_writes_only_the_header(tmp_path):
    path = tmp_path / "empty.csv"
    write_scan_csv(run_scan([], "1/100", Settings()), str(path))
    assert path.read_text() == ",".join(CSV_COLUMNS) + "\n"


def test_csv_round_trip(tmp_path):
    path = tmp_path / "scan.csv"
    records = _records()
    write_scan_csv(records, str(path))
    lines = path.read_text().splitlines()
    assert lines[2] == "1.75,0.125,undetermined,,,,,,,,"
    assert read_scan_csv(str(path)) == records


def test_foreign_csv_is_rejected(tmp_path):
    path = tmp_path / "other.csv"
    path.write_text("x,y\n1,2\n")
    with pytest.raises(DomainError):
        read_scan_csv(str(path))


def test_failed_cells_are_recorded_in_grid_order(monkeypatch):
    def fail(params, epsilon, settings):
        raise NoProgress("no cut found")

    monkeypatch.setattr(scan, "approximate_sft", fail)
    cells = grid_cells("1", "2", 3, 2)
    records = run_scan(cells, "1/100", Settings())
    assert len(records) == 6
    assert all(r.status is ShiftStatus.UNDETERMINED for r in records)
    assert [r.beta for r in records][::2] == ["1.1666666666666666667", "1.5", "1.8333333333333333333"]


def test_svg_is_deterministic(tmp_path):
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    write_scan_svg(_records(), str(first))
    write_scan_svg(_records(), str(second))
    assert first.read_bytes() == second.read_bytes()
    assert b"<svg" in first.read_bytes()


def test_repeated_scans_write_identical_csv(tmp_path, monkeypatch):
    for name in ("BITS", "PRECISION_CAP", "MAX_LEN", "MAX_CUT", "WORKERS", "LOG_LEVEL"):
        monkeypatch.delenv("BETASHIFT_" + name, raising=False)
    outputs = []
    for run in ("first", "second"):
        path = tmp_path / f"{run}.csv"
        argv = ["scan", "--beta-steps", "2", "--alpha-steps", "2", "--epsilon", "1/100", "--bits", "192"]
        assert main([*argv, "--csv", str(path)]) == 0
        outputs.append(path.read_bytes())
    assert outputs[0] == outputs[1]
    assert len(read_scan_csv(str(tmp_path / "first.csv"))) == 4
