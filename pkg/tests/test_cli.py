"""Tests for the command-line interface and its file formats."""

from __future__ import annotations

import json

import numpy as np
import pytest

from tgre.codes import build_xztgre, build_ztgre, validate_code
from tgre.cli import (
    CSV_HEADER,
    UsageError,
    _p_values,
    load_code,
    main,
    parse_code,
    read_alist,
    resolve_code,
    serialize_code,
    surface_comparator,
    write_alist,
)
from tgre.gf2 import BitMatrix, rank


# ---------------------------------------------------------------------------
# CodeFile round trip
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "code",
    [build_ztgre(2), build_ztgre(4), build_xztgre(2, 1), build_xztgre(5, 1), build_xztgre(6, 2)],
    ids=lambda c: f"{c.family}-{c.L}-{c.a}",
)
def test_codefile_round_trip(code):
    assert parse_code(serialize_code(code)) == code


def test_codefile_survives_json_text(tmp_path):
    code = build_xztgre(3, 1)
    path = tmp_path / "c.json"
    path.write_text(json.dumps(serialize_code(code)))
    assert load_code(str(path)) == code


def test_codefile_metadata():
    data = serialize_code(build_xztgre(6, 2))
    assert data["metadata"]["rate"] == "1/9"
    assert data["metadata"]["generator_weight"] == 12
    assert data["qubit_labels"] == sorted(data["qubit_labels"])


def test_parse_code_rejects_bad_inputs():
    good = serialize_code(build_xztgre(2, 1))
    with pytest.raises(UsageError):
        parse_code({**good, "format_version": 99})
    with pytest.raises(UsageError):
        parse_code({**good, "family": "toric"})
    with pytest.raises(UsageError):
        parse_code({**good, "k": 7})
    truncated = dict(good)
    del truncated["stabilizers"]
    with pytest.raises(UsageError):
        parse_code(truncated)


def test_resolve_code_specs():
    assert resolve_code("z:3") == build_ztgre(3)
    assert resolve_code("xz:4:1") == build_xztgre(4, 1)
    with pytest.raises(UsageError):
        resolve_code("xz:4")
    with pytest.raises(UsageError):
        resolve_code("/nonexistent/file.json")


# ---------------------------------------------------------------------------
# alist round trip
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("code", [build_ztgre(3), build_xztgre(4, 1)], ids=["z3", "xz41"])
def test_alist_round_trip_preserves_matrix(tmp_path, code):
    dense = code.z_check_matrix.to_dense()
    path = tmp_path / "m.alist"
    write_alist(dense, str(path))
    back = read_alist(str(path))
    assert np.array_equal(back, dense)
    # identical rank and syndrome maps
    assert rank(BitMatrix.from_dense(back)) == rank(code.z_check_matrix)
    probe = np.zeros(code.n, np.uint8)
    probe[[0, 3, 5]] = 1
    assert np.array_equal(
        BitMatrix.from_dense(back).mul_vector(probe), code.z_check_matrix.mul_vector(probe)
    )


def test_alist_handles_empty_check_side(tmp_path):
    dense = build_ztgre(3).x_check_matrix.to_dense()  # zero rows
    path = tmp_path / "empty.alist"
    write_alist(dense, str(path))
    back = read_alist(str(path))
    assert back.shape == (0, 8)


def test_read_alist_ignores_zero_padding(tmp_path):
    path = tmp_path / "padded.alist"
    path.write_text("2 1\n1 2\n1 1\n2\n1 0\n1 0\n1 2\n")
    assert np.array_equal(read_alist(str(path)), np.array([[1, 1]], dtype=np.uint8))


# ---------------------------------------------------------------------------
# p-grid parsing
# ---------------------------------------------------------------------------


def test_p_values_range_is_inclusive():
    values = _p_values("0.04:0.11:0.005")
    assert len(values) == 15
    assert values[0] == 0.04
    assert values[-1] == 0.11


def test_p_values_comma_list_and_errors():
    assert _p_values("0.01,0.02") == [0.01, 0.02]
    assert _p_values("0.05") == [0.05]
    with pytest.raises(UsageError):
        _p_values("0.1:0.2")
    with pytest.raises(UsageError):
        _p_values("0.2:0.1:0.05")
    with pytest.raises(UsageError):
        _p_values("1.5")
    with pytest.raises(UsageError):
        _p_values("")


# ---------------------------------------------------------------------------
# commands (through main, checking exit codes and files)
# ---------------------------------------------------------------------------


def test_build_json_stdout(capsys):
    assert main(["build", "--family", "xz", "--L", "3", "--a", "1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["n"] == 20
    assert len(data["stabilizers"]) == 16


def test_build_writes_file_and_validate_passes(tmp_path, capsys):
    out = tmp_path / "c41.json"
    assert main(["build", "--family", "xz", "--L", "4", "--a", "1", "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["validate", str(out)]) == 0
    report = capsys.readouterr().out
    assert report.count("PASS") == 6
    assert "FAIL" not in report


def test_build_alist_files(tmp_path, capsys):
    stem = tmp_path / "code"
    assert (
        main(
            ["build", "--family", "xz", "--L", "3", "--a", "1",
             "--format", "alist", "--out", str(stem)]
        )
        == 0
    )
    code = build_xztgre(3, 1)
    z = read_alist(str(stem) + "_z.alist")
    x = read_alist(str(stem) + "_x.alist")
    assert np.array_equal(z, code.z_check_matrix.to_dense())
    assert np.array_equal(x, code.x_check_matrix.to_dense())


def test_build_usage_errors(tmp_path):
    assert main(["build", "--family", "xz", "--L", "2", "--a", "2"]) == 2
    assert main(["build", "--family", "z", "--L", "3", "--a", "1"]) == 2
    assert main(["build", "--family", "xz", "--L", "3"]) == 2
    assert main(["build", "--family", "z", "--L", "3", "--format", "alist"]) == 2


def test_validate_flags_printed_table_defect(tmp_path, capsys):
    # swap S'_2's odd part to the misprinted {3,5,7,11} and expect a failure
    code = build_xztgre(3, 1)
    data = serialize_code(code)
    odd = [u for u in data["stabilizers"][9]["x"] if u % 2 == 1]
    assert odd == [3, 5, 7, 15]
    data["stabilizers"][9]["x"] = sorted(
        {3, 5, 7, 11} | {u for u in data["stabilizers"][9]["x"] if u % 2 == 0}
    )
    path = tmp_path / "printed.json"
    path.write_text(json.dumps(data))
    assert main(["validate", str(path)]) == 1
    report = capsys.readouterr().out
    assert "FAIL stabilizers commute" in report
    assert "anticommuting stabilizer pair: index 2 vs 9" in report


def test_validate_parse_error_exit_code(tmp_path):
    path = tmp_path / "trunc.json"
    path.write_text('{"format_version": 1, "family": "xz"')
    assert main(["validate", str(path)]) == 2


def test_logicals_listing(capsys):
    assert main(["logicals", "xz:2:1"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "family=xz L=2 a=1 n=10 k=2"
    assert "S_1: Z 1 2 3 4 5" in out
    assert "S'_1: X 1 2 3 4 7" in out
    assert "Xbar_1: X 2 4" in out
    assert "Zbar_1: Z 1 2 5 9 13" in out
    assert len([line for line in out if line.startswith("S")]) == 8


def test_distance_exact_output(capsys):
    assert main(["distance", "xz:3:1", "--mode", "exact"]) == 0
    out = capsys.readouterr().out
    assert "wt_min_x 2" in out
    assert "wt_min_z 2" in out
    assert "wt_min_y 3" in out
    assert "d 2" in out
    assert "certificate x:" in out


def test_distance_estimate_requires_seed(capsys):
    assert main(["distance", "xz:3:1", "--mode", "estimate"]) == 2


def test_distance_estimate_with_json(tmp_path, capsys):
    out = tmp_path / "d.json"
    assert (
        main(
            ["distance", "xz:3:1", "--mode", "estimate", "--trials", "300",
             "--seed", "5", "--json", str(out)]
        )
        == 0
    )
    data = json.loads(out.read_text())
    assert data["mode"] == "estimated"
    assert data["d"] == 2
    assert set(data["certificates"]) == {"x", "z", "y"}


def test_distance_budget_exit_code(capsys):
    assert main(["distance", "xz:5:1", "--mode", "exact", "--max-weight", "40"]) == 3


def test_simulate_csv_contract(tmp_path, capsys):
    out = tmp_path / "run.csv"
    args = [
        "simulate", "--code", "xz:2:1,xz:3:1", "--p", "0.0,0.05", "--trials", "150",
        "--seed", "3", "--out", str(out),
    ]
    assert main(args) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    rows = [line.split(",") for line in lines[1:] if not line.startswith("#")]
    assert len(rows) == 4
    # p=0 rows report zero failure rates
    assert rows[0][5] == "0.0" and rows[0][8] == "0.0"
    assert rows[0][0] == "xz" and rows[0][3] == "10"
    assert lines[-1].startswith("# threshold ")
    slq = (tmp_path / "run.slq.csv").read_text().splitlines()
    assert slq[0].endswith("ler_slq_1,ler_slq_2,ler_slq_3,ler_slq_4")
    # the k=2 code pads the trailing columns
    assert slq[1].endswith(",,")


def test_simulate_single_code_has_no_threshold_line(tmp_path):
    out = tmp_path / "one.csv"
    assert (
        main(["simulate", "--code", "xz:2:1", "--p", "0.02,0.04", "--trials", "100",
              "--seed", "1", "--out", str(out)])
        == 0
    )
    assert not any(line.startswith("#") for line in out.read_text().splitlines())


def test_simulate_byte_identical_across_workers(tmp_path):
    argv = ["simulate", "--code", "xz:2:1,xz:3:1", "--p", "0.03,0.06", "--trials", "300",
            "--seed", "11"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(a), "--workers", "1"]) == 0
    assert main(argv + ["--out", str(b), "--workers", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.slq.csv").read_bytes() == (tmp_path / "b.slq.csv").read_bytes()


def test_simulate_duplicate_codes_rejected(tmp_path):
    assert (
        main(["simulate", "--code", "xz:2:1,xz:2:1", "--p", "0.05", "--trials", "10",
              "--seed", "1", "--out", str(tmp_path / "x.csv")])
        == 2
    )


def test_surface_comparator_values():
    assert surface_comparator(85) == (7, 85, pytest.approx(1 / 85))
    assert surface_comparator(80)[0] == 6
    assert surface_comparator(10) == (2, 5, pytest.approx(1 / 5))


def test_rate_table(capsys):
    assert main(["rate", "--max-L", "9"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == [
        "L", "a", "N", "k", "rate", "surface_d", "surface_N", "surface_rate", "t",
    ]
    rows = {int(line.split()[0]): line.split() for line in lines[1:]}
    for L in range(2, 6):
        assert rows[L][4] == "1/5"
    for L in range(6, 10):
        assert rows[L][4] == "1/9"
    assert rows[5][2] == "80"
    # t strictly increasing from L=3
    from fractions import Fraction

    ts = [Fraction(rows[L][8]) for L in range(3, 10)]
    assert all(b > a for a, b in zip(ts, ts[1:]))


def test_rate_without_comparison(capsys):
    assert main(["rate", "--max-L", "3", "--compare", "none"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["L", "a", "N", "k", "rate"]
    assert main(["rate", "--max-L", "1"]) == 2
