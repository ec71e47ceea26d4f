import csv
import json
import subprocess
import sys
from dataclasses import fields
from pathlib import Path

import pytest

from fmcensus import census
from fmcensus.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_text(out):
    return dict(line.split(": ", 1) for line in out.strip().splitlines())


# ---------------------------------------------------------------- queries


def test_partners_on_the_1728_curve(capsys):
    code, out, _ = run(capsys, "partners", "--p", "5", "--curve", "0,0,0,1,0", "--m", "5", "--verify-oracle")
    assert code == 0
    rec = parse_text(out)
    assert rec["fm_count"] == "1" and rec["oracle_count"] == "1"
    assert rec["h_members"] == "1, 2, 3, 4"


def test_aut_of_the_char_2_j0_curve(capsys):
    code, out, _ = run(capsys, "aut", "--p", "2", "--curve", "0,0,1,0,0", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert rec["order"] == 24 and rec["label"] == "Q ⋊ Z/3Z"
    assert rec["abelian"] is False and rec["checks"] == "ok"


def test_fibers_line_sum(capsys):
    code, out, _ = run(capsys, "fibers", "--e", "0", "--bundle", "line_sum", "--ord", "7")
    assert code == 0
    rec = parse_text(out)
    assert rec["fibers"] == "(7,7)" and rec["lambda"] == "7" and rec["row"] == "i-2"


def test_fibers_without_fibration(capsys):
    code, out, _ = run(capsys, "fibers", "--e", "0", "--bundle", "line_sum_infinite", "--format", "json")
    assert code == 0
    rec = json.loads(out)
    assert rec["fibers"] == "no elliptic fibrations" and "lambda" not in rec


def test_fibers_wild_rows(capsys):
    _, out, _ = run(capsys, "fibers", "--e", "-1", "--p", "2", "--ordinary")
    assert parse_text(out)["fibers"] == "(2, 0/2*)"
    _, out, _ = run(capsys, "fibers", "--e", "0", "--bundle", "indecomposable", "--p", "5")
    assert parse_text(out)["fibers"] == "(3/5*)"


def test_torsion_and_hgroup(capsys):
    code, out, _ = run(capsys, "torsion", "--p", "5", "--curve", "0,0,0,1,0", "--m", "2")
    assert code == 0
    rec = parse_text(out)
    assert rec["structure"] == "rank2" and rec["size"] == "4" and rec["basis"] == "(0, 0), (2, 0)"
    code, out, _ = run(capsys, "hgroup", "--p", "5", "--curve", "0,0,0,1,1", "--m", "5", "--format", "json")
    assert code == 0 and json.loads(out)["h_members"] == [1, 4]


# ---------------------------------------------------------------- exit codes


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["aut", "--p", "5"],
        ["aut", "--p", "5", "--curve", "1,2,3"],
        ["aut", "--p", "5", "--curve", "a,b,c,d,e"],
        ["frobnicate"],
        ["census", "--p", "5", "--m-min", "2", "--m-max", "99"],
        ["census", "--p", "6"],
        ["torsion", "--p", "5", "--curve", "0,0,0,1,0", "--m", "0"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse exits from inside parse_args
        code = exc.code
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["aut", "--p", "5", "--curve", "0,0,0,0,0"],
        ["aut", "--p", "9", "--curve", "0,0,0,1,0"],
        ["torsion", "--p", "7", "--curve", "0,0,0,0,1", "--m", "13"],
        ["partners", "--p", "5", "--curve", "0,0,0,0,1", "--m", "5"],
        ["partners", "--p", "5", "--curve", "0,0,0,0,1", "--m", "10"],
        ["fibers", "--e", "0", "--bundle", "line_sum"],
    ],
)
def test_domain_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("fmc:")


def test_io_error_exits_3(capsys, tmp_path):
    target = tmp_path / "missing" / "out.csv"
    code, _, err = run(capsys, "census", "--p", "5", "--m-min", "2", "--m-max", "2", "--out", str(target))
    assert code == 3 and "cannot write" in err


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "fmcensus.cli", "fibers", "--e", "-1", "--p", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "fibers: (2,2,2)" in proc.stdout


# ---------------------------------------------------------------- census


def test_census_golden(capsys):
    code, out, err = run(capsys, "census", "--p", "5,7", "--m-min", "2", "--m-max", "6", "--verify-oracle")
    assert code == 0
    assert out == (GOLDEN / "census_p5_p7_m2_6.csv").read_text(encoding="utf-8")
    assert "oracle_mismatches=0" in err


def test_census_rows_for_p5_m5(capsys):
    _, out, _ = run(capsys, "census", "--p", "5", "--m-min", "5", "--m-max", "5", "--verify-oracle")
    lines = out.splitlines()
    assert lines[0] == f"# {census.CSV_VERSION}"
    rows = list(csv.DictReader(lines[1:]))
    by_j = {r["j"]: r for r in rows}
    assert by_j["3"]["fm_count"] == "1" and by_j["3"]["supersingular"] == "false"
    assert by_j["2"]["fm_count"] == "2" and by_j["2"]["representatives"] == "1;2"
    assert by_j["0"]["status"] == "unsupported"


def test_census_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(capsys, "census", "--p", "2,3,5", "--m-min", "2", "--m-max", "8", "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_census_json_has_exactly_the_row_fields(capsys):
    _, out, _ = run(capsys, "census", "--p", "2", "--curve", "0,0,1,0,0", "--m-min", "3", "--m-max", "3", "--format", "json")
    rows = json.loads(out)
    assert len(rows) == 1
    assert list(rows[0]) == [f.name for f in fields(census.CensusRow)]
    assert rows[0]["aut_order"] == 24


def test_empty_m_range(capsys):
    code, out, err = run(capsys, "census", "--p", "5", "--m-min", "6", "--m-max", "5")
    assert code == 0
    assert out.splitlines()[1:] == [",".join(census.CSV_COLUMNS)]
    assert "rows=0" in err
    assert census.run_census(census.CensusConfig(primes=[5], m_min=6, m_max=5)) == []


def test_all_models_source():
    rows = census.run_census(census.CensusConfig(primes=[2], curve_source="all_smooth_models", m_min=3, m_max=3))
    assert len(rows) == len(census.all_smooth_models(2))
    assert {r.aut_order for r in rows} <= {2, 24}


def test_canonical_curves():
    invariants = {p: [E.a_invariants for E in census.canonical_curves(p)] for p in (2, 3, 5, 7)}
    assert invariants[2] == [(0, 0, 1, 0, 0), (1, 0, 0, 0, 1)]
    assert invariants[3] == [(0, 0, 0, 2, 0)]
    assert invariants[5] == [(0, 0, 0, 0, 1), (0, 0, 0, 1, 0), (0, 0, 0, 1, 1)]
    assert invariants[7] == [(0, 0, 0, 0, 1), (0, 0, 0, 1, 0), (0, 0, 0, 1, 1)]


def test_config_validation():
    with pytest.raises(ValueError):
        census.CensusConfig(primes=[101]).validate()
    with pytest.raises(ValueError):
        census.CensusConfig(primes=[5], curve_source="explicit").validate()
    with pytest.raises(ValueError):
        census.CensusConfig(primes=[5], output_format="xml").validate()
