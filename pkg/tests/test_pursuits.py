import io
import json
import math
import numpy as np
import pandas as pd
from pursuits import cli
from pursuits import pursue
from pursuits import simulate
from pursuits import tail_table
from pursuits import tube_volume
from pursuits import verify
from pursuits.pursuit_utils import EXIT_DEGENERATE
from pursuits.pursuit_utils import EXIT_INPUT_ERROR
from pursuits.pursuit_utils import EXIT_OK
from pursuits.pursuit_utils import InputDataError
from pursuits.pursuit_utils import SEED_ENV_NAME
from pursuits.pursuit_utils import parse_float_list
from pursuits.pursuit_utils import parse_range
from pursuits.pursuit_utils import read_data_csv
from pursuits.pursuit_utils import resolve_seed
from pursuits.verify_battery import CheckRecord
from pursuits.verify_battery import VerifyBattery
from pursuits.verify_battery import VerifyReport
import pytest

def write_planted_csv(path, n: int = 300, seed: int = 0, header: bool = False):
    prng = np.random.default_rng(seed)
    data = prng.standard_normal((n, 2))
    data[:, 0] = data[:, 0] ** 3
    pd.DataFrame(data, columns=["x1", "x2"]).to_csv(path, index=False, header=header)
    return path

def test_parse_float_list():
    assert np.array_equal(parse_float_list("1,2.5,9"), [1.0, 2.5, 9.0])
    with pytest.raises(InputDataError):
        parse_float_list("1,a")
    with pytest.raises(InputDataError):
        parse_float_list("")
    with pytest.raises(InputDataError):
        parse_float_list("1,nan")

def test_parse_range_includes_end():
    assert np.allclose(parse_range("2:4:0.5"), [2.0, 2.5, 3.0, 3.5, 4.0])
    assert np.allclose(parse_range("1:1:1"), [1.0])
    for text in ["1:2", "3:1:1", "1:2:0"]:
        with pytest.raises(InputDataError):
            parse_range(text)

def test_resolve_seed(monkeypatch):
    monkeypatch.delenv(SEED_ENV_NAME, raising=False)
    assert resolve_seed(None) == 42
    assert resolve_seed(7) == 7
    monkeypatch.setenv(SEED_ENV_NAME, "123")
    assert resolve_seed(None) == 123
    assert resolve_seed(7) == 7
    monkeypatch.setenv(SEED_ENV_NAME, "abc")
    with pytest.raises(InputDataError):
        resolve_seed(None)

def test_read_data_csv(tmp_path):
    path = write_planted_csv(tmp_path / "data.csv", n=20, header=True)
    data = read_data_csv(path, header=True)
    assert (data.n, data.q) == (20, 2)
    with pytest.raises(InputDataError):
        read_data_csv(path, header=False)
    with pytest.raises(InputDataError):
        read_data_csv(tmp_path / "missing.csv")
    (tmp_path / "one_column.csv").write_text("1\n2\n3\n4\n5\n6\n")
    with pytest.raises(InputDataError):
        read_data_csv(tmp_path / "one_column.csv")

def test_pursue_json(tmp_path, capsys):
    path = write_planted_csv(tmp_path / "planted.csv")
    assert pursue.main(["--data", str(path), "--json", "--quiet", "--seed", "3"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["schema_version"] == 1
    assert (report["q"], report["n"], report["seed"]) == (2, 300, 3)
    assert math.hypot(*report["h_star"]) == pytest.approx(1.0, abs=1e-12)
    assert abs(report["h_star"][0]) > 0.9
    assert report["p_value"] < 0.01
    assert report["optimizer"]["method"] == "grid+brent"

def test_pursue_csv_with_header(tmp_path, capsys):
    path = write_planted_csv(tmp_path / "planted.csv", header=True)
    assert pursue.main(["--data", str(path), "--header", "--csv", "--quiet"]) == EXIT_OK
    df = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert len(df) == 1
    assert {"h_1", "h_2", "max_index", "p_value", "clamped"} <= set(df.columns)

def test_pursue_is_deterministic(tmp_path, capsys):
    path = write_planted_csv(tmp_path / "planted.csv")
    pursue.main(["--data", str(path), "--json", "--quiet"])
    first = capsys.readouterr().out
    pursue.main(["--data", str(path), "--json", "--quiet"])
    assert capsys.readouterr().out == first

def test_pursue_input_errors(tmp_path):
    assert pursue.main(["--data", str(tmp_path / "missing.csv"), "--quiet"]) == EXIT_INPUT_ERROR
    (tmp_path / "bad.csv").write_text("1,2\n3,x\n")
    assert pursue.main(["--data", str(tmp_path / "bad.csv"), "--quiet"]) == EXIT_INPUT_ERROR
    (tmp_path / "short.csv").write_text("1,2\n3,4\n5,7\n")
    assert pursue.main(["--data", str(tmp_path / "short.csv"), "--quiet"]) == EXIT_INPUT_ERROR

def test_pursue_degenerate_data(tmp_path):
    (tmp_path / "constant.csv").write_text("1,2\n" * 10)
    assert pursue.main(["--data", str(tmp_path / "constant.csv"), "--quiet"]) == EXIT_DEGENERATE

def test_tail_table_c2(capsys):
    assert tail_table.main(["--q", "2", "--c2", "9", "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    row = payload["rows"][0]
    assert row["tail"] == pytest.approx(0.078043, abs=1e-6)
    assert row["p_value"] == pytest.approx(row["tail"])
    assert row["clamped"] is False
    assert set(row) >= {"term_e0", "term_e2"}

def test_tail_table_clamps_small_thresholds(capsys):
    assert tail_table.main(["--q", "2", "--c2", "0"]) == EXIT_OK
    df = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert bool(df["clamped"][0])
    assert df["p_value"][0] == pytest.approx(1.0)

def test_tail_table_range_is_nonincreasing(capsys):
    assert tail_table.main(["--q", "3", "--range", "4:40:0.5"]) == EXIT_OK
    df = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert len(df) == 73
    assert np.all(np.diff(df["tail"].to_numpy()) <= 0)

def test_tail_table_alpha(capsys):
    assert tail_table.main(["--q", "2", "--alpha", "0.05,0.01"]) == EXIT_OK
    df = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert df["c2"][0] < df["c2"][1]

def test_tail_table_input_errors():
    assert tail_table.main(["--q", "1", "--c2", "9"]) == EXIT_INPUT_ERROR
    assert tail_table.main(["--q", "2", "--c2", "-1"]) == EXIT_INPUT_ERROR
    assert tail_table.main(["--q", "2", "--range", "1:2"]) == EXIT_INPUT_ERROR
    with pytest.raises(SystemExit):
        tail_table.main(["--q", "2"])

def test_simulate_is_deterministic(capsys):
    args = ["--mode", "limit", "--q", "2", "--reps", "20", "--seed", "11", "--thresholds", "1,5,9"]
    assert simulate.main(args) == EXIT_OK
    first = capsys.readouterr().out
    assert simulate.main(args + ["--workers", "2"]) == EXIT_OK
    assert capsys.readouterr().out == first
    df = pd.read_csv(io.StringIO(first))
    assert list(df.columns) == ["threshold", "p_hat", "se"]
    assert np.all(np.diff(df["p_hat"].to_numpy()) <= 0)

def test_simulate_finite_with_approx(capsys):
    args = ["--mode", "finite", "--n", "50", "--reps", "10", "--range", "2:6:2", "--approx", "--json"]
    assert simulate.main(args) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert (payload["mode"], payload["n"], payload["reps"]) == ("finite", 50, 10)
    assert len(payload["rows"]) == 3
    assert "tube" in payload["rows"][0]

def test_simulate_finite_needs_n():
    assert simulate.main(["--mode", "finite", "--reps", "10"]) == EXIT_INPUT_ERROR

def test_tube_volume_rejects_radius_beyond_critical():
    assert tube_volume.main(["--theta", "0.7", "--mc_reps", "10"]) == EXIT_INPUT_ERROR
    assert tube_volume.main(["--theta", "0", "--mc_reps", "10"]) == EXIT_INPUT_ERROR

def test_tube_volume_json(capsys):
    assert tube_volume.main(["--theta", "0.05", "--mc-reps", "20", "--seed", "1"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["q"] == 2
    assert payload["reps"] == 20
    assert payload["fraction"] == 0.0

def test_verify_specfun(capsys):
    assert verify.main(["--suite", "specfun"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["suite"] == "specfun"
    assert payload["pass"] is True
    assert payload["num_failed"] == 0
    assert payload["num_checks"] == len(payload["records"])

def test_verify_tube():
    assert verify.main(["--suite", "tube"]) == EXIT_OK

def test_verify_rejects_few_mc_reps():
    assert verify.main(["--suite", "mc", "--mc_reps", "10"]) == EXIT_INPUT_ERROR

def test_verify_report_pass_logic():
    report = VerifyReport(suite="unit")
    assert report.passed
    report.close("exact", 1.0, 1.0 + 1e-9, 1e-8)
    report.at_most("bound", 1.0, 0.5)
    report.holds("truth", True, 1)
    assert report.passed
    report.close("relative", 100.0, 101.0, 1e-3, relative=True)
    assert not report.passed
    payload = report.to_dict()
    assert (payload["num_checks"], payload["num_failed"]) == (4, 1)
    assert payload["records"][-1]["pass"] is False
    report = VerifyReport(suite="unit")
    report.close("nan", 1.0, float("nan"), 1.0)
    assert not report.passed

def test_check_record_dict():
    record = CheckRecord("name", 1.0, 1.5, 1e-3, False)
    assert record.to_dict() == {
        "name": "name", "expected": 1.0, "got": 1.5, "tolerance": 1e-3, "pass": False
    }

def test_verify_battery_rejects_unknown_suite():
    with pytest.raises(ValueError):
        VerifyBattery().run("physics")

def test_cli_dispatch(capsys):
    assert cli.main(["tail-table", "--q", "2", "--c2", "9", "--json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["rows"][0]["tail"] == pytest.approx(0.078043, abs=1e-6)

def test_cli_unknown_command():
    assert cli.main([]) == EXIT_INPUT_ERROR
    assert cli.main(["fly"]) == EXIT_INPUT_ERROR

@pytest.mark.slow
def test_verify_all(capsys):
    assert verify.main(["--suite", "all", "--mc_reps", "2000", "--workers", "2"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["pass"] is True
