import csv
import io
import json

import numpy as np
import pytest

from bbcodes import cli, codes
from bbcodes.sim import CSV_COLUMNS


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_params_fixture(capsys):
    code, out, _ = run(capsys, "params", "--spec", "table:I:1")
    assert code == 0
    assert json.loads(out) == {"n": 54, "k": 8}


def test_params_coprime_reports_g(capsys):
    code, out, _ = run(capsys, "params", "--spec", "table:II:1")
    doc = json.loads(out)
    assert code == 0 and doc["n"] == 30 and doc["k"] == 4
    assert doc["g"] == "1+p+p2"


def test_params_inline_and_file(capsys, tmp_path, code_54):
    text = json.dumps(code_54.to_json())
    assert json.loads(run(capsys, "params", "--spec", text)[1]) == {"n": 54, "k": 8}
    path = tmp_path / "spec.json"
    path.write_text(text)
    assert json.loads(run(capsys, "params", "--spec", str(path))[1]) == {"n": 54, "k": 8}


def test_factor(capsys):
    code, out, _ = run(capsys, "factor", "--n", "15")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 5
    assert sorted(f["degree"] for f in doc["factors"]) == [1, 2, 4, 4, 4]
    code, out, _ = run(capsys, "factor", "--n", "15", "--format", "csv")
    assert out.splitlines()[0] == "factor,degree,multiplicity"


def test_construct_warns_on_trivial_code(capsys, caplog):
    spec = json.dumps({"l": 3, "m": 3, "a": "1", "b": "1"})
    code, out, _ = run(capsys, "construct", "--spec", spec)
    assert code == 0 and json.loads(out)["k"] == 0
    assert any("k = 0" in r.getMessage() and r.levelname == "WARNING" for r in caplog.records)


@pytest.mark.parametrize("fmt", ["alist", "dense"])
def test_construct_matrix_round_trip(capsys, tmp_path, code_30, fmt):
    path = tmp_path / f"checks.{fmt}"
    code, out, _ = run(capsys, "construct", "--spec", "table:II:1", "--matrix-out", str(path),
                       "--matrix-format", fmt)
    assert code == 0 and json.loads(out)["k"] == 4
    loaded = codes.checks_from_text(path.read_text())
    ref = codes.build_checks(code_30)
    assert np.array_equal(loaded.h_x.to_dense(), ref.h_x.to_dense())
    assert np.array_equal(loaded.h_z.to_dense(), ref.h_z.to_dense())


def test_invalid_inputs_exit_2(capsys):
    assert run(capsys, "params", "--spec", "table:I:99")[0] == 2
    assert run(capsys, "params", "--spec", '{"l": 1, "m": 3, "a": "1", "b": "1"}')[0] == 2
    assert run(capsys, "params", "--spec", "/no/such/file.json")[0] == 2
    assert run(capsys, "factor", "--n", "0")[0] == 2
    assert run(capsys, "search-coprime", "--l", "3", "--m", "6")[0] == 2
    assert run(capsys, "simulate", "--spec", "table:II:1", "--p", "0.7")[0] == 2
    code, _, err = run(capsys, "distance", "--spec", '{"l": 3, "m": 3, "a": "1", "b": "1"}', "--exact")
    assert code == 2 and "k = 0" in err


def test_distance_exact_and_budget(capsys):
    code, out, _ = run(capsys, "distance", "--spec", "table:II:1", "--exact", "--wmax", "6")
    doc = json.loads(out)
    assert code == 0 and doc["d"] == 6 and len(doc["witness"]) == 6
    code, out, _ = run(capsys, "distance", "--spec", "table:I:1", "--exact", "--wmax", "6",
                       "--budget", "10")
    assert code == 3 and json.loads(out)["status"] == "budget_exceeded"


def test_distance_probe(capsys):
    code, out, _ = run(capsys, "distance", "--spec", "table:II:1", "--probe", "--trials", "200",
                       "--seed", "4")
    doc = json.loads(out)
    assert code == 0 and doc["d_upper"] >= 6 and doc["seed"] == 4
    again = json.loads(run(capsys, "distance", "--spec", "table:II:1", "--probe", "--trials", "200",
                           "--seed", "4")[1])
    assert again == doc


def test_decode(capsys, tmp_path, code_30):
    path = tmp_path / "checks.txt"
    pc = codes.build_checks(code_30)
    path.write_text(codes.checks_to_text(pc))
    e = np.zeros(30, dtype=np.uint8)
    e[[3, 17]] = 1
    s = (pc.h_x.to_dense().astype(np.int64) @ e) & 1
    code, out, _ = run(capsys, "decode", "--H", str(path), "--syndrome", "".join(map(str, s)))
    doc = json.loads(out)
    assert code == 0 and doc["syndrome_satisfied"]
    assert run(capsys, "decode", "--H", str(path), "--syndrome", "0101")[0] == 2


def test_simulate_csv_schema(capsys, tmp_path):
    out_path = tmp_path / "ler.csv"
    code, _, _ = run(capsys, "simulate", "--spec", "table:II:1", "--p", "0.08,0.1",
                     "--stop-errors", "5", "--max-shots", "400", "--seed", "7",
                     "--out", str(out_path))
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out_path.read_text())))
    assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 2
    for r in rows:
        assert float(r["ci_low"]) <= float(r["ler"]) <= float(r["ci_high"])
        assert int(r["shots"]) <= 400


def test_verify_tables_small(capsys):
    code, out, _ = run(capsys, "verify-tables", "--table", "II", "--trials", "2000")
    doc = json.loads(out)
    assert code == 0
    assert {r["status"] for r in doc["rows"]} <= {"exact match", "bounded consistent"}
    assert all(r["k_match"] for r in doc["rows"])


def test_verify_tables_reports_mismatch(capsys):
    # k for this row does not match the shipped table value
    code, out, _ = run(capsys, "verify-tables", "--table", "B", "--trials", "500", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 1
    bad = [r for r in rows if r["status"] == "mismatch"]
    assert [r["row"] for r in bad] == ["2"] and bad[0]["k"] == "12"


def test_search_text_output(capsys):
    code, out, _ = run(capsys, "search", "--l", "3", "--m", "3", "--tau-k", "4", "--trials", "100",
                       "--format", "text")
    assert code == 0 and out.startswith("[[18,")


def test_search_coprime_json(capsys):
    code, out, _ = run(capsys, "search-coprime", "--l", "3", "--m", "5", "--g", "1+p+p2",
                       "--trials", "300")
    hits = json.loads(out)["hits"]
    assert code == 0 and hits and all(h["k"] == 4 for h in hits)
