"""CLI surface: subcommands, exit codes, schemas, reproducibility."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from vortex_atlas.cli import main

SCHEMAS = Path(__file__).resolve().parents[1] / "docs" / "schemas"


def _schema(name):
    return json.loads((SCHEMAS / name).read_text())


def run_cli(*argv, capsys=None):
    code = main(list(argv))
    out = capsys.readouterr().out if capsys else ""
    return code, out


def test_catalog_list(capsys):
    code, out = run_cli("catalog", "list", capsys=capsys)
    assert code == 0
    assert len(out.strip().split("\n")) >= 18


def test_catalog_show(capsys):
    code, out = run_cli("catalog", "show", "H2.hyperbolic", capsys=capsys)
    assert code == 0
    assert "x^2 - y^2 + i * y" in out
    assert "provenance:" in out


def test_catalog_unknown_exit_2(capsys):
    code, _ = run_cli("catalog", "show", "nope", capsys=capsys)
    assert code == 2


def test_classify_point(capsys):
    code, out = run_cli("classify", "--field", "H2.elliptic",
                        "--point", "0,0", capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, _schema("classification.schema.json"))
    assert doc["reports"][0]["class"] == "Elliptic"
    assert doc["config"]["tolerances"]["rank"] == 1e-7


def test_classify_auto_cusp(capsys):
    code, out = run_cli("classify", "--field", "H2.helmholtz-cusp", "--auto",
                        capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    assert len(doc["reports"]) == 1
    assert doc["reports"][0]["class"] == "Cusp"
    assert doc["reports"][0]["basepoint"] == pytest.approx([0.0, 0.0],
                                                            abs=1e-6)


def test_classify_off_zero_exit_4(capsys):
    code, _ = run_cli("classify", "--field", "H2.regular",
                      "--point", "0.5,0.5", capsys=capsys)
    assert code == 4


def test_classify_strict_degenerate_exit_3(capsys):
    code, _ = run_cli("classify", "--field", "expr:x^2 + i*y^2",
                      "--point", "0,0", "--strict", capsys=capsys)
    assert code == 3


def test_scan_schema(capsys):
    code, out = run_cli("scan", "--field", "H2.cusp-family",
                        "--params", "a=0.25", capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, _schema("points.schema.json"))
    assert len(doc["points"]) == 3


def test_trace_schema(capsys):
    code, out = run_cli("trace", "--field", "H3.DHt", "--params", "t=-0.25",
                        "--res", "51", capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, _schema("curves.schema.json"))
    assert len(doc["curves"]) == 1
    assert doc["curves"][0]["closed"]


def test_sweep_schema(capsys):
    code, out = run_cli("sweep", "--field", "H2.cusp-family", "--param", "a",
                        "--values=-0.25,0,0.25", capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, _schema("sweep.schema.json"))
    assert doc["counts"] == [1, 1, 3]


def test_verify_schema_and_exit(capsys):
    code, out = run_cli("verify", "--field", "H2.helmholtz-hyperbolic",
                        "--helmholtz", "1", capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, _schema("residual.schema.json"))
    assert doc["helmholtz"]["residual"] < 1e-10


def test_verify_failing_residual_exit_5(capsys):
    code, _ = run_cli("verify", "--field", "H2.hyperbolic",
                      "--helmholtz", "1", capsys=capsys)
    assert code == 5


def test_verify_wave(capsys):
    code, out = run_cli("verify", "--field", "H2.helmholtz-hyperbolic-wave",
                        "--wave", "1", capsys=capsys)
    assert code == 0
    assert json.loads(out)["wave"]["residual"] < 1e-10


def test_strata_schema(capsys):
    code, out = run_cli("strata", "--field", "H2.helmholtz-cusp", "--auto",
                        capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, _schema("strata.schema.json"))
    assert doc["zeros"][0]["stratum"] == "W3"
    assert doc["zeros"][0]["class"] == "Cusp"


def test_montecarlo_no_elliptic_rows(tmp_path, capsys):
    out_csv = tmp_path / "mc.csv"
    code, _ = run_cli("montecarlo", "--seed", "7", "--n", "25",
                      "--out", str(out_csv), capsys=capsys)
    assert code == 0
    rows = out_csv.read_text().strip().split("\n")
    header = rows[0].split(",")
    class_col = header.index("class")
    classes = {r.split(",")[class_col] for r in rows[1:]}
    assert "Elliptic" not in classes


def test_montecarlo_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_cli("montecarlo", "--seed", "11", "--n", "5", "--out", str(a),
            capsys=capsys)
    run_cli("montecarlo", "--seed", "11", "--n", "5", "--out", str(b),
            capsys=capsys)
    assert a.read_bytes() == b.read_bytes()


def test_render_outputs(tmp_path, capsys):
    code, out = run_cli("render", "--field", "H2.Ht", "--param", "t",
                        "--values=-0.25,0,0.25", "--res", "101",
                        "--out", str(tmp_path), capsys=capsys)
    assert code == 0
    manifest = json.loads((tmp_path / "panels.json").read_text())
    assert [p["zero_count"] for p in manifest["panels"]] == [2, 1, 0]


def test_config_file_flags_win(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("res = 41\nparams = a=0.25\n")
    code, out = run_cli("scan", "--field", "H2.cusp-family",
                        "--config", str(cfg), capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["region"]["res"] == [41, 41]
    assert len(doc["points"]) == 3
    # now the flag overrides the config value
    code, out = run_cli("scan", "--field", "H2.cusp-family",
                        "--config", str(cfg), "--res", "61", capsys=capsys)
    doc = json.loads(out)
    assert doc["region"]["res"] == [61, 61]


def test_inline_expression(capsys):
    code, out = run_cli("classify", "--field", "expr:x + i*y",
                        "--point", "0,0", capsys=capsys)
    assert code == 0
    assert json.loads(out)["reports"][0]["class"] == "Regular"


def test_field_file(tmp_path, capsys):
    path = tmp_path / "f.field"
    path.write_text("myfield; 2; 0; -; x^2 + y^2 + i*y\n")
    code, out = run_cli("classify", "--field", f"file:{path}",
                        "--point", "0,0", capsys=capsys)
    assert code == 0
    assert json.loads(out)["reports"][0]["class"] == "Elliptic"


def test_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "vortex_atlas.cli", "catalog", "list"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "H2.hyperbolic" in proc.stdout
