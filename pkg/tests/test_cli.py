import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from ellreflect.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, GRID_HEADER, RunConfig, emit_grid, main, run_suite
from ellreflect.errors import ConfigError


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_reflect_json(capsys):
    assert main(["reflect", "--point", "0.9,0.1", "--field", "circle:helmholtz:n=1"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["strategy"]["kind"] == "nonlocal"
    assert out["abs_err"] <= 1e-3 * abs(out["u_true"])
    assert "runtime_s" not in out["diagnostics"]


def test_reflect_line_config(tmp_path, capsys):
    cfg = _write(tmp_path, "c.json", {"operator": {"a": 0, "b": 1, "c": 1.25},
                                       "curve": {"kind": "line", "alpha": 0, "beta": 1, "delta": 0}})
    assert main(["reflect", "--config", cfg, "--point", "0.3,0.2"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["strategy"]["kind"] == "line_p2p"
    assert out["abs_err"] <= 1e-10


def test_reflect_is_deterministic(capsys):
    args = ["reflect", "--point", "0.88,-0.2", "--field", "circle:helmholtz:n=2", "--check-paths"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


@pytest.mark.parametrize("content", ["{bad", "[1, 2]", json.dumps({"K": 9}), json.dumps({"frobnicate": 1}),
                                     json.dumps({"curve": {"kind": "ellipse"}}),
                                     json.dumps({"field": "circle:nope"})])
def test_bad_config_exit_2(tmp_path, content, capsys):
    cfg = _write(tmp_path, "bad.json", content)
    assert main(["reflect", "--config", cfg, "--point", "0.9,0.0"]) == EXIT_USAGE
    assert "config error" in capsys.readouterr().err


def test_missing_config_and_bad_field(capsys):
    assert main(["reflect", "--config", "/nonexistent/x.json", "--point", "0.9,0"]) == EXIT_USAGE
    assert main(["reflect", "--point", "0.9,0", "--order", "0"]) == EXIT_USAGE


def test_validity_violation_exit_2(capsys):
    assert main(["reflect", "--point", "0.2,0.0"]) == EXIT_USAGE
    assert "error" in capsys.readouterr().err


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["reflect", "--point", "nonsense"])
    assert exc.value.code == 2


def test_verify_field(capsys):
    assert main(["verify", "--field", "circle:gauge:n=2"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["passed"] and all(r["pass"] for r in out["points"])
    assert main(["verify", "--field", "line:helmholtz:nu=0.6"]) == EXIT_OK


def test_verify_subset_writes_report(tmp_path, capsys):
    path = str(tmp_path / "rep.json")
    assert main(["verify", "--criteria", "1,7", "--output", path]) == EXIT_OK
    rep = json.loads(open(path).read())
    assert rep["passed"] and [r["cid"] for r in rep["results"]] == [1, 7]
    assert "[PASS] criterion  1" in capsys.readouterr().err


def test_run_suite_low_order_fails_trend_check():
    rep1 = run_suite(RunConfig(K=1), [4])
    rep5 = run_suite(RunConfig(K=5), [4])
    assert not rep1.passed and rep5.passed
    assert rep1.results[0].metrics["max_rel_err"] > rep5.results[0].metrics["max_rel_err"]


def test_verify_failure_exit_1(tmp_path):
    cfg = _write(tmp_path, "k1.json", {"K": 1})
    assert main(["verify", "--config", cfg, "--criteria", "4", "--quiet"]) == EXIT_FAIL


def test_riemann_and_monodromy(capsys):
    assert main(["riemann", "--source", "0.1,0.2", "--point", "0.3,0.1", "--goursat", "16"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["goursat_re"] == pytest.approx(out["closed_re"], abs=1e-10)
    assert main(["monodromy", "--point", "0.8,0", "--rho", "0.01"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert set(out) == {"increment_re", "increment_im", "predicted_re", "predicted_im", "rho"}
    assert abs(out["increment_re"] / out["predicted_re"] - 1) < 0.1


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_grid_laplace_annulus(tmp_path):
    cfg = RunConfig(operator={"a": 0, "b": 0, "c": 0}, field="circle:laplace:n=3")
    path = str(tmp_path / "g.csv")
    n = emit_grid(cfg, path, (-0.95, 0.95, -0.95, 0.95), 25, 25)
    rows = _read_csv(path)
    assert rows[0] == GRID_HEADER and len(rows) == n + 1 and n > 0
    data = np.array(rows[1:], dtype=float)
    r = np.hypot(data[:, 0], data[:, 1])
    band = (r >= 0.77) & (r <= 0.95)
    assert band.any()
    assert np.max(data[band, 4]) <= 1e-9
    # row-major: y outer, x inner
    order = np.lexsort((data[:, 0], data[:, 1]))
    assert np.array_equal(order, np.arange(len(data)))


def test_grid_helmholtz_band(tmp_path):
    cfg = RunConfig(field="circle:helmholtz:n=1")
    path = str(tmp_path / "g.csv")
    emit_grid(cfg, path, (0.6, 0.98, -0.3, 0.3), 6, 5)
    data = np.array(_read_csv(path)[1:], dtype=float)
    assert len(data) > 0
    rel = data[:, 4] / np.maximum(np.abs(data[:, 2]), 1e-300)
    assert np.max(rel) <= 5e-3


def test_grid_empty_is_header_only(tmp_path, capsys):
    path = str(tmp_path / "e.csv")
    assert main(["grid", "--bounds", "0,0,0,0", "--nx", "0", "--ny", "0", "--out", path]) == EXIT_OK
    assert open(path).read() == ",".join(GRID_HEADER) + "\n"
    assert main(["grid"]) == EXIT_OK
    assert capsys.readouterr().out == ",".join(GRID_HEADER) + "\n"


def test_grid_byte_identical(tmp_path):
    a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    for p in (a, b):
        assert main(["grid", "--bounds", "0.8,0.95,-0.1,0.1", "--nx", "3", "--ny", "3", "--out", p]) == EXIT_OK
    assert open(a, "rb").read() == open(b, "rb").read()


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(K=0)
    with pytest.raises(ConfigError):
        RunConfig(tol=0.0)
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"operator": {"family": "nope"}})


def test_module_entry_point_help():
    res = subprocess.run([sys.executable, "-m", "ellreflect", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for sub in ("reflect", "verify", "riemann", "monodromy", "grid"):
        assert sub in res.stdout
