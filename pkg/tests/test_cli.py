import json

import pytest
from click.testing import CliRunner

from transverify.cli import main
from transverify.suites import SUITE_IDS, run_suite


@pytest.fixture
def runner():
    return CliRunner()


def test_expand_modform_markdown(runner):
    res = runner.invoke(main, ["expand", "modform", "delta1", "--q-order", "8", "--format", "markdown"])
    assert res.exit_code == 0
    rows = [line for line in res.output.splitlines() if line.startswith("| ") and "---" not in line]
    assert rows[1] == "| 0 | 1/4 |"
    assert rows[2] == "| 1 | 6 |"


def test_expand_theta_json(runner):
    res = runner.invoke(main, ["expand", "theta", "theta2", "--y-order", "4", "--q-order", "4",
                               "--format", "json"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["parity"] == "even"
    assert [row["y_degree"] for row in data["series"]] == [0, 2]


def test_expand_phi_dimension_three(runner):
    res = runner.invoke(main, ["expand", "phi", "Phi_W", "--k", "1", "--q-order", "2"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["D"] == 3 and data["ring"]["n_roots"] == 1
    assert data["terms"]


def test_expand_phi_routes_print_the_same_terms(runner):
    a = json.loads(runner.invoke(main, ["expand", "phi", "Phi_L", "--k", "1", "--q-order", "2"]).output)
    b = json.loads(runner.invoke(main, ["expand", "phi", "Phi_L", "--k", "1", "--q-order", "2",
                                        "--route", "bundle"]).output)
    assert a["terms"] == b["terms"]


def test_expand_cs_csv(runner):
    res = runner.invoke(main, ["expand", "cs", "Phi_L", "--kind", "xi", "--k", "1", "--q-order", "2",
                               "--format", "csv"])
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert lines[0] == "monomial,q_exponent,coefficient"
    assert any(line.startswith("U*b,0,") for line in lines)


@pytest.mark.parametrize("args", [
    ["expand", "modform", "delta9"],
    ["expand", "theta", "theta7"],
    ["expand", "phi", "Phi_X"],
    ["expand", "bogus", "delta1"],
    ["expand", "modform", "delta1", "--q-order", "0"],
    ["verify", "no-such-suite"],
    ["verify", "s-laws", "--tau", "0.1+0.2i"],
    ["verify", "s-laws", "--tau", "garbage"],
    ["derive", "TM-7"],
])
def test_usage_errors_exit_two(runner, args):
    assert runner.invoke(main, args).exit_code == 2


def test_derive_insufficient_order(runner):
    res = runner.invoke(main, ["derive", "cancel-TM-11", "--q-order", "1"])
    assert res.exit_code == 2
    assert "insufficient order" in res.output


def test_derive_reports_match_annotation(runner):
    res = runner.invoke(main, ["derive", "cancel-XI-11"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["residual_zero"] and data["constant_terms_equal"]
    assert "formula left side: match" in data["matched_display"]


def test_verify_jacobi_high_order(runner):
    res = runner.invoke(main, ["verify", "jacobi", "--q-order", "20"])
    assert res.exit_code == 0
    assert json.loads(res.output)["pass"] is True


def test_verify_cancel_writes_report(runner, tmp_path):
    out = tmp_path / "report.json"
    res = runner.invoke(main, ["verify", "cancel-TM-11", "--q-order", "4", "--out", str(out)])
    assert res.exit_code == 0
    data = json.loads(out.read_text())
    assert data["pass"] is True
    assert data["cancellation"]["residual_zero"] is True


def test_verify_failure_exits_one(runner):
    res = runner.invoke(main, ["verify", "s-laws", "--tol", "1e-30"])
    assert res.exit_code == 1
    assert json.loads(res.output)["pass"] is False


def test_verify_is_deterministic(runner):
    a = runner.invoke(main, ["verify", "dim3-special"]).output
    b = runner.invoke(main, ["verify", "dim3-special"]).output
    assert a == b


def test_default_q_order_env(runner, monkeypatch):
    monkeypatch.setenv("TRANSVERIFY_DEFAULT_QORDER", "3")
    data = json.loads(runner.invoke(main, ["expand", "modform", "epsilon1"]).output)
    assert data["q_order"] == 3


def test_verify_all_passes(runner):
    res = runner.invoke(main, ["verify", "all"])
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["pass"] is True
    assert len(data["checks"]) > 50
    assert "cancel-TILDE-9:cancellation" in data


@pytest.mark.parametrize("suite", [s for s in SUITE_IDS if s not in ("all",)])
def test_each_suite_passes(suite):
    rep = run_suite(suite)
    assert rep.passed, [c.id for c in rep.failures()]
    assert rep.checks
