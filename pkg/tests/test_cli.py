import json

import pytest
from click.testing import CliRunner

from lplab_py.cli.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


def _report(result):
    assert result.exit_code == 0, result.output
    return json.loads(result.stdout)


def test_averaging_json(runner):
    result = runner.invoke(cli, ["averaging", "--group", "Z", "--p", "2", "--n", "4", "--format", "json"])
    report = _report(result)
    assert report["experiment"] == "averaging"
    assert report["rows"][0]["norm"] == pytest.approx(0.5)


def test_dirichlet_json(runner):
    result = runner.invoke(cli, ["dirichlet", "--group", "Z", "--radius", "16", "--p", "3",
                                 "--boundary", "0,1", "--format", "json"])
    row = _report(result)["rows"][0]
    assert row["converged"] is True
    assert row["linear_sup_error"] <= 1e-6


def test_cohomology_compose(runner):
    result = runner.invoke(cli, ["cohomology", "--complex", "Z2", "--check", "compose", "--format", "json"])
    assert _report(result)["rows"][0]["pass"] is True


def test_ball_radius_range(runner):
    result = runner.invoke(cli, ["ball", "--group", "F2", "--radii", "0..3", "--format", "json"])
    assert [row["size"] for row in _report(result)["rows"]] == [1, 5, 17, 53]


def test_density_composed_omegas(runner):
    result = runner.invoke(cli, ["density", "--omegas", "1,-1", "--epsilon", "0.1", "--format", "json"])
    rows = _report(result)["rows"]
    assert [row["stage"] for row in rows] == [1, 2]


def test_csv_output(runner):
    result = runner.invoke(cli, ["tent", "--ns", "1,2", "--format", "csv"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0].startswith("closed_form,")
    assert len(lines) == 3


def test_table_output(runner):
    result = runner.invoke(cli, ["tent", "--ns", "1,2"])
    assert result.exit_code == 0
    assert "tent" in result.output


@pytest.mark.parametrize("args", [
    ["averaging", "--group", "Q"],
    ["averaging", "--p", "1"],
    ["tent", "--group", "F2"],
    ["cohomology", "--complex", "Z", "--check", "sigma", "--degree", "3"],
    ["averaging", "--ns", "1,x"],
])
def test_config_errors_exit_2(runner, args):
    result = runner.invoke(cli, args)
    assert result.exit_code == 2
    assert "Error" in result.output


def test_bad_workers_exit_2(runner, monkeypatch):
    monkeypatch.setenv("LPLAB_WORKERS", "lots")
    result = runner.invoke(cli, ["tent", "--ns", "1,2"])
    assert result.exit_code == 2


def test_resource_limit_exit_3(runner, monkeypatch):
    monkeypatch.setenv("LPLAB_MAX_VERTICES", "10")
    result = runner.invoke(cli, ["ball", "--group", "F2", "--radius", "3"])
    assert result.exit_code == 3


def test_non_convergence_exit_4(runner):
    result = runner.invoke(cli, ["dirichlet", "--group", "F2", "--radius", "3", "--p", "4",
                                 "--boundary", "0,1,-1,2", "--max-iters", "1", "--method", "gradient",
                                 "--format", "json"])
    assert result.exit_code == 4


def test_selftest(runner):
    result = runner.invoke(cli, ["ball", "--selftest", "--format", "json"])
    report = _report(result)
    assert report["experiment"] == "ball:selftest"
    assert all(row["passed"] for row in report["rows"])


def test_reports_are_deterministic(runner):
    args = ["young", "--trials", "10", "--seed", "7", "--format", "json"]
    first, second = _report(runner.invoke(cli, args)), _report(runner.invoke(cli, args))
    first.pop("wall_time")
    second.pop("wall_time")
    assert first == second


def test_output_file(runner, tmp_path):
    path = tmp_path / "tent.json"
    result = runner.invoke(cli, ["tent", "--ns", "1,10", "--p", "3", "--output", str(path)])
    assert result.exit_code == 0
    report = json.loads(path.read_text())
    assert [row["n"] for row in report["rows"]] == [1, 10]


def test_config_file_is_overridden_by_flags(runner, tmp_path):
    path = tmp_path / "averaging.yaml"
    path.write_text("p: 3.0\nns: [1, 2, 3]\n")
    result = runner.invoke(cli, ["averaging", "--config", str(path), "--n", "8", "--format", "json"])
    report = _report(result)
    assert [row["n"] for row in report["rows"]] == [8]
    assert report["params"]["p"] == 3.0


def test_tilf_diff_target(runner, tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"group": "Z", "vector": "2*[1] - 2*[0]"}))
    rows = _report(runner.invoke(cli, ["tilf-diff", "--target", str(path), "--format", "json"]))["rows"]
    assert [(row["h"], row["coefficient"]) for row in rows] == [("-1", "2")]
