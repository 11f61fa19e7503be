import os

import pytest
from absl import app, flags
from absl.testing import flagsaver

from kquad import cli
from kquad.designs import make_design
from kquad.errors import NotPositiveDefiniteError
from kquad.experiment import runner
from kquad.quadrature import BayesianQuadrature, EqualWeights, worst_case_error

FLAGS = flags.FLAGS


def _invoke(*args):
    with flagsaver.flagsaver():
        argv = FLAGS(["quad", *args])
        return cli.main(argv)


def _table(output):
    rows = []
    for line in output.splitlines():
        if line.startswith("#") or line == "x_i\tw_i" or "\t" not in line:
            continue
        x, w = line.split("\t")
        rows.append((float(x), float(w)))
    return rows


def _value(output, label):
    for line in output.splitlines():
        if line.startswith(label + " = "):
            return float(line[len(label) + 3 :].split()[0])
    raise AssertionError(f"{label!r} not found in {output!r}")


def test_weights_two_point_rule_is_symmetric(capsys):
    assert _invoke("weights", "--n", "2", "--r", "1", "--design", "uniform") == 0
    table = _table(capsys.readouterr().out)
    assert [x for x, _ in table] == [0.0, 1.0]
    assert table[0][1] == pytest.approx(table[1][1])


def test_weights_prints_checks(capsys):
    assert _invoke("weights", "--n", "5", "--r", "1") == 0
    output = capsys.readouterr().out
    assert len(_table(output)) == 5
    assert _value(output, "z^T w") >= 0
    assert _value(output, "sum |w_i|") > 0
    assert _value(output, "condition proxy") >= 1


@pytest.mark.parametrize("r", ["7", "1.5", "0"])
def test_weights_rejects_invalid_order(r):
    with pytest.raises(app.UsageError):
        _invoke("weights", "--n", "5", "--r", r)


def test_weights_requires_size():
    with pytest.raises(app.UsageError):
        _invoke("weights", "--r", "2")
    with pytest.raises(app.UsageError):
        _invoke("weights", "--n", "2", "--r", "2", "--design", "nonuniform")


def test_weights_reports_solve_failure(monkeypatch, capsys):
    def failing(r, scale, design, jitter=0.0):
        raise NotPositiveDefiniteError(4, -2e-15, context=f"r={r}, n={design.n}")

    monkeypatch.setattr(cli, "bq_weights", failing)
    assert _invoke("weights", "--n", "9", "--r", "4") == 1
    assert "pivot 4" in capsys.readouterr().err


def test_wce_command(capsys):
    assert _invoke("wce", "--n", "17", "--r", "2", "--s", "2") == 0
    bq_output = capsys.readouterr().out
    assert _value(bq_output, "wce") > 0
    assert "shortcut e^2" in bq_output

    assert _invoke("wce", "--n", "17", "--r", "2", "--s", "2", "--method", "equal") == 0
    equal_output = capsys.readouterr().out
    assert _value(equal_output, "wce") >= _value(bq_output, "wce")
    assert "shortcut" not in equal_output


def test_wce_rejects_bad_scale():
    with pytest.raises(app.UsageError):
        _invoke("wce", "--n", "17", "--r", "2", "--s", "1", "--delta", "0.8")


def test_geometry_command(capsys):
    assert _invoke("geometry", "--n", "5", "--design", "nonuniform") == 0
    output = capsys.readouterr().out
    assert _value(output, "fill distance") == pytest.approx(0.21875)
    assert _value(output, "separation radius") == pytest.approx(0.03125)
    assert _value(output, "quasi-uniformity ratio") == pytest.approx(7.0)


def _predictions(output):
    values = {}
    for line in output.splitlines():
        if not line.startswith("#"):
            name, _, value = line.split("\t")
            values[name] = value
    return values


def test_rates_misspecified(capsys):
    assert _invoke("rates", "--r", "4", "--s", "1", "--alpha", "1", "--delta", "1") == 0
    assert float(_predictions(capsys.readouterr().out)["bq_misspecified"]) == pytest.approx(1.0)


def test_rates_well_specified(capsys):
    assert _invoke("rates", "--r", "2", "--s", "2", "--alpha", "0.5") == 0
    assert float(_predictions(capsys.readouterr().out)["bq_wellspecified"]) == pytest.approx(1.0)


def test_rates_guarantee_void(capsys):
    with pytest.raises(app.UsageError, match="1 - s/r"):
        _invoke("rates", "--r", "4", "--s", "1", "--delta", "0.5")
    predictions = _predictions(capsys.readouterr().out)
    assert float(predictions["weight_bound"]) == pytest.approx(1.0)


def test_rates_rejects_invalid_inputs():
    with pytest.raises(app.UsageError):
        _invoke("rates", "--r", "2")
    with pytest.raises(app.UsageError):
        _invoke("rates", "--r", "2", "--s", "3")


@pytest.mark.parametrize("args", [(), ("plot",), ("weights", "extra")])
def test_subcommand_is_required(args):
    with pytest.raises(app.UsageError):
        _invoke(*args)


def test_study_command(tmp_path):
    out = tmp_path / "study"
    code = _invoke("study", "--out", str(out), "--set", "n_grid=17,23,33", "--set", "orders_r=1", "--set", "orders_s=1")
    assert code == 0
    assert os.path.exists(out / "rows.csv")
    assert os.path.exists(out / "summary.md")
    assert os.path.exists(out / "plotdata" / "uniform_r1.csv")


def test_study_config_error(tmp_path):
    assert _invoke("study", "--out", str(tmp_path), "--set", "n_grid=") == 2


def test_study_fails_on_solve_failure(monkeypatch, tmp_path):
    def failing(r, scale, design, jitter=0.0):
        raise NotPositiveDefiniteError(2, 0.0)

    monkeypatch.setattr(runner, "bq_weights", failing)
    assert _invoke("study", "--out", str(tmp_path), "--set", "n_grid=17,23,33", "--set", "orders_r=1") == 1


def test_paired_points_report_pivot_instead_of_crashing(capsys):
    assert _invoke("weights", "--n", "1024", "--r", "4", "--design", "nonuniform") == 1
    assert "solve failed at pivot" in capsys.readouterr().err
    assert _invoke("wce", "--n", "1024", "--r", "4", "--s", "1", "--design", "nonuniform") == 1
    assert "solve failed at pivot" in capsys.readouterr().err


def test_wce_evaluates_the_chosen_method(capsys):
    design = make_design("nonuniform", 33)
    for name, method in (("bq", BayesianQuadrature(3, 0.1)), ("equal", EqualWeights(0.1))):
        assert _invoke("wce", "--n", "33", "--r", "3", "--s", "1", "--design", "nonuniform", "--method", name) == 0
        expected = worst_case_error(method.build(design), 1).wce
        assert _value(capsys.readouterr().out, "wce") == pytest.approx(expected, rel=1e-10)
