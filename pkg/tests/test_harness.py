import math

import numpy as np
import pytest

from ehrelay.analytic import analytic_ber
from ehrelay.config import ConfigError, EhConfig, SystemConfig, dump_config
from ehrelay.geometry import LinkGeometry
from ehrelay.harness import SweepSpec, optimize_rho, run_preset, run_sweep
from ehrelay.harness.cli import main, parse_grid
from ehrelay.harness.experiments import (
    approximation_error,
    difference_lambda,
    power_at_ber,
    rho_grid,
)
from ehrelay.harness.sweep import CSV_HEADER, FAILED, SweepResult, SweepRow, apply_axis, evaluate, read_csv
from ehrelay.harness.verify import CLOSED_FORM_OPS, AgreementRow, dual_path_rows
from ehrelay.montecarlo import BerEstimate


@pytest.mark.parametrize("kwargs", [
    dict(axis="power", grid=(1.0,)),
    dict(axis="ps_db", grid=()),
    dict(axis="ps_db", grid=(1.0,), evaluators=()),
    dict(axis="ps_db", grid=(1.0,), evaluators=("analytic_X",)),
    dict(axis="ps_db", grid=(1.0,), workers=0),
    dict(axis="rho", grid=(1.5,)),
    dict(axis="n_r", grid=(2.5,)),
    dict(axis="n_ip", grid=(0,)),
])
def test_sweep_spec_validation(kwargs):
    with pytest.raises(ConfigError):
        SweepSpec(SystemConfig(), **kwargs)


def test_apply_axis():
    ps = SystemConfig()
    da = SystemConfig(eh=EhConfig.da(2, 2))
    assert apply_axis(ps, "rho", 0.3).eh.rho == 0.3
    assert apply_axis(da, "rho", 0.3) == da
    assert apply_axis(da, "n_ip", 3).eh.n_r == 5
    assert apply_axis(da, "n_eh", 1).eh.n_ip == 2
    assert apply_axis(da, "n_r", 6).eh.n_ip == 4
    assert apply_axis(ps, "n_ip", 3, partner=2).eh.n_r == 5
    fixed = apply_axis(ps, "distance", 1.5)
    assert fixed.geom_sr == fixed.geom_rd == LinkGeometry.deterministic(1.5)
    with pytest.raises(ConfigError):
        apply_axis(da, "n_r", 2)


def test_one_row_per_point_and_evaluator(tmp_path):
    spec = SweepSpec(SystemConfig(), "ps_db", (10, 20, 30), ("analytic_L", "mc_NL", "analytic_NL"),
                     output_path=tmp_path / "s.csv", min_errors=50)
    result = run_sweep(spec)
    assert [(r.axis, r.evaluator) for r in result.rows] == [
        (p, e) for p in (10.0, 20.0, 30.0) for e in spec.evaluators]
    assert all(r.half_width is None for r in result.rows if r.evaluator.startswith("analytic"))
    assert all(r.half_width > 0 for r in result.rows if r.evaluator.startswith("mc"))
    text = (tmp_path / "s.csv").read_text()
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert text.endswith("\n") and "\r" not in text
    back = read_csv(tmp_path / "s.csv")
    assert [(r.axis, r.evaluator, r.ber, r.flag) for r in back] == \
        [(r.axis, r.evaluator, r.ber, r.flag) for r in result.rows]


def test_csv_floats_round_trip_exactly(tmp_path):
    row = SweepRow(0.1, "analytic_L", 1 / 3, "closed-form", math.pi * 1e-9)
    SweepResult(None, [row]).write(tmp_path / "r.csv")
    assert read_csv(tmp_path / "r.csv") == [row]


def test_csv_bad_header(tmp_path):
    (tmp_path / "x.csv").write_text("a,b\n")
    with pytest.raises(ValueError):
        read_csv(tmp_path / "x.csv")


def test_parallel_sweep_identical_to_serial():
    base = SystemConfig(eh=EhConfig.da(1, 3))
    kw = dict(evaluators=("analytic_L", "mc_L"), min_errors=50)
    serial = run_sweep(SweepSpec(base, "ps_db", (0, 20, 40), **kw))
    parallel = run_sweep(SweepSpec(base, "ps_db", (0, 20, 40), workers=3, **kw))
    assert serial.to_csv() == parallel.to_csv()


def test_failures_become_flagged_rows(monkeypatch):
    import ehrelay.harness.sweep as sweep

    def broken(*_, **__):
        raise FloatingPointError("boom")

    monkeypatch.setattr(sweep, "analytic_ber", broken)
    row = evaluate(SystemConfig(), "analytic_L")
    assert row.flag == FAILED and math.isnan(row.ber)
    assert SweepResult(None, [row]).failures == 1


def test_optimize_rho_tie_and_single_point(monkeypatch):
    import ehrelay.harness.experiments as ex

    class Flat:
        ber = 0.1

    monkeypatch.setattr(ex, "analytic_ber", lambda cfg: Flat())
    assert optimize_rho(SystemConfig(), [0.7, 0.3, 0.5]) == (0.3, 0.1)
    assert optimize_rho(SystemConfig(), [0.6]) == (0.6, 0.1)
    with pytest.raises(ValueError):
        optimize_rho(SystemConfig(), [])


def test_optimize_rho_returns_the_grid_minimum():
    cfg = SystemConfig(ps_db=50.0)
    grid = rho_grid(0.1)
    rho, ber = optimize_rho(cfg, grid)
    bers = [analytic_ber(cfg.with_(rho=r)).ber for r in grid]
    assert ber == min(bers)
    assert rho == grid[int(np.argmin(bers))]


def test_rho_grid():
    np.testing.assert_allclose(rho_grid(0.25), [0.25, 0.5, 0.75])
    assert rho_grid(0.05)[-1] == 0.95


def test_approximation_error_undefined_without_errors():
    zero = BerEstimate.from_counts(0, 1000)
    cfg = SystemConfig(eh=EhConfig.ps(model="NL"))
    (point,) = approximation_error(cfg, [5], mc=zero)
    assert point.flag == "undefined" and math.isnan(point.value)


def test_difference_lambda_signs_at_the_ends():
    (near, gap_near), (far, gap_far) = difference_lambda(SystemConfig(ps_db=40.0), "L", [1.0, 3.0])
    assert (near, far) == (1.0, 3.0)
    assert gap_near > 0 > gap_far


def test_power_at_ber_inverts_the_curve():
    cfg = SystemConfig()
    p = power_at_ber(cfg, 1e-2)
    assert analytic_ber(cfg.with_(ps_db=p)).ber == pytest.approx(1e-2, rel=1e-3)


def test_agreement_rows():
    rows = dual_path_rows(grid=(25,))
    assert [r.op for r in rows] == list(CLOSED_FORM_OPS)
    assert all(r.passes(1e-4) for r in rows)
    assert not AgreementRow("x", 0.0, 1.0, 1.0, "fallback").passes(1.0)
    assert AgreementRow("x", 0.0, 0.0, 0.0, "closed-form").relative_error == 0.0


@pytest.mark.parametrize("text, expected", [
    ("0:10:5", [0.0, 5.0, 10.0]),
    ("0.05:0.15:0.05", [0.05, 0.1, 0.15]),
    ("3", [3.0]),
    ("1, 2 ,4", [1.0, 2.0, 4.0]),
])
def test_parse_grid(text, expected):
    assert parse_grid(text) == expected


@pytest.mark.parametrize("text", ["", "a,b", "0:1:0", "0:1"])
def test_parse_grid_errors(text):
    with pytest.raises(ConfigError):
        parse_grid(text)


def test_cli_sweep_to_stdout(capsys):
    assert main(["sweep", "--grid", "10,20", "--set", "ps_db=5"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == ",".join(CSV_HEADER)
    assert len(out) == 5


def test_cli_sweep_file_and_config(tmp_path):
    cfg = tmp_path / "c.yaml"
    dump_config(SystemConfig(eh=EhConfig.da(2, 2, model="NL")), cfg)
    out = tmp_path / "o.csv"
    assert main(["sweep", str(cfg), "--axis", "n_ip", "--grid", "1:3:1", "--out", str(out)]) == 0
    assert len(read_csv(out)) == 6
    assert out.with_suffix(".svg").exists()


@pytest.mark.parametrize("argv", [
    ["sweep", "--axis", "nonsense"],
    ["sweep", "missing.yaml"],
    ["sweep", "--grid", "x"],
    ["sweep", "--set", "eh.rho=3"],
    ["sweep", "--set", "no_equals"],
    ["optimize-rho", "--set", "bogus=1"],
    ["frobnicate"],
])
def test_cli_configuration_errors_exit_1(argv, capsys):
    assert main(argv) == 1


def test_cli_numerical_failure_exit_2(monkeypatch, capsys):
    import ehrelay.harness.sweep as sweep

    def broken(*_, **__):
        raise FloatingPointError("boom")

    monkeypatch.setattr(sweep, "analytic_ber", broken)
    assert main(["sweep", "--grid", "10"]) == 2
    assert "failed" in capsys.readouterr().out


def test_cli_other_commands(capsys):
    assert main(["optimize-rho", "--grid", "0.5,0.9", "--set", "ps_db=50"]) == 0
    assert capsys.readouterr().out.startswith("rho*=")
    assert main(["diff-lambda", "--d-grid", "1,3", "--set", "ps_db=40"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "d,lambda" and len(lines) == 3
    assert main(["approx-error", "--chi", "20", "--min-errors", "50",
                 "--set", "eh.model=NL"]) == 0
    assert main(["verify", "--grid", "30"]) == 0
    assert "FAIL" not in capsys.readouterr().out


def test_quick_preset_writes_csv_and_svg(tmp_path):
    results = run_preset("fig8", tmp_path, quick=True)
    assert set(results) == {"PS_fixed", "PS_uniform", "DA_3_1_fixed", "DA_3_1_uniform"}
    for label in results:
        assert (tmp_path / f"fig8_{label}.csv").exists()
    assert (tmp_path / "fig8.svg").read_text().lstrip().startswith("<?xml")
    with pytest.raises(KeyError):
        run_preset("fig99", tmp_path)
