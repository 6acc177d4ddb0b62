import json

import pytest
from scipy.special import ndtr

from robustclt.cli import main as cli_main
from robustclt.harness import (
    ExperimentConfig,
    emit_report,
    estimate_delta_floor,
    gaussian_set_probability,
    run_classical_fclt_experiment,
    run_thm1_experiment,
    run_verify_lemmas,
)
from robustclt.report import ExperimentReport
from robustclt.sets import IntervalUnionSet


def tiny_lemma_config(**kw):
    base = dict(
        kernel_r=(0.5, 1.0),
        kernel_y_count=40,
        ll4_sets=6,
        ll4_b=(0.5,),
        ll12_sets=2,
        ll12_eps=(0.5,),
        ll12_n=(4,),
        ll10_n=(4,),
        ll10_b=(0.5, 1.0),
        ll10_paths=4000,
        ll10_depth=8,
        ll11_families=8,
        ll11_p=(2.0, 3.0),
        ll11_C=(0.1, 1.0),
    )
    base.update(kw)
    return ExperimentConfig().override(**base)


def test_config_ini_roundtrip(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text(
        """
[family]
laws =
    gaussian 0 0.8
    gaussian 0 1.2

[thm1]
n = 4, 8
eps = 0.75
p = 3
targets =
    0.5,1.5
    -0.6,0.6
eta = 0.4, 0.2
grid_size = 1025

[fclt]
law = uniform -1 1
n = 8, 16
sn_paths = 32
bootstrap = 10

[output]
seed = 7
dir = out
workers = 2
formats = csv, json
"""
    )
    cfg = ExperimentConfig.from_ini(ini)
    assert cfg.thm1_n == (4, 8)
    assert cfg.thm1_eps == (0.75,)
    assert cfg.thm1_targets == ("0.5,1.5", "-0.6,0.6")
    assert cfg.grid_size == 1025
    assert cfg.fclt_n == (8, 16)
    assert cfg.seed == 7
    assert cfg.workers == 2
    assert cfg.family.label().startswith("gaussian 0 0.8")
    # overrides win and leave the rest alone
    assert cfg.override(seed=9, grid_size=None).seed == 9
    assert cfg.override(seed=9).grid_size == 1025


def test_gaussian_set_probability():
    A = IntervalUnionSet.from_pairs([(-1.0, 0.5), (2.0, 3.0)])
    expected = (ndtr(0.5) - ndtr(-1.0)) + (ndtr(3.0) - ndtr(2.0))
    assert gaussian_set_probability(A) == pytest.approx(float(expected), abs=1e-14)


def test_delta_floor_positive_and_scales():
    A = IntervalUnionSet.from_text("0.5,1.5")
    floor = estimate_delta_floor(A, 0.75, 4)
    assert floor > 0
    assert estimate_delta_floor(A, 0.75, 16) > 0


def test_verify_lemmas_tiny_all_pass():
    report = run_verify_lemmas(tiny_lemma_config())
    assert report.rows
    assert report.all_passed, report.failures
    checks = {row["check"] for row in report.rows}
    assert "g2-envelope" in checks
    assert "negative-control-g2" in checks


def test_verify_lemmas_detects_corrupted_constant():
    report = run_verify_lemmas(
        tiny_lemma_config(), g2_factor=15.0, include_negative_controls=False
    )
    failing = [r for r in report.rows if r["check"] == "g2-envelope" and not r["passed"]]
    assert failing, "corrupting the envelope factor must produce a failure"


def test_report_determinism_and_roundtrip(tmp_path):
    cfg = tiny_lemma_config().override(out_dir=str(tmp_path / "a"))
    rep1 = run_verify_lemmas(cfg)
    rep2 = run_verify_lemmas(cfg)
    paths1 = emit_report(rep1, ("csv", "json"), cfg.out_dir)
    paths2 = emit_report(rep2, ("csv", "json"), tmp_path / "b")
    assert paths1[0].read_bytes() == paths2[0].read_bytes()

    loaded = ExperimentReport.from_json(paths1[1])
    assert loaded.kind == rep1.kind
    assert loaded.rows == json.loads(paths1[1].read_text())["rows"]
    assert loaded.all_passed == rep1.all_passed


def test_svg_contains_one_series_per_eps(tmp_path):
    report = ExperimentReport(kind="demo", columns=["n", "eps", "observed", "bound"])
    for eps in (0.5, 1.0):
        for n in (4, 8, 16):
            report.add(n=n, eps=eps, observed=0.1 / n, bound=1.0 / n, passed=True)
    target = report.to_svg(tmp_path / "demo.svg")
    text = target.read_text()
    assert 'id="series-eps-0.5-observed"' in text
    assert 'id="series-eps-1-observed"' in text
    assert text.count("series-eps-") == 4  # observed + bound per eps value


def test_thm1_small_run_passes_and_reports():
    cfg = ExperimentConfig().override(
        thm1_n=(4,),
        thm1_eps=(0.75,),
        thm1_p=(3.0,),
        thm1_targets=("0.5,1.5",),
        eta=(0.4, 0.2),
        grid_size=1025,
        dp_order=64,
    )
    report = run_thm1_experiment(cfg)
    assert report.all_passed
    b21 = [r for r in report.rows if r["check"] == "thm1-b21"]
    b22 = [r for r in report.rows if r["check"] == "thm1-b22"]
    assert len(b21) == 1 and len(b22) == 1
    row = b21[0]
    assert row["observed"] <= 1.0
    assert row["vacuous"] == (row["bound"] > 1.0)
    assert row["upper"] >= 0.0 and row["phi"] >= 0.0


def test_thm1_workers_do_not_change_results():
    base = ExperimentConfig().override(
        thm1_n=(4,),
        thm1_eps=(0.75, 1.0),
        thm1_p=(3.0,),
        thm1_targets=("0.5,1.5", "-0.6,0.6"),
        eta=(0.4,),
        grid_size=513,
        dp_order=48,
    )
    seq = run_thm1_experiment(base)
    par = run_thm1_experiment(base.override(workers=4))
    for a, b in zip(seq.rows, par.rows):
        assert a == b


def test_single_law_thm1_gap_far_below_bound():
    # classical sanity: one standard law, a half-line target, moderate n
    cfg = ExperimentConfig().override(
        family_laws=("gaussian 0 1",),
        thm1_n=(16,),
        thm1_eps=(0.75,),
        thm1_p=(3.0,),
        thm1_targets=("-40,0",),
        eta=(0.3, 0.15),
        grid_size=2049,
        dp_order=96,
    )
    report = run_thm1_experiment(cfg)
    row = [r for r in report.rows if r["check"] == "thm1-b21"][0]
    # gap between the certified upper value and the enlarged-set Gaussian mass
    # stays tiny and far below the bound
    assert row["observed"] <= 0.05
    assert row["observed"] <= row["bound"]
    # the DP certificate itself brackets the plain Gaussian mass of the target
    assert row["upper"] == pytest.approx(0.5, abs=0.15)


def test_fclt_small_run_structure():
    cfg = ExperimentConfig().override(
        fclt_n=(8, 16),
        sn_paths=48,
        ref_factor=2,
        bootstrap=12,
    )
    report = run_classical_fclt_experiment(cfg)
    kinds = [r["check"] for r in report.rows]
    assert kinds.count("fclt-bound") == 2
    assert kinds.count("fclt-monotone-trend") == 1
    for row in report.rows:
        if row["check"] == "fclt-bound":
            assert row["observed"] > 0
            assert row["slack"] >= 0
            assert 0 <= row["baseline_bb"] <= 2
    with pytest.raises(ValueError):
        run_classical_fclt_experiment(cfg.override(sn_paths=4))


def test_cli_bounds_and_prokhorov(tmp_path, capsys):
    rc = cli_main(["bounds", "-n", "16", "--eps", "0.75", "-p", "3", "--format", "json"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["c2(p)"] == 184.0

    p_csv = tmp_path / "p.csv"
    q_csv = tmp_path / "q.csv"
    p_csv.write_text("0.0\n")
    q_csv.write_text("0.7\n")
    rc = cli_main(["prokhorov", str(p_csv), str(q_csv), "--eps", "0.5"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["distance"] == pytest.approx(0.7)
    assert out["deficiency"]["deficiency"] == 1.0


def test_cli_missing_config_is_usage_error(tmp_path):
    with pytest.raises(SystemExit):
        cli_main(["verify-lemmas", "--config", str(tmp_path / "nope.ini")])


def test_cli_report_reemission(tmp_path, capsys):
    report = ExperimentReport(kind="demo", columns=["check", "passed"])
    report.add(check="x", passed=True)
    src = report.to_json(tmp_path / "demo.json")
    rc = cli_main(["report", "--input", str(src), "--format", "csv", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "demo.csv").exists()
