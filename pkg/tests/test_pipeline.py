import csv
import json

import pytest

from attacklab import cli, pipeline
from attacklab.errors import InfeasibleTrapError, StageError
from attacklab.export import CSV_COLUMNS, export_trace, read_trace_jsonl
from attacklab.scenario import builtin
from attacklab.trace import AttackOutcome


@pytest.fixture(scope="module")
def learned_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("diagonal")
    art = pipeline.run_pipeline(builtin("diagonal"), pipeline.STAGES, "shortest", out)
    return out, art


def test_every_stage_leaves_its_artifact(learned_run):
    out, art = learned_run
    for name in ("scenario.json", "probe.json", "dataset.jsonl", "model.json", "trace.jsonl", "trace.csv",
                 "summary.json"):
        assert (out / name).exists(), name
    assert art.success


def test_csv_trace_layout(learned_run):
    out, art = learned_run
    rows = list(csv.reader((out / "trace.csv").open()))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == len(art.outcome.trace) + 1
    assert {r[-1] for r in rows[1:]} <= {"0", "1"}


def test_jsonl_round_trip(learned_run):
    out, art = learned_run
    back = read_trace_jsonl(out / "trace.jsonl")
    assert [r.to_dict() for r in back] == [r.to_dict() for r in art.outcome.trace]


def test_short_trace_export(tmp_path, learned_run):
    _, art = learned_run
    three = AttackOutcome(success=False, horizon_h=0, inputs=[], path_length_after_entry=0.0, active_count=0,
                          trace=art.outcome.trace[:3])
    p = export_trace(three, tmp_path / "t.csv", "csv")
    assert len(p.read_text().splitlines()) == 4


def test_attack_without_training_reports_missing_artifact(tmp_path):
    with pytest.raises(StageError) as e:
        pipeline.run_pipeline(builtin("diagonal"), ["attack"], "shortest", tmp_path)
    assert e.value.code == "attack:missing_artifact"


def test_infeasible_trap_is_refused(tmp_path):
    sc = builtin("diagonal")
    sc.trap = (-2.0, 22.0)
    with pytest.raises(StageError) as e:
        pipeline.run_pipeline(sc, ["attack"], "shortest", tmp_path, oracle=True)
    assert isinstance(e.value.cause, InfeasibleTrapError)


def test_trap_on_nominal_path_needs_no_inputs(tmp_path):
    sc = builtin("diagonal")
    sc.trap = (6.75, 7.0)
    art = pipeline.run_pipeline(sc, ["attack"], "handsoff", tmp_path, oracle=True)
    assert art.success and art.summary["active_count"] == 0


def test_stage_seeds_are_distinct_and_stable():
    seeds = [pipeline.stage_seed(7, s) for s in pipeline.STAGES]
    assert len(set(seeds)) == 4
    assert seeds == [pipeline.stage_seed(7, s) for s in pipeline.STAGES]


def test_sweep_table_independent_of_workers(tmp_path):
    grid = {"attack.n_samples": [16, 32]}
    one = pipeline.sweep(builtin("diagonal"), grid, 1, out_dir=tmp_path / "a")
    two = pipeline.sweep(builtin("diagonal"), grid, 2, out_dir=tmp_path / "b")
    assert one == two
    assert one.splitlines()[0] == ",".join(pipeline.SWEEP_COLUMNS)
    assert len(one.splitlines()) == 3


def test_cli_run_and_analyze(tmp_path, capsys):
    out = tmp_path / "cli"
    assert cli.main(["attack", "--oracle", "--out-dir", str(out), "--format", "jsonl"]) == cli.EXIT_OK
    text = capsys.readouterr().out
    assert text.startswith("=== attack ===") and "success: True" in text
    assert cli.main(["analyze", "--out-dir", str(out)]) == cli.EXIT_OK
    text = capsys.readouterr().out
    for f in ("trajectory.png", "distance.png", "bounds.csv"):
        assert (out / f).exists()
        assert f in text


def test_cli_errors_are_machine_readable(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert cli.main(["attack", "--scenario", str(bad), "--out-dir", str(tmp_path)]) == cli.EXIT_ERROR
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "validation"


def test_out_dir_environment_override(tmp_path, monkeypatch):
    monkeypatch.setenv(pipeline.OUT_ENV, str(tmp_path / "env"))
    assert pipeline.resolve_out_dir("ignored") == tmp_path / "env"
