import csv
import os

import pytest

from mapex.cli import main
from mapex.grid import UNKNOWN, read_grid_file
from mapex.worldgen import GeneratorConfig, generate_floorplan


def gen_maps(tmp_path, count=2, size=32):
    out = tmp_path / "maps"
    rc = main(["gen", "--out", str(out), "--count", str(count), "--seed", "50",
               "--height", str(size), "--width", str(size)])
    assert rc == 0
    return out


def test_gen_writes_grid_and_metadata(tmp_path):
    out = gen_maps(tmp_path)
    names = sorted(os.listdir(out))
    assert names == ["map_00050.grid", "map_00050.meta",
                     "map_00051.grid", "map_00051.meta"]
    grid = read_grid_file(out / "map_00050.grid")
    assert grid.shape == (32, 32)
    assert not (grid == UNKNOWN).any()
    meta = (out / "map_00050.meta").read_text()
    assert "seed=50" in meta and "height=32" in meta


def test_gen_matches_library_call(tmp_path):
    out = gen_maps(tmp_path, count=1)
    want = generate_floorplan(GeneratorConfig(seed=50, height=32, width=32))
    assert (read_grid_file(out / "map_00050.grid") == want).all()


def test_run_success_exit_code(tmp_path, capsys):
    out = gen_maps(tmp_path, count=1)
    capsys.readouterr()  # drop the gen output
    rc = main(["run", "--map", str(out / "map_00050.grid")])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("step=0 ")
    assert "success=True" in lines[-1] and "cause=goal_reached" in lines[-1]


def test_run_failure_exit_code(tmp_path, capsys):
    out = gen_maps(tmp_path, count=1)
    rc = main(["run", "--map", str(out / "map_00050.grid"), "--step-cap", "2"])
    assert rc == 2
    assert "cause=step_cap" in capsys.readouterr().out


def test_run_missing_map_is_error(capsys):
    rc = main(["run", "--map", "/nonexistent/zzz.grid"])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_bench_writes_csv(tmp_path, capsys):
    maps = gen_maps(tmp_path)
    out_csv = tmp_path / "bench.csv"
    summary_csv = tmp_path / "summary.csv"
    rc = main(["bench", "--maps", str(maps), "--out", str(out_csv),
               "--summary-out", str(summary_csv),
               "--planners", "nearest,random", "--random-runs", "2"])
    assert rc == 0
    with open(out_csv) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2 * 1 + 2 * 2  # nearest once, random twice, per map
    assert rows[0]["planner"] == "nearest"
    assert float(rows[0]["coverage"]) >= 0.98
    with open(summary_csv) as fh:
        summary = list(csv.DictReader(fh))
    assert {r["planner"] for r in summary} == {"nearest", "random"}
    assert "reduction=" in capsys.readouterr().out


def test_eval_predictor_writes_csv(tmp_path, capsys):
    maps = gen_maps(tmp_path, count=1)
    out_csv = tmp_path / "eval.csv"
    rc = main(["eval-predictor", "--maps", str(maps), "--predictor", "oracle",
               "--counts", "1,2", "--out", str(out_csv)])
    assert rc == 0
    with open(out_csv) as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2
    assert all(float(r["predicted_f1"]) == 1.0 for r in rows)
    assert "observations=1:" in capsys.readouterr().out


def test_config_file_supplies_defaults(tmp_path):
    cfg = tmp_path / "gen.conf"
    cfg.write_text("count=2\nheight=32\nwidth=32\nseed=50\n")
    out = tmp_path / "maps"
    rc = main(["gen", "--config", str(cfg), "--out", str(out)])
    assert rc == 0
    assert sorted(os.listdir(out))[0] == "map_00050.grid"
    assert len(os.listdir(out)) == 4


def test_explicit_flag_beats_config_default(tmp_path):
    cfg = tmp_path / "gen.conf"
    cfg.write_text("count=3\nheight=32\nwidth=32\n")
    out = tmp_path / "maps"
    rc = main(["gen", "--config", str(cfg), "--out", str(out), "--count", "1"])
    assert rc == 0
    assert len([f for f in os.listdir(out) if f.endswith(".grid")]) == 1


def test_unknown_argument_rejected(tmp_path):
    with pytest.raises(SystemExit):
        main(["gen", "--out", str(tmp_path), "--bogus", "1"])
