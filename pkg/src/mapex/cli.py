"""Command line front end: gen / run / bench / eval-predictor."""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import grid as g
from .mission import (BENCH_COLUMNS, MissionConfig, evaluate_f1_curve,
                      resolve_predictor, run_benchmark, run_mission,
                      summarize_benchmark, write_csv)
from .predictor import ThresholdConfig
from .sensing import SensorRig
from .worldgen import GeneratorConfig, generate_floorplan


def _load_config_defaults(path) -> dict:
    return {k.replace("-", "_"): v for k, v in g.load_metadata(path).items()}


def _add_common(p):
    p.add_argument("--config", help="key=value file supplying argument defaults")
    p.add_argument("--seed", type=int, default=0)


def _add_mission_args(p):
    p.add_argument("--planner", choices=("random", "nearest", "cost-utility"),
                   default="nearest")
    p.add_argument("--predictor", default="null",
                   help="none | null | oracle | learned:PATH")
    p.add_argument("--delta-free", type=float, default=0.93)
    p.add_argument("--delta-obstacle", type=float, default=0.95)
    p.add_argument("--coverage-goal", type=float, default=0.98)
    p.add_argument("--beams", type=int, default=16)
    p.add_argument("--beam-range", type=float, default=20.0)
    p.add_argument("--step-cap", type=int, default=None)
    p.add_argument("--no-failsafe", action="store_true")


def _mission_config(args) -> MissionConfig:
    return MissionConfig(
        planner=args.planner,
        thresholds=ThresholdConfig(args.delta_free, args.delta_obstacle),
        coverage_goal=args.coverage_goal,
        rig=SensorRig(beam_count=args.beams, angular_spacing_deg=360.0 / args.beams,
                      range_cells=args.beam_range),
        seed=args.seed,
        step_cap=args.step_cap,
        failsafe=not args.no_failsafe,
    )


def _load_maps(path):
    """All .grid files in a directory, or one file, as (map_id, grid) pairs."""
    if os.path.isdir(path):
        names = sorted(f for f in os.listdir(path) if f.endswith(".grid"))
        if not names:
            raise SystemExit(f"no .grid files in {path}")
        return [(name[:-5], g.read_grid_file(os.path.join(path, name))) for name in names]
    return [(os.path.basename(path).removesuffix(".grid"), g.read_grid_file(path))]


def cmd_gen(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    for i in range(args.count):
        cfg = GeneratorConfig(seed=args.seed + i, height=args.height, width=args.width,
                              min_room_side=args.min_room_side, door_width=args.door_width,
                              split_depth_range=(args.depth_min, args.depth_max))
        grid = generate_floorplan(cfg)
        stem = os.path.join(args.out, f"map_{cfg.seed:05d}")
        g.write_grid_file(stem + ".grid", grid)
        g.write_metadata(stem + ".meta", {
            "seed": cfg.seed, "height": cfg.height, "width": cfg.width,
            "min_room_side": cfg.min_room_side, "door_width": cfg.door_width,
            "split_depth_range": f"{args.depth_min}..{args.depth_max}",
            "fraction_of_walls": f"{g.fraction_of_walls(grid):.6f}",
        })
    print(f"wrote {args.count} maps to {args.out}")
    return 0


def cmd_run(args) -> int:
    truth = g.read_grid_file(args.map)
    cfg = _mission_config(args)
    predictor = resolve_predictor(args.predictor, truth)
    rec = run_mission(truth, predictor, cfg)
    for i, s in enumerate(rec.steps):
        print(f"step={i} pose={s.pose[0]},{s.pose[1]} path_length={s.path_length:.4f} "
              f"coverage={s.coverage:.4f} frontier={s.frontier_size}")
    print(f"final path_length={rec.path_length:.4f} steps={rec.step_count} "
          f"coverage={rec.coverage:.4f} f1={rec.f1:.4f} precision={rec.precision:.4f} "
          f"recall={rec.recall:.4f} success={rec.success} cause={rec.cause}")
    return 0 if rec.success else 2


def cmd_bench(args) -> int:
    maps = _load_maps(args.maps)
    cfg = _mission_config(args)
    rows = run_benchmark(maps, planners=args.planners.split(","),
                         predictors=args.predictors.split(","), cfg=cfg,
                         dataset=args.dataset, random_runs=args.random_runs,
                         workers=args.workers)
    write_csv(args.out, rows, BENCH_COLUMNS)
    summary = summarize_benchmark(rows)
    if args.summary_out:
        write_csv(args.summary_out, summary)
    for cell in summary:
        print(f"{cell['dataset']} {cell['planner']}+{cell['predictor']}: "
              f"mean={cell['mean_time']:.1f} median={cell['median_time']:.1f} "
              f"reduction={cell['mean_reduction']:+.1%} success={cell['success_rate']:.0%}")
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_eval_predictor(args) -> int:
    maps = _load_maps(args.maps)
    counts = tuple(int(x) for x in args.counts.split(","))
    rows = evaluate_f1_curve(
        maps, args.predictor, counts=counts,
        thresholds=ThresholdConfig(args.delta_free, args.delta_obstacle),
        rig=SensorRig(beam_count=args.beams, angular_spacing_deg=360.0 / args.beams,
                      range_cells=args.beam_range),
        seed=args.seed)
    write_csv(args.out, rows)
    by_n: dict = {}
    for r in rows:
        by_n.setdefault(r["observations"], []).append(r)
    for n, rs in sorted(by_n.items()):
        base = np.mean([r["baseline_f1"] for r in rs])
        pred = np.mean([r["predicted_f1"] for r in rs])
        print(f"observations={n}: baseline_f1={base:.4f} predicted_f1={pred:.4f}")
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mapex",
                                     description="grid-world indoor mapping toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate synthetic floorplans")
    _add_common(p)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--height", type=int, default=64)
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--min-room-side", type=int, default=5)
    p.add_argument("--door-width", type=int, default=2)
    p.add_argument("--depth-min", type=int, default=3)
    p.add_argument("--depth-max", type=int, default=5)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="run a single mapping mission")
    _add_common(p)
    _add_mission_args(p)
    p.add_argument("--map", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="batch benchmark over a map suite")
    _add_common(p)
    _add_mission_args(p)
    p.add_argument("--maps", required=True, help=".grid file or directory")
    p.add_argument("--planners", default="random,nearest,cost-utility")
    p.add_argument("--predictors", default="null")
    p.add_argument("--dataset", default="d1")
    p.add_argument("--random-runs", type=int, default=10)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--summary-out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("eval-predictor", help="F1 vs observation count curve")
    _add_common(p)
    p.add_argument("--maps", required=True)
    p.add_argument("--predictor", default="null")
    p.add_argument("--counts", default="1,2,4,8,16,32")
    p.add_argument("--delta-free", type=float, default=0.93)
    p.add_argument("--delta-obstacle", type=float, default=0.95)
    p.add_argument("--beams", type=int, default=16)
    p.add_argument("--beam-range", type=float, default=20.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval_predictor)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args, remaining = parser.parse_known_args(argv)
    if getattr(args, "config", None):
        defaults = _load_config_defaults(args.config)
        argv_list = list(argv if argv is not None else sys.argv[1:])
        injected = []
        for key, value in defaults.items():
            flag = "--" + key.replace("_", "-")
            if flag not in argv_list:
                injected.extend([flag, value])
        args = parser.parse_args(argv_list[:1] + injected + argv_list[1:])
    elif remaining:
        parser.error(f"unrecognized arguments: {' '.join(remaining)}")
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
