"""Command-line front end.

Subcommands: search, generate, stats, explore, baseline, bench.  Every
failure exits nonzero after printing one machine-readable line to
stderr, "error code=<slug> ..."; successful commands print key=value
summary lines to stdout.  FDSL_WORKERS overrides --workers when set.
"""

import argparse
import os
import sys
import tempfile
import time
from dataclasses import replace
from pathlib import Path

from .errors import (
    DegenerateSystem,
    Diverged,
    EmptyCloud,
    ExhaustedRetries,
    FdslError,
    IntegrityError,
    InvalidAxisValue,
    InvalidCount,
    SearchTimeout,
)
from .pipeline import (
    DEFAULT_RENDER,
    DatasetConfig,
    dataset_stats,
    generate_dataset,
    run_exploration_grid,
    write_png,
)
from .render import DRAW_MODES, RenderConfig
from .search import SearchConfig, search_categories
from .registry import write_registry
from .augment import DEFAULT_WEIGHT_INTERVAL, enumerate_instances, render_instance

_ERROR_SLUGS = {
    SearchTimeout: "search-timeout",
    IntegrityError: "integrity",
    InvalidAxisValue: "invalid-axis",
    InvalidCount: "invalid-count",
    Diverged: "diverged",
    ExhaustedRetries: "exhausted-retries",
    DegenerateSystem: "degenerate",
    EmptyCloud: "empty-cloud",
}


def _error_line(exc: Exception) -> str:
    slug = _ERROR_SLUGS.get(type(exc))
    if slug is None:
        slug = "error" if isinstance(exc, FdslError) else "invalid-argument"
    extra = ""
    if isinstance(exc, SearchTimeout):
        extra = f" attempts={exc.attempts} accepted={exc.accepted}"
    return f'error code={slug}{extra} msg="{exc}"'


def _workers(args) -> int:
    env = os.environ.get("FDSL_WORKERS")
    return int(env) if env else args.workers


def _render_from(args) -> RenderConfig:
    return RenderConfig(width=args.size, height=args.size,
                        point_count=args.dots, draw_mode=args.draw)


def _add_common(sub, out_required=True):
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--workers", type=int, default=1)
    if out_required:
        sub.add_argument("--out", required=True)


def _add_render_flags(sub):
    sub.add_argument("--size", type=int, default=DEFAULT_RENDER.width)
    sub.add_argument("--dots", type=int, default=DEFAULT_RENDER.point_count)
    sub.add_argument("--draw", choices=DRAW_MODES, default=DEFAULT_RENDER.draw_mode)


def _add_window_flags(sub):
    sub.add_argument("--rmin", type=float, default=SearchConfig(1).r_min)
    sub.add_argument("--rmax", type=float, default=SearchConfig(1).r_max)


def _cmd_search(args) -> int:
    cfg = SearchConfig(category_count=args.categories, seed=args.seed,
                       r_min=args.rmin, r_max=args.rmax,
                       max_attempts=args.max_attempts)
    specs = search_categories(cfg, workers=_workers(args))
    write_registry(args.out, specs, cfg.seed, cfg.canonical_render)
    rates = [s.canonical_filling_rate for s in specs]
    print(f"ok command=search categories={len(specs)} out={args.out} "
          f"fill_min={min(rates):.4f} fill_max={max(rates):.4f}")
    return 0


def _dataset_config(args, family) -> DatasetConfig:
    render = _render_from(args)
    search = None
    if family == "fractal":
        search = SearchConfig(category_count=args.categories, seed=args.seed,
                              r_min=args.rmin, r_max=args.rmax)
    interval = getattr(args, "weight_interval", DEFAULT_WEIGHT_INTERVAL)
    return DatasetConfig(family=family, category_count=args.categories,
                         instances_per_category=args.instances,
                         output_root=args.out, render=render, search=search,
                         weight_interval=interval,
                         global_seed=args.seed, worker_count=_workers(args))


def _run_dataset(cfg: DatasetConfig) -> int:
    manifest = generate_dataset(cfg)
    print(f"ok command=generate dataset={cfg.dataset_dir} "
          f"images={len(manifest.records)} digest={manifest.digest}")
    return 0


def _cmd_generate(args) -> int:
    return _run_dataset(_dataset_config(args, args.family))


def _cmd_baseline(args) -> int:
    return _run_dataset(_dataset_config(args, args.family))


def _cmd_stats(args) -> int:
    st = dataset_stats(args.root)
    print(f"digest={st.digest}")
    print(f"family={st.family}")
    print(f"categories={st.category_count}")
    print(f"images={st.image_count}")
    counts = sorted(st.images_per_category.values())
    print(f"instances_min={counts[0]}")
    print(f"instances_max={counts[-1]}")
    if st.canonical_fill_mean is not None:
        print(f"fill_min={st.canonical_fill_min:.6f}")
        print(f"fill_mean={st.canonical_fill_mean:.6f}")
        print(f"fill_max={st.canonical_fill_max:.6f}")
    return 0


_AXIS_PARSERS = {
    "category": int, "instance": int, "dot_count": int, "image_size": int,
    "filling_rate": float, "weight_interval": float, "patch_mode": str,
}


def _cmd_explore(args) -> int:
    parse = _AXIS_PARSERS.get(args.axis)
    if parse is None:
        raise InvalidAxisValue(f"unknown axis {args.axis!r}")
    values = [parse(tok) for tok in args.values.split(",") if tok]
    base = dict(category_count=args.categories,
                instances_per_category=args.instances,
                render=_render_from(args))
    configs = run_exploration_grid(args.axis, values, output_root=args.out,
                                   global_seed=args.seed, base=base)
    workers = _workers(args)
    for cfg in configs:
        manifest = generate_dataset(replace(cfg, worker_count=workers))
        print(f"ok command=explore dataset={cfg.dataset_dir} "
              f"images={len(manifest.records)}")
    return 0


def _cmd_bench(args) -> int:
    search = SearchConfig(category_count=1, seed=args.seed)
    t0 = time.perf_counter()
    category = search_categories(search)[0]
    search_ms = (time.perf_counter() - t0) * 1000.0
    render = _render_from(args)
    instances = enumerate_instances(category, args.images)
    with tempfile.TemporaryDirectory() as tmp:
        t0 = time.perf_counter()
        for inst in instances:
            img = render_instance(category, inst, render)
            write_png(Path(tmp) / f"{inst.instance_id:04d}.png", img)
        elapsed = time.perf_counter() - t0
    rate = len(instances) / elapsed
    print(f"ok command=bench images={len(instances)} "
          f"images_per_sec={rate:.2f} ms_per_image={1000.0 * elapsed / len(instances):.3f} "
          f"search_ms={search_ms:.1f} size={render.width} dots={render.point_count} "
          f"draw={render.draw_mode}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdsl")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("search", help="find categories, write a registry")
    p.add_argument("--categories", type=int, required=True)
    _add_window_flags(p)
    p.add_argument("--max-attempts", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_search)

    p = subs.add_parser("generate", help="generate a dataset")
    p.add_argument("--family", choices=("fractal", "bezier", "perlin"),
                   default="fractal")
    p.add_argument("--categories", type=int, required=True)
    p.add_argument("--instances", type=int, required=True)
    _add_render_flags(p)
    _add_window_flags(p)
    p.add_argument("--weight-interval", type=float,
                   default=DEFAULT_WEIGHT_INTERVAL)
    _add_common(p)
    p.set_defaults(func=_cmd_generate)

    p = subs.add_parser("stats", help="validate and summarize a dataset")
    p.add_argument("root")
    p.set_defaults(func=_cmd_stats)

    p = subs.add_parser("explore", help="generate datasets along one axis")
    p.add_argument("--axis", required=True)
    p.add_argument("--values", required=True,
                   help="comma-separated axis values")
    p.add_argument("--categories", type=int, default=1000)
    p.add_argument("--instances", type=int, default=1000)
    _add_render_flags(p)
    _add_common(p)
    p.set_defaults(func=_cmd_explore)

    p = subs.add_parser("baseline", help="generate a contrast-family dataset")
    p.add_argument("family", choices=("bezier", "perlin"))
    p.add_argument("--categories", type=int, required=True)
    p.add_argument("--instances", type=int, required=True)
    _add_render_flags(p)
    _add_common(p)
    p.set_defaults(func=_cmd_baseline)

    p = subs.add_parser("bench", help="measure render throughput")
    p.add_argument("--images", type=int, default=100)
    _add_render_flags(p)
    _add_common(p, out_required=False)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FdslError, ValueError, OSError) as exc:
        print(_error_line(exc), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
