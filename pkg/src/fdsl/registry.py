"""Reading and writing category registries (params.csv).

A fractal registry is a plain-text CSV whose first line identifies the
format, the search seed, and the canonical render:

    fdsl-params v1, seed=<u64>, render=<W>x<H>,<t>,<mode>

Each category then contributes one summary row followed by one row per
map::

    <category_id>,<N>,<seed>,<filling_rate>
    <a>,<b>,<c>,<d>,<e>,<f>,<p>          (N rows)

Baseline registries share the magic but carry a family tag instead:

    fdsl-params v1, family=<bezier|perlin>

All reals are written with 17 significant digits, which round-trips
IEEE doubles exactly; readers rebuild specs bit-for-bit equal to what
was written.
"""

import re
from pathlib import Path

from .errors import IntegrityError
from .ifs import AffineMap, IfsSystem
from .render import RenderConfig
from .search import CategorySpec

MAGIC = "fdsl-params v1"


def format_real(v: float) -> str:
    return format(float(v), ".17g")


def _render_tag(render: RenderConfig) -> str:
    return f"{render.width}x{render.height},{render.point_count},{render.draw_mode}"


def _parse_render_tag(tag: str) -> RenderConfig:
    m = re.fullmatch(r"(\d+)x(\d+),(\d+),([a-z-]+)", tag)
    if m is None:
        raise IntegrityError(f"bad render tag {tag!r}")
    return RenderConfig(width=int(m.group(1)), height=int(m.group(2)),
                        point_count=int(m.group(3)), draw_mode=m.group(4))


def write_registry(path, specs: list[CategorySpec], seed: int,
                   render: RenderConfig) -> None:
    """Write a fractal category registry."""
    lines = [f"{MAGIC}, seed={seed}, render={_render_tag(render)}"]
    for spec in specs:
        lines.append(f"{spec.category_id},{len(spec.system.maps)},{spec.seed},"
                     f"{format_real(spec.canonical_filling_rate)}")
        for m, p in zip(spec.system.maps, spec.system.probs):
            row = (*m.params(), p)
            lines.append(",".join(format_real(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_registry(path) -> tuple[int, RenderConfig, list[CategorySpec]]:
    """Read a fractal registry back; inverse of write_registry, bit-exact."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise IntegrityError(f"{path}: empty registry")
    m = re.fullmatch(rf"{MAGIC}, seed=(\d+), render=(.+)", lines[0])
    if m is None:
        raise IntegrityError(f"{path}: bad registry header {lines[0]!r}")
    seed = int(m.group(1))
    render = _parse_render_tag(m.group(2))

    specs = []
    i = 1
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        head = lines[i].split(",")
        if len(head) != 4:
            raise IntegrityError(f"{path}:{i + 1}: bad category row {lines[i]!r}")
        category_id, n, cat_seed = int(head[0]), int(head[1]), int(head[2])
        rate = float(head[3])
        if i + 1 + n > len(lines):
            raise IntegrityError(f"{path}: truncated category {category_id}")
        maps, probs = [], []
        for row in lines[i + 1:i + 1 + n]:
            vals = [float(v) for v in row.split(",")]
            if len(vals) != 7:
                raise IntegrityError(f"{path}: bad map row {row!r}")
            maps.append(AffineMap(*vals[:6]))
            probs.append(vals[6])
        specs.append(CategorySpec(
            category_id=category_id,
            system=IfsSystem(maps=tuple(maps), probs=tuple(probs)),
            seed=cat_seed, canonical_filling_rate=rate))
        i += 1 + n
    return seed, render, specs


def write_baseline_registry(path, family: str, field_names: list[str],
                            rows: list[tuple]) -> None:
    """Write a baseline registry: header, column names, then value rows."""
    lines = [f"{MAGIC}, family={family}", ",".join(field_names)]
    for row in rows:
        lines.append(",".join(
            format_real(v) if isinstance(v, float) else str(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_baseline_registry(path) -> tuple[str, list[str], list[list[str]]]:
    """Read a baseline registry; values come back as strings."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise IntegrityError(f"{path}: empty registry")
    m = re.fullmatch(rf"{MAGIC}, family=(\w+)", lines[0])
    if m is None:
        raise IntegrityError(f"{path}: bad registry header {lines[0]!r}")
    if len(lines) < 2:
        raise IntegrityError(f"{path}: missing column row")
    names = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:] if line.strip()]
    return m.group(1), names, rows
