"""Dataset generation: layout, manifests, and the exploration grid.

On-disk shape of one dataset (root = output_root/<name>):

    <name>/                    name defaults to <family>-<category_count>
      config.txt               canonical config text + digest (resume guard)
      params.csv               category registry
      manifest.csv             "# fdsl-manifest v1, digest=<hex>" + path,label rows
      00000/00000_0000.png     <label 5 digits>/<label>_<instance 4 digits>.png
      ...

Generation is deterministic end to end: the registry, every image, and
the manifest are pure functions of the config, so reruns are no-ops and
worker count never changes the result.  Resume compares the stored
config digest (mismatch is an error, not an overwrite) and skips image
files that already exist.
"""

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
from PIL import Image

from .augment import DEFAULT_WEIGHT_INTERVAL, enumerate_instances, render_instance
from .baselines import (
    generate_bezier_categories,
    generate_perlin_categories,
    render_bezier,
    render_perlin,
)
from .errors import IntegrityError, InvalidAxisValue
from .registry import (
    format_real,
    read_registry,
    write_baseline_registry,
    write_registry,
)
from .render import RenderConfig
from .rng import MASK64, mix
from .search import SearchConfig, search_categories

FAMILIES = ("fractal", "bezier", "perlin")

# paper-defaults operating point: 256x256, 200k dots, fixed 3x3 patch
DEFAULT_RENDER = RenderConfig(width=256, height=256, point_count=200_000,
                              draw_mode="patch-fix")

MANIFEST_MAGIC = "# fdsl-manifest v1"
_PNG_COMPRESS_LEVEL = 1


@dataclass(frozen=True)
class DatasetConfig:
    """Everything that determines a dataset's bytes, plus run knobs.

    worker_count and output_root affect speed and placement only; they
    are excluded from the config digest.
    """

    family: str
    category_count: int
    instances_per_category: int
    output_root: str | os.PathLike = "."
    render: RenderConfig = field(default=DEFAULT_RENDER)
    search: SearchConfig | None = None
    weight_interval: float = DEFAULT_WEIGHT_INTERVAL
    global_seed: int = 0
    worker_count: int = 1
    name: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        if self.category_count < 1 or self.instances_per_category < 1:
            raise ValueError("category and instance counts must be positive")
        if self.worker_count < 1:
            raise ValueError("worker_count must be positive")
        object.__setattr__(self, "global_seed", self.global_seed & MASK64)
        if self.family == "fractal" and self.search is None:
            object.__setattr__(self, "search", SearchConfig(
                category_count=self.category_count, seed=self.global_seed))
        if self.family == "fractal" and self.search.category_count != self.category_count:
            raise ValueError("search.category_count must match category_count")

    @property
    def dataset_name(self) -> str:
        return self.name or f"{self.family}-{self.category_count}"

    @property
    def dataset_dir(self) -> Path:
        return Path(self.output_root) / self.dataset_name

    def canonical_text(self) -> str:
        """Stable text form of the dataset-defining fields."""
        r = self.render
        lines = [
            f"family={self.family}",
            f"categories={self.category_count}",
            f"instances={self.instances_per_category}",
            f"render={r.width}x{r.height},{r.point_count},{r.draw_mode}",
            f"pattern_seed={r.pattern_seed}",
            f"margin={format_real(r.margin)}",
            f"values={r.pixel_value}/{r.background_value}",
            f"global_seed={self.global_seed}",
        ]
        if self.family == "fractal":
            s = self.search
            c = s.canonical_render
            lines += [
                f"weight_interval={format_real(self.weight_interval)}",
                f"search_seed={s.seed}",
                f"search_render={c.width}x{c.height},{c.point_count},{c.draw_mode}",
                f"r_window={format_real(s.r_min)},{format_real(s.r_max)}",
                f"n_choices={','.join(str(n) for n in s.n_choices)}",
                f"param_range={format_real(s.param_range[0])},{format_real(s.param_range[1])}",
            ]
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return fnv1a64(self.canonical_text())


@dataclass(frozen=True)
class DatasetManifest:
    """The (relative_path, label) table of one dataset."""

    digest: str
    records: tuple[tuple[str, int], ...]


def fnv1a64(text: str) -> str:
    """64-bit FNV-1a of the UTF-8 bytes, as 16 hex digits."""
    h = 0xCBF29CE484222325
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & MASK64
    return f"{h:016x}"


def write_png(path: Path, img: np.ndarray) -> None:
    """Encode an 8-bit grayscale PNG with pinned options so identical
    pixels give identical bytes.  The write lands via os.replace so an
    interrupted run never leaves a partial file behind."""
    buf = io.BytesIO()
    Image.fromarray(img, mode="L").save(buf, format="PNG", optimize=False,
                                        compress_level=_PNG_COMPRESS_LEVEL)
    tmp = path.with_name(f".{path.name}.{os.getpid()}.tmp")
    tmp.write_bytes(buf.getvalue())
    os.replace(tmp, path)


def read_png(path: Path) -> np.ndarray:
    with Image.open(path) as im:
        return np.asarray(im.convert("L"))


def image_relpath(label: int, instance: int) -> str:
    return f"{label:05d}/{label:05d}_{instance:04d}.png"


def write_manifest(path: Path, manifest: DatasetManifest) -> None:
    lines = [f"{MANIFEST_MAGIC}, digest={manifest.digest}"]
    lines += [f"{rel},{label}" for rel, label in manifest.records]
    path.write_text("\n".join(lines) + "\n")


def read_manifest(path: Path) -> DatasetManifest:
    if not path.is_file():
        raise IntegrityError(f"no manifest at {path}")
    lines = path.read_text().splitlines()
    head = lines[0] if lines else ""
    prefix = f"{MANIFEST_MAGIC}, digest="
    if not head.startswith(prefix):
        raise IntegrityError(f"{path}: bad manifest header {head!r}")
    records = []
    for line in lines[1:]:
        if not line.strip():
            continue
        rel, _, label = line.rpartition(",")
        records.append((rel, int(label)))
    return DatasetManifest(digest=head[len(prefix):], records=tuple(records))


def _file_ok(path: Path) -> bool:
    """True for a present, non-empty file (a zero-byte file is an
    interrupted write and must be redone)."""
    try:
        return path.stat().st_size > 0
    except OSError:
        return False


def _check_resume_marker(cfg: DatasetConfig) -> None:
    marker = cfg.dataset_dir / "config.txt"
    text = cfg.canonical_text() + f"digest={cfg.digest()}\n"
    if marker.exists():
        if marker.read_text() != text:
            raise IntegrityError(
                f"{cfg.dataset_dir} was generated from a different config; "
                f"refusing to mix datasets")
    else:
        marker.parent.mkdir(parents=True, exist_ok=True)
        marker.write_text(text)


def _fractal_categories(cfg: DatasetConfig) -> list:
    specs = search_categories(cfg.search, workers=cfg.worker_count)
    write_registry(cfg.dataset_dir / "params.csv", specs, cfg.search.seed,
                   cfg.search.canonical_render)
    return specs


def _baseline_categories(cfg: DatasetConfig) -> list:
    if cfg.family == "bezier":
        cats = generate_bezier_categories(cfg.category_count, cfg.global_seed)
        rows = [(c.category_id, c.control_point_count, c.stroke_count,
                 c.thickness, c.seed) for c in cats]
        names = ["category_id", "control_point_count", "stroke_count",
                 "thickness", "seed"]
    else:
        cats = generate_perlin_categories(cfg.category_count, cfg.global_seed)
        rows = [(c.category_id, c.freq_x, c.freq_y, c.octaves, c.threshold,
                 c.seed) for c in cats]
        names = ["category_id", "freq_x", "freq_y", "octaves", "threshold",
                 "seed"]
    write_baseline_registry(cfg.dataset_dir / "params.csv", cfg.family,
                            names, rows)
    return cats


def _render_category(cfg: DatasetConfig, category) -> int:
    """Render every missing instance image of one category; returns the
    number of images actually written."""
    out_dir = cfg.dataset_dir / f"{category.category_id:05d}"
    out_dir.mkdir(parents=True, exist_ok=True)
    written = 0
    if cfg.family == "fractal":
        instances = enumerate_instances(category, cfg.instances_per_category,
                                        cfg.weight_interval)
    else:
        instances = range(cfg.instances_per_category)
    for inst in instances:
        instance_id = inst if isinstance(inst, int) else inst.instance_id
        path = cfg.dataset_dir / image_relpath(category.category_id, instance_id)
        if _file_ok(path):
            continue
        if cfg.family == "fractal":
            img = render_instance(category, inst, cfg.render)
        elif cfg.family == "bezier":
            img = render_bezier(category, mix(category.seed, instance_id),
                                cfg.render)
        else:
            img = render_perlin(category, mix(category.seed, instance_id),
                                cfg.render)
        write_png(path, img)
        written += 1
    return written


def generate_dataset(cfg: DatasetConfig) -> DatasetManifest:
    """Produce (or resume) a dataset; returns its manifest.

    Idempotent: a complete dataset returns its manifest without touching
    any file.  A directory generated from a different config raises
    IntegrityError instead of being overwritten.
    """
    root = cfg.dataset_dir
    _check_resume_marker(cfg)

    records = tuple((image_relpath(label, j), label)
                    for label in range(cfg.category_count)
                    for j in range(cfg.instances_per_category))
    manifest = DatasetManifest(digest=cfg.digest(), records=records)

    manifest_path = root / "manifest.csv"
    if manifest_path.is_file():
        existing = read_manifest(manifest_path)
        if existing == manifest and all(
                _file_ok(root / rel) for rel, _ in records):
            return existing

    if cfg.family == "fractal":
        categories = _fractal_categories(cfg)
    else:
        categories = _baseline_categories(cfg)

    if cfg.worker_count <= 1:
        for category in categories:
            _render_category(cfg, category)
    else:
        with ThreadPoolExecutor(max_workers=cfg.worker_count) as pool:
            jobs = [pool.submit(_render_category, cfg, c) for c in categories]
            for job in jobs:
                job.result()

    write_manifest(manifest_path, manifest)
    return manifest


@dataclass(frozen=True)
class DatasetStats:
    """Summary of a generated dataset, from its metadata and files."""

    digest: str
    family: str
    category_count: int
    image_count: int
    images_per_category: dict[int, int]
    canonical_fill_min: float | None
    canonical_fill_mean: float | None
    canonical_fill_max: float | None


def dataset_stats(root) -> DatasetStats:
    """Validate a dataset directory and summarize it.

    Every manifest path must exist on disk; canonical filling-rate
    statistics come from the registry (fractal datasets only).
    """
    root = Path(root)
    manifest = read_manifest(root / "manifest.csv")
    per_category: dict[int, int] = {}
    for rel, label in manifest.records:
        if not (root / rel).is_file():
            raise IntegrityError(f"missing image {rel}")
        per_category[label] = per_category.get(label, 0) + 1

    params = root / "params.csv"
    if not params.is_file():
        raise IntegrityError(f"no registry at {params}")
    first = params.read_text().split("\n", 1)[0]
    fill_min = fill_mean = fill_max = None
    if "family=" in first:
        family = first.rsplit("family=", 1)[1].strip()
    else:
        family = "fractal"
        _, _, specs = read_registry(params)
        rates = [s.canonical_filling_rate for s in specs]
        fill_min, fill_max = min(rates), max(rates)
        fill_mean = sum(rates) / len(rates)
    return DatasetStats(
        digest=manifest.digest, family=family,
        category_count=len(per_category),
        image_count=len(manifest.records),
        images_per_category=per_category,
        canonical_fill_min=fill_min, canonical_fill_mean=fill_mean,
        canonical_fill_max=fill_max)


# Exploration axes: one dataset config per value, everything else at the
# defaults above.  Domains follow the parameter sets studied in the
# source experiments; both 724 and 764 appear in print for the fourth
# image size, so both are admitted.
EXPLORATION_DOMAINS = {
    "category": (16, 32, 64, 128, 256, 512, 1000),
    "instance": (16, 32, 64, 128, 256, 512, 1000),
    "patch_mode": ("point", "patch-random", "patch-fix"),
    "filling_rate": (0.05, 0.10, 0.15, 0.20, 0.25),
    "weight_interval": (0.1, 0.2, 0.3, 0.4, 0.5),
    "dot_count": (100_000, 200_000, 400_000, 800_000),
    "image_size": (256, 362, 512, 724, 764, 1024),
}

_EXPLORE_DEFAULTS = dict(category_count=1000, instances_per_category=1000)


def run_exploration_grid(axis: str, values, output_root=".",
                         global_seed: int = 0,
                         base: dict | None = None) -> list[DatasetConfig]:
    """One DatasetConfig per value of one exploration axis.

    `base` can shrink the off-axis defaults (e.g. desk-scale counts);
    outputs are named "<axis>=<value>".
    """
    if axis not in EXPLORATION_DOMAINS:
        raise InvalidAxisValue(f"unknown axis {axis!r}")
    domain = EXPLORATION_DOMAINS[axis]
    configs = []
    for value in values:
        if value not in domain:
            raise InvalidAxisValue(f"{value!r} outside {axis} domain {domain}")
        fields = dict(_EXPLORE_DEFAULTS)
        fields.update(base or {})
        render = fields.pop("render", DEFAULT_RENDER)
        search_kw = {}
        if axis == "category":
            fields["category_count"] = value
        elif axis == "instance":
            fields["instances_per_category"] = value
        elif axis == "patch_mode":
            render = render.with_mode(value)
        elif axis == "filling_rate":
            # a window axis value v means the band [v, v + 0.05]
            search_kw = dict(r_min=value, r_max=round(value + 0.05, 10))
        elif axis == "weight_interval":
            fields["weight_interval"] = value
        elif axis == "dot_count":
            render = replace(render, point_count=value)
        elif axis == "image_size":
            render = replace(render, width=value, height=value)
        cfg = DatasetConfig(family="fractal", render=render,
                            output_root=output_root, global_seed=global_seed,
                            name=f"{axis}={value}", **fields)
        if search_kw:
            cfg = replace(cfg, search=replace(cfg.search, **search_kw))
        configs.append(cfg)
    return configs
