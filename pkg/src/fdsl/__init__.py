"""fdsl: formula-driven synthetic image datasets.

Generates labeled image datasets from mathematical formulas alone: random
iterated function systems rendered by the chaos game, plus Bezier-curve
and Perlin-noise comparison sets.  No natural images anywhere.
"""

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
from .ifs import (
    AffineMap,
    IfsSystem,
    IterationConfig,
    compute_probabilities,
    iterate,
    sierpinski_system,
)
from .render import RenderConfig, filling_rate, normalize_points, rasterize, render_system
from .registry import read_registry, write_registry
from .rng import Rng, mix
from .search import (
    CANONICAL_RENDER,
    CategorySpec,
    SearchConfig,
    canonical_seed,
    sample_system,
    search_categories,
)
from .augment import (
    InstanceSpec,
    WeightConfig,
    apply_weight,
    enumerate_instances,
    instance_grid_shape,
    render_instance,
    weight_values,
)
from .baselines import (
    BezierCategory,
    PerlinCategory,
    generate_bezier_categories,
    generate_perlin_categories,
    perlin_field,
    render_bezier,
    render_perlin,
)
from .pipeline import (
    DEFAULT_RENDER,
    EXPLORATION_DOMAINS,
    DatasetConfig,
    DatasetManifest,
    DatasetStats,
    dataset_stats,
    generate_dataset,
    read_manifest,
    run_exploration_grid,
)

__version__ = "0.1.0"
