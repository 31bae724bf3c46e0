"""Intra-category augmentation: weights, flips, and patch variants.

Each category expands into a deterministic grid of instances.  One
instance is one (weight, flip, patch_variant) tuple:

* weight: multiply a single parameter component (one of a..f) in every
  map by a factor, or leave the system alone (Identity);
* flip: mirror the finished raster horizontally, vertically, or both;
* patch_variant: reseed the 3x3 patch pattern used while drawing.

The default factor set comes from spacing weights at interval 0.4
around 1.0, giving {0.2, 0.6, 1.0, 1.4, 1.8}; with Identity covering
the 1.0 column once, the weight axis has 1 + 6 x 4 = 25 entries.  With
4 flips that makes 100 tuples per patch variant, so 1000 instances is
exactly 10 patch variants.  Instance 0 is always (Identity, no flip,
variant 0) and reproduces the category's plain rendering bit for bit.
"""

from dataclasses import dataclass

import numpy as np

from .errors import Diverged, InvalidCount
from .ifs import AffineMap, IfsSystem, compute_probabilities
from .render import RenderConfig, flip_image, render_system
from .rng import mix
from .search import CategorySpec

PARAM_NAMES = ("a", "b", "c", "d", "e", "f")
FLIPS = ("none", "horizontal", "vertical", "both")
DEFAULT_WEIGHT_INTERVAL = 0.4

# Weighted systems can lose contractivity; shrink the weight toward 1.0
# and retry this many times before giving up and rendering unweighted.
_FALLBACK_RETRIES = 8

# Salt separating the patch-pattern seed stream from instance seeds.
_PATCH_STREAM = 0x70617463


def weight_values(interval: float) -> tuple[float, ...]:
    """Factor set {1-2i, 1-i, 1, 1+i, 1+2i}, zeros nudged to 0.01.

    Rounded to 10 decimals so decimal intervals give the exact decimal
    factors they name (0.4 gives 0.2, not 0.19999...96).
    """
    if interval <= 0:
        raise ValueError("interval must be positive")
    return tuple(max(round(1.0 + k * interval, 10), 0.01)
                 for k in (-2, -1, 0, 1, 2))


@dataclass(frozen=True)
class WeightConfig:
    """One parameter-weighting step: scale component `target` by `factor`.

    target None means Identity (no change); then factor must be 1.
    """

    target: int | None
    factor: float

    def __post_init__(self):
        if self.target is None:
            if self.factor != 1.0:
                raise ValueError("Identity weight must have factor 1.0")
        else:
            if not 0 <= self.target <= 5:
                raise ValueError("target must be a parameter index 0..5")
            if not self.factor > 0:
                raise ValueError("factor must be positive")

    @classmethod
    def identity(cls) -> "WeightConfig":
        return cls(target=None, factor=1.0)

    @property
    def is_identity(self) -> bool:
        return self.target is None


@dataclass(frozen=True)
class InstanceSpec:
    """One instance of a category: its augmentation tuple and seed."""

    category_id: int
    instance_id: int
    weight: WeightConfig
    flip: str
    patch_variant: int
    seed: int


def apply_weight(system: IfsSystem, weight: WeightConfig) -> IfsSystem:
    """Scale one parameter component in every map; reweigh probabilities.

    Probabilities are recomputed from the new determinants, so weighting
    a..d shifts the map-selection law along with the geometry.
    """
    if weight.is_identity:
        return system
    maps = []
    for m in system.maps:
        params = list(m.params())
        params[weight.target] *= weight.factor
        maps.append(AffineMap(*params))
    return IfsSystem(tuple(maps), tuple(compute_probabilities(maps)))


def instance_grid_shape(instances_per_category: int,
                        weight_interval: float = DEFAULT_WEIGHT_INTERVAL
                        ) -> tuple[list[WeightConfig], tuple[str, ...], int]:
    """The (weights, flips, patch_variant_count) axes for a given count."""
    if instances_per_category < 1:
        raise InvalidCount(f"instances_per_category must be >= 1, "
                           f"got {instances_per_category}")
    weights = [WeightConfig.identity()]
    off_center = [v for v in weight_values(weight_interval) if v != 1.0]
    for idx in range(6):
        for v in off_center:
            weights.append(WeightConfig(target=idx, factor=v))
    per_variant = len(weights) * len(FLIPS)
    variants = -(-instances_per_category // per_variant)
    return weights, FLIPS, variants


def enumerate_instances(category: CategorySpec, instances_per_category: int,
                        weight_interval: float = DEFAULT_WEIGHT_INTERVAL
                        ) -> list[InstanceSpec]:
    """The first `instances_per_category` tuples of the augmentation grid.

    Grid order is (weight, flip, patch_variant) lexicographic with the
    axes of instance_grid_shape; the patch axis is sized to the count,
    so the grid for 1000 is 25 x 4 x 10.  Instance 0 is always
    (Identity, no flip, variant 0); instance j's seed is
    mix(category.seed, j).
    """
    weights, flips, variants = instance_grid_shape(
        instances_per_category, weight_interval)
    specs = []
    for w in weights:
        for flip in flips:
            for v in range(variants):
                instance_id = len(specs)
                if instance_id >= instances_per_category:
                    return specs
                specs.append(InstanceSpec(
                    category_id=category.category_id,
                    instance_id=instance_id,
                    weight=w, flip=flip, patch_variant=v,
                    seed=mix(category.seed, instance_id)))
    return specs


def patch_seed(category_seed: int, patch_variant: int) -> int:
    """Pattern seed of a patch variant; variant 0 never reaches here."""
    return mix(mix(category_seed, _PATCH_STREAM), patch_variant)


def render_instance(category: CategorySpec, inst: InstanceSpec,
                    cfg: RenderConfig) -> np.ndarray:
    """Render one instance: weight, iterate, rasterize, then flip.

    Patch variant 0 keeps cfg's own pattern seeds, which makes instance
    0 bit-identical to render_system of the unweighted category.  If the
    weighted system diverges, the factor's deviation from 1.0 is halved
    and the render retried; after _FALLBACK_RETRIES halvings the weight
    is dropped entirely.  The unweighted system is the accepted category,
    which by construction rendered without diverging at acceptance time.
    """
    if inst.patch_variant > 0:
        variant_seed = patch_seed(category.seed, inst.patch_variant)
        eff_cfg = cfg.with_mode(cfg.draw_mode, pattern_seed=variant_seed)
        rng_seed = variant_seed
    else:
        eff_cfg = cfg
        rng_seed = 0

    weight = inst.weight
    for _ in range(_FALLBACK_RETRIES + 1):
        try:
            img = render_system(apply_weight(category.system, weight),
                                eff_cfg, inst.seed, patch_rng_seed=rng_seed)
            break
        except Diverged:
            if weight.is_identity:
                raise
            factor = 1.0 + (weight.factor - 1.0) / 2.0
            weight = WeightConfig(target=weight.target, factor=factor)
    else:
        img = render_system(category.system, eff_cfg, inst.seed,
                            patch_rng_seed=rng_seed)
    return flip_image(img, inst.flip)
