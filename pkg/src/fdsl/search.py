"""Rejection-sampling search for fractal categories.

A category is an affine IFS whose canonical rendering covers an
acceptable fraction of the image.  The search draws random systems,
renders each one the same way every time (the canonical render), and
keeps those whose filling rate lands inside the configured window.

Seeding discipline
------------------
Attempt ``k`` of a search seeded with ``s`` is evaluated entirely from
``mix(s, k)``: the system parameters come from an ``Rng`` started at
that value, and the canonical rendering iterates with ``mix(mix(s, k),
0)``.  Acceptance keeps the lowest attempt indices, so the result is a
pure function of the config no matter how many workers evaluate
attempts or in what order they finish.  The per-category seed stored in
each :class:`CategorySpec` is ``mix(s, k)``; downstream instance ``j``
of that category iterates with ``mix(category_seed, j)``, which makes
instance 0 coincide with the canonical render.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import DegenerateSystem, Diverged, ExhaustedRetries, SearchTimeout
from .ifs import AffineMap, IfsSystem
from .render import RenderConfig, filling_rate, render_system
from .rng import MASK64, Rng, mix

DEFAULT_N_CHOICES = (2, 3, 4, 5, 6, 7, 8)
DEFAULT_PARAM_RANGE = (-1.0, 1.0)
DEFAULT_R_MIN = 0.05
DEFAULT_R_MAX = 0.25

# Fixed rendering used to decide acceptance; recorded in the registry
# header so any registry can be re-verified bit-for-bit.  512x512 makes
# the acceptance measurement strict: at this size no random draw fills
# more than 30% of the image (measured 0 in 2x10^4), while at 256x256 a
# few percent of draws would.
CANONICAL_RENDER = RenderConfig(width=512, height=512, point_count=100_000,
                                draw_mode="point")

_RESAMPLE_LIMIT = 1000
_CHUNK = 64


def canonical_seed(category_seed: int) -> int:
    """Iteration seed of a category's canonical render (= instance 0)."""
    return mix(category_seed, 0)


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of a category search.

    ``max_attempts`` defaults to 1000 x category_count.
    """

    category_count: int
    seed: int = 0
    r_min: float = DEFAULT_R_MIN
    r_max: float = DEFAULT_R_MAX
    n_choices: tuple[int, ...] = DEFAULT_N_CHOICES
    param_range: tuple[float, float] = DEFAULT_PARAM_RANGE
    canonical_render: RenderConfig = field(default=CANONICAL_RENDER)
    max_attempts: int | None = None

    def __post_init__(self):
        if self.category_count < 1:
            raise ValueError("category_count must be positive")
        if not 0.0 <= self.r_min < self.r_max <= 1.0:
            raise ValueError("need 0 <= r_min < r_max <= 1")
        if not self.n_choices or any(n < 1 for n in self.n_choices):
            raise ValueError("n_choices must be positive integers")
        lo, hi = self.param_range
        if not lo <= hi:
            raise ValueError("param_range must be a non-empty interval")
        if self.max_attempts is not None and self.max_attempts < 1:
            raise ValueError("max_attempts must be positive")
        object.__setattr__(self, "seed", self.seed & MASK64)
        object.__setattr__(self, "n_choices", tuple(sorted(self.n_choices)))

    @property
    def attempt_budget(self) -> int:
        if self.max_attempts is not None:
            return self.max_attempts
        return 1000 * self.category_count


@dataclass(frozen=True)
class CategorySpec:
    """An accepted category: its system, seed, and acceptance evidence."""

    category_id: int
    system: IfsSystem
    seed: int
    canonical_filling_rate: float


def sample_system(rng: Rng, n_choices: tuple[int, ...] = DEFAULT_N_CHOICES,
                  param_range: tuple[float, float] = DEFAULT_PARAM_RANGE) -> IfsSystem:
    """Draw a random IFS: N maps, each parameter i.i.d. uniform.

    Degenerate draws (all determinants zero) are resampled from the same
    stream; ExhaustedRetries after 1000 consecutive failures signals an
    unusable param_range rather than bad luck.
    """
    lo, hi = param_range
    choices = sorted(n_choices)
    for _ in range(_RESAMPLE_LIMIT):
        n = choices[rng.randrange(len(choices))]
        maps = tuple(AffineMap(*(rng.uniform(lo, hi) for _ in range(6)))
                     for _ in range(n))
        try:
            return IfsSystem.from_maps(maps)
        except DegenerateSystem:
            continue
    raise ExhaustedRetries(
        f"{_RESAMPLE_LIMIT} consecutive degenerate draws from {param_range}")


def evaluate_attempt(cfg: SearchConfig, attempt: int) -> tuple[int, CategorySpec | None]:
    """Run one search attempt; returns (attempt, spec-without-id or None).

    Pure: depends only on cfg and the attempt index, so attempts can be
    evaluated in any order on any number of workers.
    """
    category_seed = mix(cfg.seed, attempt)
    rng = Rng(category_seed)
    system = sample_system(rng, cfg.n_choices, cfg.param_range)
    try:
        img = render_system(system, cfg.canonical_render,
                            canonical_seed(category_seed))
    except Diverged:
        return attempt, None
    rate = filling_rate(img, cfg.canonical_render.background_value)
    if cfg.r_min <= rate <= cfg.r_max:
        spec = CategorySpec(category_id=-1, system=system,
                            seed=category_seed, canonical_filling_rate=rate)
        return attempt, spec
    return attempt, None


def search_categories(cfg: SearchConfig, workers: int = 1) -> list[CategorySpec]:
    """Collect cfg.category_count categories by rejection sampling.

    Returns specs ordered (and numbered) by ascending attempt index.
    Raises SearchTimeout when the attempt budget runs out first.
    """
    budget = cfg.attempt_budget
    accepted: list[CategorySpec] = []

    def admit(spec: CategorySpec | None) -> bool:
        if spec is None:
            return False
        accepted.append(CategorySpec(category_id=len(accepted),
                                     system=spec.system, seed=spec.seed,
                                     canonical_filling_rate=spec.canonical_filling_rate))
        return len(accepted) >= cfg.category_count

    if workers <= 1:
        for k in range(budget):
            if admit(evaluate_attempt(cfg, k)[1]):
                return accepted
    else:
        chunks = ((start, min(start + _CHUNK, budget))
                  for start in range(0, budget, _CHUNK))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pending = []
            done = False
            while not done:
                # Keep a small window of chunks in flight; consuming
                # them in submission order keeps acceptance by attempt
                # index regardless of completion order.
                while len(pending) < 2 * workers:
                    span = next(chunks, None)
                    if span is None:
                        break
                    pending.append(pool.submit(
                        lambda s: [evaluate_attempt(cfg, k) for k in range(*s)], span))
                if not pending:
                    break
                for _, spec in pending.pop(0).result():
                    if admit(spec):
                        done = True
                        break
        if done:
            return accepted

    raise SearchTimeout(
        f"accepted {len(accepted)}/{cfg.category_count} categories "
        f"in {budget} attempts",
        attempts=budget, accepted=len(accepted))
