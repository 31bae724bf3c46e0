"""Iterated function systems and the random iteration algorithm (chaos game).

A system is a list of planar affine maps ``w_i(x) = A_i x + t_i`` with
selection probabilities ``p_i``.  Repeatedly picking a map at random and
applying it to the current point traces out the system's attractor; the
recorded points are the raw material every image in a dataset is built
from.

The map-selection stream comes from `fdsl.rng` (SplitMix64), so a system
plus an iteration config reproduces the identical point sequence on any
machine.  The hot loop is JIT-compiled with numba; a pure-Python twin of
the loop (`_iterate_py`) implements the exact same arithmetic and is kept
as a fallback and as a cross-check in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSystem, Diverged
from .rng import GAMMA, MASK64, Rng

DEFAULT_BURN_IN = 20
DEFAULT_DIVERGENCE_BOUND = 1e6

# Sum of |det A_i| below this is treated as a fully degenerate system.
_DEGENERACY_EPS = 1e-12
_PROB_TOL = 1e-9


@dataclass(frozen=True)
class AffineMap:
    """One planar affine transformation: linear part (a b; c d), shift (e, f)."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "e", "f"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValueError(f"AffineMap.{name} must be finite, got {v!r}")

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def apply(self, x: float, y: float) -> tuple[float, float]:
        return self.a * x + self.b * y + self.e, self.c * x + self.d * y + self.f

    def params(self) -> tuple[float, float, float, float, float, float]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)


def compute_probabilities(maps: list[AffineMap]) -> list[float]:
    """Selection probabilities proportional to |det A_i|.

    Determinants are taken in absolute value: parameters sampled uniformly
    in [-1, 1] produce negative determinants about half the time, and a
    probability law must be non-negative.

    Raises DegenerateSystem when every map is (numerically) rank-deficient,
    which tells a sampling caller to throw the draw away.
    """
    if not maps:
        raise ValueError("maps must be non-empty")
    dets = np.array([abs(m.det) for m in maps], dtype=np.float64)
    total = float(dets.sum())
    if total < _DEGENERACY_EPS:
        raise DegenerateSystem(f"sum of |det| = {total:.3e} < {_DEGENERACY_EPS}")
    return list(dets / total)


@dataclass(frozen=True)
class IfsSystem:
    """A full system: ordered maps plus selection probabilities."""

    maps: tuple[AffineMap, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if len(self.maps) < 1:
            raise ValueError("IfsSystem needs at least one map")
        if len(self.probs) != len(self.maps):
            raise ValueError("probs and maps must have the same length")
        if any(p < 0 for p in self.probs):
            raise ValueError("probabilities must be non-negative")
        if abs(sum(self.probs) - 1.0) > _PROB_TOL:
            raise ValueError(f"probabilities sum to {sum(self.probs)!r}, not 1")

    @classmethod
    def from_maps(cls, maps) -> "IfsSystem":
        """Build a system with probabilities derived from the determinants."""
        maps = [m if isinstance(m, AffineMap) else AffineMap(*m) for m in maps]
        return cls(maps, compute_probabilities(maps))

    def __len__(self) -> int:
        return len(self.maps)

    def param_matrix(self) -> np.ndarray:
        """(N, 6) float64 array of map parameters, row order a,b,c,d,e,f."""
        return np.array([m.params() for m in self.maps], dtype=np.float64)

    def cumulative_probs(self) -> np.ndarray:
        return np.cumsum(np.array(self.probs, dtype=np.float64))


@dataclass(frozen=True)
class IterationConfig:
    """Controls one chaos-game run."""

    point_count: int
    seed: int
    burn_in: int = DEFAULT_BURN_IN
    initial_point: tuple[float, float] = (0.0, 0.0)
    divergence_bound: float = DEFAULT_DIVERGENCE_BOUND

    def __post_init__(self):
        if self.point_count < 1:
            raise ValueError("point_count must be >= 1")
        if self.burn_in < 0:
            raise ValueError("burn_in must be >= 0")
        if not self.divergence_bound > 0:
            raise ValueError("divergence_bound must be positive")


def sierpinski_system() -> IfsSystem:
    """The classic right-triangle Sierpinski gasket; handy fixture for tests
    and demos.  Attractor is the triangle hull (0,0), (1,0), (0,1)."""
    half = (0.5, 0.0, 0.0, 0.5)
    maps = [
        AffineMap(*half, 0.0, 0.0),
        AffineMap(*half, 0.5, 0.0),
        AffineMap(*half, 0.0, 0.5),
    ]
    return IfsSystem(maps, (1 / 3, 1 / 3, 1 / 3))


def _iterate_py(params, cum, n_points, burn_in, seed, x0, y0, bound):
    """Reference chaos game, same arithmetic as the numba kernel."""
    out = np.empty((n_points, 2), dtype=np.float64)
    state = int(seed) & MASK64
    x, y = x0, y0
    n_maps = params.shape[0]
    for t in range(burn_in + n_points):
        state = (state + GAMMA) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z = z ^ (z >> 31)
        u = (z >> 11) * (1.0 / 9007199254740992.0)
        k = n_maps - 1
        for i in range(n_maps):
            if u < cum[i]:
                k = i
                break
        a, b, c, d, e, f = params[k]
        x, y = a * x + b * y + e, c * x + d * y + f
        if not (abs(x) <= bound and abs(y) <= bound):
            return out, t
        if t >= burn_in:
            out[t - burn_in, 0] = x
            out[t - burn_in, 1] = y
    return out, -1


try:
    from numba import njit

    @njit(cache=True, nogil=True)
    def _iterate_numba(params, cum, n_points, burn_in, seed, x0, y0, bound):  # pragma: no cover
        out = np.empty((n_points, 2), dtype=np.float64)
        state = np.uint64(seed)
        gamma = np.uint64(0x9E3779B97F4A7C15)
        m1 = np.uint64(0xBF58476D1CE4E5B9)
        m2 = np.uint64(0x94D049BB133111EB)
        x = x0
        y = y0
        n_maps = params.shape[0]
        for t in range(burn_in + n_points):
            state = state + gamma
            z = state
            z = (z ^ (z >> np.uint64(30))) * m1
            z = (z ^ (z >> np.uint64(27))) * m2
            z = z ^ (z >> np.uint64(31))
            u = (z >> np.uint64(11)) * (1.0 / 9007199254740992.0)
            k = n_maps - 1
            for i in range(n_maps):
                if u < cum[i]:
                    k = i
                    break
            nx = params[k, 0] * x + params[k, 1] * y + params[k, 4]
            ny = params[k, 2] * x + params[k, 3] * y + params[k, 5]
            x = nx
            y = ny
            if not (abs(x) <= bound and abs(y) <= bound):
                return out, t
            if t >= burn_in:
                out[t - burn_in, 0] = x
                out[t - burn_in, 1] = y
        return out, -1

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def iterate(system: IfsSystem, cfg: IterationConfig) -> np.ndarray:
    """Run the chaos game and return the recorded points, shape (point_count, 2).

    Performs ``burn_in + point_count`` map applications from the initial
    point and records the last ``point_count`` states; with burn_in = 0 the
    first recorded point is w(x0), not x0 itself.  Map k is selected at
    step t when the t-th uniform draw falls in k's cumulative-probability
    bucket.  Pure function of its arguments: same system, same config,
    same bits out.

    Raises Diverged as soon as any iterate (burn-in included) leaves
    ``[-divergence_bound, divergence_bound]`` in either coordinate;
    non-finite coordinates count as divergence.
    """
    params = system.param_matrix()
    cum = system.cumulative_probs()
    x0, y0 = float(cfg.initial_point[0]), float(cfg.initial_point[1])
    kernel = _iterate_numba if HAVE_NUMBA else _iterate_py
    out, bad_step = kernel(
        params, cum, cfg.point_count, cfg.burn_in, np.uint64(cfg.seed & MASK64),
        x0, y0, float(cfg.divergence_bound),
    )
    if bad_step >= 0:
        raise Diverged(f"iterate left |coord| <= {cfg.divergence_bound:g} at step {bad_step}")
    return out


def fixed_point(m: AffineMap) -> tuple[float, float]:
    """The fixed point (I - A)^-1 (e, f) of a single contractive map."""
    mat = np.array([[1.0 - m.a, -m.b], [-m.c, 1.0 - m.d]])
    sol = np.linalg.solve(mat, np.array([m.e, m.f]))
    return float(sol[0]), float(sol[1])
