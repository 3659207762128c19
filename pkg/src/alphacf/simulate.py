"""Monte-Carlo entropy estimates and orbit-cloud rasterization.

Everything here is floating point and deliberately non-certified; it exists
to cross-check the interval machinery and to draw pictures. Runs are
reproducible: the only randomness is a counter-based Philox stream seeded
from the config, and the walkers consume pre-drawn arrays in a fixed order.

The hot loops live in a compiled extension when it is available; a numpy
fallback with identical stepping is used otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateOrbit, DomainError
from .exact import as_exact, to_mpf

try:
    from . import _mckernel

    HAS_KERNEL = True
except ImportError:  # pragma: no cover - depends on the build
    _mckernel = None
    HAS_KERNEL = False

from . import _mcref

_WALKERS = 1024


def backend_name() -> str:
    return "compiled" if HAS_KERNEL else "numpy"


@dataclass(frozen=True)
class McConfig:
    iterations: int
    burn_in: int = 0
    seed: int = 20260816
    precision: int = 80

    def __post_init__(self):
        if not 0 <= self.burn_in < self.iterations:
            raise DomainError("need iterations > burn_in >= 0")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must fit in 64 bits")
        if self.precision not in (64, 80):
            raise DomainError("precision must be 64 or 80 bits")


def _alpha_float(alpha) -> float:
    a = float(to_mpf(as_exact(alpha), 64))
    if not 0.0 < a <= 1.0:
        raise DomainError(f"alpha = {a} is outside (0, 1]")
    return a


def _draw(rng, a: float, shape):
    # uniform over the interval (a-1, a); the walkers guard against the
    # measure-zero neighbourhood of 0 themselves
    return (a - 1.0) + rng.random(shape, dtype=np.float64)


def _split(total: int, walkers: int) -> int:
    return -(-total // walkers)


def _check_resamples(resamples: int, iterations: int, exhausted: bool) -> None:
    if exhausted:
        raise DegenerateOrbit("a walker exhausted its resample pool")
    if resamples > iterations // 100:
        raise DegenerateOrbit(
            f"{resamples} resamples over {iterations} iterations (> 1%)"
        )


def mc_entropy(alpha, cfg: McConfig) -> tuple[float, float]:
    """Birkhoff estimate of the entropy, with a batch-means standard error.

    Splits the iteration budget over independent walkers; each walker mean
    is one batch. Orbit points within 1e-15 of 0 are replaced by fresh
    uniform draws, and DegenerateOrbit is raised if that happens for more
    than 1% of the budget.
    """
    a = _alpha_float(alpha)
    steps = _split(cfg.iterations, _WALKERS)
    burn = min(steps - 1, _split(cfg.burn_in, _WALKERS)) if cfg.burn_in else 0
    pool_len = max(4, steps // 90)
    rng = np.random.Generator(np.random.Philox(cfg.seed))
    x0 = _draw(rng, a, _WALKERS)
    pool = _draw(rng, a, (_WALKERS, pool_len))
    if cfg.precision == 80 and HAS_KERNEL:
        sums, kept, resamples, exhausted = _mckernel.entropy_walk(
            a, x0, pool, steps, burn
        )
    else:
        dtype = np.longdouble if cfg.precision == 80 else np.float64
        sums, kept, resamples, exhausted = _mcref.entropy_walk(
            a, x0, pool, steps, burn, dtype=dtype
        )
    _check_resamples(resamples, cfg.iterations, exhausted)
    means = np.asarray(sums, dtype=np.float64) / kept
    estimate = float(means.mean())
    stderr = float(means.std(ddof=1) / math.sqrt(len(means)))
    return estimate, stderr


def merge_estimates(parts) -> tuple[float, float]:
    """Combine (estimate, stderr, weight) triples from independent runs."""
    parts = list(parts)
    if not parts:
        raise DomainError("nothing to merge")
    total = sum(w for _, _, w in parts)
    estimate = sum(e * w for e, _, w in parts) / total
    variance = sum((s * w) ** 2 for _, s, w in parts) / total**2
    return float(estimate), float(math.sqrt(variance))


def simulate_domain(alpha, n_points: int, n_iter: int, seed: int = 20260816):
    """Iterate the planar extension from (x, 0) seeds; keep the tail segment.

    Returns a float64 array of shape (n_points * keep, 2) with keep =
    ceil(n_iter / 2), i.e. the first half of every orbit is dropped as
    transient. The cloud is an inclusion oracle for the rectangle
    decompositions, nothing more.
    """
    a = _alpha_float(alpha)
    if n_points <= 0 or n_iter <= 0:
        raise DomainError("need n_points > 0 and n_iter > 0")
    keep = (n_iter + 1) // 2
    rng = np.random.Generator(np.random.Philox(seed))
    x0 = _draw(rng, a, n_points)
    pool = _draw(rng, a, (n_points, 4))
    if HAS_KERNEL:
        return _mckernel.domain_walk(a, x0, pool, n_iter, keep)
    return _mcref.domain_walk(a, x0, pool, n_iter, keep)


def cloud_csv(points) -> str:
    lines = ["x,y"]
    for x, y in np.asarray(points, dtype=np.float64):
        lines.append(f"{x!r},{y!r}")
    return "\n".join(lines) + "\n"


def estimate_json(alpha, cfg: McConfig, estimate: float, stderr: float) -> str:
    alpha_exact = as_exact(alpha) if not isinstance(alpha, float) else Fraction(str(alpha))
    return json.dumps(
        {
            "alpha": str(alpha_exact),
            "h_est": estimate,
            "stderr": stderr,
            "iterations": cfg.iterations,
            "seed": cfg.seed,
        },
        indent=2,
    )
