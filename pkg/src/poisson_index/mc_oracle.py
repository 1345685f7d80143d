"""Monte Carlo estimate of the index, independent of the closed forms.

Gamma variates come from the Marsaglia-Tsang squeeze/rejection sampler
(shape >= 1), with the ``U ** (1 / a)`` boost for shape < 1, driven by
numpy's PCG64 bit generator.  Draws are produced in fixed-size blocks and
every block gets its own seed derived from ``(seed, arm, block)``, so the
stream does not depend on how blocks are spread over workers.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .index import ComparisonQuery, Direction
from .model import GammaPosterior

__all__ = ["McEstimate", "sample_gamma", "estimate_index", "block_rng", "DEFAULT_DRAWS", "DEFAULT_SEED"]

BLOCK_SIZE = 1 << 16
DEFAULT_DRAWS = 1_000_000
DEFAULT_SEED = 20240229
MIN_DRAWS = 10_000


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    std_error: float
    draws: int
    seed: int

    def to_dict(self):
        return {"estimate": self.estimate, "std_error": self.std_error, "draws": self.draws, "seed": self.seed}


def _check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def block_rng(seed, stream, block):
    """Generator for one block; the seed derivation is a pure function of its inputs."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream, block))))


def _marsaglia_tsang(rng, shape, count):
    """``count`` standard gamma variates with ``shape >= 1``."""
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(count)
    filled = 0
    while filled < count:
        need = count - filled
        batch = int(need * 1.1) + 16
        x = rng.standard_normal(batch)
        u = rng.random(batch)
        v = 1.0 + c * x
        ok = v > 0.0
        v = np.where(ok, v * v * v, 1.0)
        x2 = x * x
        squeeze = u < 1.0 - 0.0331 * x2 * x2
        with np.errstate(divide="ignore"):
            full = np.log(u) < 0.5 * x2 + d * (1.0 - v + np.log(v))
        accept = ok & (squeeze | full)
        got = (d * v)[accept][:need]
        out[filled : filled + got.size] = got
        filled += got.size
    return out


def _standard_gamma_block(rng, shape, count):
    if shape >= 1.0:
        return _marsaglia_tsang(rng, shape, count)
    g = _marsaglia_tsang(rng, shape + 1.0, count)
    return g * rng.random(count) ** (1.0 / shape)


def _blocks(count):
    full, rest = divmod(count, BLOCK_SIZE)
    sizes = [BLOCK_SIZE] * full
    if rest:
        sizes.append(rest)
    return sizes


def _sample(post, count, seed, stream, workers):
    sizes = _blocks(count)

    def run(i):
        return _standard_gamma_block(block_rng(seed, stream, i), post.a, sizes[i])

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]
    return np.concatenate(parts) / post.b


def sample_gamma(post, count, seed=DEFAULT_SEED, *, workers=None, stream=0):
    """``count`` independent draws from ``Ga(post.a, post.b)`` (shape-rate)."""
    if not isinstance(post, GammaPosterior):
        raise TypeError(f"expected GammaPosterior, got {post!r}")
    if isinstance(count, bool) or not isinstance(count, (int, np.integer)) or count < 1:
        raise ValueError(f"count must be a positive integer, got {count!r}")
    return _sample(post, int(count), _check_seed(seed), stream, workers)


def estimate_index(post1, post2, query=None, draws=DEFAULT_DRAWS, seed=DEFAULT_SEED, *, workers=None):
    """Fraction of paired posterior draws with ``lam1 / lam2`` on the queried side of ``c``."""
    query = ComparisonQuery() if query is None else query
    if isinstance(draws, bool) or not isinstance(draws, (int, np.integer)) or draws < MIN_DRAWS:
        raise ValueError(f"draws must be an integer >= {MIN_DRAWS}, got {draws!r}")
    draws = int(draws)
    seed = _check_seed(seed)
    lam1 = sample_gamma(post1, draws, seed, workers=workers, stream=1)
    lam2 = sample_gamma(post2, draws, seed, workers=workers, stream=2)
    c = query.threshold
    if query.direction is Direction.LESS:
        hits = np.count_nonzero(lam1 < c * lam2)
    else:
        hits = np.count_nonzero(lam1 > c * lam2)
    est = hits / draws
    return McEstimate(est, math.sqrt(est * (1.0 - est) / draws), draws, seed)
