"""Brute-force sampling estimates of the secrecy metrics.

This module is the independent cross-check of the analytical routes: it
never touches the quadrature or closed-form code, it just simulates the
system definition directly.  Per trial it draws the shared gain, all N
destination branch gains, the eavesdropper branch gain and one Bernoulli
noise state per node class, schedules the strongest destination and scores
the realized clamped rate difference (or intercept indicator).

Reproducibility contract: trials are partitioned into fixed-size blocks,
each block owning a counter-derived substream of the master seed.  Workers
only decide *who* computes a block, never *what* it contains, and block
partials are combined with exact summation, so results are bit-identical
for any worker count and any completion order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special as sps

from .channel import effective_links
from .errors import ConfigError, EvaluationError
from .metrics import LN2, SecrecyResult, SystemConfig
from .noise import alpha_factors, alpha_factors_tilde

__all__ = ["McConfig", "mc_asc", "mc_poi"]

# Trials per substream block; fixed so that the partition of work depends
# only on the sample count, never on the worker count.
_BLOCK = 1 << 16


@dataclass(frozen=True)
class McConfig:
    """Sampling budget, master seed, parallelism and confidence level."""

    samples: int
    seed: int
    workers: int = 1
    confidence: float = 0.99

    def __post_init__(self) -> None:
        if not isinstance(self.samples, (int, np.integer)) or self.samples < 10_000:
            raise ConfigError("samples must be an integer >= 10000 for the CI to mean anything")
        if not isinstance(self.workers, (int, np.integer)) or self.workers < 1:
            raise ConfigError("workers must be a positive integer")
        if not 0.5 < self.confidence < 1.0:
            raise ConfigError("confidence must lie in (0.5, 1)")


def _z_score(confidence: float) -> float:
    return float(sps.ndtri(0.5 * (1.0 + confidence)))


def _block_sizes(samples: int) -> list[int]:
    full, rest = divmod(samples, _BLOCK)
    return [_BLOCK] * full + ([rest] if rest else [])


def _run_blocks(mc: McConfig, run_one: Callable[[np.random.Generator, int], tuple]) -> list[tuple]:
    """Evaluate every block on its own substream, in a deterministic layout."""
    sizes = _block_sizes(mc.samples)
    seeds = np.random.SeedSequence(mc.seed).spawn(len(sizes))

    def task(i: int) -> tuple:
        rng = np.random.Generator(np.random.Philox(seeds[i]))
        return run_one(rng, sizes[i])

    if mc.workers == 1 or len(sizes) == 1:
        return [task(i) for i in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=mc.workers) as pool:
        return list(pool.map(task, range(len(sizes))))


def mc_asc(cfg: SystemConfig, mc: McConfig) -> SecrecyResult:
    """Sample-mean estimate of the average secrecy capacity with a CI.

    Each trial scores ``max(rate_dest - rate_eav, 0)`` under the *realized*
    noise states (one Bernoulli draw per node class per trial), not the
    probability-weighted mixture; the mixture is what the analytical routes
    integrate, and both have the same expectation.
    """
    topo = cfg.topology
    dest, eav = effective_links(topo)
    src = topo.source_link
    n = topo.n_destinations
    a1b, a2b = alpha_factors(cfg.transmit_power, cfg.dest_noise)
    a1e, a2e = alpha_factors(cfg.transmit_power, cfg.eav_noise)
    p_b = cfg.dest_noise.impulse_prob
    p_e = cfg.eav_noise.impulse_prob

    def run_one(rng: np.random.Generator, m: int) -> tuple:
        # Fixed draw order per block: shared gain, destinations, eavesdropper,
        # then the two noise states.  The shared-gain normals are consumed
        # even without a pinhole so paired comparisons share randomness.
        z_a = rng.standard_normal(m)
        z_d = rng.standard_normal((m, n))
        z_e = rng.standard_normal(m)
        imp_b = rng.random(m) < p_b
        imp_e = rng.random(m) < p_e

        ln_shared = src.s * z_a + src.m if topo.pinhole_present else 0.0
        gain_bn = np.exp(ln_shared + dest.s * z_d.max(axis=1) + dest.m)
        gain_ee = np.exp(ln_shared + eav.s * z_e + eav.m)
        rate_b = np.log1p(np.where(imp_b, a2b, a1b) * gain_bn)
        rate_e = np.log1p(np.where(imp_e, a2e, a1e) * gain_ee)
        cs = np.maximum(rate_b - rate_e, 0.0) / LN2
        if not np.all(np.isfinite(cs)):
            raise EvaluationError(
                f"non-finite secrecy sample at trial index {int(np.argmax(~np.isfinite(cs)))}"
            )
        return float(cs.sum()), float(np.dot(cs, cs))

    partials = _run_blocks(mc, run_one)
    total = math.fsum(p[0] for p in partials)
    total_sq = math.fsum(p[1] for p in partials)
    count = mc.samples
    mean = total / count
    var = max(total_sq - total * total / count, 0.0) / (count - 1)
    half = _z_score(mc.confidence) * math.sqrt(var / count)
    return SecrecyResult(value=mean, method="monte-carlo", ci_halfwidth=half)


def mc_poi(cfg: SystemConfig, mc: McConfig) -> SecrecyResult:
    """Empirical intercept frequency with a binomial CI.

    The intercept comparison is done on log-gains with the power-stripped
    SNR factors: the shared gain and the transmit power multiply both sides
    of the inequality, so they are omitted rather than cancelled in floating
    point.  Trial outcomes are therefore identical across transmit powers
    under common random numbers by construction.
    """
    topo = cfg.topology
    dest, eav = effective_links(topo)
    n = topo.n_destinations
    at1b, at2b = alpha_factors_tilde(cfg.dest_noise)
    at1e, at2e = alpha_factors_tilde(cfg.eav_noise)
    log_b = (math.log(at1b), math.log(at2b))
    log_e = (math.log(at1e), math.log(at2e))
    p_b = cfg.dest_noise.impulse_prob
    p_e = cfg.eav_noise.impulse_prob

    def run_one(rng: np.random.Generator, m: int) -> tuple:
        z_d = rng.standard_normal((m, n))
        z_e = rng.standard_normal(m)
        imp_b = rng.random(m) < p_b
        imp_e = rng.random(m) < p_e

        ln_best = dest.s * z_d.max(axis=1) + dest.m
        ln_eav = eav.s * z_e + eav.m
        lhs = np.where(imp_b, log_b[1], log_b[0]) + ln_best
        rhs = np.where(imp_e, log_e[1], log_e[0]) + ln_eav
        return (int(np.count_nonzero(lhs < rhs)),)

    partials = _run_blocks(mc, run_one)
    hits = sum(p[0] for p in partials)
    count = mc.samples
    p_hat = hits / count
    half = _z_score(mc.confidence) * math.sqrt(p_hat * (1.0 - p_hat) / count)
    return SecrecyResult(value=p_hat, method="monte-carlo", ci_halfwidth=half)
