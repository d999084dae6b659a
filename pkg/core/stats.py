"""Goodness-of-fit statistics for the Monte Carlo checks.

Kolmogorov-Smirnov distances, empirical characteristic functions with their
sampling bounds, and the majority rule applied over independent seeds.
"""
import logging
import math
from typing import NamedTuple

import numpy as np
from scipy import stats

from .exceptions import DomainError

logger = logging.getLogger(__name__)

KS_MIN_SAMPLES = 100
CF_BOUND_FACTOR = 3.0


class KSResult(NamedTuple):
    statistic: float
    p_value: float
    n: int


class EmpiricalCF(NamedTuple):
    value: complex
    bound: float


def ks_statistic(samples, cdf):
    """One-sample Kolmogorov-Smirnov distance and asymptotic p-value."""
    samples = np.asarray(samples, dtype=float).ravel()
    if np.any(np.isnan(samples)):
        raise DomainError('KS samples contain NaN')
    if samples.size < KS_MIN_SAMPLES:
        logger.warning('KS test on %d samples; the asymptotic p-value is unreliable', samples.size)
    result = stats.kstest(samples, cdf, method='asymp')
    return KSResult(statistic=float(result.statistic), p_value=float(result.pvalue), n=samples.size)


def empirical_cf(samples, xi):
    """(1/N) sum exp(i <xi, X_k>) with the deviation bound 3/sqrt(N)."""
    samples = np.asarray(samples, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if samples.shape[0] < 1:
        raise DomainError('empirical_cf needs at least one sample')
    phase = samples * xi if samples.ndim == 1 else samples @ xi
    value = complex(np.mean(np.cos(phase)), np.mean(np.sin(phase)))
    return EmpiricalCF(value=value, bound=CF_BOUND_FACTOR / math.sqrt(samples.shape[0]))


def cf_grid(d, count=12, radius=3.0):
    """Deterministic frequencies with norms spread over (0, radius]."""
    norms = np.linspace(radius / count, radius, count)
    if d == 1:
        return norms
    golden = math.pi * (3 - math.sqrt(5))
    directions = np.array([np.cos(k * golden + np.arange(d)) for k in range(count)])
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    return norms[:, None] * directions


def max_cf_deviation(samples, grid, target):
    """Largest |empirical CF - target(xi)| over ``grid`` and the matching bound."""
    worst = 0.0
    bound = None
    for xi in grid:
        ecf = empirical_cf(samples, xi)
        worst = max(worst, abs(ecf.value - complex(target(xi))))
        bound = ecf.bound
    return worst, bound


def majority_pass(run, seeds, required=2):
    """Run ``run(seed)`` for every seed; pass when at least ``required`` reports pass."""
    reports = [run(seed) for seed in seeds]
    passed = sum(bool(r) for r in reports) >= required
    logger.info('%d of %d seeds passed', sum(bool(r) for r in reports), len(reports))
    return passed, reports
