"""Quadrature shared by the fractional EPD and pseudoprocess modules.

Two kinds of integrals appear:

* finite w-averages against the EPD weight (1 - s**2)**a on [-1, 1], done with
  Gauss-Jacobi nodes matched to the endpoint exponent;
* oscillatory integrals over (0, inf) that exist only as Abel limits. They are
  evaluated with the damping factor exp(-eps*s) on composite Gauss-Legendre
  panels for a decreasing sequence of eps and extrapolated to eps -> 0 with
  Neville's scheme. The error estimate is the difference between the last two
  diagonal entries of the Neville table.
"""
import functools
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .exceptions import AccuracyWarning, DomainError
from .params import OscillatoryQuadratureSpec

logger = logging.getLogger(__name__)

PANELS_PER_CHUNK = 2048
# Geometric refinement of the first panel towards the endpoint singularity.
ENDPOINT_LEVELS = 8
# Largest number of matrix entries built at once by jacobi_cosine.
BLOCK_ENTRIES = 2 ** 22


@dataclass
class QuadratureResult:
    value: object
    error: object
    converged: bool
    damped: list = field(default_factory=list)

    @property
    def real(self):
        return np.real(self.value)


@functools.lru_cache(maxsize=128)
def gauss_legendre(order):
    return np.polynomial.legendre.leggauss(order)


@functools.lru_cache(maxsize=256)
def gauss_jacobi(order, a, b):
    """Nodes and weights on [-1, 1] for the weight (1 - x)**a * (1 + x)**b."""
    if a <= -1 or b <= -1:
        raise DomainError(f'Jacobi exponents must exceed -1, got ({a}, {b})')
    return special.roots_jacobi(int(order), float(a), float(b))


def jacobi_order_for(z):
    """Node count resolving cos(z s) on [-1, 1], rounded up to a power of two."""
    need = 32 + np.ceil(0.6 * np.abs(np.asarray(z, dtype=float)))
    return (2 ** np.ceil(np.log2(np.maximum(need, 64)))).astype(int)


def jacobi_cosine(z, a, order=None):
    """Integral of (1 - s**2)**a cos(z s) over [-1, 1] for every entry of ``z``.

    Entries are grouped by the node count they need; ``order`` forces one
    count for all of them.
    """
    z = np.abs(np.asarray(z, dtype=float))
    flat = z.ravel()
    out = np.empty_like(flat)
    levels = np.full(flat.shape, order) if order else jacobi_order_for(flat)
    for n in np.unique(levels):
        nodes, weights = gauss_jacobi(int(n), a, a)
        index = np.flatnonzero(levels == n)
        block = max(1, BLOCK_ENTRIES // int(n))
        for start in range(0, index.size, block):
            rows = index[start:start + block]
            out[rows] = np.cos(np.outer(flat[rows], nodes)) @ weights
    return out.reshape(z.shape)


def jacobi_average(f, exponent, order=48, tolerance=1e-12):
    """Integral of (1 - s**2)**exponent * f(s) over [-1, 1].

    ``f`` must accept an array of nodes. Two node counts are compared to
    produce the error estimate.
    """
    nodes, weights = gauss_jacobi(order, exponent, exponent)
    coarse = weights @ f(nodes)
    nodes, weights = gauss_jacobi(order + max(8, order // 2), exponent, exponent)
    fine = weights @ f(nodes)
    error = float(np.max(np.abs(fine - coarse)))
    converged = error <= tolerance * max(1.0, float(np.max(np.abs(fine))))
    if not converged:
        logger.warning('Gauss-Jacobi average did not converge: estimate %.3e', error)
    return QuadratureResult(value=fine, error=error, converged=converged)


def composite_legendre(f, a, b, panel_width, order=16, tolerance=1e-10):
    """Composite Gauss-Legendre integral of ``f`` over [a, b].

    ``f`` may return shape (n,) or (n, k) as in :func:`abel_integral`. The
    error estimate compares rules of ``order`` and ``order + 8`` nodes on the
    same panels; the result is converged when it is within ``tolerance``
    relative to max(1, |value|).
    """
    if b <= a:
        raise DomainError(f'Empty interval [{a}, {b}]')
    count = max(1, int(np.ceil((b - a) / panel_width)))
    edges = np.linspace(a, b, count + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    estimates = []
    for n in (order, order + 8):
        nodes, weights = gauss_legendre(n)
        points = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        scaled = (half[:, None] * weights[None, :]).ravel()
        values = np.asarray(f(points))
        estimates.append(np.tensordot(scaled, values, axes=(0, 0)))
    error = np.abs(estimates[1] - estimates[0])
    worst = float(np.max(error))
    converged = worst <= tolerance * max(1.0, float(np.max(np.abs(estimates[1]))))
    if not converged:
        logger.warning('Composite Gauss-Legendre rule on [%g, %g] did not converge: estimate %.3e', a, b, worst)
    return QuadratureResult(value=estimates[1], error=error, converged=converged)


def neville_to_zero(eps, values):
    """Polynomial extrapolation of values(eps) to eps = 0.

    ``values`` has the damping index first; trailing axes are extrapolated
    independently. Returns the extrapolated value and the difference between
    the last two diagonal entries of the Neville table.
    """
    values = np.asarray(values)
    table = [list(values)]
    for k in range(1, len(values)):
        previous = table[-1]
        row = []
        for i in range(k, len(values)):
            lower, upper = previous[i - k], previous[i - k + 1]
            row.append(upper + (upper - lower) * eps[i] / (eps[i - k] - eps[i]))
        table.append(row)
    best = table[-1][-1]
    if len(table) == 1:
        return best, np.full(np.shape(best), np.inf)
    return best, np.abs(best - table[-2][-1])


def _endpoint_nodes(h, order, exponent):
    """Nodes and weights for s**exponent * f(s) on [0, h]."""
    inner = h / 2 ** ENDPOINT_LEVELS
    jnodes, jweights = gauss_jacobi(order, 0.0, float(exponent))
    points = [0.5 * inner * (jnodes + 1)]
    weights = [jweights * (0.5 * inner) ** (exponent + 1)]
    nodes, lweights = gauss_legendre(order)
    left = inner
    while left < h * (1 - 1e-12):
        right = 2 * left
        s = left + 0.5 * (right - left) * (nodes + 1)
        points.append(s)
        weights.append(0.5 * (right - left) * lweights * s ** exponent)
        left = right
    return np.concatenate(points), np.concatenate(weights)


def abel_integral(f, spec=None, endpoint_exponent=0.0, frequency=1.0, label='integral'):
    """Abel limit of the integral of s**endpoint_exponent * f(s) over (0, inf).

    ``f`` maps an array of nodes of shape (n,) to values of shape (n,) or
    (n, k); in the second case k integrals are computed on the same nodes.
    ``frequency`` is the largest angular frequency of ``f`` and scales the
    panel width.
    """
    spec = spec or OscillatoryQuadratureSpec()
    if endpoint_exponent <= -1:
        raise DomainError('Endpoint exponent must exceed -1 for an integrable singularity')
    h = spec.panel_width / max(1.0, float(frequency))
    eps = np.asarray(spec.dampings)
    cutoff = spec.cutoff_for(eps[-1])

    points, weights = _endpoint_nodes(h, spec.order, endpoint_exponent)
    values = np.asarray(f(points))
    sums = np.exp(-np.outer(eps, points)) @ (weights.reshape((-1,) + (1,) * (values.ndim - 1)) * values)
    sums = sums.astype(complex)

    nodes, lweights = gauss_legendre(spec.order)
    total_panels = int(np.ceil(cutoff / h))
    for start in range(1, total_panels, PANELS_PER_CHUNK):
        stop = min(total_panels, start + PANELS_PER_CHUNK)
        left = np.arange(start, stop) * h
        points = (left[:, None] + 0.5 * h * (nodes[None, :] + 1)).ravel()
        weights = np.tile(0.5 * h * lweights, stop - start)
        if endpoint_exponent:
            weights = weights * points ** endpoint_exponent
        values = np.asarray(f(points))
        sums += np.exp(-np.outer(eps, points)) @ (weights.reshape((-1,) + (1,) * (values.ndim - 1)) * values)

    if not np.iscomplexobj(values):
        sums = sums.real
    value, error = neville_to_zero(eps, sums)
    worst = float(np.max(error))
    converged = worst <= spec.tolerance
    if not converged:
        message = f'{label}: Abel extrapolation error {worst:.3e} exceeds tolerance {spec.tolerance:.1e}'
        logger.warning(message)
        warnings.warn(message, AccuracyWarning, stacklevel=2)
    return QuadratureResult(value=value, error=error, converged=converged, damped=list(sums))
