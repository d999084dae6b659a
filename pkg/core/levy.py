"""Stable subordinators, subordinated Brownian motion and the Cauchy law.

The characteristic function convention is E exp(i<xi, S(t)>) = exp(-t|xi|**nu),
so the Brownian motion being subordinated has generator Laplacian (variance 2s
per coordinate) and for nu = 2 no subordination happens at all.
"""
import logging
import math

import numpy as np
from scipy import special

from .analytic import check_time, radial_norm
from .exceptions import DomainError

logger = logging.getLogger(__name__)


def _check_index(index):
    if not 0 < index < 1:
        raise DomainError(f'Subordinator index must lie in (0, 1), got {index}')


def _check_nu(nu):
    if not 0 < nu <= 2:
        raise DomainError(f'Stable index must satisfy 0 < nu <= 2, got {nu}')


def sample_subordinator(index, t, rng, size=None):
    """Positive stable draws with E exp(-lam Y(t)) = exp(-t lam**index).

    Kanter's representation of Y(1) from a uniform angle and an exponential
    variable, then Y(t) = t**(1/index) Y(1).
    """
    _check_index(index)
    check_time(t)
    u = rng.uniform(0.0, math.pi, size)
    w = rng.standard_exponential(size)
    a = index
    y1 = (np.sin(a * u) / np.sin(u) ** (1 / a)) * (np.sin((1 - a) * u) / w) ** ((1 - a) / a)
    return t ** (1 / a) * y1


def levy_cdf(y, t):
    """CDF of the index-1/2 subordinator at time t, a Levy law of scale t**2/2."""
    check_time(t)
    y = np.asarray(y, dtype=float)
    safe = np.where(y > 0, y, 1.0)
    value = np.where(y > 0, special.erfc(t / (2 * np.sqrt(safe))), 0.0)
    return value.item() if value.ndim == 0 else value


def stable_cf(xi, t, nu, d):
    _check_nu(nu)
    check_time(t)
    return np.exp(-t * radial_norm(xi, d) ** nu)


def sample_isotropic_stable(nu, d, t, rng, size=None):
    """Brownian motion with generator Laplacian evaluated at Y_{nu/2}(t)."""
    _check_nu(nu)
    check_time(t)
    rows = 1 if size is None else size
    clock = np.full(rows, float(t)) if nu == 2 else sample_subordinator(nu / 2, t, rng, rows)
    scale = np.sqrt(2 * clock)
    if d == 1:
        x = scale * rng.standard_normal(rows)
    else:
        x = scale[:, None] * rng.standard_normal((rows, d))
    return x[0] if size is None else x


def cauchy_density(x, t, d):
    """Gamma((d+1)/2) / pi**((d+1)/2) * t / (t**2 + |x|**2)**((d+1)/2)."""
    check_time(t)
    r = radial_norm(x, d)
    k = (d + 1) / 2
    norm = math.exp(special.gammaln(k) - k * math.log(math.pi))
    value = norm * t / (t ** 2 + r ** 2) ** k
    return value.item() if isinstance(value, np.ndarray) and value.ndim == 0 else value


def sample_cauchy(d, t, size, rng):
    """d-dimensional Cauchy law of scale t as a Gaussian over an independent |N(0,1)|."""
    check_time(t)
    z = np.abs(rng.standard_normal(size))
    if d == 1:
        return t * rng.standard_normal(size) / z
    return t * rng.standard_normal((size, d)) / z[:, None]


def sample_subordinated_cauchy(nu, d, t, size, rng):
    """Cauchy process read at Y_nu(t); the result is isotropic nu-stable for 0 < nu < 1."""
    _check_index(nu)
    clock = sample_subordinator(nu, t, rng, size)
    z = np.abs(rng.standard_normal(size))
    if d == 1:
        return clock * rng.standard_normal(size) / z
    return (clock / z)[:, None] * rng.standard_normal((size, d))
