"""Closed forms of the Barenblatt and Euler-Poisson-Darboux (EPD) families.

The Barenblatt solution in the rescaled time t' = t**beta is the EPD
fundamental solution with gamma = m/(m-1) and speed c' = 1/sqrt(B), so most
operations below are thin wrappers around the EPD forms. Points are given as
arrays whose last axis has length ``d``; for ``d == 1`` plain reals (or arrays
of reals) are accepted as well.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy import special

from .exceptions import DomainError
from .params import EPDParams, FlightLaw, ModelParams, VerifyReport
from .rng import gaussian_directions
from .specfun import normalized_bessel

logger = logging.getLogger(__name__)

RESCALE_TOLERANCE = 1e-12


class BarenblattConstants(NamedTuple):
    alpha: float
    beta: float
    B: float
    C: float


class RescaledEPDCoefficients(NamedTuple):
    """u_tt + (damping/t) u_t = speed**2 * t**time_exponent * Laplacian(u)."""

    damping: float
    speed: float
    time_exponent: float


@dataclass(frozen=True)
class RadialDensity:
    """Rotationally invariant law with compact support.

    ``profile(r)`` is the density at any point of norm ``r``; ``cdf(r)`` is
    P(|X| <= r).
    """

    profile: Callable
    cdf: Callable
    support: float
    d: int
    label: str = ''

    def __call__(self, x):
        return self.profile(radial_norm(x, self.d))


def check_time(t):
    t_arr = np.asarray(t, dtype=float)
    if np.any(~(t_arr > 0)):
        raise DomainError(f'Time must be positive, got t={t}')
    return t_arr


def radial_norm(x, d):
    """Euclidean norm of points ``x`` in R^d, taken over the last axis."""
    x = np.asarray(x, dtype=float)
    if d == 1:
        if x.ndim >= 2 and x.shape[-1] == 1:
            x = x[..., 0]
        return np.abs(x)
    if x.ndim == 0 or x.shape[-1] != d:
        raise DomainError(f'Points must have last dimension {d}, got shape {x.shape}')
    return np.linalg.norm(x, axis=-1)


def _scalar(value):
    return value.item() if isinstance(value, np.ndarray) and value.ndim == 0 else value


def barenblatt_constants(p: ModelParams):
    return BarenblattConstants(alpha=p.alpha, beta=p.beta, B=p.B, C=p.C)


def epd_normalization(gamma, d):
    """Gamma(gamma + d/2) / (pi**(d/2) Gamma(gamma))."""
    return math.exp(special.gammaln(gamma + d / 2) - special.gammaln(gamma) - (d / 2) * math.log(math.pi))


def _epd_profile(r, radius, gamma, d):
    r = np.asarray(r, dtype=float)
    inside = r < radius
    s = np.where(inside, 1 - (r / radius) ** 2, 1.0)
    norm = epd_normalization(gamma, d) * np.asarray(radius, dtype=float) ** (-d)
    return np.where(inside, norm * s ** (gamma - 1), 0.0)


def epd_density(x, t, q: EPDParams):
    t = check_time(t)
    r = radial_norm(x, q.d)
    return _scalar(_epd_profile(r, q.c * t, q.gamma, q.d))


def epd_radial_cdf(r, t, q: EPDParams):
    """P(|X| <= r); the squared normalized radius is Beta(d/2, gamma)."""
    t = check_time(t)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError('Radius must be non-negative')
    s = np.clip((r / (q.c * t)) ** 2, 0.0, 1.0)
    return _scalar(special.betainc(q.d / 2, q.gamma, s))


def epd_cf(xi, t, q: EPDParams):
    t = check_time(t)
    k = radial_norm(xi, q.d)
    return _scalar(normalized_bessel(q.bessel_order, k * q.c * t))


def epd_law(q: EPDParams, t):
    return RadialDensity(
        profile=lambda r: _epd_profile(r, q.c * t, q.gamma, q.d),
        cdf=lambda r: epd_radial_cdf(r, t, q),
        support=q.c * t, d=q.d, label=f'epd(gamma={q.gamma:g}, c={q.c:g}, t={t:g})',
    )


def barenblatt_density(x, t, p: ModelParams):
    """C t**-alpha (1 - B|x|**2 / t**(2 beta))_+ ** (1/(m-1))."""
    t = check_time(t)
    r = radial_norm(x, p.d)
    inside = r < p.support_radius(t)
    profile = np.where(inside, 1 - p.B * r ** 2 / t ** (2 * p.beta), 0.0)
    return _scalar(np.where(inside, p.C * t ** (-p.alpha) * profile ** p.exponent, 0.0))


def barenblatt_radial_cdf(r, t, p: ModelParams):
    t = check_time(t)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError('Radius must be non-negative')
    s = np.clip(p.B * r ** 2 / t ** (2 * p.beta), 0.0, 1.0)
    return _scalar(special.betainc(p.d / 2, p.gamma, s))


def barenblatt_cf(xi, t, p: ModelParams):
    t = check_time(t)
    k = radial_norm(xi, p.d)
    return _scalar(normalized_bessel(p.gamma + p.d / 2 - 1, k * t ** p.beta / math.sqrt(p.B)))


def barenblatt_law(p: ModelParams, t):
    return RadialDensity(
        profile=lambda r: barenblatt_density(on_axis(r, p.d) if p.d > 1 else r, t, p),
        cdf=lambda r: barenblatt_radial_cdf(r, t, p),
        support=p.support_radius(t), d=p.d, label=f'barenblatt(m={p.m:g}, d={p.d}, t={t:g})',
    )


def on_axis(r, d):
    r = np.asarray(r, dtype=float)
    x = np.zeros(r.shape + (d,))
    x[..., 0] = r
    return x


def sample_barenblatt(p: ModelParams, t, size, rng):
    """Exact draws from the Barenblatt law at time ``t``.

    The squared normalized radius is Beta(d/2, m/(m-1)); the direction is
    uniform. Returns shape (size,) for d=1 and (size, d) otherwise.
    """
    check_time(t)
    radius = p.support_radius(t) * np.sqrt(rng.beta(p.d / 2, p.gamma, size))
    if p.d == 1:
        return radius * rng.choice((-1.0, 1.0), size)
    return radius[:, None] * gaussian_directions(rng, p.d, size)


def pme_epd_rescale_check(p: ModelParams, times=None, fractions=None):
    """Compare the Barenblatt solution with the EPD solution in rescaled time.

    Points are placed along the diagonal direction at the given fractions of
    the support radius, including points outside the support.
    """
    times = np.linspace(0.25, 4.0, 10) if times is None else np.asarray(times, dtype=float)
    fractions = np.linspace(-1.2, 1.2, 10) if fractions is None else np.asarray(fractions, dtype=float)
    q = p.as_epd()
    direction = np.ones(p.d) / math.sqrt(p.d)
    worst = 0.0
    for t in times:
        r = fractions * p.support_radius(t)
        x = r if p.d == 1 else r[:, None] * direction[None, :]
        lhs = np.asarray(barenblatt_density(x, t, p))
        rhs = np.asarray(epd_density(x, p.rescaled_time(t), q))
        scale = np.maximum(1.0, np.abs(rhs))
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / scale)))
    return VerifyReport.at_most('rescale', worst, RESCALE_TOLERANCE, params=p.as_dict())


def m_from_n(d, n, law):
    """PME exponent whose Barenblatt law matches the flight with ``n`` changes.

    Returns None when no exponent m > 1 corresponds to (d, n, law).
    """
    law = FlightLaw.parse(law)
    if n < 1:
        raise DomainError(f'Number of direction changes must be >= 1, got n={n}')
    law.check_dimension(d)
    if law is FlightLaw.F1_UNIFORM:
        if n < 3:
            return None
        return (n + 1) / (n - 1) if n % 2 else n / (n - 2)
    k = n * (d - 1) if law is FlightLaw.F2_DIRICHLET_DMINUS1 else n * (d - 2)
    if k <= 2:
        return None
    return k / (k - 2)


def moment_y1(p_order, t, m):
    """p-th moment of the one-dimensional Barenblatt law."""
    if int(p_order) != p_order or p_order < 0:
        raise DomainError(f'Moment order must be a non-negative integer, got {p_order}')
    check_time(t)
    p = ModelParams(m=m, d=1)
    if p_order % 2:
        return 0.0
    log_ratio = (special.gammaln((p_order + 1) / 2) + special.gammaln(0.5 + p.gamma)
                 - 0.5 * math.log(math.pi) - special.gammaln((p_order + 1) / 2 + p.gamma))
    return math.exp(log_ratio) * p.support_radius(t) ** p_order


def variance_y1(t, m):
    check_time(t)
    return 2 * m * (m + 1) / (3 * m - 1) * t ** (2 / (1 + m))


def subdiffusion_exponent(n):
    """Exponent 2/(1+m) of t in the variance of the one-dimensional law, m = m_from_n(1, n, 'f1')."""
    if n < 3:
        raise DomainError('The telegraph correspondence needs n >= 3')
    return 2 / (1 + m_from_n(1, n, 'f1'))


def marginal_density_1d(xk, tprime, p: ModelParams):
    """One coordinate of the d-dimensional law in rescaled time ``tprime``.

    Integrating out d-1 coordinates raises the profile exponent 1/(m-1) by
    (d-1)/2, leaving a one-dimensional EPD law.
    """
    check_time(tprime)
    q = EPDParams(gamma=p.gamma + (p.d - 1) / 2, c=p.speed, d=1)
    return epd_density(xk, tprime, q)


def self_similarity_defect(p: ModelParams, scales=(0.5, 2.0, 3.7), times=(0.5, 1.0, 2.0), points=41):
    """max |u(x,t) - A**alpha u(A**beta x, A t)| over a grid of x, t and A."""
    direction = np.ones(p.d) / math.sqrt(p.d)
    worst = 0.0
    for t in times:
        r = np.linspace(-1.1, 1.1, points) * p.support_radius(t)
        x = r if p.d == 1 else r[:, None] * direction[None, :]
        base = np.asarray(barenblatt_density(x, t, p))
        for A in scales:
            scaled = A ** p.alpha * np.asarray(barenblatt_density(A ** p.beta * x, A * t, p))
            worst = max(worst, float(np.max(np.abs(base - scaled))))
    return worst


def epd_time_rescaled_coefficients(p: ModelParams):
    """Coefficients of the EPD equation written back in the original time t."""
    beta = p.beta
    damping = (1 - beta) + beta * (2 * p.gamma + p.d - 1)
    return RescaledEPDCoefficients(damping=damping, speed=p.speed * beta, time_exponent=2 * beta - 2)


def poisson_rate(t, p: ModelParams):
    """Rate of the non-homogeneous Poisson clock behind the one-dimensional marginals."""
    check_time(t)
    return (p.d + (p.m + 1) / (p.m - 1)) / (2 * t ** p.beta)
