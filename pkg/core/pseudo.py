"""Signed kernels of higher-order heat-type equations and their EPD compositions.

The kernel of order n at time t,

    K_n(x, t) = (1/pi) int_0^inf cos(xi x) cos(xi**n t) d xi,

is a signed measure for n >= 2: it takes negative values and only damped
integrals of it are meaningful. For n = 2 and n = 3 it has closed forms in
terms of a chirped cosine and the Airy function.
"""
import logging
import math

import numpy as np
from scipy import special

from .analytic import check_time
from .exceptions import DomainError
from .params import OscillatoryQuadratureSpec
from .quadrature import QuadratureResult, abel_integral, composite_legendre, jacobi_cosine, neville_to_zero
from .specfun import airy_ai, normalized_bessel

logger = logging.getLogger(__name__)

# Largest Bessel argument c t xi**n kept by the Fourier route of the composition.
COMPOSE_ZMAX = 1000.0
# Transform cutoff of the composition inside its x-space mass.
MASS_ZMAX = 100.0
# Dampings of the regularized masses. The damped mass is a power series in
# eta, so halving steps extrapolate cleanly to eta = 0.
MASS_DAMPINGS = (0.4, 0.2, 0.1, 0.05, 0.025)
# exp(-MASS_DECAY) bounds the neglected part of each x-space damped integral.
MASS_DECAY = 21.0
MASS_TAIL = 1e-5

# The kernel integrals in s = xi**n decay slowly; finer dampings keep the
# extrapolation error below 1e-6.
KERNEL_QUADRATURE = OscillatoryQuadratureSpec(dampings=(4e-3, 2e-3, 1e-3))


def _check_order(n):
    if int(n) != n or n < 2:
        raise DomainError(f'Kernel order must be an integer >= 2, got n={n}')


def rods_kernel(x, t):
    """K_2(x, t) = (4 pi t)**(-1/2) cos(x**2/(4t) - pi/4)."""
    t = check_time(t)
    x = np.asarray(x, dtype=float)
    value = np.cos(x ** 2 / (4 * t) - math.pi / 4) / np.sqrt(4 * math.pi * t)
    return value.item() if value.ndim == 0 else value


def airy_kernel(x, t, checked=True):
    """K_3(x, t) = (3t)**(-1/3) [Ai(x/(3t)**(1/3)) + Ai(-x/(3t)**(1/3))] / 2.

    With ``checked=False`` arguments outside the Airy accuracy window are
    evaluated without warning.
    """
    t = check_time(t)
    scale = (3 * t) ** (1 / 3)
    y = np.asarray(x, dtype=float) / scale
    ai = airy_ai if checked else (lambda z: special.airy(z)[0])
    value = 0.5 * (np.asarray(ai(y)) + np.asarray(ai(-y))) / scale
    return value.item() if value.ndim == 0 else value


def pseudo_kernel(x, t, n, quad=None):
    """K_n(x, t) by Abel-damped quadrature in s = xi**n."""
    _check_order(n)
    t = float(check_time(t))
    x_arr = np.atleast_1d(np.abs(np.asarray(x, dtype=float)))

    def integrand(s):
        return np.cos(np.outer(s ** (1 / n), x_arr)) * np.cos(s * t)[:, None] / (n * math.pi)

    result = abel_integral(integrand, quad or KERNEL_QUADRATURE, endpoint_exponent=1 / n - 1,
                           frequency=t + float(np.max(x_arr)), label=f'pseudo_kernel(n={n})')
    value, error = result.value, result.error
    if np.ndim(x) == 0:
        value, error = value[0], error[0]
    return QuadratureResult(value=value, error=error, converged=result.converged)


def signed_kernel(x, t, n, quad=None):
    """Closed form for n = 2, 3 and the numeric integral otherwise."""
    if n == 2:
        return rods_kernel(x, t)
    if n == 3:
        return airy_kernel(x, t)
    return pseudo_kernel(x, t, n, quad).value


def lambda_to_gamma(lam, d=1):
    """EPD parameter with damping 2*lam/t, i.e. 2 gamma + d - 1 = 2 lam."""
    if not lam > 0:
        raise DomainError(f'Damping parameter must be positive, got lambda={lam}')
    return lam - (d - 1) / 2


def _telegraph_weight(lam, c):
    gamma = lambda_to_gamma(lam)
    a = gamma - 1
    norm = math.exp(special.gammaln(gamma + 0.5) - special.gammaln(gamma) - 0.5 * math.log(math.pi))
    return gamma, a, norm


def compose_epd_pseudo(x, t, lam, c, n, quad=None, route='fourier', zmax=COMPOSE_ZMAX):
    """Integral over w of K_n(x, |w|) g(w, t), g the one-dimensional EPD law.

    ``route='fourier'`` integrates cos(xi x) against the Gauss-Jacobi cosine
    transform of g up to the frequency where c t xi**n = ``zmax``; the
    neglected tail enters the error estimate. ``route='kernel'`` integrates
    the closed-form kernel against g after the substitution
    v = w**(-1/(n-1)), which turns the chirp near w = 0 into a plain
    oscillation; it needs n in {2, 3} and is efficient for |x| >= 1.
    """
    _check_order(n)
    t = float(check_time(t))
    if not c > 0:
        raise DomainError(f'Speed must be positive, got c={c}')
    gamma, a, norm = _telegraph_weight(lam, c)
    ct = c * t
    x_arr = np.atleast_1d(np.abs(np.asarray(x, dtype=float)))
    if route == 'fourier':
        cutoff = (zmax / ct) ** (1 / n)
        frequency = n * ct * cutoff ** (n - 1) + float(np.max(x_arr))

        def integrand(xi):
            transform = norm * jacobi_cosine(ct * xi ** n, a)
            return np.cos(np.outer(xi, x_arr)) * transform[:, None] / math.pi

        result = composite_legendre(integrand, 0.0, cutoff, 0.5 / frequency)
        amplitude = math.exp(special.gammaln(gamma + 0.5)) * 2 ** (gamma - 0.5) * math.sqrt(2 / math.pi)
        tail = amplitude * zmax ** (-gamma) / (math.pi * n * ct * cutoff ** (n - 1))
        value, error = result.value, result.error + tail
        converged = result.converged
    elif route == 'kernel':
        value, error, converged = _compose_by_kernel(x_arr, ct, n, a, norm, quad)
    else:
        raise DomainError(f"Unknown composition route {route!r}; expected 'fourier' or 'kernel'")
    if np.ndim(x) == 0:
        value, error = value[0], error[0]
    return QuadratureResult(value=value, error=error, converged=converged)


def _compose_by_kernel(x_arr, ct, n, a, norm, quad):
    if n not in (2, 3):
        raise DomainError('The kernel route needs a closed-form kernel (n = 2 or 3)')
    v0 = ct ** (-1 / (n - 1))
    values, errors = [], []
    converged = True
    for x in x_arr:
        def integrand(s):
            v = v0 + s
            w = v ** (-(n - 1))
            # The endpoint factor s**a of the weight is carried by the Jacobi nodes.
            profile = (1 - (w / ct) ** 2) / s
            kernel = rods_kernel(x, w) if n == 2 else airy_kernel(x, w, checked=False)
            return 2 * (n - 1) * norm / ct * profile ** a * kernel * v ** (-n)

        if n == 2:
            frequency = x * x / 4
        else:
            frequency = 2 * x ** 1.5 / (3 * math.sqrt(3))
        result = abel_integral(integrand, quad, endpoint_exponent=a, frequency=frequency,
                               label=f'compose_epd_pseudo(n={n}, kernel)')
        values.append(float(np.real(result.value)))
        errors.append(float(result.error))
        converged = converged and result.converged
    return np.array(values), np.array(errors), converged


def damped_integrals(f, frequency, etas=MASS_DAMPINGS, order=16):
    """Integral of the even function ``f`` against exp(-eta |x|) over the line, per eta.

    The half-line is cut at MASS_DECAY / min(etas) into unit segments whose
    panels follow ``frequency(x)``, the local angular frequency of f at the
    right end of each segment.
    """
    etas = np.asarray(etas, dtype=float)
    length = MASS_DECAY / float(etas.min())

    def integrand(x):
        return np.asarray(f(x), dtype=float)[:, None] * np.exp(-np.outer(x, etas))

    values, errors = np.zeros(etas.size), np.zeros(etas.size)
    converged = True
    for left in np.arange(0.0, length, 1.0):
        right = min(left + 1.0, length)
        part = composite_legendre(integrand, left, right, 0.5 / max(1.0, frequency(right)), order)
        values += part.value
        errors += part.error
        converged = converged and part.converged
    return QuadratureResult(value=2 * values, error=2 * errors, converged=converged)


def poisson_damped_masses(cf, n, scale, etas=MASS_DAMPINGS):
    """(2/pi) int_0^inf cf(xi) eta / (eta**2 + xi**2) d xi for every eta.

    By Parseval this is the integral of the inverse transform of the even
    characteristic function ``cf`` against exp(-eta |x|). ``cf`` depends on
    xi through scale * xi**n and is bounded and oscillating or decaying there;
    the cutoff leaves a tail of order MASS_TAIL * eta. Segments double in
    length from min(etas) so the Lorentzian stays resolved.
    """
    etas = np.asarray(etas, dtype=float)
    smallest = float(etas.min())
    cutoff = (1 / (MASS_TAIL * scale)) ** (1 / (n + 1))
    edges = [0.0, min(smallest, cutoff)]
    while edges[-1] < cutoff:
        edges.append(min(2 * edges[-1], cutoff))

    def integrand(xi):
        lorentz = etas / (etas ** 2 + xi[:, None] ** 2)
        return (2 / math.pi) * np.asarray(cf(xi), dtype=float)[:, None] * lorentz

    values, errors = np.zeros(etas.size), np.zeros(etas.size)
    converged = True
    for left, right in zip(edges[:-1], edges[1:]):
        # xi**(n-1) peaks at the right end for n >= 1 and at the left end otherwise.
        frequency = n * scale * (right if n >= 1 else max(left, smallest)) ** (n - 1)
        width = min(0.5 / max(1.0, frequency), 0.5 * (right - left))
        part = composite_legendre(integrand, left, right, width)
        values += part.value
        errors += part.error
        converged = converged and part.converged
    return QuadratureResult(value=values, error=errors, converged=converged)


def _extrapolated(etas, damped):
    value, error = neville_to_zero(np.asarray(etas, dtype=float), damped.value)
    return QuadratureResult(value=float(value), error=float(error) + float(np.max(damped.error)),
                            converged=damped.converged, damped=[float(v) for v in damped.value])


def kernel_mass(t, n, etas=MASS_DAMPINGS):
    """Abel-regularized mass of K_n(., t) from its closed form on the line, n = 2 or 3."""
    t = float(check_time(t))
    if n == 2:
        def kernel(x):
            return rods_kernel(x, t)

        def frequency(x):
            return x / (2 * t)
    elif n == 3:
        scale = (3 * t) ** (1 / 3)

        def kernel(x):
            return airy_kernel(x, t, checked=False)

        def frequency(x):
            return math.sqrt(x / scale) / scale
    else:
        raise DomainError(f'The x-space mass needs a closed-form kernel (n = 2 or 3), got n={n}')
    return _extrapolated(etas, damped_integrals(kernel, frequency, etas))


def pseudo_cf_mass(cf, n, scale, etas=MASS_DAMPINGS):
    """Abel-regularized mass from the damped masses of ``cf``, extrapolated to eta = 0."""
    return _extrapolated(etas, poisson_damped_masses(cf, n, scale, etas))


def composition_damped_mass(t, lam, c, n, eta=1.0, zmax=MASS_ZMAX):
    """Integral of compose_epd_pseudo (Fourier route) against exp(-eta |x|).

    The truncated transform oscillates at most at the cutoff frequency, which
    sizes the x panels.
    """
    cutoff = (zmax / (c * float(check_time(t)))) ** (1 / n)
    damped = damped_integrals(lambda x: compose_epd_pseudo(x, t, lam, c, n, zmax=zmax).value,
                              lambda x: cutoff, (eta,))
    return QuadratureResult(value=float(damped.value[0]), error=float(damped.error[0]),
                            converged=damped.converged)


def kernel_cf(t, n):
    return lambda xi: np.cos(np.asarray(xi) ** n * t)


def composition_cf(t, lam, c, n):
    gamma = lambda_to_gamma(lam)
    return lambda xi: normalized_bessel(gamma - 0.5, c * t * np.asarray(xi) ** n)


