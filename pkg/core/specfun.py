"""Special functions used by every closed form in the package.

Values come from ``scipy.special`` (Cephes/AMOS series and asymptotic
expansions, double precision). The power series kept here serve two purposes:
they are the independent oracles the accuracy tests compare against, and they
are the small-argument branch of :func:`normalized_bessel`, whose closed form
(2/z)^mu * Gamma(mu+1) * J_mu(z) has a removable singularity at z = 0.
"""
import logging
import math
import warnings

import numpy as np
from scipy import special

from .exceptions import AccuracyWarning, DomainError, PoleError

logger = logging.getLogger(__name__)

# Below this argument the normalized Bessel function is summed from its
# series; six terms leave a truncation error below z**12 / 4**6 / 720.
NORMALIZED_SERIES_MAX = 1e-2
NORMALIZED_SERIES_TERMS = 6

# Window in which airy_ai is documented to hold absolute accuracy 1e-10.
AIRY_WINDOW = 20.0

# The Maclaurin series of Ai loses digits to cancellation beyond this point.
AIRY_SERIES_MAX = 5.0

AIRY_AI_ZERO = 3 ** (-2 / 3) / math.gamma(2 / 3)
AIRY_AIPRIME_ZERO = -(3 ** (-1 / 3)) / math.gamma(1 / 3)


def _unwrap(value, like):
    if np.ndim(like) == 0:
        return value.item() if isinstance(value, np.ndarray) else value
    return value


def _check_order(mu):
    if not math.isfinite(mu) or mu <= -1:
        raise DomainError(f'Bessel order must satisfy mu > -1, got {mu}')


def bessel_j(mu, x):
    """Bessel function of the first kind J_mu(x) for real order mu > -1, x >= 0."""
    _check_order(mu)
    x_arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x_arr)) or np.any(x_arr < 0):
        raise DomainError('Bessel argument must be finite and non-negative')
    return _unwrap(special.jv(mu, x_arr), x)


def bessel_j_series(mu, x, terms=60):
    """J_mu(x) summed from its defining power series.

    Accurate to double precision for x up to about 25; beyond that the
    alternating terms cancel and digits are lost.
    """
    _check_order(mu)
    x_arr = np.asarray(x, dtype=float)
    half = x_arr / 2
    term = np.power(half, mu) / math.gamma(mu + 1)
    total = term.copy()
    q = -half * half
    for k in range(1, terms):
        term = term * q / (k * (k + mu))
        total = total + term
    return _unwrap(total, x)


def normalized_bessel(mu, z):
    """Lambda_mu(z) = Gamma(mu+1) * (2/z)**mu * J_mu(z), with Lambda_mu(0) = 1.

    This is the characteristic-function shape shared by the EPD, Barenblatt and
    fractional EPD laws. Half-integer orders use their elementary forms.
    """
    _check_order(mu)
    z_arr = np.abs(np.asarray(z, dtype=float))
    if mu == -0.5:
        return _unwrap(np.cos(z_arr), z)
    if mu == 0.5:
        return _unwrap(np.sinc(z_arr / math.pi), z)

    out = np.empty_like(z_arr)
    small = z_arr < NORMALIZED_SERIES_MAX
    if np.any(small):
        zs = z_arr[small]
        q = -(zs * zs) / 4
        term = np.ones_like(zs)
        acc = np.ones_like(zs)
        for k in range(1, NORMALIZED_SERIES_TERMS):
            term = term * q / (k * (k + mu))
            acc = acc + term
        out[small] = acc
    large = ~small
    if np.any(large):
        zl = z_arr[large]
        log_prefactor = special.gammaln(mu + 1) + mu * np.log(2 / zl)
        out[large] = np.exp(log_prefactor) * special.jv(mu, zl)
    return _unwrap(out, z)


def airy_ai(x):
    """Airy function Ai(x).

    Outside |x| <= AIRY_WINDOW the value is still returned, with an
    AccuracyWarning.
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(np.abs(x_arr) > AIRY_WINDOW):
        message = f'airy_ai evaluated outside the accuracy window |x| <= {AIRY_WINDOW}'
        logger.warning(message)
        warnings.warn(message, AccuracyWarning, stacklevel=2)
    ai, _, _, _ = special.airy(x_arr)
    return _unwrap(ai, x)


def airy_ai_series(x, terms=80):
    """Ai(x) from its Maclaurin series; reliable for |x| <= AIRY_SERIES_MAX."""
    x_arr = np.asarray(x, dtype=float)
    x3 = x_arr ** 3
    f_term = np.ones_like(x_arr)
    g_term = x_arr.copy()
    f_sum = f_term.copy()
    g_sum = g_term.copy()
    for k in range(1, terms):
        f_term = f_term * x3 / ((3 * k - 1) * (3 * k))
        g_term = g_term * x3 / ((3 * k) * (3 * k + 1))
        f_sum = f_sum + f_term
        g_sum = g_sum + g_term
    return _unwrap(AIRY_AI_ZERO * f_sum + AIRY_AIPRIME_ZERO * g_sum, x)


def _check_pole(x_arr):
    poles = (x_arr <= 0) & (x_arr == np.round(x_arr))
    if np.any(poles):
        raise PoleError(f'Gamma function has a pole at {x_arr[poles][0]}')


def gamma_fn(x):
    """Gamma function; raises PoleError at non-positive integers."""
    x_arr = np.asarray(x, dtype=float)
    _check_pole(x_arr)
    return _unwrap(special.gamma(x_arr), x)


def log_gamma(x):
    """log Gamma(x) for x > 0."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr <= 0):
        raise DomainError('log_gamma is defined here for positive arguments only')
    return _unwrap(special.gammaln(x_arr), x)
