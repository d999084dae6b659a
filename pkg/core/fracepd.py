"""Space-fractional Euler-Poisson-Darboux solutions and their kernels.

The fundamental solution u_nu of the fractional EPD equation has the
characteristic function Lambda_mu(c t |xi|**(nu/2)), mu = gamma + d/2 - 1,
which is also the average of cos(|xi|**(nu/2) w) against the one-dimensional
EPD weight g(w, t). Physical-space values come from the radial inversion

    u(x) = K_d * int_0^inf rho**(d-1) Lambda_{d/2-1}(rho |x|) F(rho) d rho,
    K_d = 2**(1-d) / (pi**(d/2) Gamma(d/2)),

with F the characteristic function along a ray. These integrals converge only
in the Abel sense and go through :func:`core.quadrature.abel_integral`.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .analytic import barenblatt_density, check_time, radial_norm
from .exceptions import DomainError, GridError
from .params import FracEPDParams, ModelParams, VerifyReport
from .quadrature import QuadratureResult, abel_integral, gauss_jacobi, jacobi_cosine, jacobi_order_for
from .specfun import normalized_bessel

logger = logging.getLogger(__name__)

IDENTITY_TOLERANCE = 1e-5
IDENTITY_STEP = 1e-4


@dataclass
class KernelSample:
    x: object
    w: float
    p1: complex
    p2: complex
    error: float
    converged: bool


def inversion_constant(d):
    return 2 ** (1 - d) / (math.pi ** (d / 2) * special.gamma(d / 2))


def _weight_constant(q):
    return math.exp(special.gammaln(q.gamma + q.d / 2) - 0.5 * math.log(math.pi)
                    - special.gammaln(q.weight_exponent + 1))


def epd_weight(w, t, q: FracEPDParams):
    """g(w, t): the weight on [-ct, ct] whose cosine transform is the EPD CF."""
    t = check_time(t)
    w = np.asarray(w, dtype=float)
    ct = q.c * t
    inside = np.abs(w) < ct
    s = np.where(inside, 1 - (w / ct) ** 2, 1.0)
    value = np.where(inside, _weight_constant(q) / ct * s ** q.weight_exponent, 0.0)
    return value.item() if value.ndim == 0 else value


def pme_weight(w, t, m):
    """The weight of the time-changed solution: the one-dimensional Barenblatt law."""
    return barenblatt_density(w, t, ModelParams(m=m, d=1))


def fracepd_cf(xi, t, q: FracEPDParams):
    t = check_time(t)
    k = radial_norm(xi, q.d)
    return normalized_bessel(q.bessel_order, q.c * t * k ** (q.nu / 2))


def fracepd_cf_poisson(xi, t, q: FracEPDParams):
    """The characteristic function as a Gauss-Jacobi average of cosines against g."""
    t = check_time(t)
    z = q.c * t * radial_norm(xi, q.d) ** (q.nu / 2)
    a = q.weight_exponent
    norm = _weight_constant(q)
    coarse = norm * jacobi_cosine(z, a)
    fine = norm * jacobi_cosine(z, a, order=int(np.max(jacobi_order_for(z))) * 2)
    error = float(np.max(np.abs(fine - coarse)))
    converged = error <= 1e-12
    if not converged:
        logger.warning('Poisson-form CF did not converge: estimate %.3e', error)
    value = fine.item() if np.ndim(fine) == 0 else fine
    return QuadratureResult(value=value, error=error, converged=converged)


def _inverse(profile, x, d, spec, frequency, label):
    r = np.atleast_1d(radial_norm(x, d))

    def integrand(rho):
        return normalized_bessel(d / 2 - 1, np.outer(rho, r)) * profile(rho)[:, None]

    result = abel_integral(integrand, spec, endpoint_exponent=d - 1,
                           frequency=frequency + float(np.max(r)), label=label)
    scale = inversion_constant(d)
    value = scale * result.value
    error = scale * result.error
    if np.ndim(x) == 0 or (d > 1 and np.ndim(x) == 1):
        value, error = value[0], error[0]
    return QuadratureResult(value=value, error=error, converged=result.converged, damped=result.damped)


def fracepd_density(x, t, q: FracEPDParams, quad=None):
    """u_nu(x, t) by radial inversion of the closed-form characteristic function."""
    t = check_time(t)
    ct = q.c * float(t)
    return _inverse(lambda rho: normalized_bessel(q.bessel_order, ct * rho ** (q.nu / 2)),
                    x, q.d, quad, ct, 'fracepd_density')


def kernel_p12(x, w, nu, d, quad=None):
    """p1 and p2 = conj(p1) at (x, w); p1 has the Fourier symbol exp(i |xi|**(nu/2) w)."""
    if not 0 < nu <= 2:
        raise DomainError(f'Fractional order must satisfy 0 < nu <= 2, got {nu}')
    result = _inverse(lambda rho: np.exp(1j * w * rho ** (nu / 2)), x, d, quad, abs(w), 'kernel_p12')
    p1 = result.value
    return KernelSample(x=x, w=w, p1=p1, p2=np.conj(p1), error=float(np.max(result.error)),
                        converged=result.converged)


def compose_solution(x, t, q: FracEPDParams, quad=None, order='fourier'):
    """Integral of g(w, t) (p1 + p2)/2 over w.

    With ``order='fourier'`` the w-average is innermost (Gauss-Jacobi for every
    radial node), which stays valid for nu = 2 where p1 and p2 are point masses.
    ``order='kernel'`` integrates the kernels against g directly and needs
    nu < 2.
    """
    t = check_time(t)
    ct = q.c * float(t)
    if order == 'fourier':
        norm = _weight_constant(q)
        a = q.weight_exponent
        return _inverse(lambda rho: norm * jacobi_cosine(ct * rho ** (q.nu / 2), a),
                        x, q.d, quad, ct, 'compose_solution')
    if order != 'kernel':
        raise DomainError(f"Unknown composition order {order!r}; expected 'fourier' or 'kernel'")
    if q.nu == 2:
        raise DomainError('The kernel order needs nu < 2; the kernels are point masses at nu = 2')
    a = q.weight_exponent
    nodes, weights = gauss_jacobi(32, a, a)
    total = 0.0
    error = 0.0
    converged = True
    for s, weight in zip(nodes, weights):
        sample = kernel_p12(x, ct * s, q.nu, q.d, quad)
        total = total + weight * np.real(sample.p1)
        error += weight * sample.error
        converged = converged and sample.converged
    norm = _weight_constant(q)
    return QuadratureResult(value=norm * total, error=norm * error, converged=converged)


def frac_pme_identity_check(t, nu, gamma, xi_grid=None, d=1, dt=IDENTITY_STEP):
    """Fourier-space check of d/dt u_hat = -|xi|**nu * (g**m)_hat for the time-changed solution.

    Both transforms are Gauss-Jacobi averages against the one-dimensional
    Barenblatt weight with m = 1 + 2/(d + 2 gamma - 3); the time derivative
    is a centred difference with step ``dt``.
    """
    check_time(t)
    if d != 1:
        raise DomainError('The fractional PME identity is checked in d = 1')
    if not d + 2 * gamma - 3 > 0:
        raise DomainError(f'gamma={gamma} gives no PME exponent m > 1 in d={d}')
    if not 0 < nu <= 2:
        raise DomainError(f'Fractional order must satisfy 0 < nu <= 2, got {nu}')
    m = 1 + 2 / (d + 2 * gamma - 3)
    p = ModelParams(m=m, d=1)
    xi = np.linspace(0.0, 3.0, 12) if xi_grid is None else np.asarray(xi_grid, dtype=float)
    k = np.abs(xi) ** (nu / 2)
    a = p.exponent

    def transform(time):
        radius = p.support_radius(time)
        return radius * p.C * time ** (-p.alpha) * jacobi_cosine(k * radius, a)

    lhs = (transform(t + dt) - transform(t - dt)) / (2 * dt)
    radius = p.support_radius(t)
    power = radius * (p.C * t ** (-p.alpha)) ** m * jacobi_cosine(k * radius, m * a)
    rhs = -np.abs(xi) ** nu * power
    discrepancy = float(np.max(np.abs(lhs - rhs)))
    logger.info('Fractional PME identity (nu=%g, gamma=%g): discrepancy %.3e', nu, gamma, discrepancy)
    return VerifyReport.at_most('frac-pme', discrepancy, IDENTITY_TOLERANCE,
                                params={'t': t, 'nu': nu, 'gamma': gamma, 'm': m, 'd': d, 'dt': dt})


def _spectral(f_grid, L, x=None):
    f = np.asarray(f_grid, dtype=float)
    if f.ndim != 1 or f.size < 2:
        raise GridError('Spectral operators need a one-dimensional grid with at least 2 points')
    if not L > 0:
        raise GridError(f'Period must be positive, got L={L}')
    if x is not None:
        steps = np.diff(np.asarray(x, dtype=float))
        if steps.size != f.size - 1 or not np.allclose(steps, L / f.size, rtol=1e-9, atol=0):
            raise GridError('Spectral operators need a uniform periodic grid of spacing L/N')
    k = 2 * np.pi * np.fft.fftfreq(f.size, d=L / f.size)
    return f, np.abs(k)


def fractional_laplacian_spectral(f_grid, nu, L, x=None):
    """(-Laplacian)**(nu/2) on a periodic grid: Fourier symbol +|k|**nu."""
    if not nu > 0:
        raise DomainError(f'Fractional order must be positive, got {nu}')
    f, k = _spectral(f_grid, L, x)
    return np.fft.ifft(k ** nu * np.fft.fft(f)).real


def riesz_spectral(f_grid, nu, L, x=None):
    """Riesz derivative -(-Laplacian)**(nu/2): Fourier symbol -|k|**nu."""
    if not 0 < nu <= 2:
        raise DomainError(f'Fractional order must satisfy 0 < nu <= 2, got {nu}')
    return -fractional_laplacian_spectral(f_grid, nu, L, x)
