"""Random flights, the telegraph process and the Barenblatt diffusion.

A flight moves at speed ``c`` and changes direction ``n`` times in [0, t].
Its n+1 waiting times are a rescaled Dirichlet vector (flat for the
telegraph process) and each new direction is uniform on the sphere; in
d=1 the direction simply alternates after a fair initial sign.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .analytic import barenblatt_density, check_time, epd_law, m_from_n, radial_norm, sample_barenblatt
from .exceptions import DomainError
from .params import EPDParams, FlightLaw, FlightSpec, ModelParams
from .rng import gaussian_directions, lab_setting, run_chunked

logger = logging.getLogger(__name__)

MIN_SDE_STEPS = 100


def sample_uniform_sphere(d, rng, size=None):
    if d < 2:
        raise DomainError(f'The unit sphere sampler needs d >= 2, got d={d}')
    directions = gaussian_directions(rng, d, 1 if size is None else size)
    return directions[0] if size is None else directions


def sample_waiting_times(spec: FlightSpec, rng, size=None):
    """Rows of n+1 waiting times summing to ``spec.t``."""
    rows = 1 if size is None else size
    cells = spec.n + 1
    if spec.law is FlightLaw.F1_UNIFORM:
        cuts = np.sort(rng.random((rows, spec.n)), axis=1)
        edges = np.concatenate([np.zeros((rows, 1)), cuts, np.ones((rows, 1))], axis=1)
        fractions = np.diff(edges, axis=1)
    else:
        draws = rng.gamma(spec.law.dirichlet_shape(spec.d), size=(rows, cells))
        fractions = draws / draws.sum(axis=1, keepdims=True)
    tau = spec.t * fractions
    tau[:, -1] = spec.t - tau[:, :-1].sum(axis=1)
    return tau[0] if size is None else tau


def sample_flight(spec: FlightSpec, rng, size=None):
    """Position at time t: c * sum_k V_k tau_{k+1}."""
    rows = 1 if size is None else size
    tau = sample_waiting_times(spec, rng, rows)
    if spec.d == 1:
        start = rng.choice((-1.0, 1.0), rows)
        signs = (-1.0) ** np.arange(spec.n + 1)
        x = spec.c * start * (tau @ signs)
    else:
        v = gaussian_directions(rng, spec.d, rows * (spec.n + 1)).reshape(rows, spec.n + 1, spec.d)
        x = spec.c * np.einsum('rk,rkd->rd', tau, v)
    return x[0] if size is None else x


def sample_flights(spec: FlightSpec, count, seed, threads=None):
    batch = run_chunked(lambda rng, size: sample_flight(spec, rng, size), count, seed, threads)
    overshoot = float(np.max(batch.radii())) - spec.radius
    if overshoot > 1e-12:
        logger.warning('Flight sample exceeds the light cone by %.3e', overshoot)
    return batch


def radial_samples(positions):
    positions = np.asarray(positions, dtype=float)
    if positions.ndim == 1:
        return np.abs(positions)
    return np.linalg.norm(positions, axis=1)


def rescaled_flight_spec(p: ModelParams, n, law, t):
    """Flight whose law at time t**beta with speed 1/sqrt(B) is Barenblatt(t)."""
    matched = m_from_n(p.d, n, law)
    if matched is None or not math.isclose(matched, p.m, rel_tol=1e-12):
        raise DomainError(f'No flight with n={n}, law={FlightLaw.parse(law).value} matches m={p.m}, d={p.d}')
    return FlightSpec(n=n, d=p.d, law=law, c=p.speed, t=p.rescaled_time(t))


def sample_rescaled_flight(p: ModelParams, n, law, t, rng, size=None):
    return sample_flight(rescaled_flight_spec(p, n, law, t), rng, size)


def telegraph_density(x, t, n, c):
    """Density of the telegraph process with ``n`` uniform-order reversals."""
    t = check_time(t)
    if not c > 0:
        raise DomainError(f'Speed must be positive, got c={c}')
    if n < 1:
        raise DomainError(f'Number of reversals must be >= 1, got n={n}')
    if n % 2:
        log_norm = special.gammaln(n + 1) - 2 * special.gammaln((n + 1) / 2) - n * math.log(2)
        exponent = (n - 1) / 2
    else:
        log_norm = (special.gammaln(n + 1) - special.gammaln(n / 2 + 1)
                    - special.gammaln(n / 2) - n * math.log(2))
        exponent = n / 2 - 1
    x = np.asarray(x, dtype=float)
    ct = c * t
    inside = np.abs(x) < ct
    s = np.where(inside, 1 - (x / ct) ** 2, 1.0)
    value = np.where(inside, math.exp(log_norm) / ct * s ** exponent, 0.0)
    return value.item() if value.ndim == 0 else value


def flight_density(x, spec: FlightSpec):
    """Density of X_d^n(t) for Dirichlet waiting times (d >= 2)."""
    if spec.law is FlightLaw.F1_UNIFORM:
        raise DomainError('Use telegraph_density for the one-dimensional flight')
    d, n = spec.d, spec.n
    if spec.law is FlightLaw.F2_DIRICHLET_DMINUS1:
        log_norm = special.gammaln((n + 1) / 2 * (d - 1) + 0.5) - special.gammaln(n / 2 * (d - 1))
        exponent = n / 2 * (d - 1) - 1
    else:
        log_norm = special.gammaln((n + 1) * (d / 2 - 1) + 1) - special.gammaln(n * (d / 2 - 1))
        exponent = n * (d / 2 - 1) - 1
    ct = spec.radius
    r = radial_norm(x, d)
    inside = r < ct
    s = np.where(inside, 1 - (r / ct) ** 2, 1.0)
    norm = math.exp(log_norm - (d / 2) * math.log(math.pi)) / ct ** d
    value = np.where(inside, norm * s ** exponent, 0.0)
    return value.item() if value.ndim == 0 else value


def flight_law(spec: FlightSpec):
    return epd_law(EPDParams(gamma=spec.gamma, c=spec.c, d=spec.d), spec.t)


@dataclass
class SDEResult:
    positions: np.ndarray
    start_time: float
    steps: int
    unstable: bool
    max_excursion: float


def sample_sde_barenblatt(p: ModelParams, t, steps, rng, size=1, start_fraction=None):
    """Euler-Maruyama endpoints of dZ = sqrt(2) u(Z, s)**((m-1)/2) dB.

    The path starts at s0 = start_fraction * t from the Barenblatt law at s0.
    ``unstable`` is set when a path leaves the support by more than one step's
    diffusion scale.
    """
    check_time(t)
    if steps < MIN_SDE_STEPS:
        raise DomainError(f'SDE needs at least {MIN_SDE_STEPS} steps, got {steps}')
    start_fraction = start_fraction or lab_setting('SDE_START_FRACTION')
    s0 = start_fraction * t
    ds = (t - s0) / steps
    z = sample_barenblatt(p, s0, size, rng)
    power = (p.m - 1) / 2
    excursion = 0.0
    unstable = False
    for k in range(steps):
        s = s0 + k * ds
        coef = math.sqrt(2 * ds) * np.asarray(barenblatt_density(z, s, p)) ** power
        if p.d > 1:
            coef = coef[:, None]
        z = z + coef * rng.standard_normal(z.shape)
        # One step of the fastest path bounds the admissible overshoot.
        scale = math.sqrt(2 * ds) * (p.C * s ** (-p.alpha)) ** power
        outside = float(np.max(radial_samples(z))) - p.support_radius(s + ds)
        excursion = max(excursion, outside)
        unstable = unstable or outside > scale
    if unstable:
        logger.warning('SDE left the support by %.3e; increase the number of steps', excursion)
    return SDEResult(positions=z, start_time=s0, steps=steps, unstable=unstable,
                     max_excursion=excursion)
