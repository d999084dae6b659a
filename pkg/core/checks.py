"""Named verification checks behind ``manage.py pme verify``.

Every check returns a list of :class:`core.params.VerifyReport`. Statistical
checks run on three consecutive seeds starting at the requested one and pass
when at least two of them do; their summary report carries the median
statistic and the per-seed values in ``params``.
"""
import logging
import math
import statistics
from dataclasses import dataclass

import numpy as np

from . import analytic, flights, fracepd, levy, pmefd, pseudo, specfun, stats
from .exceptions import DomainError
from .params import FlightLaw, FracEPDParams, GridSpec, ModelParams, VerifyReport
from .rng import lab_setting, make_rng, run_chunked

logger = logging.getLogger(__name__)

CHECKS = {}

THEOREM_CASES = ((1, 3, 'f1'), (2, 3, 'f2'), (4, 2, 'f3'))
RESIDUAL_CASES = ((2, 1), (3, 1), (2, 2), (2, 3))
RESIDUAL_FRACTIONS = np.linspace(0.05, 0.3, 10)
MOMENT_TIMES = (0.5, 1.0, 2.0)
EXPONENT_TIMES = np.geomspace(0.25, 4.0, 9)
STABLE_INDICES = (0.5, 1.0, 1.5)

DEFAULT_SAMPLES = {
    'theorem31': 100000,
    'cf-theorem': 100000,
    'moments': 100000,
    'sde': 10000,
    'stable': 1000000,
}


@dataclass
class CheckOptions:
    """Overrides passed down from the command line; ``None`` keeps the default."""

    seed: int = None
    n_samples: int = None
    threads: int = None
    d: int = None
    n: int = None
    law: str = None
    m: float = None
    t: float = None
    nu: float = None
    gamma: float = None
    steps: int = None

    def seeds(self):
        base = lab_setting('DEFAULT_SEED') if self.seed is None else int(self.seed)
        return (base, base + 1, base + 2)

    def samples(self, check):
        return self.n_samples or DEFAULT_SAMPLES.get(check) or lab_setting('DEFAULT_SAMPLES')


def register(name):
    def decorator(func):
        CHECKS[name] = func
        return func
    return decorator


def check_names():
    return sorted(CHECKS)


def run_check(name, options=None):
    """Run the check called ``name`` and log its outcome."""
    if name not in CHECKS:
        raise DomainError(f'Unknown check {name!r}; expected one of {", ".join(check_names())}')
    reports = CHECKS[name](options or CheckOptions())
    for report in reports:
        logger.info('%s: value=%.3e tolerance=%.1e %s', report.check, report.value, report.tolerance,
                    'pass' if report.passed else 'FAIL')
    return reports


def _majority(check, run, seeds, tolerance, lower_is_better=True, params=None, n_samples=None):
    """Summary report of ``run(seed) -> value`` over ``seeds``."""
    values = {}

    def one(seed):
        values[seed] = run(seed)
        if lower_is_better:
            return VerifyReport.at_most(check, values[seed], tolerance)
        return VerifyReport.at_least(check, values[seed], tolerance)

    passed, _ = stats.majority_pass(one, seeds)
    params = dict(params or {})
    params['per_seed'] = {str(seed): value for seed, value in values.items()}
    return VerifyReport(check=check, value=float(statistics.median(values.values())),
                        tolerance=float(tolerance), passed=passed, params=params,
                        seed=seeds[0], n_samples=n_samples)


def _theorem_cases(options):
    if options.d is None and options.n is None and options.law is None:
        return THEOREM_CASES
    if None in (options.d, options.n, options.law):
        raise DomainError('Give all of --d, --n and --law to select a single case')
    return ((int(options.d), int(options.n), FlightLaw.parse(options.law).value),)


def _rescaled_model(d, n, law):
    m = analytic.m_from_n(d, n, law)
    if m is None:
        raise DomainError(f'No PME exponent m > 1 corresponds to d={d}, n={n}, law={law}')
    return ModelParams(m=m, d=d)


def _flight_samples(p, n, law, t, count, seed, threads):
    spec = flights.rescaled_flight_spec(p, n, law, t)
    return flights.sample_flights(spec, count, seed, threads).positions


@register('constants')
def check_constants(options):
    rng = make_rng(options.seeds()[0])
    worst_agreement = 0.0
    worst_residual = 0.0
    for m, d in zip(rng.uniform(1.05, 6.0, 20), rng.integers(1, 6, 20)):
        p = ModelParams(m=float(m), d=int(d))
        solution = pmefd.appendix_system_solve(p.m, p.d)
        expected = (p.alpha, p.beta, p.B)
        found = (-solution.delta, solution.eta / 2, solution.B)
        worst_agreement = max(worst_agreement, max(abs(a - b) / abs(a) for a, b in zip(expected, found)))
        worst_residual = max(worst_residual, max(abs(r) for r in solution.residuals))
    reports = [
        VerifyReport.at_most('constants', worst_agreement, 1e-14, params={'cases': 20}),
        VerifyReport.at_most('exponent-residual', worst_residual, 1e-12, params={'cases': 20}),
    ]
    for m, d in ((2.0, 1), (3.0, 2), (1.5, 3)):
        p = ModelParams(m=m, d=d)
        reports.append(analytic.pme_epd_rescale_check(p))
        reports.append(VerifyReport.at_most('self-similarity', analytic.self_similarity_defect(p), 1e-12,
                                            params=p.as_dict()))
    return reports


@register('pme-residual')
def check_pme_residual(options):
    t = options.t or 1.0
    reports = []
    for m, d in RESIDUAL_CASES:
        p = ModelParams(m=m, d=d)
        direction = np.ones(d) / math.sqrt(d)
        worst = 0.0
        for fraction in RESIDUAL_FRACTIONS:
            x = fraction * p.support_radius(t) * direction
            coarse = pmefd.pme_residual(p, x, t, 0.02)
            fine = pmefd.pme_residual(p, x, t, 0.01)
            worst = max(worst, abs(coarse / fine - 4) / 4)
        reports.append(VerifyReport.at_most('pme-residual', worst, 0.2, params={**p.as_dict(), 't': t}))
    return reports


@register('pme-evolution')
def check_pme_evolution(options):
    p = ModelParams(m=options.m or 2.0, d=options.d or 1)
    t0 = options.t or 1.0
    radius = p.support_radius(2 * t0)
    g = GridSpec(L=1.15 * radius, nx=2000, t0=t0, t1=2 * t0)
    grid, u0 = pmefd.barenblatt_grid(p, g)
    result = pmefd.pme_evolve(u0, p, g)
    params = {**p.as_dict(), **g.as_dict()}
    h = grid.h
    return [
        VerifyReport.at_most('pme-evolution', pmefd.l1_distance(result, p, g), 2e-3, params=params),
        VerifyReport.at_most('pme-front', abs(result.front - radius), 2 * h,
                             params={**params, 'front': result.front, 'radius': radius}),
        VerifyReport.at_most('pme-mass', abs(result.final_mass - result.initial_mass) / result.initial_mass,
                             1e-10, params=params),
    ]


@register('theorem31')
def check_theorem31(options):
    count = options.samples('theorem31')
    seeds = options.seeds()
    t = options.t or 1.0
    alpha = lab_setting('KS_ALPHA')
    reports = []
    for d, n, law in _theorem_cases(options):
        p = _rescaled_model(d, n, law)

        def run(seed):
            radii = flights.radial_samples(_flight_samples(p, n, law, t, count, seed, options.threads))
            return stats.ks_statistic(radii, lambda r: analytic.barenblatt_radial_cdf(r, t, p)).p_value

        reports.append(_majority('theorem31', run, seeds, alpha, lower_is_better=False,
                                 params={'d': d, 'n': n, 'law': law, 'm': p.m, 't': t}, n_samples=count))
    return reports


@register('cf-theorem')
def check_cf_theorem(options):
    count = options.samples('cf-theorem')
    seeds = options.seeds()
    t = options.t or 1.0
    reports = []
    for d, n, law in _theorem_cases(options):
        p = _rescaled_model(d, n, law)
        grid = stats.cf_grid(d)

        def run(seed):
            samples = _flight_samples(p, n, law, t, count, seed, options.threads)
            worst, bound = stats.max_cf_deviation(samples, grid, lambda xi: analytic.barenblatt_cf(xi, t, p))
            return worst / bound

        reports.append(_majority('cf-theorem', run, seeds, 1.0,
                                 params={'d': d, 'n': n, 'law': law, 'm': p.m, 't': t}, n_samples=count))
    return reports


@register('moments')
def check_moments(options):
    count = options.samples('moments')
    seeds = options.seeds()
    n = 3
    p = _rescaled_model(1, n, 'f1')

    def run(seed):
        worst = 0.0
        for t in MOMENT_TIMES:
            x = _flight_samples(p, n, 'f1', t, count, seed, options.threads)
            centred = x - x.mean()
            variance = float(np.mean(centred ** 2))
            error = math.sqrt(max(float(np.mean(centred ** 4)) - variance ** 2, 0.0) / count)
            worst = max(worst, abs(variance - analytic.variance_y1(t, p.m)) / error)
        return worst

    reports = [_majority('moments', run, seeds, 3.0, params={'m': p.m, 'times': list(MOMENT_TIMES)},
                         n_samples=count)]
    variances = [np.var(_flight_samples(p, n, 'f1', t, count, seeds[0], options.threads)) for t in EXPONENT_TIMES]
    slope = np.polyfit(np.log(EXPONENT_TIMES), np.log(variances), 1)[0]
    expected = analytic.subdiffusion_exponent(n)
    reports.append(VerifyReport.at_most('subdiffusion', abs(slope - expected), 0.05,
                                        params={'n': n, 'slope': float(slope), 'expected': expected},
                                        seed=seeds[0], n_samples=count))
    return reports


@register('sde')
def check_sde(options):
    count = options.samples('sde')
    seeds = options.seeds()
    p = ModelParams(m=options.m or 2.0, d=options.d or 1)
    t = options.t or 1.0
    steps = options.steps or 1000
    excursions = []

    def run(seed):
        result = flights.sample_sde_barenblatt(p, t, steps, make_rng(seed), size=count)
        excursions.append(result.max_excursion)
        radii = flights.radial_samples(result.positions)
        return stats.ks_statistic(radii, lambda r: analytic.barenblatt_radial_cdf(r, t, p)).p_value

    params = {**p.as_dict(), 't': t, 'steps': steps}
    report = _majority('sde', run, seeds, lab_setting('KS_ALPHA'), lower_is_better=False,
                       params=params, n_samples=count)
    # Allowed overshoot: a few diffusion steps at the initial peak density.
    s0 = lab_setting('SDE_START_FRACTION') * t
    ds = (t - s0) / steps
    slack = 5 * math.sqrt(2 * ds) * (p.C * s0 ** (-p.alpha)) ** ((p.m - 1) / 2)
    support = VerifyReport.at_most('sde-support', max(excursions), slack, params=params,
                                   seed=seeds[0], n_samples=count)
    return [report, support]


@register('fracepd-identities')
def check_fracepd_identities(options):
    xi_norms = np.linspace(0.1, 4.0, 5)
    times = (0.25, 0.5, 1.0, 2.0, 4.0)
    worst = 0.0
    for d in (1, 2, 3):
        xi = xi_norms if d == 1 else xi_norms[:, None] * np.eye(d)[0]
        for nu in (1.0, 1.5, 2.0):
            for gamma in (0.75, 1.0, 2.0):
                q = FracEPDParams(nu=nu, gamma=gamma, d=d)
                for t in times:
                    exact = np.asarray(fracepd.fracepd_cf(xi, t, q))
                    poisson = np.asarray(fracepd.fracepd_cf_poisson(xi, t, q).value)
                    worst = max(worst, float(np.max(np.abs(exact - poisson))))
    reports = [VerifyReport.at_most('fracepd-poisson', worst, 1e-10, params={'grid': '5x5x3x3x3'})]
    x = np.array([0.0, 0.25, 0.5])
    for gamma in (1.0, 2.0):
        q = FracEPDParams(nu=2.0, gamma=gamma, d=1)
        numeric = fracepd.fracepd_density(x, 1.0, q).value
        classical = analytic.epd_density(x, 1.0, q.classical())
        reports.append(VerifyReport.at_most('fracepd-classical', float(np.max(np.abs(numeric - classical))), 1e-6,
                                            params=q.as_dict()))
    return reports


@register('stable')
def check_stable(options):
    count = options.samples('stable')
    seeds = options.seeds()
    t = options.t or 1.0
    reports = []
    for nu in STABLE_INDICES:
        for d in (1, 2):
            grid = stats.cf_grid(d)

            def run(seed, nu=nu, d=d):
                batch = run_chunked(lambda rng, size: levy.sample_isotropic_stable(nu, d, t, rng, size),
                                    count, seed, options.threads)
                worst, bound = stats.max_cf_deviation(batch.positions, grid,
                                                      lambda xi: levy.stable_cf(xi, t, nu, d))
                return worst / bound

            reports.append(_majority('stable-cf', run, seeds, 1.0, params={'nu': nu, 'd': d, 't': t},
                                     n_samples=count))
    for d in (1, 2):
        grid = stats.cf_grid(d)

        def run(seed, d=d):
            batch = run_chunked(lambda rng, size: levy.sample_subordinated_cauchy(0.5, d, t, size, rng),
                                count, seed, options.threads)
            worst, bound = stats.max_cf_deviation(batch.positions, grid, lambda xi: levy.stable_cf(xi, t, 0.5, d))
            return worst / bound

        reports.append(_majority('cauchy-cf', run, seeds, 1.0, params={'nu': 0.5, 'd': d, 't': t},
                                 n_samples=count))

    def run_levy(seed):
        batch = run_chunked(lambda rng, size: levy.sample_subordinator(0.5, t, rng, size), count, seed,
                            options.threads)
        return stats.ks_statistic(batch.positions, lambda y: levy.levy_cdf(y, t)).p_value

    reports.append(_majority('levy-ks', run_levy, seeds, lab_setting('KS_ALPHA'), lower_is_better=False,
                             params={'index': 0.5, 't': t}, n_samples=count))
    return reports


@register('frac-pme')
def check_frac_pme(options):
    gamma = options.gamma or 2.0
    indices = (options.nu,) if options.nu else (1.5, 2.0)
    return [fracepd.frac_pme_identity_check(options.t or 1.0, nu, gamma) for nu in indices]


@register('pseudo')
def check_pseudo(options):
    t = options.t or 1.0
    x = np.linspace(-4.0, 4.0, 50)
    reports = []
    for n, closed in ((2, pseudo.rods_kernel), (3, pseudo.airy_kernel)):
        numeric = pseudo.pseudo_kernel(x, t, n)
        gap = float(np.max(np.abs(numeric.value - closed(x, t))))
        reports.append(VerifyReport.at_most('pseudo-kernel', gap, 1e-6, params={'n': n, 't': t}))
    reports.append(VerifyReport.at_most('pseudo-negative', float(np.min(pseudo.rods_kernel(x, t))), -1e-3,
                                        params={'n': 2, 't': t}))
    for n in (2, 3):
        signed = pseudo.kernel_mass(t, n)
        reports.append(VerifyReport.at_most('pseudo-mass', abs(signed.value - 1), 1e-4,
                                            params={'n': n, 't': t, 'of': 'kernel'}))
        composition = pseudo.pseudo_cf_mass(pseudo.composition_cf(t, 1.0, 1.0, n), n, t)
        reports.append(VerifyReport.at_most('pseudo-mass', abs(composition.value - 1), 1e-4,
                                            params={'n': n, 't': t, 'of': 'composition'}))
        damped = pseudo.composition_damped_mass(t, 1.0, 1.0, n)
        expected = pseudo.poisson_damped_masses(pseudo.composition_cf(t, 1.0, 1.0, n), n, t, (1.0,)).value[0]
        reports.append(VerifyReport.at_most('pseudo-damped', abs(damped.value - expected), 1e-4,
                                            params={'n': n, 't': t, 'eta': 1.0}))
    points = np.array([1.0, 1.5])
    fourier = pseudo.compose_epd_pseudo(points, t, 1.0, 1.0, 2, route='fourier')
    kernel = pseudo.compose_epd_pseudo(points, t, 1.0, 1.0, 2, route='kernel')
    reports.append(VerifyReport.at_most('pseudo-compose', float(np.max(np.abs(fourier.value - kernel.value))), 1e-4,
                                        params={'n': 2, 't': t, 'lambda': 1.0, 'c': 1.0}))
    return reports


@register('specfun')
def check_specfun(options):
    x = np.linspace(0.05, 50.0, 500)
    root = np.sqrt(2 / (math.pi * x))
    half = max(float(np.max(np.abs(specfun.bessel_j(0.5, x) - root * np.sin(x)) / np.maximum(1.0, root))),
               float(np.max(np.abs(specfun.bessel_j(-0.5, x) - root * np.cos(x)) / np.maximum(1.0, root))))
    recurrence = 0.0
    for mu in (0.5, 1.3, 2.7, 5.0):
        z = np.linspace(0.5, 50.0, 200)
        residual = specfun.bessel_j(mu - 1, z) + specfun.bessel_j(mu + 1, z) - 2 * mu / z * specfun.bessel_j(mu, z)
        recurrence = max(recurrence, float(np.max(np.abs(residual))))
    g = np.linspace(0.1, 30.0, 300)
    gamma_gap = float(np.max(np.abs(specfun.gamma_fn(g + 1) - g * specfun.gamma_fn(g)) / specfun.gamma_fn(g + 1)))
    airy_gap = abs(specfun.airy_ai(0.0) - specfun.AIRY_AI_ZERO)
    small = np.linspace(0.0, 10.0, 101)
    series_gap = float(np.max(np.abs(specfun.bessel_j(1.3, small) - specfun.bessel_j_series(1.3, small))))
    return [
        VerifyReport.at_most('bessel-half-order', half, 1e-10),
        VerifyReport.at_most('bessel-recurrence', recurrence, 1e-8),
        VerifyReport.at_most('gamma-recurrence', gamma_gap, 1e-12),
        VerifyReport.at_most('airy-zero', airy_gap, 1e-10),
        VerifyReport.at_most('bessel-series', series_gap, 1e-10),
    ]
