"""``manage.py pme``: densities, samplers, solvers and the verification checks from the shell."""
import logging

import numpy as np
from decouple import Config, RepositoryEnv
from django.core.management.base import BaseCommand, CommandError
from django.db import DatabaseError

from core import analytic, checks, flights, fracepd, levy, pmefd, pseudo
from core.exceptions import DomainError
from core.exporters import FORMATS, open_output, write_columns, write_record, write_reports
from core.models import VerificationRun
from core.params import FlightLaw
from core.rng import lab_setting, make_rng, run_chunked
from core.serializers import (
    EPDParamsSerializer, FlightSpecSerializer, FracEPDParamsSerializer, GridSpecSerializer,
    ModelParamsSerializer, QuadratureSpecSerializer,
)

logger = logging.getLogger(__name__)

VERBOSITY_LEVELS = {0: logging.ERROR, 2: logging.INFO, 3: logging.DEBUG}

# Value types of the keys a --config file may set.
CONFIG_CASTS = {
    'seed': int, 'N': int, 'threads': int, 'format': str, 'out': str,
    'm': float, 'd': int, 't': float, 'n': int, 'law': str, 'c': float, 'gamma': float,
    'nu': float, 'lam': float, 'w': float, 'steps': int,
    'xmin': float, 'xmax': float, 'nx': int, 'ximin': float, 'ximax': float, 'nxi': int,
    'L': float, 't0': float, 't1': float, 'cfl': float, 'cutoff': float, 'quad_tolerance': float,
}

DENSITY_KINDS = ('barenblatt', 'epd', 'telegraph', 'flight', 'marginal', 'cauchy', 'fracepd', 'rods', 'airy')
CF_KINDS = ('barenblatt', 'fracepd', 'fracepd-poisson', 'stable')


class Command(BaseCommand):
    help = 'Closed forms, samplers and verification checks for the porous medium equation and random flights'

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(dest='subcommand', required=True)

        sub = self._subparser(subparsers, 'constants', 'Barenblatt constants and the exponent system')
        self._model_flags(sub)

        sub = self._subparser(subparsers, 'density', 'Densities and kernels on a grid of x')
        sub.add_argument('--kind', choices=DENSITY_KINDS, default='barenblatt')
        self._model_flags(sub)
        self._law_flags(sub)
        self._grid_flags(sub, 'x')
        self._quadrature_flags(sub)

        sub = self._subparser(subparsers, 'cf', 'Characteristic functions along the first axis')
        sub.add_argument('--kind', choices=CF_KINDS, default='barenblatt')
        self._model_flags(sub)
        self._law_flags(sub)
        self._grid_flags(sub, 'xi')

        sub = self._subparser(subparsers, 'simulate-flight', 'Random flight endpoints')
        self._model_flags(sub)
        self._law_flags(sub)
        sub.add_argument('--rescaled', action='store_true',
                         help='Sample Y(t) = X(t**beta) with speed 1/sqrt(B)')

        sub = self._subparser(subparsers, 'simulate-sde', 'Euler-Maruyama endpoints of the Barenblatt diffusion')
        self._model_flags(sub)
        sub.add_argument('--steps', type=int)

        sub = self._subparser(subparsers, 'simulate-stable', 'Isotropic stable draws by subordination')
        self._model_flags(sub)

        sub = self._subparser(subparsers, 'verify', 'Run a named check')
        sub.add_argument('name', choices=checks.check_names())
        self._model_flags(sub)
        self._law_flags(sub)
        sub.add_argument('--steps', type=int)
        sub.add_argument('--no-record', action='store_true', help='Do not store the reports in the ledger')

        sub = self._subparser(subparsers, 'pme-evolve', 'Explicit finite-volume PME run from the Barenblatt profile')
        self._model_flags(sub)
        sub.add_argument('--L', type=float)
        sub.add_argument('--nx', type=int)
        sub.add_argument('--t0', type=float)
        sub.add_argument('--t1', type=float)
        sub.add_argument('--cfl', type=float)

        sub = self._subparser(subparsers, 'kernel', 'Fractional Schroedinger kernels or pseudoprocess kernels')
        sub.add_argument('--kind', choices=('p12', 'pseudo'), default='pseudo')
        self._model_flags(sub)
        self._law_flags(sub)
        sub.add_argument('--w', type=float)
        self._grid_flags(sub, 'x')
        self._quadrature_flags(sub)

        sub = self._subparser(subparsers, 'compose', 'Compositions with the EPD law')
        sub.add_argument('--kind', choices=('fracepd', 'pseudo'), default='pseudo')
        self._model_flags(sub)
        self._law_flags(sub)
        sub.add_argument('--lam', type=float)
        sub.add_argument('--route', choices=('fourier', 'kernel'), default='fourier')
        self._grid_flags(sub, 'x')
        self._quadrature_flags(sub)

        sub = self._subparser(subparsers, 'history', 'Stored verification reports')
        sub.add_argument('--check')
        sub.add_argument('--limit', type=int, default=50)

    def _subparser(self, subparsers, name, help_text):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument('--out', help='Output file; stdout when omitted')
        sub.add_argument('--format', choices=FORMATS)
        sub.add_argument('--seed', type=int)
        sub.add_argument('--N', type=int, help='Number of Monte-Carlo samples')
        sub.add_argument('--threads', type=int)
        sub.add_argument('--config', help='key=value file with defaults for any flag')
        return sub

    def _model_flags(self, sub):
        sub.add_argument('--m', type=float)
        sub.add_argument('--d', type=int)
        sub.add_argument('--t', type=float)
        sub.add_argument('--c', type=float)
        sub.add_argument('--gamma', type=float)
        sub.add_argument('--nu', type=float)

    def _law_flags(self, sub):
        sub.add_argument('--n', type=int)
        sub.add_argument('--law', choices=[law.value for law in FlightLaw])

    def _grid_flags(self, sub, name):
        sub.add_argument(f'--{name}min', type=float)
        sub.add_argument(f'--{name}max', type=float)
        sub.add_argument(f'--n{name}', type=int)

    def _quadrature_flags(self, sub):
        sub.add_argument('--dampings', type=float, nargs='+')
        sub.add_argument('--cutoff', type=float)
        sub.add_argument('--quad-tolerance', type=float)

    def handle(self, *args, **options):
        level = VERBOSITY_LEVELS.get(options['verbosity'])
        if level is not None:
            logging.getLogger('core').setLevel(level)
        options = self._apply_config(options)
        subcommand = options['subcommand']
        handler = getattr(self, 'handle_' + subcommand.replace('-', '_'))
        try:
            handler(options)
        except DomainError as exc:
            raise CommandError('; '.join(exc.messages), returncode=2)

    def _apply_config(self, options):
        """Fill unset flags from --config; explicit flags always win."""
        if not options.get('config'):
            return options
        repository = RepositoryEnv(options['config'])
        config = Config(repository)
        merged = dict(options)
        for key, cast in CONFIG_CASTS.items():
            if merged.get(key) is None and key in repository:
                merged[key] = config(key, cast=cast)
        logger.debug('Loaded defaults from %s', options['config'])
        return merged

    def _build(self, serializer_class, options, keys):
        data = {key: options[key] for key in keys if options.get(key) is not None}
        serializer = serializer_class(data=data)
        if not serializer.is_valid():
            raise CommandError(f'Invalid arguments: {dict(serializer.errors)}', returncode=2)
        return serializer.save()

    def _model(self, options):
        return self._build(ModelParamsSerializer, options, ('m', 'd'))

    def _quadrature(self, options):
        data = {'dampings': options.get('dampings'), 'cutoff': options.get('cutoff'),
                'tolerance': options.get('quad_tolerance')}
        if all(value is None for value in data.values()):
            return None
        return self._build(QuadratureSpecSerializer, data, ('dampings', 'cutoff', 'tolerance'))

    def _grid(self, options, name, low, high, count):
        low = low if options.get(f'{name}min') is None else options[f'{name}min']
        high = high if options.get(f'{name}max') is None else options[f'{name}max']
        count = count if options.get(f'n{name}') is None else options[f'n{name}']
        if count < 1:
            raise CommandError(f'--n{name} must be positive', returncode=2)
        return np.linspace(low, high, count)

    def _option(self, options, key, default):
        return default if options.get(key) is None else options[key]

    def _seed(self, options):
        return lab_setting('DEFAULT_SEED') if options.get('seed') is None else options['seed']

    def _samples(self, options):
        count = lab_setting('DEFAULT_SAMPLES') if options.get('N') is None else options['N']
        if count < 1:
            raise CommandError('--N must be positive', returncode=2)
        return count

    def _write_table(self, options, columns, default_format='csv'):
        with open_output(options.get('out'), self.stdout) as stream:
            write_columns(stream, columns, options.get('format') or default_format)

    def _write_positions(self, options, positions, seed):
        positions = np.asarray(positions)
        if positions.ndim == 1:
            positions = positions[:, None]
        columns = {f'x{k + 1}': positions[:, k] for k in range(positions.shape[1])}
        columns['seed'] = np.full(positions.shape[0], seed)
        self._write_table(options, columns)

    def handle_constants(self, options):
        p = self._model(options)
        solution = pmefd.appendix_system_solve(p.m, p.d)
        record = {**p.as_dict(), **analytic.barenblatt_constants(p)._asdict(),
                  'gamma': solution.gamma, 'delta': solution.delta, 'eta': solution.eta}
        with open_output(options.get('out'), self.stdout) as stream:
            write_record(stream, record, options.get('format') or 'json')

    def handle_density(self, options):
        kind = options['kind']
        x = self._grid(options, 'x', -4.0, 4.0, 401)
        t = self._option(options, 't', 1.0)
        d = self._option(options, 'd', 1)
        points = x if d == 1 else analytic.on_axis(x, d)
        columns = {'x': x}
        if kind == 'barenblatt':
            columns['density'] = analytic.barenblatt_density(points, t, self._model(options))
        elif kind == 'epd':
            q = self._build(EPDParamsSerializer, options, ('gamma', 'c', 'd'))
            columns['density'] = analytic.epd_density(points, t, q)
        elif kind == 'telegraph':
            n, c = self._option(options, 'n', 1), self._option(options, 'c', 1.0)
            columns['density'] = flights.telegraph_density(x, t, n, c)
        elif kind == 'flight':
            spec = self._build(FlightSpecSerializer, {**options, 't': t}, ('n', 'd', 'law', 'c', 't'))
            columns['density'] = flights.flight_density(points, spec)
        elif kind == 'marginal':
            p = self._model(options)
            columns['density'] = analytic.marginal_density_1d(x, p.rescaled_time(t), p)
        elif kind == 'cauchy':
            columns['density'] = levy.cauchy_density(points, t, d)
        elif kind == 'fracepd':
            q = self._build(FracEPDParamsSerializer, options, ('nu', 'gamma', 'c', 'd'))
            result = fracepd.fracepd_density(points, t, q, self._quadrature(options))
            columns['density'] = result.value
            columns['error'] = result.error
        elif kind == 'rods':
            columns['density'] = pseudo.rods_kernel(x, t)
        else:
            columns['density'] = pseudo.airy_kernel(x, t)
        self._write_table(options, columns)

    def handle_cf(self, options):
        kind = options['kind']
        xi = self._grid(options, 'xi', 0.0, 5.0, 101)
        t = self._option(options, 't', 1.0)
        d = self._option(options, 'd', 1)
        points = xi if d == 1 else analytic.on_axis(xi, d)
        if kind == 'barenblatt':
            value = analytic.barenblatt_cf(points, t, self._model(options))
        elif kind == 'stable':
            if options.get('nu') is None:
                raise CommandError('--nu is required for the stable characteristic function', returncode=2)
            value = levy.stable_cf(points, t, options['nu'], d)
        else:
            q = self._build(FracEPDParamsSerializer, options, ('nu', 'gamma', 'c', 'd'))
            if kind == 'fracepd':
                value = fracepd.fracepd_cf(points, t, q)
            else:
                value = fracepd.fracepd_cf_poisson(points, t, q).value
        self._write_table(options, {'xi': xi, 'cf': value})

    def handle_simulate_flight(self, options):
        seed, count = self._seed(options), self._samples(options)
        t = self._option(options, 't', 1.0)
        if options['rescaled']:
            d = self._option(options, 'd', 1)
            law = options.get('law') or FlightLaw.default_for(d).value
            n = self._option(options, 'n', 3)
            m = self._option(options, 'm', None)
            if m is None:
                m = analytic.m_from_n(d, n, law)
            if m is None:
                raise CommandError(f'No PME exponent corresponds to d={d}, n={n}, law={law}', returncode=2)
            p = self._build(ModelParamsSerializer, {'m': m, 'd': d}, ('m', 'd'))
            spec = flights.rescaled_flight_spec(p, n, law, t)
        else:
            spec = self._build(FlightSpecSerializer, {**options, 't': t}, ('n', 'd', 'law', 'c', 't'))
        batch = flights.sample_flights(spec, count, seed, options.get('threads'))
        self._write_positions(options, batch.positions, seed)

    def handle_simulate_sde(self, options):
        seed, count = self._seed(options), self._samples(options)
        p = self._model(options)
        t, steps = self._option(options, 't', 1.0), self._option(options, 'steps', 1000)
        result = flights.sample_sde_barenblatt(p, t, steps, make_rng(seed), size=count)
        self._write_positions(options, result.positions, seed)

    def handle_simulate_stable(self, options):
        seed, count = self._seed(options), self._samples(options)
        nu, d, t = self._option(options, 'nu', 1.0), self._option(options, 'd', 1), self._option(options, 't', 1.0)
        batch = run_chunked(lambda rng, size: levy.sample_isotropic_stable(nu, d, t, rng, size),
                            count, seed, options.get('threads'))
        self._write_positions(options, batch.positions, seed)

    def handle_verify(self, options):
        check_options = checks.CheckOptions(
            seed=options.get('seed'), n_samples=options.get('N'), threads=options.get('threads'),
            d=options.get('d'), n=options.get('n'), law=options.get('law'), m=options.get('m'),
            t=options.get('t'), nu=options.get('nu'), gamma=options.get('gamma'), steps=options.get('steps'),
        )
        reports = checks.run_check(options['name'], check_options)
        if not options['no_record']:
            try:
                for report in reports:
                    VerificationRun.record(report)
            except DatabaseError as exc:
                logger.warning('Could not store reports in the ledger (%s); run migrate first', exc)
        with open_output(options.get('out'), self.stdout) as stream:
            write_reports(stream, reports, options.get('format') or 'json')
        failed = [report.check for report in reports if not report.passed]
        if failed:
            raise CommandError(f'Verification failed: {", ".join(failed)}', returncode=1)

    def handle_pme_evolve(self, options):
        p = self._model(options)
        t0 = self._option(options, 't0', 1.0)
        data = {'L': self._option(options, 'L', 1.2 * p.support_radius(2 * t0)), 'nx': self._option(options, 'nx', 400),
                't0': t0, 't1': self._option(options, 't1', 2 * t0), 'cfl': options.get('cfl')}
        g = self._build(GridSpecSerializer, data, ('L', 'nx', 't0', 't1', 'cfl'))
        _, u0 = pmefd.barenblatt_grid(p, g)
        result = pmefd.pme_evolve(u0, p, g)
        self._write_table(options, {'x': result.x, 'u': result.u})

    def handle_kernel(self, options):
        x = self._grid(options, 'x', -4.0, 4.0, 81)
        quad = self._quadrature(options)
        if options['kind'] == 'p12':
            d = self._option(options, 'd', 1)
            points = x if d == 1 else analytic.on_axis(x, d)
            w, nu = self._option(options, 'w', 1.0), self._option(options, 'nu', 1.5)
            sample = fracepd.kernel_p12(points, w, nu, d, quad)
            p1 = np.asarray(sample.p1)
            columns = {'x': x, 'real': p1.real, 'imag': p1.imag, 'error': np.full(x.shape, sample.error)}
        else:
            t, n = self._option(options, 't', 1.0), self._option(options, 'n', 2)
            result = pseudo.pseudo_kernel(x, t, n, quad)
            columns = {'x': x, 'real': result.value, 'imag': np.zeros_like(x), 'error': result.error}
        self._write_table(options, columns)

    def handle_compose(self, options):
        x = self._grid(options, 'x', -3.0, 3.0, 61)
        quad = self._quadrature(options)
        t = self._option(options, 't', 1.0)
        if options['kind'] == 'fracepd':
            q = self._build(FracEPDParamsSerializer, options, ('nu', 'gamma', 'c', 'd'))
            points = x if q.d == 1 else analytic.on_axis(x, q.d)
            result = fracepd.compose_solution(points, t, q, quad, order=options['route'])
        else:
            lam, c = self._option(options, 'lam', 1.0), self._option(options, 'c', 1.0)
            n = self._option(options, 'n', 2)
            result = pseudo.compose_epd_pseudo(x, t, lam, c, n, quad, route=options['route'])
        self._write_table(options, {'x': x, 'value': np.real(result.value), 'error': result.error})

    def handle_history(self, options):
        runs = VerificationRun.objects.all()
        if options.get('check'):
            runs = runs.filter(check_name=options['check'])
        reports = [run.as_report() for run in runs[:options['limit']]]
        with open_output(options.get('out'), self.stdout) as stream:
            write_reports(stream, reports, options.get('format') or 'json')
