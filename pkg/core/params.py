"""Immutable parameter records shared by the evaluators, samplers and the CLI.

Derived constants are properties: they are recomputed from the primary fields
on every access and never stored.
"""
import enum
import math
from dataclasses import dataclass, field

from scipy import special

from .exceptions import DomainError


@dataclass(frozen=True)
class ModelParams:
    """PME exponent ``m`` and dimension ``d`` of a Barenblatt solution."""

    m: float
    d: int = 1

    def __post_init__(self):
        self.clean()

    def clean(self):
        if not math.isfinite(self.m) or self.m <= 1:
            raise DomainError(f'PME exponent must satisfy m > 1, got m={self.m}')
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f'Dimension must be a positive integer, got d={self.d}')

    @property
    def alpha(self):
        return self.d / (2 + self.d * (self.m - 1))

    @property
    def beta(self):
        return 1 / (2 + self.d * (self.m - 1))

    @property
    def B(self):
        return (self.m - 1) / (2 * self.m * (2 + self.d * (self.m - 1)))

    @property
    def C(self):
        return math.exp(
            special.gammaln(self.d / 2 + self.gamma)
            + (self.d / 2) * math.log(self.B)
            - special.gammaln(self.gamma)
            - (self.d / 2) * math.log(math.pi)
        )

    @property
    def exponent(self):
        """Profile exponent 1/(m-1)."""
        return 1 / (self.m - 1)

    @property
    def gamma(self):
        """EPD parameter m/(m-1) of the time-rescaled solution."""
        return self.m / (self.m - 1)

    @property
    def speed(self):
        """EPD speed c' = 1/sqrt(B) of the time-rescaled solution."""
        return 1 / math.sqrt(self.B)

    def rescaled_time(self, t):
        return t ** self.beta

    def support_radius(self, t):
        return t ** self.beta / math.sqrt(self.B)

    def as_epd(self):
        return EPDParams(gamma=self.gamma, c=self.speed, d=self.d)

    def as_dict(self):
        return {'m': self.m, 'd': self.d}


@dataclass(frozen=True)
class EPDParams:
    """Parameters of the Euler-Poisson-Darboux fundamental solution."""

    gamma: float
    c: float = 1.0
    d: int = 1

    def __post_init__(self):
        self.clean()

    def clean(self):
        if not self.gamma > 0:
            raise DomainError(f'EPD parameter must satisfy gamma > 0, got {self.gamma}')
        if not self.c > 0:
            raise DomainError(f'Speed must be positive, got c={self.c}')
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f'Dimension must be a positive integer, got d={self.d}')

    @property
    def bessel_order(self):
        return self.gamma + self.d / 2 - 1

    def as_dict(self):
        return {'gamma': self.gamma, 'c': self.c, 'd': self.d}


class FlightLaw(enum.Enum):
    """Law of the waiting times between direction changes."""

    F1_UNIFORM = 'f1'
    F2_DIRICHLET_DMINUS1 = 'f2'
    F3_DIRICHLET_HALFD = 'f3'

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f'Unknown waiting-time law {value!r}; expected f1, f2 or f3')

    def check_dimension(self, d):
        if self is FlightLaw.F1_UNIFORM and d != 1:
            raise DomainError('Law f1 (uniform order statistics) requires d=1')
        if self is FlightLaw.F2_DIRICHLET_DMINUS1 and d < 2:
            raise DomainError('Law f2 (Dirichlet d-1) requires d>=2')
        if self is FlightLaw.F3_DIRICHLET_HALFD and d < 3:
            raise DomainError('Law f3 (Dirichlet d/2-1) requires d>=3')

    def dirichlet_shape(self, d):
        """Common Dirichlet parameter of the n+1 waiting-time fractions."""
        if self is FlightLaw.F1_UNIFORM:
            return 1.0
        if self is FlightLaw.F2_DIRICHLET_DMINUS1:
            return d - 1.0
        return d / 2 - 1.0

    @classmethod
    def default_for(cls, d):
        return cls.F1_UNIFORM if d == 1 else cls.F2_DIRICHLET_DMINUS1


@dataclass(frozen=True)
class FlightSpec:
    """A random flight with ``n`` direction changes observed at time ``t``."""

    n: int
    d: int
    law: FlightLaw
    c: float = 1.0
    t: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, 'law', FlightLaw.parse(self.law))
        self.clean()

    def clean(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f'Number of direction changes must be >= 1, got n={self.n}')
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f'Dimension must be a positive integer, got d={self.d}')
        if not self.c > 0:
            raise DomainError(f'Speed must be positive, got c={self.c}')
        if not self.t > 0:
            raise DomainError(f'Time horizon must be positive, got t={self.t}')
        self.law.check_dimension(self.d)

    @property
    def gamma(self):
        """EPD parameter whose fundamental solution is the flight density."""
        if self.law is FlightLaw.F1_UNIFORM:
            return (self.n + 1) / 2 if self.n % 2 else self.n / 2
        if self.law is FlightLaw.F2_DIRICHLET_DMINUS1:
            return self.n * (self.d - 1) / 2
        return self.n * (self.d / 2 - 1)

    @property
    def radius(self):
        return self.c * self.t

    def as_dict(self):
        return {'n': self.n, 'd': self.d, 'law': self.law.value, 'c': self.c, 't': self.t}


@dataclass(frozen=True)
class FracEPDParams:
    """Space-fractional EPD parameters; ``nu=2`` is the classical equation."""

    nu: float
    gamma: float
    c: float = 1.0
    d: int = 1

    def __post_init__(self):
        self.clean()

    def clean(self):
        if not 0 < self.nu <= 2:
            raise DomainError(f'Fractional order must satisfy 0 < nu <= 2, got {self.nu}')
        EPDParams(self.gamma, self.c, self.d)

    @property
    def bessel_order(self):
        return self.gamma + self.d / 2 - 1

    @property
    def weight_exponent(self):
        """Endpoint exponent d/2 + gamma - 3/2 of the weight g(w, t)."""
        return self.d / 2 + self.gamma - 1.5

    def classical(self):
        return EPDParams(gamma=self.gamma, c=self.c, d=self.d)

    def as_dict(self):
        return {'nu': self.nu, 'gamma': self.gamma, 'c': self.c, 'd': self.d}


@dataclass(frozen=True)
class OscillatoryQuadratureSpec:
    """Controls for Abel-damped oscillatory integrals on (0, inf).

    The integral is evaluated with the damping factor exp(-eps*s) for every
    ``eps`` in ``dampings`` (each half the previous one) and extrapolated to
    eps -> 0. ``cutoff`` defaults to the point where the smallest damping
    factor falls below 1e-17.
    """

    dampings: tuple = (1e-2, 5e-3, 2.5e-3)
    panel_width: float = 0.5
    order: int = 16
    cutoff: float = None
    tolerance: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, 'dampings', tuple(float(e) for e in self.dampings))
        self.clean()

    def clean(self):
        if not self.dampings or any(e <= 0 for e in self.dampings):
            raise DomainError('Dampings must be a non-empty sequence of positive numbers')
        if any(b >= a for a, b in zip(self.dampings, self.dampings[1:])):
            raise DomainError('Dampings must be strictly decreasing')
        if not self.panel_width > 0:
            raise DomainError('Panel width must be positive')
        if self.order < 2:
            raise DomainError('Gauss order must be at least 2')

    def cutoff_for(self, eps):
        if self.cutoff is not None:
            return self.cutoff
        return 39.0 / eps

    def as_dict(self):
        return {
            'dampings': list(self.dampings), 'panel_width': self.panel_width,
            'order': self.order, 'cutoff': self.cutoff, 'tolerance': self.tolerance,
        }


@dataclass(frozen=True)
class GridSpec:
    """Spatial grid and time window of the explicit PME solver."""

    L: float
    nx: int
    t0: float
    t1: float
    cfl: float = 0.4

    def __post_init__(self):
        self.clean()

    def clean(self):
        if not self.L > 0:
            raise DomainError(f'Half-width must be positive, got L={self.L}')
        if self.nx < 8:
            raise DomainError(f'Grid needs at least 8 points, got nx={self.nx}')
        if not 0 < self.t0 < self.t1:
            raise DomainError(f'Time window must satisfy 0 < t0 < t1, got ({self.t0}, {self.t1})')
        if not 0 < self.cfl < 1:
            raise DomainError(f'CFL number must lie in (0, 1), got {self.cfl}')

    def as_dict(self):
        return {'L': self.L, 'nx': self.nx, 't0': self.t0, 't1': self.t1, 'cfl': self.cfl}


@dataclass
class VerifyReport:
    """Outcome of one named check."""

    check: str
    value: float
    tolerance: float
    passed: bool
    params: dict = field(default_factory=dict)
    seed: int = None
    n_samples: int = None

    def __bool__(self):
        return bool(self.passed)

    @classmethod
    def at_most(cls, check, value, tolerance, **kwargs):
        value = float(value)
        return cls(check=check, value=value, tolerance=float(tolerance),
                   passed=bool(value <= tolerance), **kwargs)

    @classmethod
    def at_least(cls, check, value, threshold, **kwargs):
        """Pass when ``value`` exceeds ``threshold`` (p-values)."""
        value = float(value)
        return cls(check=check, value=value, tolerance=float(threshold),
                   passed=bool(value > threshold), **kwargs)
