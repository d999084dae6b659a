"""Finite differences for the porous medium equation u_t = Laplacian(u**m).

``pme_evolve`` is a conservative explicit finite-volume scheme: on the full
line for d=1 and in the radial variable for d>=2, where cell volumes and face
areas carry the r**(d-1) factor so the r=0 cell needs no special formula.
``pme_residual`` checks the closed form against the equation with centred
differences, and ``appendix_system_solve`` solves the exponent system that
pins down the closed form.
"""
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .analytic import barenblatt_density, check_time
from .exceptions import DomainError, GridError
from .params import GridSpec, ModelParams

logger = logging.getLogger(__name__)

FRONT_THRESHOLD = 1e-6


class AppendixSolution(NamedTuple):
    gamma: float
    delta: float
    eta: float
    B: float
    residuals: tuple


@dataclass
class PMEResult:
    x: np.ndarray
    u: np.ndarray
    t: float
    initial_mass: float
    final_mass: float
    clipped_mass: float
    steps: int
    d: int

    @property
    def front(self):
        """Largest |x| where u exceeds FRONT_THRESHOLD times its maximum."""
        active = np.flatnonzero(self.u > FRONT_THRESHOLD * self.u.max())
        return float(np.abs(self.x[active]).max()) if active.size else 0.0


@dataclass
class RadialGrid:
    """Cell centres, cell volumes and the areas of the faces between cells."""

    x: np.ndarray
    h: float
    volumes: np.ndarray
    faces: np.ndarray
    sphere: float

    @classmethod
    def build(cls, g: GridSpec, d):
        if d == 1:
            h = 2 * g.L / g.nx
            x = -g.L + (np.arange(g.nx) + 0.5) * h
            return cls(x=x, h=h, volumes=np.full(g.nx, h), faces=np.ones(g.nx - 1), sphere=1.0)
        h = g.L / (g.nx - 0.5)
        r = np.arange(g.nx) * h
        outer = r + h / 2
        inner = np.maximum(r - h / 2, 0.0)
        volumes = (outer ** d - inner ** d) / d
        sphere = 2 * math.pi ** (d / 2) / math.gamma(d / 2)
        return cls(x=r, h=h, volumes=volumes, faces=outer[:-1] ** (d - 1), sphere=sphere)

    def mass(self, u):
        return self.sphere * float(np.dot(self.volumes, u))

    def divergence(self, w):
        """Discrete Laplacian of w as a flux difference over cell volumes."""
        flux = self.faces * np.diff(w) / self.h
        out = np.zeros_like(w)
        out[:-1] += flux
        out[1:] -= flux
        return out / self.volumes


def barenblatt_grid(p: ModelParams, g: GridSpec, t=None):
    grid = RadialGrid.build(g, p.d)
    points = grid.x if p.d == 1 else np.stack([grid.x] + [np.zeros_like(grid.x)] * (p.d - 1), axis=1)
    return grid, np.asarray(barenblatt_density(points, g.t0 if t is None else t, p))


def pme_evolve(u0, p: ModelParams, g: GridSpec):
    """Advance ``u0`` from g.t0 to g.t1 with adaptive explicit steps."""
    grid = RadialGrid.build(g, p.d)
    u = np.array(u0, dtype=float)
    if u.shape != grid.x.shape:
        raise GridError(f'Initial data has shape {u.shape}, grid has {grid.x.shape}')
    if np.any(u < 0) or not np.all(np.isfinite(u)):
        raise DomainError('Initial data must be finite and non-negative')
    initial_mass = grid.mass(u)
    clipped = 0.0
    t = g.t0
    steps = 0
    while t < g.t1:
        peak = float(u.max())
        if not math.isfinite(peak):
            raise GridError(f'Solution blew up at t={t:.6g}')
        if peak == 0:
            break
        dt = min(g.cfl * grid.h ** 2 / (2 * p.d * p.m * peak ** (p.m - 1)), g.t1 - t)
        u = u + dt * grid.divergence(u ** p.m)
        if np.any(u < 0):
            clipped += grid.mass(np.where(u < 0, -u, 0.0))
            u = np.maximum(u, 0.0)
        t += dt
        steps += 1
    if clipped:
        logger.warning('Clipped negative undershoot carrying mass %.3e', clipped)
    if u[-1] > FRONT_THRESHOLD * u.max() or (p.d == 1 and u[0] > FRONT_THRESHOLD * u.max()):
        logger.warning('Solution reached the edge of the grid at L=%g', g.L)
    logger.debug('PME evolved to t=%g in %d steps', t, steps)
    return PMEResult(x=grid.x, u=u, t=t, initial_mass=initial_mass, final_mass=grid.mass(u),
                     clipped_mass=clipped, steps=steps, d=p.d)


def l1_distance(result: PMEResult, p: ModelParams, g: GridSpec):
    """L1 distance between an evolved profile and the closed form at the same time."""
    grid, exact = barenblatt_grid(p, g, result.t)
    return grid.mass(np.abs(result.u - exact))


def pme_residual(p: ModelParams, x, t, h):
    """|u_t - Laplacian(u**m)| of the closed form by centred differences of step h."""
    check_time(t)
    if not 0 < h < t:
        raise DomainError(f'Step must satisfy 0 < h < t, got h={h}')
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (p.d,):
        raise DomainError(f'Point must have {p.d} coordinates, got shape {x.shape}')
    if np.linalg.norm(x) + h >= p.support_radius(t - h):
        raise GridError('Stencil crosses the free boundary; residual needs an interior point')

    def u(point, time):
        return float(barenblatt_density(point if p.d > 1 else point[0], time, p))

    u_t = (u(x, t + h) - u(x, t - h)) / (2 * h)
    centre = u(x, t) ** p.m
    laplacian = 0.0
    for axis in range(p.d):
        e = np.zeros(p.d)
        e[axis] = h
        laplacian += (u(x + e, t) ** p.m - 2 * centre + u(x - e, t) ** p.m) / h ** 2
    return abs(u_t - laplacian)


def appendix_system_solve(m, d):
    """Exponents of t**delta (1 - B|x|**2 / t**eta)_+ ** gamma solving the PME.

    Matching the profile powers gives gamma = 1/(m-1). The last equation then
    fixes eta in terms of B, the third fixes delta, and the time-power
    equation leaves a single linear equation for B.
    """
    p = ModelParams(m=m, d=d)
    m, d = p.m, p.d
    gamma = 1 / (m - 1)
    k = gamma * m - 1
    # eta = 4 B m k, delta = eta gamma - 2 gamma m B (d + 2k)
    eta_per_b = 4 * m * k
    delta_per_b = eta_per_b * gamma - 2 * gamma * m * (d + 2 * k)
    B = 1 / ((1 - m) * delta_per_b + eta_per_b)
    eta = eta_per_b * B
    delta = delta_per_b * B
    residuals = (
        gamma - k,
        (delta - 1) - (m * delta - eta),
        (delta - eta * gamma) + gamma * m * 2 * B * (d + 2 * k),
        gamma * eta - gamma * m * k * 4 * B,
    )
    return AppendixSolution(gamma=gamma, delta=delta, eta=eta, B=B, residuals=residuals)
