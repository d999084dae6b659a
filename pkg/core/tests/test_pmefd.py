import numpy as np
from django.test import SimpleTestCase, tag

from core import pmefd
from core.exceptions import DomainError, GridError
from core.params import GridSpec, ModelParams


class ExponentSystemTests(SimpleTestCase):
    def test_quadratic_case(self):
        solution = pmefd.appendix_system_solve(2.0, 1)
        self.assertAlmostEqual(solution.gamma, 1.0, places=15)
        self.assertAlmostEqual(solution.delta, -1 / 3, places=15)
        self.assertAlmostEqual(solution.eta, 2 / 3, places=15)
        self.assertAlmostEqual(solution.B, 1 / 12, places=15)
        for residual in solution.residuals:
            self.assertLess(abs(residual), 1e-14)

    def test_matches_closed_form_constants(self):
        for m, d in ((1.2, 1), (3.0, 2), (4.5, 5)):
            with self.subTest(m=m, d=d):
                p = ModelParams(m=m, d=d)
                solution = pmefd.appendix_system_solve(m, d)
                self.assertAlmostEqual(-solution.delta / p.alpha, 1.0, places=13)
                self.assertAlmostEqual(solution.eta / (2 * p.beta), 1.0, places=13)
                self.assertAlmostEqual(solution.B / p.B, 1.0, places=13)

    def test_rejects_linear_diffusion(self):
        with self.assertRaises(DomainError):
            pmefd.appendix_system_solve(1.0, 1)


class ResidualTests(SimpleTestCase):
    def test_second_order(self):
        p = ModelParams(m=2.0, d=1)
        for fraction in (0.05, 0.1, 0.15):
            with self.subTest(fraction=fraction):
                x = [fraction * p.support_radius(1.0)]
                ratio = pmefd.pme_residual(p, x, 1.0, 0.02) / pmefd.pme_residual(p, x, 1.0, 0.01)
                self.assertAlmostEqual(ratio, 4.0, delta=0.8)

    def test_validation(self):
        p = ModelParams(m=2.0, d=2)
        with self.assertRaises(DomainError):
            pmefd.pme_residual(p, [0.1, 0.1], 1.0, 1.0)
        with self.assertRaises(DomainError):
            pmefd.pme_residual(p, [0.1], 1.0, 0.01)
        with self.assertRaises(GridError):
            pmefd.pme_residual(p, [p.support_radius(1.0), 0.0], 1.0, 0.01)


class EvolutionTests(SimpleTestCase):
    def evolve(self, p, nx):
        radius = p.support_radius(2.0)
        g = GridSpec(L=1.15 * radius, nx=nx, t0=1.0, t1=2.0)
        _, u0 = pmefd.barenblatt_grid(p, g)
        return g, radius, pmefd.pme_evolve(u0, p, g)

    def test_one_dimensional(self):
        p = ModelParams(m=2.0, d=1)
        g, radius, result = self.evolve(p, 400)
        self.assertEqual(result.t, 2.0)
        self.assertEqual(result.clipped_mass, 0.0)
        self.assertAlmostEqual(result.final_mass / result.initial_mass, 1.0, places=10)
        self.assertLess(pmefd.l1_distance(result, p, g), 5e-2)
        self.assertLess(abs(result.front - radius), 4 * 2 * g.L / g.nx)

    def test_radial(self):
        p = ModelParams(m=2.0, d=2)
        g, _, result = self.evolve(p, 300)
        self.assertAlmostEqual(result.final_mass / result.initial_mass, 1.0, places=10)
        self.assertLess(pmefd.l1_distance(result, p, g), 5e-2)

    def test_initial_data_checks(self):
        p = ModelParams(m=2.0, d=1)
        g = GridSpec(L=2.0, nx=16, t0=1.0, t1=1.5)
        with self.assertRaises(GridError):
            pmefd.pme_evolve(np.ones(15), p, g)
        with self.assertRaises(DomainError):
            pmefd.pme_evolve(-np.ones(16), p, g)

    def test_edge_warning(self):
        p = ModelParams(m=2.0, d=1)
        g = GridSpec(L=0.5 * p.support_radius(1.0), nx=64, t0=1.0, t1=1.1)
        _, u0 = pmefd.barenblatt_grid(p, g)
        with self.assertLogs('core.pmefd', level='WARNING'):
            pmefd.pme_evolve(u0, p, g)

    def test_front(self):
        result = pmefd.PMEResult(x=np.array([-1.0, 0.0, 1.0, 2.0]), u=np.array([0.0, 1.0, 0.5, 0.0]), t=1.0,
                                 initial_mass=1.0, final_mass=1.0, clipped_mass=0.0, steps=0, d=1)
        self.assertEqual(result.front, 1.0)

    @tag('slow')
    def test_fine_grid_accuracy(self):
        p = ModelParams(m=2.0, d=1)
        g, radius, result = self.evolve(p, 2000)
        self.assertLess(pmefd.l1_distance(result, p, g), 2e-3)
        self.assertLess(abs(result.front - radius), 2 * 2 * g.L / g.nx)
