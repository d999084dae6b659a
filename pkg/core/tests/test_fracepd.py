import math

import numpy as np
from django.test import SimpleTestCase, tag
from scipy import integrate, special

from core import analytic, fracepd, pseudo
from core.exceptions import DomainError, GridError
from core.params import EPDParams, FracEPDParams, ModelParams
from core.quadrature import neville_to_zero


def _series_p1(x, w, nu, terms=80):
    """p1 from its expansion in powers of |x|**(-nu/2), convergent for nu < 2 and x != 0."""
    alpha = nu / 2
    k = np.arange(1, terms + 1)
    r = np.abs(np.asarray(x, dtype=float))[:, None]
    coefficients = np.exp(special.gammaln(alpha * k + 1) - special.gammaln(k + 1)) * np.sin(math.pi * alpha * k / 2)
    return -np.sum((1j * w) ** k * coefficients * r ** (-alpha * k - 1), axis=1) / math.pi


def _contour_p1(x, w, nu):
    """p1 at x > 0 with the two half-line Fourier integrals rotated onto xi = +-i r, where they decay."""
    alpha = nu / 2

    def rotated(sign):
        phase = w * np.exp(sign * 0.5j * math.pi * alpha)

        def part(r, take):
            return take(np.exp(-x * r + 1j * phase * r ** alpha))

        re, _ = integrate.quad(part, 0, np.inf, args=(np.real,), limit=200)
        im, _ = integrate.quad(part, 0, np.inf, args=(np.imag,), limit=200)
        return sign * 1j * (re + 1j * im)

    return (rotated(1) + rotated(-1)) / (2 * math.pi)


def _gauss_integral(f, edges, order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.asarray(edges, dtype=float)
    half = 0.5 * np.diff(edges)
    points = (0.5 * (edges[1:] + edges[:-1])[:, None] + half[:, None] * nodes).ravel()
    return float(np.dot((half[:, None] * weights).ravel(), f(points)))


class CharacteristicFunctionTests(SimpleTestCase):
    def test_poisson_representation(self):
        xi = np.linspace(0.1, 4.0, 5)
        for d in (1, 2, 3):
            points = xi if d == 1 else xi[:, None] * np.eye(d)[-1]
            for nu in (1.0, 1.5, 2.0):
                for gamma in (0.75, 1.0, 2.0):
                    q = FracEPDParams(nu=nu, gamma=gamma, d=d)
                    for t in (0.25, 1.0, 4.0):
                        result = fracepd.fracepd_cf_poisson(points, t, q)
                        np.testing.assert_allclose(result.value, fracepd.fracepd_cf(points, t, q),
                                                   rtol=0, atol=1e-10)

    def test_classical_case(self):
        q = FracEPDParams(nu=2.0, gamma=1.5, c=0.7, d=2)
        xi = np.array([[0.3, 0.4], [1.0, 2.0]])
        np.testing.assert_allclose(fracepd.fracepd_cf(xi, 1.3, q), analytic.epd_cf(xi, 1.3, q.classical()),
                                   rtol=0, atol=1e-15)

    def test_parameter_validation(self):
        with self.assertRaises(DomainError):
            FracEPDParams(nu=0.0, gamma=1.0)
        with self.assertRaises(DomainError):
            FracEPDParams(nu=2.5, gamma=1.0)
        with self.assertRaises(DomainError):
            FracEPDParams(nu=1.0, gamma=-1.0)


class WeightTests(SimpleTestCase):
    def test_weight_is_one_dimensional_epd(self):
        q = FracEPDParams(nu=1.5, gamma=1.25, c=2.0, d=3)
        w = np.linspace(-2.5, 2.5, 41)
        expected = analytic.epd_density(w, 1.0, EPDParams(gamma=q.gamma + 1.0, c=2.0, d=1))
        np.testing.assert_allclose(fracepd.epd_weight(w, 1.0, q), expected, rtol=1e-12, atol=0)

    def test_weight_unit_mass(self):
        q = FracEPDParams(nu=1.0, gamma=2.0, d=1)
        mass, _ = integrate.quad(lambda w: fracepd.epd_weight(w, 1.5, q), -1.5, 1.5)
        self.assertAlmostEqual(mass, 1.0, places=10)

    def test_pme_weight(self):
        self.assertAlmostEqual(fracepd.pme_weight(0.0, 1.0, 2.0), ModelParams(m=2).C, places=15)


class DensityTests(SimpleTestCase):
    def test_classical_limit(self):
        for gamma in (1.0, 2.0):
            q = FracEPDParams(nu=2.0, gamma=gamma, d=1)
            x = np.array([0.0, 0.25, 0.5])
            result = fracepd.fracepd_density(x, 1.0, q)
            np.testing.assert_allclose(result.value, analytic.epd_density(x, 1.0, q.classical()),
                                       rtol=0, atol=1e-6)

    def test_composition_matches_density(self):
        q = FracEPDParams(nu=1.5, gamma=2.0, d=1)
        x = np.array([0.0, 0.5, 1.5])
        density = fracepd.fracepd_density(x, 1.0, q)
        composed = fracepd.compose_solution(x, 1.0, q)
        np.testing.assert_allclose(composed.value, density.value, rtol=0, atol=1e-7)

    def test_classical_composition(self):
        q = FracEPDParams(nu=2.0, gamma=2.0, d=1)
        result = fracepd.compose_solution(np.array([0.0, 0.5]), 1.0, q)
        np.testing.assert_allclose(result.value, analytic.epd_density([0.0, 0.5], 1.0, q.classical()), atol=1e-5)

    def test_kernel_order_rejected_for_dirac_kernels(self):
        with self.assertRaises(DomainError):
            fracepd.compose_solution(0.0, 1.0, FracEPDParams(nu=2.0, gamma=1.0), order='kernel')
        with self.assertRaises(DomainError):
            fracepd.compose_solution(0.0, 1.0, FracEPDParams(nu=1.0, gamma=1.0), order='sideways')

    @tag('slow')
    def test_density_mass(self):
        q = FracEPDParams(nu=1.5, gamma=2.0, d=1)
        mu, nu, reach = q.bessel_order, q.nu, 20.0

        def density(x):
            return np.concatenate([fracepd.fracepd_density(part, 1.0, q).value for part in np.array_split(x, 8)])

        # The density oscillates ever faster towards the origin; panels shrink geometrically there.
        near = _gauss_integral(density, np.concatenate([[0.0], np.geomspace(0.06, 1.0, 64)]), 16)
        far = sum(_gauss_integral(density, [a, b], 32) for a, b in ((1, 2), (2, 4), (4, 8), (8, reach)))
        # Tail from the |xi|**nu and |xi|**(2 nu) terms of the CF expansion near the origin.
        a = 1 / (4 * (mu + 1))
        b = 1 / (32 * (mu + 1) * (mu + 2))
        tail = (a * special.gamma(1 + nu) * math.sin(math.pi * nu / 2) / (math.pi * nu) * reach ** -nu
                - b * special.gamma(1 + 2 * nu) * math.sin(math.pi * nu) / (2 * math.pi * nu) * reach ** (-2 * nu))
        self.assertAlmostEqual(2 * (near + far + tail), 1.0, delta=1e-4)

    @tag('slow')
    def test_kernel_order_matches_fourier_order(self):
        q = FracEPDParams(nu=1.5, gamma=2.0, d=1)
        fourier = fracepd.compose_solution(0.5, 1.0, q)
        kernel = fracepd.compose_solution(0.5, 1.0, q, order='kernel')
        self.assertLess(abs(kernel.value - fourier.value), 1e-4)


class KernelTests(SimpleTestCase):
    def test_conjugate_pair(self):
        sample = fracepd.kernel_p12(np.array([0.5, 1.0]), 0.8, 1.5, 1)
        np.testing.assert_array_equal(sample.p2, np.conj(sample.p1))
        self.assertEqual(sample.w, 0.8)

    def test_wave_kernel(self):
        # nu = 2: p1 = i w / (pi (w**2 - x**2)) away from the light cone |x| = w.
        x = np.array([0.3, 1.5])
        sample = fracepd.kernel_p12(x, 0.8, 2.0, 1)
        np.testing.assert_allclose(sample.p1, 1j * 0.8 / (math.pi * (0.64 - x ** 2)), rtol=0, atol=1e-6)

    def test_values_against_contour_integrals(self):
        x = np.array([0.5, 1.0, 2.0])
        sample = fracepd.kernel_p12(x, 0.8, 1.5, 1)
        expected = np.array([_contour_p1(point, 0.8, 1.5) for point in x])
        np.testing.assert_allclose(sample.p1, expected, rtol=0, atol=1e-5)
        np.testing.assert_allclose(_series_p1(x, 0.8, 1.5), expected, rtol=0, atol=1e-7)

    def test_normalization(self):
        # The damped integral of (p1 + p2) / 2 over the line is the Poisson average of cos(w |xi|**(nu/2));
        # it is a series in sqrt(eta).
        w, nu = 0.8, 1.5
        etas = 1e-2 * 0.5 ** np.arange(6)
        damped = pseudo.poisson_damped_masses(lambda xi: np.cos(w * xi ** (nu / 2)), nu / 2, w, etas)
        self.assertTrue(np.all(damped.value < 1.0))
        mass, _ = neville_to_zero(np.sqrt(etas), damped.value)
        self.assertAlmostEqual(float(mass), 1.0, delta=1e-4)

    def test_domain(self):
        with self.assertRaises(DomainError):
            fracepd.kernel_p12(0.5, 1.0, 2.5, 1)


class FractionalPMETests(SimpleTestCase):
    def test_identity(self):
        for nu in (1.5, 2.0):
            report = fracepd.frac_pme_identity_check(1.0, nu, 2.0)
            self.assertTrue(report, report)
            self.assertEqual(report.params['m'], 2.0)

    def test_domain(self):
        with self.assertRaises(DomainError):
            fracepd.frac_pme_identity_check(1.0, 1.5, 1.0)
        with self.assertRaises(DomainError):
            fracepd.frac_pme_identity_check(1.0, 1.5, 2.0, d=2)


class SpectralTests(SimpleTestCase):
    def setUp(self):
        self.L = 2 * math.pi
        self.x = np.arange(128) * self.L / 128

    def test_symbol(self):
        f = np.sin(3 * self.x)
        np.testing.assert_allclose(fracepd.fractional_laplacian_spectral(f, 1.5, self.L), 3 ** 1.5 * f, atol=1e-12)
        np.testing.assert_allclose(fracepd.riesz_spectral(f, 1.5, self.L), -(3 ** 1.5) * f, atol=1e-12)

    def test_classical_laplacian(self):
        f = np.cos(2 * self.x) + np.sin(5 * self.x)
        second = -4 * np.cos(2 * self.x) - 25 * np.sin(5 * self.x)
        np.testing.assert_allclose(fracepd.riesz_spectral(f, 2.0, self.L), second, atol=1e-10)

    def test_semigroup(self):
        f = np.exp(np.sin(self.x))
        once = fracepd.fractional_laplacian_spectral(fracepd.fractional_laplacian_spectral(f, 0.6, self.L), 0.9,
                                                     self.L)
        np.testing.assert_allclose(once, fracepd.fractional_laplacian_spectral(f, 1.5, self.L), atol=1e-10)

    def test_grid_checks(self):
        with self.assertRaises(GridError):
            fracepd.fractional_laplacian_spectral(np.ones(8), 1.0, self.L, x=np.linspace(0, 1, 8) ** 2)
        with self.assertRaises(GridError):
            fracepd.fractional_laplacian_spectral(np.ones((4, 4)), 1.0, self.L)
        with self.assertRaises(DomainError):
            fracepd.riesz_spectral(np.ones(8), 2.5, self.L)
