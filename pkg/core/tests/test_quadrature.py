import math

import numpy as np
from django.test import SimpleTestCase
from scipy import special

from core.exceptions import DomainError
from core.params import OscillatoryQuadratureSpec
from core.quadrature import (
    abel_integral, composite_legendre, gauss_jacobi, jacobi_average, jacobi_cosine, jacobi_order_for,
    neville_to_zero,
)


class GaussJacobiTests(SimpleTestCase):
    def test_rejects_non_integrable_weight(self):
        with self.assertRaises(DomainError):
            gauss_jacobi(8, -1.0, 0.0)

    def test_weights_integrate_the_weight(self):
        _, weights = gauss_jacobi(16, 0.5, 0.5)
        self.assertAlmostEqual(weights.sum(), math.pi / 2, places=13)

    def test_order_grows_with_frequency(self):
        orders = jacobi_order_for([0.0, 100.0, 1000.0])
        self.assertEqual(orders[0], 64)
        self.assertTrue(np.all(np.diff(orders) >= 0))
        self.assertGreaterEqual(orders[-1], 632)

    def test_cosine_transform_flat_weight(self):
        z = np.array([0.5, 1.0, 37.5, 300.0])
        np.testing.assert_allclose(jacobi_cosine(z, 0.0), 2 * np.sin(z) / z, atol=1e-12)
        self.assertAlmostEqual(jacobi_cosine(0.0, 0.0), 2.0, places=13)

    def test_cosine_transform_semicircle(self):
        z = np.array([0.25, 3.0, 42.0, 512.0])
        np.testing.assert_allclose(jacobi_cosine(z, 0.5), math.pi * special.j1(z) / z, atol=1e-12)

    def test_average(self):
        result = jacobi_average(lambda s: s ** 2, 0.0)
        self.assertAlmostEqual(result.value, 2 / 3, places=13)
        self.assertTrue(result.converged)


class CompositeTests(SimpleTestCase):
    def test_sine(self):
        result = composite_legendre(np.sin, 0.0, math.pi, 0.5)
        self.assertAlmostEqual(result.value, 2.0, places=13)
        self.assertLess(result.error, 1e-12)

    def test_vector_integrand(self):
        result = composite_legendre(lambda s: np.stack([s, s ** 2], axis=1), 0.0, 1.0, 0.25)
        np.testing.assert_allclose(result.value, [0.5, 1 / 3], atol=1e-14)

    def test_empty_interval(self):
        with self.assertRaises(DomainError):
            composite_legendre(np.sin, 1.0, 1.0, 0.1)

    def test_resolved_integrand_converges(self):
        result = composite_legendre(lambda s: np.cos(200 * s), 0.0, 1.0, 0.005)
        self.assertTrue(result.converged)
        self.assertAlmostEqual(result.value, math.sin(200) / 200, places=12)

    def test_underresolved_integrand_is_flagged(self):
        with self.assertLogs('core.quadrature', 'WARNING'):
            result = composite_legendre(lambda s: np.cos(200 * s), 0.0, 1.0, 1.0, order=4)
        self.assertFalse(result.converged)
        self.assertGreater(result.error, 1e-6)


class NevilleTests(SimpleTestCase):
    def test_quadratic_is_exact(self):
        eps = np.array([0.1, 0.05, 0.025])
        value, _ = neville_to_zero(eps, 1 + 2 * eps + 3 * eps ** 2)
        self.assertAlmostEqual(value, 1.0, places=12)

    def test_trailing_axes(self):
        eps = np.array([0.1, 0.05, 0.025])
        values = np.stack([1 + eps, 2 - eps ** 2], axis=1)
        value, error = neville_to_zero(eps, values)
        np.testing.assert_allclose(value, [1.0, 2.0], atol=1e-12)
        self.assertEqual(error.shape, (2,))


class AbelIntegralTests(SimpleTestCase):
    def test_sine_and_cosine(self):
        result = abel_integral(lambda s: np.stack([np.sin(s), np.cos(s)], axis=1))
        np.testing.assert_allclose(result.value, [1.0, 0.0], atol=1e-6)

    def test_endpoint_singularity(self):
        result = abel_integral(np.cos, endpoint_exponent=-0.5)
        self.assertAlmostEqual(result.value, math.sqrt(math.pi / 2), places=6)

    def test_damped_values_recorded(self):
        spec = OscillatoryQuadratureSpec()
        result = abel_integral(lambda s: np.exp(-s), spec)
        self.assertEqual(len(result.damped), len(spec.dampings))
        self.assertAlmostEqual(result.value, 1.0, places=6)

    def test_rejects_non_integrable_endpoint(self):
        with self.assertRaises(DomainError):
            abel_integral(np.cos, endpoint_exponent=-1.0)

    def test_spec_validation(self):
        with self.assertRaises(DomainError):
            OscillatoryQuadratureSpec(dampings=(1e-3, 1e-2))
        with self.assertRaises(DomainError):
            OscillatoryQuadratureSpec(dampings=())
