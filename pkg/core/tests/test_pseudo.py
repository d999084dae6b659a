import math

import numpy as np
from django.test import SimpleTestCase, tag
from scipy import special

from core import pseudo
from core.exceptions import DomainError


class ClosedFormTests(SimpleTestCase):
    def test_reference_values(self):
        self.assertAlmostEqual(pseudo.rods_kernel(0.0, 0.5), 0.2820948, places=7)
        self.assertAlmostEqual(2 * pseudo.airy_kernel(0.0, 1 / 3), 0.7100561, places=7)

    def test_even(self):
        x = np.linspace(0.1, 2.0, 9)
        np.testing.assert_array_equal(pseudo.rods_kernel(x, 0.7), pseudo.rods_kernel(-x, 0.7))
        np.testing.assert_array_equal(pseudo.airy_kernel(x, 0.7), pseudo.airy_kernel(-x, 0.7))

    def test_signed(self):
        x = np.linspace(-4.0, 4.0, 50)
        self.assertLess(np.min(pseudo.rods_kernel(x, 1.0)), -1e-3)
        self.assertLess(np.min(pseudo.airy_kernel(x, 1.0)), -1e-3)

    def test_signed_kernel_dispatch(self):
        self.assertEqual(pseudo.signed_kernel(0.3, 0.5, 2), pseudo.rods_kernel(0.3, 0.5))
        self.assertEqual(pseudo.signed_kernel(0.3, 0.5, 3), pseudo.airy_kernel(0.3, 0.5))

    def test_time_must_be_positive(self):
        with self.assertRaises(DomainError):
            pseudo.rods_kernel(0.0, 0.0)


class NumericKernelTests(SimpleTestCase):
    def test_order_validation(self):
        for n in (1, 2.5):
            with self.assertRaises(DomainError):
                pseudo.pseudo_kernel(0.0, 1.0, n)

    def test_fourth_order_is_finite(self):
        result = pseudo.pseudo_kernel(np.array([0.0, 0.5, 1.0]), 1.0, 4)
        self.assertTrue(np.all(np.isfinite(result.value)))

    @tag('slow')
    def test_matches_closed_forms(self):
        x = np.linspace(-4.0, 4.0, 50)
        for n, closed in ((2, pseudo.rods_kernel), (3, pseudo.airy_kernel)):
            with self.subTest(n=n):
                result = pseudo.pseudo_kernel(x, 1.0, n)
                np.testing.assert_allclose(result.value, closed(x, 1.0), rtol=0, atol=1e-6)


class MassTests(SimpleTestCase):
    def test_damped_integrals_of_gaussian(self):
        etas = (0.5, 1.0, 2.0)
        result = pseudo.damped_integrals(lambda x: np.exp(-x ** 2 / 4) / (2 * math.sqrt(math.pi)),
                                         lambda x: 1.0, etas)
        np.testing.assert_allclose(result.value, special.erfcx(etas), rtol=0, atol=1e-9)
        self.assertTrue(result.converged)

    def test_poisson_masses_of_gaussian(self):
        etas = (0.025, 0.1, 0.4)
        result = pseudo.poisson_damped_masses(lambda xi: np.exp(-xi ** 2), 2, 1.0, etas)
        np.testing.assert_allclose(result.value, special.erfcx(etas), rtol=0, atol=1e-7)

    def test_kernel_mass_from_values_on_the_line(self):
        for n in (2, 3):
            with self.subTest(n=n):
                result = pseudo.kernel_mass(1.0, n)
                self.assertAlmostEqual(result.value, 1.0, delta=1e-4)
                self.assertLess(result.damped[0], result.damped[-1])

    def test_kernel_mass_needs_closed_form(self):
        with self.assertRaises(DomainError):
            pseudo.kernel_mass(1.0, 4)

    def test_damped_masses_agree_across_domains(self):
        etas = (0.4, 0.2, 0.1)
        for n in (2, 3):
            with self.subTest(n=n):
                direct = pseudo.poisson_damped_masses(pseudo.kernel_cf(1.0, n), n, 1.0, etas)
                self.assertTrue(np.all(direct.value < 1.0))
                np.testing.assert_allclose(pseudo.kernel_mass(1.0, n, etas).damped, direct.value, rtol=0, atol=1e-5)

    def test_composition_mass(self):
        for n in (2, 3):
            with self.subTest(n=n):
                result = pseudo.pseudo_cf_mass(pseudo.composition_cf(1.0, 1.0, 1.0, n), n, 1.0)
                self.assertAlmostEqual(result.value, 1.0, delta=1e-4)

    @tag('slow')
    def test_composition_damped_on_the_line(self):
        for n in (2, 3):
            with self.subTest(n=n):
                result = pseudo.composition_damped_mass(1.0, 1.0, 1.0, n, eta=1.0)
                expected = pseudo.poisson_damped_masses(pseudo.composition_cf(1.0, 1.0, 1.0, n), n, 1.0, (1.0,))
                self.assertAlmostEqual(result.value, expected.value[0], delta=1e-4)
                self.assertLess(result.value, 1.0)


class CompositionTests(SimpleTestCase):
    def test_lambda_to_gamma(self):
        self.assertEqual(pseudo.lambda_to_gamma(1.5), 1.5)
        self.assertEqual(pseudo.lambda_to_gamma(1.5, d=2), 1.0)
        with self.assertRaises(DomainError):
            pseudo.lambda_to_gamma(0.0)

    def test_route_validation(self):
        with self.assertRaises(DomainError):
            pseudo.compose_epd_pseudo(1.0, 1.0, 1.0, 1.0, 4, route='kernel')
        with self.assertRaises(DomainError):
            pseudo.compose_epd_pseudo(1.0, 1.0, 1.0, 1.0, 2, route='sideways')
        with self.assertRaises(DomainError):
            pseudo.compose_epd_pseudo(1.0, 1.0, 1.0, -1.0, 2)

    def test_fourier_route_reports_tail(self):
        result = pseudo.compose_epd_pseudo(np.array([0.0, 1.0]), 1.0, 1.0, 1.0, 2)
        self.assertTrue(np.all(np.isfinite(result.value)))
        self.assertTrue(np.all(result.error > 0))
        self.assertTrue(np.all(result.error < 1e-4))
        self.assertTrue(result.converged)

    @tag('slow')
    def test_routes_agree(self):
        x = np.array([1.0, 1.5])
        fourier = pseudo.compose_epd_pseudo(x, 1.0, 1.0, 1.0, 2, route='fourier')
        kernel = pseudo.compose_epd_pseudo(x, 1.0, 1.0, 1.0, 2, route='kernel')
        np.testing.assert_allclose(kernel.value, fourier.value, rtol=0, atol=1e-4)
        self.assertTrue(math.isfinite(float(kernel.error.max())))
