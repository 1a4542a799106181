# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

import unittest

import numpy as np

from lagbif.exceptions import InvalidArgumentException, MissingArgumentException
from lagbif.field import (Poly2, GeneratingFunction, QuadraticPerturbation, NormalForm, normal_form, perturb,
                          versal_family, pyramid_family)


class TestGeneratingFunction(unittest.TestCase):
    def setUp(self):
        self.elliptic = normal_form(NormalForm.ELLIPTIC_UMBILIC)
        self.hyperbolic = normal_form(NormalForm.HYPERBOLIC_UMBILIC)

    def test_evaluate(self):
        self.assertAlmostEqual(1.0 / 3.0, self.elliptic.evaluate((1.0, 0.0)))
        self.assertAlmostEqual(3.0, self.hyperbolic.evaluate((1.0, 2.0)))
        self.assertEqual(0.0, GeneratingFunction(Poly2.zero()).evaluate((4.0, 5.0)))

    def test_gradient(self):
        np.testing.assert_allclose([0.0, -2.0], self.elliptic.gradient((1.0, 1.0)))
        np.testing.assert_allclose([4.0, 9.0], self.hyperbolic.gradient((2.0, 3.0)))

        identity = GeneratingFunction(Poly2.parse("1/2*y1^2 + 1/2*y2^2"))
        np.testing.assert_allclose([0.7, -1.3], identity.gradient((0.7, -1.3)))

    def test_hessian(self):
        np.testing.assert_array_equal(np.zeros((2, 2)), self.elliptic.hessian((0.0, 0.0)))
        np.testing.assert_allclose([[2.0, 0.0], [0.0, 4.0]], self.hyperbolic.hessian((1.0, 2.0)))

        slice_one = pyramid_family().at(t=1.0)
        np.testing.assert_allclose([[2.0, 0.0], [0.0, 0.0]], slice_one.hessian((0.0, 0.0)))

    def test_hessian_is_symmetric_for_arrays(self):
        rng = np.random.default_rng(3)
        y = rng.uniform(-2.0, 2.0, size=(2, 10))
        hessian = self.elliptic.hessian(y)
        self.assertEqual((2, 2, 10), hessian.shape)
        np.testing.assert_array_equal(hessian[0, 1], hessian[1, 0])

    def test_derivatives_match_finite_differences(self):
        rng = np.random.default_rng(0)
        points = rng.uniform(-2.0, 2.0, size=(100, 2))
        h = 1e-5

        for kind in NormalForm.ALL:
            f = normal_form(kind)
            for y in points:
                numeric_gradient = np.array([
                    (f.evaluate(y + [h, 0.0]) - f.evaluate(y - [h, 0.0])) / (2 * h),
                    (f.evaluate(y + [0.0, h]) - f.evaluate(y - [0.0, h])) / (2 * h)])
                scale = max(1.0, np.max(np.abs(numeric_gradient)))
                np.testing.assert_allclose(f.gradient(y) / scale, numeric_gradient / scale, atol=1e-6,
                                           err_msg=kind)

                numeric_hessian = np.column_stack([
                    (f.gradient(y + [h, 0.0]) - f.gradient(y - [h, 0.0])) / (2 * h),
                    (f.gradient(y + [0.0, h]) - f.gradient(y - [0.0, h])) / (2 * h)])
                scale = max(1.0, np.max(np.abs(numeric_hessian)))
                np.testing.assert_allclose(f.hessian(y) / scale, numeric_hessian / scale, atol=1e-6,
                                           err_msg=kind)

    def test_hessian_det_gradient_matches_finite_differences(self):
        f = perturb(self.hyperbolic, QuadraticPerturbation(0.1, 1.0, 1.0, 2.0))
        h = 1e-6
        for y in ([0.3, -0.2], [1.1, 0.4], [-0.7, -1.5]):
            y = np.array(y)
            numeric = np.array([
                (f.hessian_det(y + [h, 0.0]) - f.hessian_det(y - [h, 0.0])) / (2 * h),
                (f.hessian_det(y + [0.0, h]) - f.hessian_det(y - [0.0, h])) / (2 * h)])
            np.testing.assert_allclose(numeric, f.hessian_det_gradient(y), rtol=1e-6, atol=1e-8)

    def test_field_and_potential(self):
        x = (1.0, 1.0)
        np.testing.assert_allclose([0.0, 0.0], self.hyperbolic.field(x)((1.0, -1.0)))
        self.assertAlmostEqual(0.0, self.hyperbolic.potential(x)((1.0, -1.0)))
        self.assertAlmostEqual(-4.0 / 3.0, self.hyperbolic.potential(x)((1.0, 1.0)))

    def test_field_on_batches(self):
        field = self.hyperbolic.field((1.0, 4.0))
        points = np.array([[1.0, -1.0, 0.0], [2.0, -2.0, 0.0]])
        np.testing.assert_allclose([[0.0, 0.0, -1.0], [0.0, 0.0, -4.0]], field(points))

        grid = np.stack(np.meshgrid(np.linspace(-1.0, 1.0, 4), np.linspace(0.0, 2.0, 3)))
        values = field(grid)
        self.assertEqual((2, 3, 4), values.shape)
        np.testing.assert_allclose(grid[0] ** 2 - 1.0, values[0])
        np.testing.assert_allclose(grid[1] ** 2 - 4.0, values[1])

    def test_rejects_non_polynomial(self):
        self.assertRaises(InvalidArgumentException, GeneratingFunction, "y1^2")


class TestNormalForms(unittest.TestCase):
    def test_builtin_polynomials(self):
        self.assertEqual(Poly2.parse("1/3*y1^3 + 1/3*y2^3"), normal_form(NormalForm.HYPERBOLIC_UMBILIC).poly)
        self.assertEqual(Poly2.parse("1/3*y1^3 - y1*y2^2"), normal_form(NormalForm.ELLIPTIC_UMBILIC).poly)
        self.assertEqual(Poly2.parse("y1^3 + 1/2*y2^2"), normal_form(NormalForm.FOLD).poly)
        self.assertEqual(NormalForm.FOLD, normal_form(NormalForm.FOLD).label)

    def test_unknown_form_rejected(self):
        self.assertRaises(InvalidArgumentException, normal_form, "swallowtail")


class TestPerturb(unittest.TestCase):
    def setUp(self):
        self.elliptic = normal_form(NormalForm.ELLIPTIC_UMBILIC)

    def test_quadratic_perturbation(self):
        f = perturb(self.elliptic, QuadraticPerturbation(0.2, 1.0, 0.0, 1.0))
        difference = f.poly - self.elliptic.poly
        self.assertAlmostEqual(0.1, difference.coefficient(2, 0))
        self.assertAlmostEqual(0.1, difference.coefficient(0, 2))
        self.assertEqual(0.0, difference.coefficient(1, 1))
        self.assertIn("eps=0.2", f.label)

    def test_pyramid_member(self):
        f = perturb(self.elliptic, Poly2.monomial(2, 0))
        self.assertEqual(pyramid_family().at(t=1.0).poly, f.poly)

    def test_zero_perturbation_is_identity(self):
        self.assertIs(self.elliptic, perturb(self.elliptic, Poly2.zero()))

    def test_commutes_with_addition(self):
        p = Poly2.parse("y1*y2")
        q = Poly2.parse("2*y2^2 - y1")
        self.assertEqual(perturb(perturb(self.elliptic, p), q).poly, perturb(perturb(self.elliptic, q), p).poly)
        self.assertEqual(perturb(self.elliptic, p + q).poly, perturb(perturb(self.elliptic, p), q).poly)

    def test_invalid_perturbations(self):
        self.assertRaises(MissingArgumentException, perturb, self.elliptic, None)
        self.assertRaises(InvalidArgumentException, perturb, self.elliptic, 3.0)
        self.assertRaises(InvalidArgumentException, QuadraticPerturbation, 0.0, 1.0, 0.0, 0.0)

    def test_critical_circle(self):
        (center, radius) = QuadraticPerturbation(2.0, 1.0, 0.0, 0.0).critical_circle()
        self.assertEqual((-0.5, 0.0), center)
        self.assertEqual(0.5, radius)

        p = QuadraticPerturbation(0.4, 1.0, 2.0, -3.0)
        f = perturb(self.elliptic, p)
        (c1, c2), radius = p.critical_circle()
        angles = np.linspace(0.0, 2.0 * np.pi, 16)
        y = np.array([c1 + radius * np.cos(angles), c2 + radius * np.sin(angles)])
        np.testing.assert_allclose(np.zeros(16), f.hessian_det(y), atol=1e-12)


class TestFamilies(unittest.TestCase):
    def test_versal_family_parameters(self):
        family = versal_family(NormalForm.ELLIPTIC_UMBILIC)
        self.assertEqual(["a0", "a1", "a2", "a3"], family.parameters)
        f = family.at(a1=0.5, a3=2.0)
        self.assertEqual(Poly2.parse("1/3*y1^3 - y1*y2^2 + 0.5*y1 + 2*y1^2"), f.poly)

        hyperbolic = versal_family(NormalForm.HYPERBOLIC_UMBILIC).at(a3=1.0)
        self.assertEqual(1.0, hyperbolic.poly.coefficient(1, 1))

    def test_unknown_parameter_rejected(self):
        self.assertRaises(InvalidArgumentException, pyramid_family().at, s=1.0)
        self.assertRaises(InvalidArgumentException, versal_family, NormalForm.FOLD)

    def test_zero_assignment_keeps_base(self):
        self.assertEqual(normal_form(NormalForm.ELLIPTIC_UMBILIC), pyramid_family().at(t=0.0))


if __name__ == '__main__':
    unittest.main()
