# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

import unittest

import numpy as np

from lagbif.caustic import (Window, CriticalLocus, CausticCurve, CausticLabel, critical_locus, push_forward,
                            classify_caustic, compute_caustic, pyramid_slices)
from lagbif.exceptions import InvalidArgumentException
from lagbif.field import (Poly2, GeneratingFunction, NormalForm, QuadraticPerturbation, normal_form, perturb,
                          pyramid_family)


def _sorted_points(points):
    return sorted((round(p[0], 4), round(p[1], 4)) for p in points)


class TestWindow(unittest.TestCase):
    def test_axes_and_step(self):
        w = Window((0.0, 1.0), (2.0, 1.0), 17)
        self.assertEqual((17, 17), w.resolution)
        np.testing.assert_allclose([0.25, 0.125], w.step)
        axes = w.axes()
        self.assertEqual(-2.0, axes[0][0])
        self.assertEqual(2.0, axes[1][-1])

    def test_contains(self):
        w = Window((0.0, 0.0), 1.0, 16)
        self.assertTrue(w.contains((1.0, -1.0)))
        self.assertFalse(w.contains((1.0, -1.0), margin=0.1))
        self.assertFalse(w.contains((0.0, 1.5)))

    def test_invalid_windows_rejected(self):
        self.assertRaises(InvalidArgumentException, Window, (0.0, 0.0), 0.0, 64)
        self.assertRaises(InvalidArgumentException, Window, (0.0, 0.0), (1.0, -1.0), 64)
        self.assertRaises(InvalidArgumentException, Window, (0.0, 0.0), 1.0, 15)
        self.assertRaises(InvalidArgumentException, Window, (0.0,), 1.0, 64)

    def test_boundary_loop_is_counter_clockwise(self):
        loop = Window((0.0, 0.0), 1.0, 16).boundary_loop(8)
        x, y = loop[:, 0], loop[:, 1]
        area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        self.assertAlmostEqual(4.0, area)

    def test_dict_round_trip(self):
        w = Window((0.5, -0.5), (1.0, 2.0), (32, 48))
        self.assertEqual(w.to_dict(), Window.from_dict(w.to_dict()).to_dict())


class TestCriticalLocus(unittest.TestCase):
    def test_hyperbolic_umbilic_axes(self):
        f = normal_form(NormalForm.HYPERBOLIC_UMBILIC)
        locus = critical_locus(f, Window((0.0, 0.0), 2.0, 64))

        self.assertEqual(2, len(locus.components))
        on_axis = 0
        for component in locus.components:
            if np.all(np.abs(component[:, 1]) <= 1e-6):
                on_axis += 1
                self.assertGreater(np.ptp(component[:, 0]), 3.9)
            elif np.all(np.abs(component[:, 0]) <= 1e-6):
                on_axis += 1
                self.assertGreater(np.ptp(component[:, 1]), 3.9)
        self.assertEqual(2, on_axis)

        self.assertEqual(1, len(locus.singular_points))
        np.testing.assert_allclose([0.0, 0.0], locus.singular_points[0], atol=1e-9)

    def test_unperturbed_elliptic_umbilic_isolated_point(self):
        f = normal_form(NormalForm.ELLIPTIC_UMBILIC)
        # at odd resolution the zero sits exactly on a grid node
        for resolution in (64, 65):
            locus = critical_locus(f, Window((0.0, 0.0), 1.0, resolution))

            self.assertEqual([], locus.components, resolution)
            self.assertEqual(1, len(locus.degenerate_points), resolution)
            np.testing.assert_allclose([0.0, 0.0], locus.degenerate_points[0], atol=1e-6)

    def test_axes_through_grid_nodes(self):
        f = normal_form(NormalForm.HYPERBOLIC_UMBILIC)
        locus = critical_locus(f, Window((0.0, 0.0), 2.0, 65))

        self.assertEqual([], locus.degenerate_points)
        vertices = locus.vertices()
        self.assertGreater(len(vertices), 100)
        self.assertLessEqual(np.max(np.min(np.abs(vertices), axis=1)), 1e-6)

    def test_perturbed_elliptic_umbilic_circle(self):
        f = pyramid_family().at(t=1.0)
        locus = critical_locus(f, Window((-0.5, 0.0), 1.0, 64))

        self.assertEqual(1, len(locus.components))
        self.assertEqual([True], locus.closed)
        self.assertEqual([], locus.degenerate_points)

        radial = np.linalg.norm(locus.components[0] - [-0.5, 0.0], axis=1)
        self.assertLessEqual(np.max(np.abs(radial - 0.5)), 1e-6)

    def test_random_critical_circles(self):
        rng = np.random.default_rng(20)
        base = normal_form(NormalForm.ELLIPTIC_UMBILIC)
        cases = 0

        while cases < 20:
            eps = rng.uniform(0.01, 0.5)
            a, b, c = rng.uniform(-2.0, 2.0, 3)
            if abs(a + c) <= 0.1:
                continue
            cases += 1

            p = QuadraticPerturbation(eps, a, b, c)
            center, radius = p.critical_circle()
            locus = critical_locus(perturb(base, p), Window(center, 1.5 * radius, 64))
            self.assertEqual(1, len(locus.components), p)
            self.assertEqual([True], locus.closed, p)

            # algebraic least-squares circle: y1^2 + y2^2 = 2 c1 y1 + 2 c2 y2 + k
            shift = np.mean(locus.components[0], axis=0)
            y = locus.components[0] - shift
            design = np.column_stack([2.0 * y[:, 0], 2.0 * y[:, 1], np.ones(len(y))])
            (c1, c2, k), _, _, _ = np.linalg.lstsq(design, np.sum(y ** 2, axis=1), rcond=None)
            np.testing.assert_allclose(center, shift + (c1, c2), atol=1e-6)
            self.assertAlmostEqual(radius, np.sqrt(k + c1 ** 2 + c2 ** 2), delta=1e-6)

    def test_vertices_are_refined(self):
        f = perturb(normal_form(NormalForm.ELLIPTIC_UMBILIC), QuadraticPerturbation(0.4, 1.0, 2.0, -3.0))
        locus = critical_locus(f, Window((-0.4, 0.2), 0.5, 48), tol_locus=1e-9)
        vertices = locus.vertices()
        self.assertGreater(len(vertices), 20)
        self.assertLessEqual(np.max(np.abs(f.hessian_det(vertices.T))), 1e-9)

    def test_constant_determinant_has_empty_locus(self):
        identity = GeneratingFunction(Poly2.parse("1/2*y1^2 + 1/2*y2^2"))
        locus = critical_locus(identity, Window((0.0, 0.0), 1.0, 16))
        self.assertTrue(locus.is_empty)


class TestPushForward(unittest.TestCase):
    def test_vertices_map_through_gradient(self):
        hyperbolic = normal_form(NormalForm.HYPERBOLIC_UMBILIC)
        caustic = push_forward(hyperbolic, CriticalLocus(components=[[(2.0, 0.0), (0.0, 0.0)]]))
        np.testing.assert_allclose([[4.0, 0.0], [0.0, 0.0]], caustic.components[0])
        self.assertEqual([[None, None]], caustic.labels)

        slice_one = pyramid_family().at(t=1.0)
        caustic = push_forward(slice_one, CriticalLocus(components=[[(-1.0, 0.0), (0.0, 0.0)]]))
        np.testing.assert_allclose([[-1.0, 0.0], [0.0, 0.0]], caustic.components[0])

    def test_degenerate_points_are_pushed(self):
        f = normal_form(NormalForm.ELLIPTIC_UMBILIC)
        caustic = push_forward(f, CriticalLocus(degenerate_points=[(0.0, 0.0)]))
        self.assertEqual([(0.0, 0.0)], caustic.nonmorse_points)


class TestClassifyCaustic(unittest.TestCase):
    def test_tricuspoid(self):
        f = pyramid_family().at(t=1.0)
        caustic = compute_caustic(f, Window((-0.5, 0.0), 1.0, 64))

        self.assertEqual(3, caustic.cusp_count)
        expected = [(-1.125, -0.649519), (-1.125, 0.649519), (0.0, 0.0)]
        for found, wanted in zip(sorted(caustic.cusp_points), expected):
            np.testing.assert_allclose(wanted, found, atol=1e-5)

        labels = caustic.labels[0]
        self.assertEqual(3, labels.count(CausticLabel.CUSP))
        self.assertEqual(len(labels) - 3, labels.count(CausticLabel.FOLD))

    def test_caustic_vertices_have_preimages(self):
        f = pyramid_family().at(t=1.0)
        caustic = compute_caustic(f, Window((-0.5, 0.0), 1.0, 64), tol_locus=1e-9)
        for component, preimage in zip(caustic.components, caustic.preimages):
            np.testing.assert_allclose(component, np.asarray(f.gradient(preimage.T)).T, atol=1e-8)
            self.assertLessEqual(np.max(np.abs(f.hessian_det(preimage.T))), 1e-9)

    def test_perturbed_hyperbolic_umbilic_single_cusp(self):
        f = perturb(normal_form(NormalForm.HYPERBOLIC_UMBILIC), QuadraticPerturbation(0.1, 1.0, 1.0, 2.0))
        caustic = compute_caustic(f, Window((0.0, 0.0), 1.0, 128))

        self.assertEqual(2, len(caustic.components))
        self.assertEqual(1, caustic.cusp_count)
        np.testing.assert_allclose(f.gradient((-0.025, -0.075)), caustic.cusp_points[0], atol=1e-6)

    def test_unperturbed_hyperbolic_umbilic(self):
        f = normal_form(NormalForm.HYPERBOLIC_UMBILIC)
        caustic = compute_caustic(f, Window((0.0, 0.0), 2.0, 64))

        self.assertEqual(0, caustic.cusp_count)
        self.assertEqual(1, len(caustic.nonmorse_points))
        np.testing.assert_allclose([0.0, 0.0], caustic.nonmorse_points[0], atol=1e-9)
        for component, labels in zip(caustic.components, caustic.labels):
            self.assertNotIn(CausticLabel.CUSP, labels)
            # the two fold rays lie on the positive axes
            self.assertTrue(np.all(component >= -1e-9))

    def test_unperturbed_elliptic_umbilic_is_a_point(self):
        f = normal_form(NormalForm.ELLIPTIC_UMBILIC)
        for resolution in (64, 65):
            caustic = classify_caustic(f, critical_locus(f, Window((0.0, 0.0), 1.0, resolution)))
            self.assertEqual([], caustic.components, resolution)
            self.assertEqual(0, caustic.cusp_count, resolution)
            self.assertEqual(1, len(caustic.nonmorse_points), resolution)

        caustic = compute_caustic(f, Window((0.0, 0.0), 1.0, 65))
        np.testing.assert_allclose([0.0, 0.0], caustic.nonmorse_points[0], atol=1e-9)

    def test_cusp_normal_forms(self):
        for kind in (NormalForm.CUSP_PLUS, NormalForm.CUSP_MINUS):
            caustic = compute_caustic(normal_form(kind), Window((0.0, 0.0), 1.0, 64))
            self.assertEqual(1, caustic.cusp_count, kind)
            np.testing.assert_allclose([0.0, 0.0], caustic.cusp_points[0], atol=1e-6)

    def test_fold_has_no_cusps(self):
        caustic = compute_caustic(normal_form(NormalForm.FOLD), Window((0.0, 0.0), 1.0, 32))
        self.assertEqual(1, len(caustic.components))
        self.assertEqual(0, caustic.cusp_count)
        np.testing.assert_allclose(0.0, caustic.components[0][:, 0], atol=1e-9)

    def test_document_round_trip(self):
        caustic = compute_caustic(pyramid_family().at(t=1.0), Window((-0.5, 0.0), 1.0, 32))
        loaded = CausticCurve.from_document(caustic.to_document())
        self.assertEqual(caustic.cusp_count, loaded.cusp_count)
        self.assertEqual(caustic.labels, loaded.labels)
        self.assertEqual(caustic.closed, loaded.closed)

    def test_distance_and_crossing(self):
        caustic = compute_caustic(pyramid_family().at(t=1.0), Window((-0.5, 0.0), 1.0, 64))
        self.assertLess(caustic.distance_to((0.0, 0.0)), 1e-6)
        self.assertGreater(caustic.distance_to((-0.75, 0.0)), 0.2)
        self.assertTrue(caustic.crosses((-0.75, 0.0), (2.0, 0.5)))
        self.assertFalse(caustic.crosses((-0.75, 0.0), (-0.7, 0.05)))


class TestPyramidSlices(unittest.TestCase):
    def test_three_cusps_for_nonzero_slices(self):
        t_values = [-1.0, -0.5, -0.25, 0.25, 0.5, 1.0]
        for t, caustic in zip(t_values, pyramid_slices(t_values)):
            self.assertEqual(3, caustic.cusp_count, "t = {0}".format(t))

    def test_zero_slice_is_a_point(self):
        caustic = pyramid_slices([0.0])[0]
        self.assertEqual([], caustic.components)
        self.assertEqual(1, len(caustic.nonmorse_points))
        np.testing.assert_allclose([0.0, 0.0], caustic.nonmorse_points[0], atol=1e-6)

    def test_opposite_slices_are_mirror_images(self):
        positive, negative = pyramid_slices([1.0, -1.0])
        mirrored = [(p[0], -p[1]) for p in negative.cusp_points]
        self.assertEqual(_sorted_points(positive.cusp_points), _sorted_points(mirrored))

    def test_cusp_distances_scale_quadratically(self):
        t_values = [0.25, 0.5, 1.0]
        for t, caustic in zip(t_values, pyramid_slices(t_values)):
            cusps = np.array(caustic.cusp_points)
            distances = np.linalg.norm(cusps - cusps.mean(axis=0), axis=1)
            np.testing.assert_allclose(0.75 * t ** 2, distances, rtol=0.05)

    def test_missing_values_rejected(self):
        self.assertRaises(InvalidArgumentException, pyramid_slices, None)


if __name__ == '__main__':
    unittest.main()
