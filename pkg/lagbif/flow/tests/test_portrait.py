# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

import csv
import io
import unittest

import numpy as np

from lagbif.caustic import Window
from lagbif.exceptions import InvalidArgumentException
from lagbif.field import NormalForm, normal_form, pyramid_family
from lagbif.flow import (Branch, Limit, FlowSettings, EMPTY_SIGNATURE, solve_critical_points, separatrices,
                         portrait, trajectories_csv, phase_components, integrate_branch, first_crossing)


class TestLimit(unittest.TestCase):
    def test_text(self):
        self.assertEqual("node(3)", str(Limit.node(3)))
        self.assertEqual(Limit.saddle(1), Limit.parse("saddle(1)"))
        self.assertEqual(Limit(Limit.WINDOW_EXIT), Limit.parse("window-exit"))
        self.assertRaises(InvalidArgumentException, Limit.parse, "sink")
        self.assertRaises(InvalidArgumentException, Limit, Limit.NODE)


class TestSeparatrices(unittest.TestCase):
    def setUp(self):
        self.f = normal_form(NormalForm.HYPERBOLIC_UMBILIC)
        self.x = (1.0, 1.0)
        self.window = Window((0.0, 0.0), 3.0, 64)
        self.points = solve_critical_points(self.f, self.x, self.window)
        self.ids = dict((tuple(np.round(cp.position, 6)), cp.id) for cp in self.points)
        self.saddle = self.points[self.ids[(1.0, -1.0)]]

    def test_unstable_branch_to_stable_node(self):
        # unstable- leaves (1, -1) toward decreasing y1
        s = integrate_branch(self.f, self.x, self.saddle, Branch.UNSTABLE_MINUS, self.points, self.window)
        self.assertEqual(Limit.node(self.ids[(-1.0, -1.0)]), s.limit)
        np.testing.assert_allclose(-1.0, s.trajectory[:, 1], atol=1e-6)
        self.assertTrue(s.monotone)
        self.assertTrue(np.all(np.diff(s.trajectory[1:, 0]) <= 1e-12))

    def test_flow_climbs_the_potential(self):
        potential = self.f.potential(self.x)
        unstable = integrate_branch(self.f, self.x, self.saddle, Branch.UNSTABLE_MINUS, self.points, self.window)
        stable = integrate_branch(self.f, self.x, self.saddle, Branch.STABLE_PLUS, self.points, self.window)

        rising = np.array([potential(y) for y in unstable.trajectory[1:]])
        falling = np.array([potential(y) for y in stable.trajectory[1:]])
        self.assertTrue(np.all(np.diff(rising) >= -1e-10))
        self.assertTrue(np.all(np.diff(falling) <= 1e-10))
        self.assertGreater(rising[-1], potential(self.saddle.position))
        # unstable lines end at a maximum of f_x, which has Morse index 2
        self.assertEqual(2, self.points[unstable.limit.point_id].morse_index)

    def test_unstable_branch_leaves_window(self):
        s = integrate_branch(self.f, self.x, self.saddle, Branch.UNSTABLE_PLUS, self.points, self.window)
        self.assertEqual(Limit(Limit.WINDOW_EXIT), s.limit)

    def test_trajectory_starts_near_saddle(self):
        s = integrate_branch(self.f, self.x, self.saddle, Branch.STABLE_PLUS, self.points, self.window)
        np.testing.assert_array_equal(self.saddle.position, s.trajectory[0])
        self.assertLess(np.linalg.norm(s.trajectory[1] - self.saddle.position), 1e-4)

    def test_four_branches_per_saddle(self):
        lines = separatrices(self.f, self.x, self.points, self.window)
        self.assertEqual(8, len(lines))
        self.assertEqual(set(Branch.ALL), set(s.branch for s in lines if s.saddle_id == self.saddle.id))

    def test_no_saddles(self):
        points = solve_critical_points(self.f, (1.0, -1.0), self.window)
        self.assertEqual([], points)
        self.assertEqual([], separatrices(self.f, (1.0, -1.0), points, self.window))

    def test_degenerate_points_rejected(self):
        f = pyramid_family().at(t=1.0)
        points = solve_critical_points(f, (0.0, 0.0), self.window)
        self.assertRaises(InvalidArgumentException, separatrices, f, (0.0, 0.0), points, self.window)

    def test_first_crossing(self):
        # the stable+ branch of (1, -1) climbs the line y1 = 1 and crosses y2 = 0
        section = ((0.0, 0.0), (0.0, 1.0))
        crossing = first_crossing(self.f, self.x, self.saddle, Branch.STABLE_PLUS, self.points, self.window,
                                  section)
        np.testing.assert_allclose([1.0, 0.0], crossing, atol=1e-8)

        missed = first_crossing(self.f, self.x, self.saddle, Branch.UNSTABLE_PLUS, self.points, self.window,
                                section)
        self.assertIsNone(missed)


class TestPortrait(unittest.TestCase):
    def setUp(self):
        self.window = Window((0.0, 0.0), 3.0, 64)

    def test_hyperbolic_umbilic(self):
        f = normal_form(NormalForm.HYPERBOLIC_UMBILIC)
        result = portrait(f, (1.0, 1.0), self.window)

        self.assertFalse(result.on_caustic)
        self.assertEqual((1, 2, 1, 0), result.census)
        self.assertEqual([], result.connections)

        ids = dict((tuple(np.round(cp.position, 6)), cp.id) for cp in result.critical_points)
        node = ids[(1.0, 1.0)]
        saddles = sorted([ids[(1.0, -1.0)], ids[(-1.0, 1.0)]])
        self.assertEqual([(node, saddles[0]), (node, saddles[1])], result.node_saddle_lines)
        self.assertEqual([(saddles[0], ids[(-1.0, -1.0)]), (saddles[1], ids[(-1.0, -1.0)])],
                         result.saddle_node_lines)
        self.assertEqual(8, len(result.signature.split(";")))

    def test_elliptic_slice(self):
        f = pyramid_family().at(t=1.0)
        result = portrait(f, (-0.25, 0.0), self.window)

        self.assertEqual((1, 3, 0, 0), result.census)
        self.assertEqual(12, len(result.signature.split(";")))
        self.assertTrue(all(s.monotone for s in result.separatrices))

    def test_signature_is_stable_under_refinement(self):
        f = pyramid_family().at(t=1.0)
        settings = FlowSettings()
        for x in ((-0.25, 0.0), (1.0, 0.3)):
            coarse = portrait(f, x, self.window, settings)
            fine = portrait(f, x, self.window, settings.refined())
            self.assertEqual(coarse.signature, fine.signature)

    def test_empty_portrait(self):
        f = normal_form(NormalForm.HYPERBOLIC_UMBILIC)
        result = portrait(f, (1.0, -1.0), self.window)
        self.assertEqual([], result.critical_points)
        self.assertEqual(EMPTY_SIGNATURE, result.signature)

    def test_on_caustic(self):
        f = pyramid_family().at(t=1.0)
        result = portrait(f, (0.0, 0.0), self.window)
        self.assertTrue(result.on_caustic)
        self.assertEqual([], result.connections)
        self.assertEqual(1, result.census[3])

    def test_document(self):
        f = normal_form(NormalForm.HYPERBOLIC_UMBILIC)
        document = portrait(f, (1.0, 1.0), self.window).to_document()
        self.assertEqual([1, 2, 1, 0], document["census"])
        self.assertEqual(8, len(document["separatrices"]))
        self.assertIn("node_saddle", document["node_lines"])

    def test_trajectories_csv(self):
        f = normal_form(NormalForm.HYPERBOLIC_UMBILIC)
        result = portrait(f, (1.0, 1.0), self.window)
        rows = list(csv.reader(io.StringIO(trajectories_csv(result))))
        self.assertEqual(["saddle_id", "branch", "limit", "step", "y1", "y2"], rows[0])
        self.assertEqual(sum(len(s.trajectory) for s in result.separatrices), len(rows) - 1)
        self.assertEqual("0", rows[1][3])


class TestPhaseComponents(unittest.TestCase):
    def test_hyperbolic_saddles_share_a_component(self):
        f = normal_form(NormalForm.HYPERBOLIC_UMBILIC)
        result = portrait(f, (1.0, 1.0), Window((0.0, 0.0), 3.0, 64))
        first, second = [s.id for s in result.saddles]
        self.assertTrue(phase_components(result, first, second, resolution=128))
        self.assertTrue(phase_components(result, second, first, resolution=128))

    def test_invalid_pairs(self):
        f = normal_form(NormalForm.HYPERBOLIC_UMBILIC)
        result = portrait(f, (1.0, 1.0), Window((0.0, 0.0), 3.0, 64))
        saddle = result.saddles[0].id
        self.assertRaises(InvalidArgumentException, phase_components, result, saddle, saddle)
        self.assertRaises(InvalidArgumentException, phase_components, result, saddle, 99)


if __name__ == '__main__':
    unittest.main()
