""" file:    test_rotation.py (tests)
    author:  schwarz_lbw developers
    date:    Tuesday, 13 October 2026

    description: Tests for rotation code
"""

import unittest

import numpy as np
from scipy.linalg import norm

from schwarz_lbw.rotation import skew, rotation_modes

from .oracles import rigid_body_modes, rotation_matrix


class TestRotation(unittest.TestCase):

    "Unit tests for rotation code"

    def setUp(self):
        rng = np.random.RandomState(11)
        self.points = rng.uniform(-1, 1, (20, 3))

    def test_skew(self):
        "Check skew(a) @ r is the cross product"
        for axis in ((1, 0, 0), (0.3, -2, 5), (0, 0, 1)):
            with self.subTest(axis=axis):
                for point in self.points[:5]:
                    self.assertTrue(np.allclose(skew(axis) @ point, np.cross(axis, point)))
                self.assertTrue(np.allclose(skew(axis), -skew(axis).T))

    def test_rotation(self):
        "Check rotation works ok"
        axis = np.array([1.0, 2.0, -0.5])
        M = rotation_matrix(axis, np.radians(34.))
        self.assertTrue(np.allclose(np.identity(3), M @ M.T))
        self.assertTrue(np.allclose(1, np.linalg.det(M)))

        # The axis is fixed and lengths are kept
        self.assertTrue(np.allclose(M @ axis, axis))
        rotated = self.points @ M.T
        self.assertTrue(np.allclose(norm(rotated, axis=1), norm(self.points, axis=1)))

    def test_right_hand(self):
        "A quarter turn about z takes x to y"
        M = rotation_matrix((0, 0, 1), np.pi / 2)
        self.assertTrue(np.allclose(M @ [1, 0, 0], [0, 1, 0]))

    def test_rotation_modes(self):
        "The modes are (y, -x, 0), (-z, 0, x) and (0, z, -y)"
        modes = rotation_modes(self.points)
        x, y, z = self.points.T
        zero = np.zeros_like(x)
        for mode, expected in zip(modes, ((y, -x, zero), (-z, zero, x), (zero, z, -y))):
            self.assertTrue(np.allclose(mode, np.column_stack(expected)))

        # Infinitesimal rotations are orthogonal to the position
        for mode in modes:
            self.assertTrue(np.allclose(np.sum(mode * self.points, axis=1), 0))

    def test_centre(self):
        "Rotations about a centre vanish at the centre"
        centre = np.array([0.5, -0.25, 2.0])
        modes = rotation_modes(np.vstack([self.points, centre]), centre)
        self.assertTrue(np.allclose(modes[:, -1], 0))

    def test_rigid_body_modes(self):
        "Three translations followed by three rotations"
        modes = rigid_body_modes(self.points)
        self.assertEqual(modes.shape, (6, 20, 3))
        self.assertTrue(np.allclose(modes[1], [0, 1, 0]))

        # A finite rotation is approximated by the infinitesimal one
        angle = 1e-6
        M = rotation_matrix((0, 0, -1), angle)
        moved = (self.points @ M.T - self.points) / angle
        self.assertTrue(np.allclose(moved, modes[3], atol=1e-5))


if __name__ == '__main__':
    unittest.main()
