""" file:    rotation.py (schwarz_lbw)
    author:  schwarz_lbw developers
    date:    Tuesday, 13 October 2026

    description: Rigid body motions of point sets (translations and rotations)
"""

import numpy as np

# Rotation axes of the three rotational null-space modes. With relative
# coordinates r = (x, y, z) the modes omega x r are
#   (y, -x, 0), (-z, 0, x), (0, z, -y)
ROTATION_AXES = -np.identity(3)[::-1]
ROTATION_MODES = ('r_1', 'r_2', 'r_3')
TRANSLATION_MODES = ('t_x', 't_y', 't_z')


def skew(axis):
    """
    Cross product matrix of a vector, so that skew(a) @ r == a x r

    Parameters:
        axis - a 3-vector
    """
    return np.cross(np.identity(3), np.asarray(axis, dtype=float))


def rotation_modes(points, centre=None):
    """
    Infinitesimal rotations of a point set about a centre

    Parameters:
        points - an (N, 3) array of coordinates
        centre - the centre of rotation. Optional, defaults to the origin.

    Returns:
        an (3, N, 3) array; entry k holds the displacement of every point
        under rotation mode k
    """
    points = np.asarray(points, dtype=float)
    if centre is not None:
        points = points - np.asarray(centre, dtype=float)
    return np.stack([points @ skew(axis).T for axis in ROTATION_AXES])
