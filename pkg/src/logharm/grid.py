"""Polar sampling grids inside the unit disk."""

import numpy as np

DEFAULT_RADII = tuple(round(0.1 * k, 10) for k in range(1, 10))
DEFAULT_ANGLES = 64


def angles(count):
    return 2.0 * np.pi * np.arange(count) / count


def circle(r, count):
    return r * np.exp(1j * angles(count))


def disk_grid(radii=DEFAULT_RADII, count=DEFAULT_ANGLES):
    """Points ``r * exp(i theta)`` as an array of shape ``(len(radii), count)``."""
    return np.outer(np.asarray(radii, dtype=float), np.exp(1j * angles(count)))
