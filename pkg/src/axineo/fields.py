"""
Closed-form meridian maps used as starts, boundary data and diagnostic probes.

Every function takes nodal coordinates ``(r, z)`` and returns ``(v1, v2)``;
build nodal fields with ``DeformationField.from_function(grid, f)``.

Axis pinch family
-----------------
``pinch(eps, a0)`` is the map::

    v1 = r * sqrt(1 + a(z)^2 / (r^2 + eps^2)),     v2 = z,
    a(z) = a0 * sin(pi (z - z0) / (z1 - z0))^2

For every ``eps > 0`` it is a smooth homeomorphism (``v1(0, z) = 0`` and
``dr v1 > 0``) with ``det Du = 1 + a^2 eps^2 / (r^2 + eps^2)^2 >= 1``. As
``eps -> 0`` the material within ``O(eps)`` of the axis is stretched to fill a
spindle of radius ``a(z)``: the hoop stretch ``v1/r`` reaches ``a/eps`` on the
axis, the volume excess ``int (det Du - 1) r dr -> a^2/2`` concentrates in an
``eps``-tube, and the pointwise limit ``sqrt(r^2 + a^2)`` opens a cavity along
the axis. This is the near-axis concentration the diagnostics look for; it is
dipole-like only in that energy and cofactors concentrate on the axis.
"""

from __future__ import annotations

import numpy as np


def identity():
    def f(r, z):
        return r, z
    return f


def affine(lam: float, b_z: float = 0.0):
    def f(r, z):
        return lam * r, lam * z + b_z
    return f


def sine_bubble(r, z, r0, r1, z0, z1):
    """``sin(pi s) sin(pi t)`` on the rectangle, zero on its boundary."""
    return np.sin(np.pi * (r - r0) / (r1 - r0)) * np.sin(np.pi * (z - z0) / (z1 - z0))


def perturbed_affine(lam: float, b_z: float, bounds, amplitude: float = 0.1):
    """Affine map plus a smooth interior bubble of relative size ``amplitude``.

    The bubble vanishes on the rectangle boundary; the ``v2`` perturbation uses
    a second mode so the start is not a pure dilation.
    """
    r0, r1, z0, z1 = bounds

    def f(r, z):
        s = (r - r0) / (r1 - r0)
        t = (z - z0) / (z1 - z0)
        p1 = np.sin(np.pi * s) * np.sin(np.pi * t)
        p2 = np.sin(np.pi * s) * np.sin(2 * np.pi * t) * np.cos(0.5 * np.pi * s)
        return lam * r + amplitude * lam * p1 * (r1 - r0), lam * z + b_z + amplitude * lam * p2 * (z1 - z0)
    return f


def taper(stretch: float = 0.2, shear: float = 0.1):
    """Smooth non-affine diffeomorphism ``(r (1 + stretch z), z + shear r)``."""
    def f(r, z):
        return r * (1.0 + stretch * z), z + shear * r
    return f


def pinch(eps: float, a0: float = 0.5, z_range=(0.0, 1.0)):
    z0, z1 = z_range

    def f(r, z):
        a = a0 * np.sin(np.pi * (z - z0) / (z1 - z0)) ** 2
        return r * np.sqrt(1.0 + a * a / (r * r + eps * eps)), z
    return f


def radial_square(r_min: float):
    """``((r - r_min)^2 + r_min, z)``: monotone in ``r``, degenerate only at ``r_min``."""
    def f(r, z):
        return (r - r_min) ** 2 + r_min, z
    return f


def fold(r_min: float, r_max: float):
    """``(r_min + |r - mid|, z)``: folds the rectangle onto half of itself."""
    mid = 0.5 * (r_min + r_max)

    def f(r, z):
        return r_min + np.abs(r - mid), z
    return f
