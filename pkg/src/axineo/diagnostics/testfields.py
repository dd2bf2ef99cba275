"""
Closed-form test functions for weak-form pairings.

A :class:`Bump` is the tensor product ``A b((r - rc)/wr) b((z - zc)/wz)``
with ``b(s) = (1 - s^2)^4`` on ``|s| < 1``. It is C^3, vanishes with its
derivatives on the edge of its support, and is a polynomial on each cell whose
edges are grid lines. The dictionaries below place supports on grid lines so
the per-cell Gauss rules integrate polynomial integrands exactly.

A bump centred on ``r = 0`` is even in ``r`` and therefore a smooth
axisymmetric function in three dimensions; such bumps are admissible for
scalar pairings that may touch the axis, but not as components of a
variation field (``phi1`` must vanish near the axis).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..grid import AXIS, MeridianGrid

# max |b'| is attained at s^2 = 1/7
_DB_MAX = 8.0 / np.sqrt(7.0) * (6.0 / 7.0) ** 3


def _b(s):
    inside = np.abs(s) < 1
    return np.where(inside, (1.0 - s * s) ** 4, 0.0)


def _db(s):
    inside = np.abs(s) < 1
    return np.where(inside, -8.0 * s * (1.0 - s * s) ** 3, 0.0)


@dataclass(frozen=True)
class Bump:
    rc: float
    zc: float
    wr: float
    wz: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not (self.wr > 0 and self.wz > 0):
            raise ValueError("bump widths must be positive")

    def value(self, r, z):
        return self.amplitude * _b((r - self.rc) / self.wr) * _b((z - self.zc) / self.wz)

    def d_r(self, r, z):
        return self.amplitude * _db((r - self.rc) / self.wr) / self.wr * _b((z - self.zc) / self.wz)

    def d_z(self, r, z):
        return self.amplitude * _b((r - self.rc) / self.wr) * _db((z - self.zc) / self.wz) / self.wz

    def sup(self) -> float:
        return abs(self.amplitude)

    def sup_grad(self) -> tuple[float, float]:
        return abs(self.amplitude) * _DB_MAX / self.wr, abs(self.amplitude) * _DB_MAX / self.wz

    def c1_norm(self) -> float:
        return self.sup() + max(self.sup_grad())

    def support(self) -> tuple[float, float, float, float]:
        return self.rc - self.wr, self.rc + self.wr, self.zc - self.wz, self.zc + self.wz


@dataclass(frozen=True)
class TestField:
    """Variation field ``phi = (phi1, phi2)``; a ``None`` component is zero."""

    phi1: Bump | None = None
    phi2: Bump | None = None

    __test__ = False  # not a pytest class

    def _parts(self):
        return [p for p in (self.phi1, self.phi2) if p is not None]

    def value(self, r, z):
        zero = np.zeros(np.broadcast(r, z).shape)
        p1 = self.phi1.value(r, z) if self.phi1 else zero
        p2 = self.phi2.value(r, z) if self.phi2 else zero
        return p1, p2

    def jacobian(self, r, z):
        """``D phi`` as an array ``(..., 2, 2)`` with ``[i, j] = d phi_i / d x_j``."""
        shape = np.broadcast(r, z).shape
        out = np.zeros(shape + (2, 2))
        for i, p in enumerate((self.phi1, self.phi2)):
            if p is not None:
                out[..., i, 0] = p.d_r(r, z)
                out[..., i, 1] = p.d_z(r, z)
        return out

    def c1_norm(self) -> float:
        """``max_i sup|phi_i| + max_ij sup|d_j phi_i|``, exact for tensor bumps."""
        parts = self._parts()
        if not parts:
            return 0.0
        return max(p.sup() for p in parts) + max(max(p.sup_grad()) for p in parts)

    def support_inside(self, grid: MeridianGrid) -> bool:
        """Support contained in the open rectangle (edges may lie on interior grid lines)."""
        s = grid.spec
        tol = 1e-12 * max(grid.hr, grid.hz)
        for p in self._parts():
            r0, r1, z0, z1 = p.support()
            if not (r0 > s.r_min + tol and r1 < s.r_max - tol and z0 > s.z_min + tol and z1 < s.z_max - tol):
                return False
        return True


def _cells(n_cells: int, rng, lo_frac=0.15, hi_frac=0.4):
    """Random (start, width) in whole cells, support strictly inside ``[0, n_cells]``."""
    lo = max(1, int(round(lo_frac * n_cells)))
    hi = max(lo, int(round(hi_frac * n_cells)))
    half = int(rng.integers(lo, hi + 1))
    half = min(half, max(1, (n_cells - 2) // 2))
    centre = int(rng.integers(1 + half, n_cells - half))
    return centre, half


def _aligned_bump(grid: MeridianGrid, rng, amplitude: float, r_first_cell: int = 1) -> Bump:
    ncr, ncz = grid.nr - 1, grid.nz - 1
    s = grid.spec
    cz, hz_cells = _cells(ncz, rng)
    lo = max(1, int(round(0.15 * ncr)))
    hi = max(lo, int(round(0.4 * ncr)))
    half_r = min(int(rng.integers(lo, hi + 1)), max(1, (ncr - r_first_cell - 1) // 2))
    cr = int(rng.integers(r_first_cell + half_r, ncr - half_r))
    return Bump(s.r_min + cr * grid.hr, s.z_min + cz * grid.hz, half_r * grid.hr, hz_cells * grid.hz, amplitude)


def variation_dictionary(grid: MeridianGrid, n: int = 12, seed: int = 0) -> list[TestField]:
    """``n`` variation fields with grid-aligned supports away from the boundary and axis.

    Entries alternate between radial, axial and mixed fields.
    """
    rng = np.random.default_rng(seed)
    first = 2 if grid.spec.kind == AXIS else 1
    out = []
    for k in range(n):
        amp = float(rng.uniform(0.5, 1.5)) * float(rng.choice([-1.0, 1.0]))
        b1 = _aligned_bump(grid, rng, amp, first)
        if k % 3 == 0:
            out.append(TestField(b1, None))
        elif k % 3 == 1:
            out.append(TestField(None, b1))
        else:
            b2 = _aligned_bump(grid, rng, float(rng.uniform(0.5, 1.5)), first)
            out.append(TestField(b1, b2))
    return out


def scalar_dictionary(grid: MeridianGrid, n: int = 12, seed: int = 0, near_axis: bool | None = None) -> list[Bump]:
    """Scalar bumps for determinant pairings.

    On axis grids (or with ``near_axis=True``) half of the entries are centred
    on ``r = 0``; those probe the axis, where concentration can occur.
    """
    rng = np.random.default_rng(seed)
    s = grid.spec
    axis = (s.kind == AXIS) if near_axis is None else near_axis
    out = []
    for k in range(n):
        amp = float(rng.uniform(0.5, 1.0))
        if axis and k % 2 == 0:
            ncr, ncz = grid.nr - 1, grid.nz - 1
            cz, hz_cells = _cells(ncz, rng)
            half_r = int(rng.integers(max(1, round(0.1 * ncr)), max(2, round(0.3 * ncr)) + 1))
            out.append(Bump(0.0, s.z_min + cz * grid.hz, half_r * grid.hr, hz_cells * grid.hz, amp))
        else:
            out.append(_aligned_bump(grid, rng, amp, 2 if s.kind == AXIS else 1))
    return out


@dataclass(frozen=True)
class TargetField:
    """Axisymmetric target-space field centred at ``(rho, y3) = (rc, c)``.

    In meridian components ``F = (rho - rc, y3 - c) chi(s) / R`` with
    ``s = ((rho - rc)^2 + (y3 - c)^2) / R^2`` and ``chi = (1 - s)^3``. With
    ``rc = 0`` this is the radial field about an axis point; with ``R < rc``
    its support is a solid torus away from the axis. ``|F| = sqrt(s) chi < 1``
    and ``sign`` flips the field.
    """

    c: float
    R: float
    sign: float = 1.0
    rc: float = 0.0

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("target radius must be positive")
        if self.rc < 0 or (0 < self.rc < self.R):
            raise ValueError("off-axis target fields need R < rc")

    def _parts(self, y1, y2):
        d1, d2 = y1 - self.rc, y2 - self.c
        s = (d1 * d1 + d2 * d2) / self.R ** 2
        inside = s < 1
        chi = np.where(inside, (1 - np.minimum(s, 1)) ** 3, 0.0)
        dchi = np.where(inside, -3 * (1 - np.minimum(s, 1)) ** 2, 0.0)
        return d1, d2, s, chi, dchi

    def value(self, y1, y2):
        d1, d2, _, chi, _ = self._parts(y1, y2)
        k = self.sign * chi / self.R
        return k * d1, k * d2

    def divergence(self, y1, y2):
        """Three-dimensional divergence ``d_rho F_rho + F_rho / rho + d_3 F_3``."""
        d1, _, s, chi, dchi = self._parts(y1, y2)
        if self.rc == 0:
            hoop = chi  # F_rho / rho = chi / R on the axis-centred field
        else:
            safe = np.where(chi > 0, y1, 1.0)
            hoop = np.where(chi > 0, chi * d1 / safe, 0.0)
        return self.sign * (2 * chi + 2 * s * dchi + hoop) / self.R

    def sup(self) -> float:
        # max of sqrt(s)(1-s)^3 at s = 1/7
        return float(np.sqrt(1 / 7) * (6 / 7) ** 3)


@dataclass(frozen=True)
class SurfaceTestField:
    """``f(x, y) = psi(x) F(y)`` with ``|f| <= 1``."""

    psi: Bump
    F: TargetField

    def sup(self) -> float:
        return self.psi.sup() * self.F.sup()


def surface_dictionary(grid: MeridianGrid, image_box=None, n_psi: int = 4, seed: int = 0) -> list[SurfaceTestField]:
    """Products of scalar bumps and target fields spread over the image.

    ``image_box = (y1_min, y1_max, y2_min, y2_max)`` bounds the image of the
    field and defaults to the domain rectangle. Target fields are centred on
    the axis and, where the box allows, at off-axis points of the box; each
    appears with both signs.
    """
    s = grid.spec
    if image_box is None:
        image_box = (s.r_min, s.r_max, s.z_min, s.z_max)
    a0, a1, b0, b1 = (float(x) for x in image_box)
    height = b1 - b0
    psis = scalar_dictionary(grid, n_psi, seed)
    targets = []
    for frac in (0.25, 0.5, 0.75):
        c = b0 + frac * height
        for R in (0.15, 0.3, 0.6):
            targets.append((0.0, c, R * height))
        for rfrac in (0.25, 0.5, 0.75):
            rc = a0 + rfrac * (a1 - a0)
            R = 0.5 * min(height, a1 - a0, 2 * rc)
            if rc > 0 and R > 0:
                targets.append((rc, c, min(R, 0.99 * rc)))
    out = []
    for psi in psis:
        psi = Bump(psi.rc, psi.zc, psi.wr, psi.wz, 1.0)
        for rc, c, R in targets:
            for sign in (1.0, -1.0):
                out.append(SurfaceTestField(psi, TargetField(c, R, sign, rc)))
    return out
