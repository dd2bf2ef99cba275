"""
Distributional versus pointwise determinant, and the surface-energy lower bound.

Per unit angle, for an axisymmetric scalar test function ``psi``::

    <Det Du, psi> = -1/3 int (D_r dr psi + D_z dz psi) r dr dz
    <det Du, psi> =      int v1 det Dv psi dr dz

where ``D = cof Du^T u``. The two agree for Lipschitz maps, and a continuous
bilinear field is Lipschitz: on each cell ``D_r r`` and ``v1 det Dv`` are
polynomials, so a high-order rule returns no gap at all. The pairings are
therefore evaluated with the grid's own rule by default. The reported gap is
then the consistency defect of that rule, which is ``O(h^2)`` for resolved
smooth fields and grows when the field concentrates below the mesh scale.
``psi`` may be nonzero on the axis (bumps centred on ``r = 0``).

The surface energy ``E_u(f) = int <cof Du, D_x f(x, u)> + det Du div_y f(x, u)``
is evaluated for ``f(x, y) = psi(x) F(y)`` with radial target fields ``F``
centred on the axis, where it reduces to::

    int [F(u) . (cof_rz grad psi) + det Du psi div F(u)] r dr dz
"""

from __future__ import annotations

import numpy as np

from ..errors import ContractError
from ..grid import MeridianGrid
from ..kinematics import DeformationField, sample_kinematics
from ..energy import _require_feasible
from .inner import diagnostic_grid
from .testfields import Bump, SurfaceTestField


def _check_scalar(grid: MeridianGrid, psi: Bump):
    s = grid.spec
    r0, r1, z0, z1 = psi.support()
    tol = 1e-12 * max(grid.hr, grid.hz)
    touches_axis = abs(psi.rc) <= tol and s.r_min == 0.0
    ok_r = (touches_axis or r0 > s.r_min + tol) and r1 < s.r_max - tol
    if not (ok_r and z0 > s.z_min + tol and z1 < s.z_max - tol):
        raise ContractError("scalar test function must vanish near the boundary (it may touch the axis)")


def det_pairings(grid: MeridianGrid, field: DeformationField, psi: Bump,
                 quad_order: int | None = None) -> tuple[float, float]:
    """``(<Det Du, psi>, <det Du, psi>)`` per unit angle."""
    _check_scalar(grid, psi)
    g = diagnostic_grid(grid, quad_order)
    ks = sample_kinematics(g, field)
    _require_feasible(ks)
    dr, dz = psi.d_r(ks.r, ks.z), psi.d_z(ks.r, ks.z)
    big = -(ks.Dvec[:, 0] * dr + ks.Dvec[:, 1] * dz) * ks.r / 3.0
    small = ks.v1 * ks.det_Dv * psi.value(ks.r, ks.z)
    return float(g.area_weights @ big), float(g.area_weights @ small)


def det_gap(grid: MeridianGrid, field: DeformationField, dictionary,
            quad_order: int | None = None):
    """Normalized ``max |<Det Du - det Du, psi>| / ||psi||_C1`` and the per-psi table.

    Table rows are dicts with ``Det``, ``det``, ``gap`` and ``normalized``.
    """
    dictionary = list(dictionary)
    if not dictionary:
        raise ContractError("empty test-function dictionary")
    for psi in dictionary:
        _check_scalar(grid, psi)
    g = diagnostic_grid(grid, quad_order)
    ks = sample_kinematics(g, field)
    _require_feasible(ks)
    rows = []
    for psi in dictionary:
        dr, dz = psi.d_r(ks.r, ks.z), psi.d_z(ks.r, ks.z)
        big = float(g.area_weights @ (-(ks.Dvec[:, 0] * dr + ks.Dvec[:, 1] * dz) * ks.r / 3.0))
        small = float(g.area_weights @ (ks.v1 * ks.det_Dv * psi.value(ks.r, ks.z)))
        rows.append({"Det": big, "det": small, "gap": big - small, "normalized": abs(big - small) / psi.c1_norm()})
    return max(row["normalized"] for row in rows), rows


def surface_energy_value(grid: MeridianGrid, field: DeformationField, f: SurfaceTestField,
                         quad_order: int | None = None) -> float:
    if f.sup() > 1.0 + 1e-12:
        raise ContractError(f"surface test field has sup norm {f.sup():.6g} > 1")
    _check_scalar(grid, f.psi)
    g = diagnostic_grid(grid, quad_order)
    ks = sample_kinematics(g, field)
    _require_feasible(ks)
    return _surface_value(g, ks, f)


def _surface_value(g, ks, f: SurfaceTestField) -> float:
    psi, F = f.psi, f.F
    F1, F2 = F.value(ks.v1, ks.v2)
    gr, gz = psi.d_r(ks.r, ks.z), psi.d_z(ks.r, ks.z)
    cof = ks.cof_rz
    c_r = cof[:, 0, 0] * gr + cof[:, 0, 1] * gz
    c_z = cof[:, 1, 0] * gr + cof[:, 1, 1] * gz
    integrand = (F1 * c_r + F2 * c_z + ks.det_Du * psi.value(ks.r, ks.z) * F.divergence(ks.v1, ks.v2)) * ks.r
    return float(g.area_weights @ integrand)


def surface_energy_lower_bound(grid: MeridianGrid, field: DeformationField, f_dictionary,
                               quad_order: int | None = None) -> float:
    """``max(0, max_f E_u(f))`` over the dictionary, per unit angle.

    Dictionaries built by :func:`surface_dictionary` contain each field with
    both signs, so the maximum is also the largest ``|E_u(f)|``.
    """
    f_dictionary = list(f_dictionary)
    if not f_dictionary:
        raise ContractError("empty surface test-field dictionary")
    for f in f_dictionary:
        if f.sup() > 1.0 + 1e-12:
            raise ContractError(f"surface test field has sup norm {f.sup():.6g} > 1")
        _check_scalar(grid, f.psi)
    g = diagnostic_grid(grid, quad_order)
    ks = sample_kinematics(g, field)
    _require_feasible(ks)
    return max(0.0, max(_surface_value(g, ks, f) for f in f_dictionary))
