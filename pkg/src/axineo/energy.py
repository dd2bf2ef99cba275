"""
Reduced energy of an axisymmetric deformation and its nodal gradient.

Per unit angle the energy is::

    G(v) = int (|dr v|^2 + |dz v|^2) r + v1^2 / r + H((v1/r) det Dv) r   dr dz

and the three-dimensional energy is ``E(u) = 2 pi G(v)``. The discrete G is
the quadrature sum of the integrand at the grid's points, so the gradient
below is the exact derivative of the number returned by :func:`energy`.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import InfeasibleDeterminantError
from .grid import MeridianGrid
from .kinematics import DeformationField, KinematicsSample, sample_kinematics
from .material import MaterialLaw, eval_H, eval_H_prime


@dataclass(frozen=True)
class EnergyBreakdown:
    dirichlet: float
    hoop: float
    potential: float

    @property
    def G_total(self) -> float:
        return self.dirichlet + self.hoop + self.potential

    @property
    def E_total(self) -> float:
        return 2.0 * np.pi * self.G_total

    def to_dict(self) -> dict:
        out = asdict(self)
        out.update(G_total=self.G_total, E_total=self.E_total)
        return out


def _require_feasible(ks: KinematicsSample):
    bad = ks.flagged
    if bad.any():
        k = int(np.argmin(ks.det_Dv))
        raise InfeasibleDeterminantError(
            f"det Dv <= 0 at {int(bad.sum())} sample(s); worst sample {k} "
            f"at (r, z) = ({ks.r[k]:.6g}, {ks.z[k]:.6g}) with det Dv = {ks.det_Dv[k]:.6g}",
            k, float(ks.det_Dv[k]))
    neg = ks.v1 < 0
    if neg.any():
        k = int(np.argmin(ks.v1))
        raise InfeasibleDeterminantError(
            f"v1 < 0 at sample {k}; det Du = {ks.det_Du[k]:.6g} is not positive", k, float(ks.det_Du[k]))


def energy_density(ks: KinematicsSample, law: MaterialLaw):
    """Pointwise (dirichlet, hoop, potential) integrands against ``dr dz``."""
    Dv = ks.Dv
    dsq = (Dv ** 2).sum(axis=(1, 2))
    return dsq * ks.r, ks.v1 ** 2 / ks.r, eval_H(law, ks.det_Du) * ks.r


def energy(grid: MeridianGrid, field: DeformationField, law: MaterialLaw,
           samples: KinematicsSample | None = None) -> EnergyBreakdown:
    ks = sample_kinematics(grid, field) if samples is None else samples
    _require_feasible(ks)
    dir_, hoop, pot = energy_density(ks, law)
    w = grid.area_weights
    return EnergyBreakdown(float(w @ dir_), float(w @ hoop), float(w @ pot))


def energy_and_gradient(grid: MeridianGrid, field: DeformationField, law: MaterialLaw):
    """Return ``(EnergyBreakdown, grad)`` with ``grad`` of shape ``(2, n_nodes)``."""
    ks = sample_kinematics(grid, field)
    _require_feasible(ks)
    r, v1 = ks.r, ks.v1
    a, b = ks.Dv[:, 0, 0], ks.Dv[:, 0, 1]
    c, d = ks.Dv[:, 1, 0], ks.Dv[:, 1, 1]
    w = grid.area_weights
    Hp = eval_H_prime(law, ks.det_Du)

    dir_, hoop, pot = energy_density(ks, law)
    br = EnergyBreakdown(float(w @ dir_), float(w @ hoop), float(w @ pot))

    # d/d(point quantity) of the integrand; H' enters through v1 det Dv
    g_v1 = w * (2.0 * v1 / r + Hp * ks.det_Dv)
    g_a = w * (2.0 * a * r + Hp * v1 * d)
    g_b = w * (2.0 * b * r - Hp * v1 * c)
    g_c = w * (2.0 * c * r - Hp * v1 * b)
    g_d = w * (2.0 * d * r + Hp * v1 * a)
    grad1 = grid.B_val.T @ g_v1 + grid.B_r.T @ g_a + grid.B_z.T @ g_b
    grad2 = grid.B_r.T @ g_c + grid.B_z.T @ g_d
    return br, np.vstack([grad1, grad2])


def energy_gradient(grid: MeridianGrid, field: DeformationField, law: MaterialLaw) -> np.ndarray:
    """Exact gradient of the discrete G w.r.t. nodal ``(v1, v2)``; shape ``(2, n_nodes)``.

    Dirichlet nodes are included; callers mask them.
    """
    return energy_and_gradient(grid, field, law)[1]
