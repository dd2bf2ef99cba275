"""
Inner variations and the energy-momentum residual.

For a variation field ``phi`` with compact support in the meridian domain,
``v_t(X) = v(X + t phi(X))`` is admissible for small ``t`` and::

    dG/dt(0) = int <2 Dv^T Dv - (|Dv|^2 + v1^2/r^2) I, Dphi> r - (|Dv|^2 - v1^2/r^2) phi1
             + [(v1/r) det Dv H' - H] phi1 + [H' v1 det Dv - H r] tr Dphi      dr dz

with ``H``, ``H'`` evaluated at ``(v1/r) det Dv``. The same number is the
weak divergence of the energy-momentum tensor
``T = 2 Du^T Du + (H'(det Du) det Du - |Du|^2 - H(det Du)) I`` paired with
``phi``: ``int (T_rz-block : Dphi) r + T_thth phi1 dr dz``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ContractError
from ..grid import MeridianGrid
from ..kinematics import DeformationField, KinematicsSample, sample_kinematics
from ..material import MaterialLaw, eval_H, eval_H_prime
from ..energy import _require_feasible
from .testfields import TestField

DIAGNOSTIC_QUAD_ORDER = 5


def diagnostic_grid(grid: MeridianGrid, quad_order: int | None = DIAGNOSTIC_QUAD_ORDER) -> MeridianGrid:
    """Same nodes with the diagnostic quadrature (``None`` keeps the grid's own rule)."""
    if quad_order is None or quad_order == grid.spec.quad_order:
        return grid
    return grid.with_quadrature(quad_order)


def _check_phi(grid: MeridianGrid, phi: TestField):
    if not isinstance(phi, TestField) or phi.c1_norm() == 0:
        raise ContractError("test field must be a non-zero TestField")
    if not phi.support_inside(grid):
        raise ContractError("test field support must lie strictly inside the domain")


def inner_variation_integrand(ks: KinematicsSample, law: MaterialLaw, phi: TestField) -> np.ndarray:
    """Pointwise integrand of ``dG/dt(0)`` against ``dr dz``."""
    r, v1 = ks.r, ks.v1
    Dv = ks.Dv
    dsq = (Dv ** 2).sum(axis=(1, 2))
    hoop_sq = (v1 / r) ** 2
    J = ks.det_Du
    H = eval_H(law, J)
    Hp = eval_H_prime(law, J)
    p1, _ = phi.value(r, ks.z)
    Dphi = phi.jacobian(r, ks.z)
    tr = Dphi[:, 0, 0] + Dphi[:, 1, 1]

    A = 2.0 * np.einsum("qki,qkj->qij", Dv, Dv)
    A[:, 0, 0] -= dsq + hoop_sq
    A[:, 1, 1] -= dsq + hoop_sq
    return ((A * Dphi).sum(axis=(1, 2)) * r
            - (dsq - hoop_sq) * p1
            + (J * Hp - H) * p1
            + (Hp * v1 * ks.det_Dv - H * r) * tr)


def inner_variation_derivative(grid: MeridianGrid, field: DeformationField, law: MaterialLaw,
                               phi: TestField, quad_order: int | None = DIAGNOSTIC_QUAD_ORDER) -> float:
    """``dG(v_t)/dt`` at ``t = 0`` for ``v_t(X) = v(X + t phi(X))``, per unit angle."""
    _check_phi(grid, phi)
    g = diagnostic_grid(grid, quad_order)
    ks = sample_kinematics(g, field)
    _require_feasible(ks)
    return float(g.area_weights @ inner_variation_integrand(ks, law, phi))


def em_residual(grid: MeridianGrid, field: DeformationField, law: MaterialLaw, dictionary,
                quad_order: int | None = DIAGNOSTIC_QUAD_ORDER, per_field: bool = False):
    """``max |dG/dt(0)(phi)| / ||phi||_C1`` over the dictionary.

    With ``per_field=True`` also returns the list of normalized values.
    """
    dictionary = list(dictionary)
    if not dictionary:
        raise ContractError("empty test-field dictionary")
    for phi in dictionary:
        _check_phi(grid, phi)
    g = diagnostic_grid(grid, quad_order)
    ks = sample_kinematics(g, field)
    _require_feasible(ks)
    vals = [abs(float(g.area_weights @ inner_variation_integrand(ks, law, phi))) / phi.c1_norm()
            for phi in dictionary]
    res = max(vals)
    return (res, vals) if per_field else res


@dataclass
class EMTensorSample:
    """Nonzero entries of the cylindrical energy-momentum tensor per sample.

    ``rr``, ``rz``, ``zr``, ``zz`` form the meridian block and ``tt`` the hoop
    entry; the tensor is symmetric, so ``rz == zr``.
    """

    r: np.ndarray
    z: np.ndarray
    rr: np.ndarray
    rz: np.ndarray
    zr: np.ndarray
    zz: np.ndarray
    tt: np.ndarray

    def block(self) -> np.ndarray:
        return np.stack([np.stack([self.rr, self.rz], -1), np.stack([self.zr, self.zz], -1)], -2)

    def full(self) -> np.ndarray:
        out = np.zeros((self.r.size, 3, 3))
        out[:, 0, 0], out[:, 0, 2] = self.rr, self.rz
        out[:, 2, 0], out[:, 2, 2] = self.zr, self.zz
        out[:, 1, 1] = self.tt
        return out


def em_tensor(grid: MeridianGrid, field: DeformationField, law: MaterialLaw,
              quad_order: int | None = None) -> EMTensorSample:
    g = diagnostic_grid(grid, quad_order)
    ks = sample_kinematics(g, field)
    _require_feasible(ks)
    J = ks.det_Du
    p = eval_H_prime(law, J) * J - ks.grad_sq - eval_H(law, J)
    C = np.einsum("qki,qkj->qij", ks.Du(), ks.Du())
    return EMTensorSample(ks.r, ks.z, 2 * C[:, 0, 0] + p, 2 * C[:, 0, 2], 2 * C[:, 2, 0],
                          2 * C[:, 2, 2] + p, 2 * C[:, 1, 1] + p)


def em_weak_pairing(grid: MeridianGrid, field: DeformationField, law: MaterialLaw, phi: TestField,
                    quad_order: int | None = DIAGNOSTIC_QUAD_ORDER) -> float:
    """``int (T block : Dphi) r + T_thth phi1 dr dz``; equals :func:`inner_variation_derivative`."""
    _check_phi(grid, phi)
    g = diagnostic_grid(grid, quad_order)
    T = em_tensor(g, field, law, quad_order=None)
    p1, _ = phi.value(T.r, T.z)
    Dphi = phi.jacobian(T.r, T.z)
    integrand = (T.block() * Dphi).sum(axis=(1, 2)) * T.r + T.tt * p1
    return float(g.area_weights @ integrand)
