"""
Cylindrical kinematics of an axisymmetric deformation at quadrature points.

For ``u = v1 e_r + v2 e_z`` the deformation gradient in the frame
``(e_r, e_theta, e_z)`` is::

    Du = [[dr v1, 0,     dz v1],
          [0,     v1/r,  0    ],
          [dr v2, 0,     dz v2]]

so ``det Du = (v1/r) det Dv``, ``|Du|^2 = |Dv|^2 + v1^2/r^2`` and, with the
convention ``Du^T cof Du = det Du I``::

    cof Du = [[ (v1/r) dz v2, 0,      -(v1/r) dr v2],
              [ 0,            det Dv,  0           ],
              [-(v1/r) dz v1, 0,       (v1/r) dr v1]]

The vector field ``cof Du^T u`` has components
``(v1/r)(v ^ dz v, 0, -v ^ dr v)`` where ``a ^ b = a1 b2 - a2 b1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import MeridianGrid, locate


@dataclass
class DeformationField:
    """Nodal values of ``v = (v1, v2)``, flattened in grid node order."""

    v1: np.ndarray
    v2: np.ndarray

    def __post_init__(self):
        self.v1 = np.array(self.v1, dtype=float).ravel()
        self.v2 = np.array(self.v2, dtype=float).ravel()
        if self.v1.shape != self.v2.shape:
            raise ValueError("v1 and v2 must have the same number of nodes")
        if not (np.isfinite(self.v1).all() and np.isfinite(self.v2).all()):
            raise ValueError("deformation field has non-finite values")

    @classmethod
    def from_function(cls, grid: MeridianGrid, func: Callable) -> "DeformationField":
        """Sample ``func(r, z) -> (v1, v2)`` at the grid nodes."""
        v1, v2 = func(grid.nodes[:, 0], grid.nodes[:, 1])
        return cls(np.broadcast_to(v1, grid.n_nodes), np.broadcast_to(v2, grid.n_nodes))

    @classmethod
    def from_vector(cls, x: np.ndarray) -> "DeformationField":
        n = x.size // 2
        return cls(x[:n], x[n:])

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.v1, self.v2])

    def copy(self) -> "DeformationField":
        return DeformationField(self.v1.copy(), self.v2.copy())

    def sup_norm(self) -> float:
        return float(max(np.abs(self.v1).max(), np.abs(self.v2).max()))


@dataclass
class KinematicsSample:
    """Kinematic quantities, one entry per quadrature point.

    ``Dv[:, a, b]`` is ``d v_a / d x_b`` with ``x = (r, z)``. ``cof_rz`` holds
    the four in-plane cofactor entries (rows/columns ``r, z``) and ``cof_tt``
    the hoop entry ``det Dv``. ``Dvec`` holds the ``r`` and ``z`` components of
    ``cof Du^T u`` (the ``theta`` component vanishes).
    """

    r: np.ndarray
    z: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    Dv: np.ndarray
    det_Dv: np.ndarray
    det_Du: np.ndarray
    cof_rz: np.ndarray
    cof_tt: np.ndarray
    grad_sq: np.ndarray
    Dvec: np.ndarray

    def __len__(self):
        return self.r.size

    @property
    def flagged(self) -> np.ndarray:
        """Samples where ``det Dv <= 0``."""
        return ~(self.det_Dv > 0)

    @property
    def hoop(self) -> np.ndarray:
        return self.v1 / self.r

    def Du(self) -> np.ndarray:
        out = np.zeros((len(self), 3, 3))
        out[:, 0, 0] = self.Dv[:, 0, 0]
        out[:, 0, 2] = self.Dv[:, 0, 1]
        out[:, 2, 0] = self.Dv[:, 1, 0]
        out[:, 2, 2] = self.Dv[:, 1, 1]
        out[:, 1, 1] = self.hoop
        return out

    def cof_Du(self) -> np.ndarray:
        out = np.zeros((len(self), 3, 3))
        out[:, 0, 0] = self.cof_rz[:, 0, 0]
        out[:, 0, 2] = self.cof_rz[:, 0, 1]
        out[:, 2, 0] = self.cof_rz[:, 1, 0]
        out[:, 2, 2] = self.cof_rz[:, 1, 1]
        out[:, 1, 1] = self.cof_tt
        return out

    def cof_norm(self) -> np.ndarray:
        """Frobenius norm of the 3x3 cofactor matrix."""
        return np.sqrt((self.cof_rz ** 2).sum(axis=(1, 2)) + self.cof_tt ** 2)


def kinematics_from_values(r, z, v1, v2, a, b, c, d) -> KinematicsSample:
    """Assemble a sample from point values ``v`` and ``Dv = [[a, b], [c, d]]``."""
    det_Dv = a * d - b * c
    hoop = v1 / r
    Dv = np.stack([np.stack([a, b], -1), np.stack([c, d], -1)], -2)
    cof_rz = np.stack([np.stack([hoop * d, -hoop * c], -1),
                       np.stack([-hoop * b, hoop * a], -1)], -2)
    grad_sq = a * a + b * b + c * c + d * d + hoop * hoop
    Dvec = np.stack([hoop * (v1 * d - v2 * b), -hoop * (v1 * c - v2 * a)], -1)
    return KinematicsSample(r=r, z=z, v1=v1, v2=v2, Dv=Dv, det_Dv=det_Dv, det_Du=hoop * det_Dv,
                            cof_rz=cof_rz, cof_tt=det_Dv, grad_sq=grad_sq, Dvec=Dvec)


def sample_kinematics(grid: MeridianGrid, field: DeformationField) -> KinematicsSample:
    """Evaluate all cylindrical quantities at the grid's quadrature points.

    Values are interpolated with the bilinear shape functions and derivatives
    taken from the shape-function gradients of the enclosing cell. Samples
    with ``det Dv <= 0`` are kept and can be found through ``flagged``.
    """
    if field.v1.size != grid.n_nodes:
        raise ValueError(f"field has {field.v1.size} nodes, grid has {grid.n_nodes}")
    v1 = grid.B_val @ field.v1
    v2 = grid.B_val @ field.v2
    a = grid.B_r @ field.v1
    b = grid.B_z @ field.v1
    c = grid.B_r @ field.v2
    d = grid.B_z @ field.v2
    return kinematics_from_values(grid.qr, grid.qz, v1, v2, a, b, c, d)


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    min_det_Dv: float
    min_v1: float


def check_feasibility(samples: KinematicsSample, field: DeformationField | None = None) -> Feasibility:
    """Feasible iff ``det Dv > 0`` at every sample and ``v1 >= 0`` at every node.

    Without ``field`` the interpolated point values of ``v1`` stand in for the
    nodal ones.
    """
    if len(samples) == 0:
        raise ValueError("no samples")
    min_det = float(samples.det_Dv.min())
    min_v1 = float((field.v1 if field is not None else samples.v1).min())
    return Feasibility(bool(min_det > 0 and min_v1 >= 0), min_det, min_v1)


def evaluate_field(grid: MeridianGrid, field: DeformationField, r, z):
    """Bilinear values and derivatives ``(v1, v2, a, b, c, d)`` at arbitrary points."""
    i, j, xi, eta = locate(grid, r, z)
    n00 = j * grid.nr + i
    idx = [n00, n00 + 1, n00 + grid.nr, n00 + grid.nr + 1]
    N = [(1 - xi) * (1 - eta), xi * (1 - eta), (1 - xi) * eta, xi * eta]
    dNr = [-(1 - eta) / grid.hr, (1 - eta) / grid.hr, -eta / grid.hr, eta / grid.hr]
    dNz = [-(1 - xi) / grid.hz, -xi / grid.hz, (1 - xi) / grid.hz, xi / grid.hz]
    out = []
    for vals in (field.v1, field.v2):
        out.append((sum(n * vals[k] for n, k in zip(N, idx)),
                    sum(n * vals[k] for n, k in zip(dNr, idx)),
                    sum(n * vals[k] for n, k in zip(dNz, idx))))
    (v1, a, b), (v2, c, d) = out
    return v1, v2, a, b, c, d
