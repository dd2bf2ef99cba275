"""
Near-axis mass tables.

Masses are integrals against ``r dr dz`` (per unit angle) of ``|Du|^2`` and of
the Frobenius norm ``|cof Du|``, split into the tube ``r < delta`` and its
complement. A concentrating sequence shows growing tube masses while the
outer region stays equi-integrable.
"""

from __future__ import annotations

import numpy as np

from ..grid import MeridianGrid, tube_region
from ..kinematics import DeformationField, sample_kinematics
from ..energy import _require_feasible
from .inner import diagnostic_grid


def _samples(grid, field, quad_order):
    g = diagnostic_grid(grid, quad_order)
    ks = sample_kinematics(g, field)
    _require_feasible(ks)
    return g, ks


def concentration_profile(grid: MeridianGrid, field: DeformationField, deltas,
                          quad_order: int | None = None) -> list[dict]:
    """One row per ``delta``: tube and outer Dirichlet and cofactor masses."""
    g, ks = _samples(grid, field, quad_order)
    dens_d = ks.grad_sq * g.weights
    dens_c = ks.cof_norm() * g.weights
    total_d, total_c = float(dens_d.sum()), float(dens_c.sum())
    rows = []
    for delta in deltas:
        tube = np.zeros(g.n_quad, bool)
        tube[tube_region(g, delta)] = True
        td, tc = float(dens_d[tube].sum()), float(dens_c[tube].sum())
        rows.append({"delta": float(delta),
                     "tube_dirichlet": td, "tube_cofactor": tc,
                     "outer_dirichlet": float(dens_d[~tube].sum()), "outer_cofactor": float(dens_c[~tube].sum()),
                     "total_dirichlet": total_d, "total_cofactor": total_c})
    return rows


def cofactor_median(grid: MeridianGrid, field: DeformationField, quad_order: int | None = None) -> float:
    _, ks = _samples(grid, field, quad_order)
    return float(np.median(ks.cof_norm()))


def equi_integrability_table(grid: MeridianGrid, field: DeformationField, thresholds, delta_split: float,
                             quad_order: int | None = None) -> list[dict]:
    """``int_{|cof Du| > M} |cof Du| r`` on the outer region and on the tube, per threshold ``M``."""
    g, ks = _samples(grid, field, quad_order)
    cn = ks.cof_norm()
    dens = cn * g.weights
    tube = np.zeros(g.n_quad, bool)
    tube[tube_region(g, delta_split)] = True
    rows = []
    for M in thresholds:
        if M < 0:
            raise ValueError("thresholds must be non-negative")
        over = cn > M
        rows.append({"M": float(M),
                     "outer_tail": float(dens[over & ~tube].sum()),
                     "tube_tail": float(dens[over & tube].sum())})
    return rows
