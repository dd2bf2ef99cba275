"""
Structured meridian grids.

The computational domain is a rectangle in the half-plane ``r >= 0`` of the
``(r, z)`` variables. Nodes sit on a tensor grid and carry bilinear shape
functions; integrals are evaluated with a per-cell tensor Gauss-Legendre rule
(order 1 is the cell midpoint). Quadrature points are always cell interior,
so ``r > 0`` at every evaluation point even when the rectangle touches the
symmetry axis.

Node numbering is row-major in ``(z, r)``: node ``(i, j)`` (``i`` along r,
``j`` along z) has index ``j * nr + i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

ANNULUS = "annulus-rect"
AXIS = "axis-rect"
DOMAIN_KINDS = (ANNULUS, AXIS)


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    r_min: float
    r_max: float
    z_min: float
    z_max: float
    nr: int
    nz: int
    quad_order: int = 1

    def __post_init__(self):
        if self.kind not in DOMAIN_KINDS:
            raise ValueError(f"unknown domain kind {self.kind!r}; expected one of {DOMAIN_KINDS}")
        if int(self.nr) < 2 or int(self.nz) < 2:
            raise ValueError(f"need at least 2 nodes per direction, got nr={self.nr}, nz={self.nz}")
        if not self.r_max > self.r_min:
            raise ValueError("r_max must exceed r_min")
        if not self.z_max > self.z_min:
            raise ValueError("z_max must exceed z_min")
        if self.kind == ANNULUS and not self.r_min > 0.0:
            raise ValueError("annulus-rect requires r_min > 0")
        if self.kind == AXIS and self.r_min != 0.0:
            raise ValueError("axis-rect requires r_min == 0")
        if int(self.quad_order) < 1:
            raise ValueError("quad_order must be >= 1")

    def refined(self, factor: int = 2) -> "DomainSpec":
        """Same rectangle with every cell split ``factor`` times per direction."""
        return DomainSpec(self.kind, self.r_min, self.r_max, self.z_min, self.z_max,
                          (self.nr - 1) * factor + 1, (self.nz - 1) * factor + 1, self.quad_order)


@dataclass(frozen=True, eq=False)
class MeridianGrid:
    """Immutable tensor grid with its quadrature rule.

    Quadrature arrays have one entry per evaluation point. ``area_weights``
    integrate against ``dr dz``; ``weights`` are ``area_weights * qr`` and
    integrate against ``r dr dz``. ``B_val``, ``B_r`` and ``B_z`` are sparse
    ``(n_quad, n_nodes)`` matrices mapping nodal values to interpolated
    values and derivatives at the quadrature points.
    """

    spec: DomainSpec
    r: np.ndarray
    z: np.ndarray
    hr: float
    hz: float
    nodes: np.ndarray
    boundary_mask: np.ndarray
    axis_mask: np.ndarray
    qr: np.ndarray
    qz: np.ndarray
    area_weights: np.ndarray
    weights: np.ndarray
    cell_of_point: np.ndarray
    local_points: np.ndarray
    B_val: sp.csr_matrix = field(repr=False)
    B_r: sp.csr_matrix = field(repr=False)
    B_z: sp.csr_matrix = field(repr=False)

    @property
    def nr(self) -> int:
        return self.r.size

    @property
    def nz(self) -> int:
        return self.z.size

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_quad(self) -> int:
        return self.qr.size

    @property
    def h(self) -> float:
        return max(self.hr, self.hz)

    @property
    def interior_mask(self) -> np.ndarray:
        return ~self.boundary_mask

    def node_index(self, i: int, j: int) -> int:
        return j * self.nr + i

    def integrate(self, values: np.ndarray, weighted: bool = True) -> float:
        """Quadrature sum of point values against ``r dr dz`` (or ``dr dz``)."""
        w = self.weights if weighted else self.area_weights
        return float(np.dot(w, values))

    def with_quadrature(self, order: int) -> "MeridianGrid":
        """Same nodes, different per-cell Gauss order."""
        s = self.spec
        return build_grid(DomainSpec(s.kind, s.r_min, s.r_max, s.z_min, s.z_max, s.nr, s.nz, order))


def _gauss_01(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order == 1:
        return np.array([0.5]), np.array([1.0])
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def build_grid(spec: DomainSpec) -> MeridianGrid:
    """Build the tensor grid and quadrature for ``spec``."""
    nr, nz = int(spec.nr), int(spec.nz)
    r = np.linspace(spec.r_min, spec.r_max, nr)
    z = np.linspace(spec.z_min, spec.z_max, nz)
    hr = (spec.r_max - spec.r_min) / (nr - 1)
    hz = (spec.z_max - spec.z_min) / (nz - 1)
    if spec.kind == AXIS:
        r[0] = 0.0

    R, Z = np.meshgrid(r, z)
    nodes = np.column_stack([R.ravel(), Z.ravel()])
    I, J = np.meshgrid(np.arange(nr), np.arange(nz))
    I, J = I.ravel(), J.ravel()
    boundary = (I == 0) | (I == nr - 1) | (J == 0) | (J == nz - 1)
    axis = nodes[:, 0] == 0.0

    # cells in (z, r) row-major order, local points (xi along r, eta along z)
    ci, cj = np.meshgrid(np.arange(nr - 1), np.arange(nz - 1))
    ci, cj = ci.ravel(), cj.ravel()
    n_cells = ci.size
    x1, w1 = _gauss_01(int(spec.quad_order))
    XI, ETA = np.meshgrid(x1, x1)
    WL = np.outer(w1, w1)
    xi, eta, wl = XI.ravel(), ETA.ravel(), WL.ravel()
    n_loc = xi.size

    cell = np.repeat(np.arange(n_cells), n_loc)
    xi_q = np.tile(xi, n_cells)
    eta_q = np.tile(eta, n_cells)
    ci_q, cj_q = ci[cell], cj[cell]
    qr = r[ci_q] + xi_q * (r[ci_q + 1] - r[ci_q])
    qz = z[cj_q] + eta_q * (z[cj_q + 1] - z[cj_q])
    area_w = np.tile(wl, n_cells) * hr * hz

    n00 = cj_q * nr + ci_q
    idx = np.column_stack([n00, n00 + 1, n00 + nr, n00 + nr + 1])
    N = np.column_stack([(1 - xi_q) * (1 - eta_q), xi_q * (1 - eta_q), (1 - xi_q) * eta_q, xi_q * eta_q])
    dNr = np.column_stack([-(1 - eta_q), (1 - eta_q), -eta_q, eta_q]) / hr
    dNz = np.column_stack([-(1 - xi_q), -xi_q, (1 - xi_q), xi_q]) / hz

    n_quad = qr.size
    rows = np.repeat(np.arange(n_quad), 4)
    cols = idx.ravel()
    shape = (n_quad, nr * nz)

    def mat(vals):
        return sp.csr_matrix((vals.ravel(), (rows, cols)), shape=shape)

    return MeridianGrid(
        spec=spec, r=r, z=z, hr=hr, hz=hz, nodes=nodes,
        boundary_mask=boundary, axis_mask=axis,
        qr=qr, qz=qz, area_weights=area_w, weights=area_w * qr,
        cell_of_point=cell, local_points=np.column_stack([xi_q, eta_q]),
        B_val=mat(N), B_r=mat(dNr), B_z=mat(dNz),
    )


def tube_region(grid: MeridianGrid, delta: float) -> np.ndarray:
    """Indices of quadrature points with ``r < delta`` (possibly empty)."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    return np.flatnonzero(grid.qr < delta)


def locate(grid: MeridianGrid, r: np.ndarray, z: np.ndarray):
    """Cell indices and local coordinates of arbitrary points inside the rectangle.

    Returns ``(i, j, xi, eta)``; points on the far edges are assigned to the
    last cell.
    """
    s = grid.spec
    fr = (np.asarray(r, float) - s.r_min) / grid.hr
    fz = (np.asarray(z, float) - s.z_min) / grid.hz
    i = np.clip(np.floor(fr).astype(int), 0, grid.nr - 2)
    j = np.clip(np.floor(fz).astype(int), 0, grid.nz - 2)
    return i, j, fr - i, fz - j
