"""Aggregate diagnostics for one field."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from ..grid import ANNULUS, MeridianGrid
from ..kinematics import DeformationField
from ..material import MaterialLaw
from .concentration import concentration_profile, cofactor_median, equi_integrability_table
from .determinant import det_gap, surface_energy_lower_bound
from .inner import em_residual
from .injectivity import injectivity_overlap
from .jensen import jensen_check
from .testfields import scalar_dictionary, surface_dictionary, variation_dictionary

DEFAULT_DELTAS = (0.05, 0.1, 0.2)
EQUI_FACTORS = (0.0, 1.0, 3.0, 10.0)


@dataclass
class DiagnosticsReport:
    em_residual: float | None = None
    det_gap: float | None = None
    surface_energy_lb: float | None = None
    jensen: dict | None = None
    concentration: list = field(default_factory=list)
    equi_integrability: list = field(default_factory=list)
    injectivity_overlap: dict | None = None
    defect_gap: list | None = None
    det_gap_table: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def build_report(grid: MeridianGrid, field_: DeformationField, law: MaterialLaw, bc=None,
                 deltas=DEFAULT_DELTAS, n_tests: int = 12, seed: int = 0, em_quad_order: int = 5,
                 raster_resolution: int = 256) -> DiagnosticsReport:
    """Run every diagnostic that applies to ``grid``.

    The Jensen record needs affine boundary data on an annulus; otherwise it
    is left out. Equi-integrability thresholds are multiples of the median
    cofactor norm, split at the middle ``delta``.
    """
    rep = DiagnosticsReport()
    rep.em_residual = em_residual(grid, field_, law, variation_dictionary(grid, n_tests, seed), quad_order=em_quad_order)
    rep.det_gap, rep.det_gap_table = det_gap(grid, field_, scalar_dictionary(grid, n_tests, seed))
    box = (float(field_.v1.min()), float(field_.v1.max()), float(field_.v2.min()), float(field_.v2.max()))
    rep.surface_energy_lb = surface_energy_lower_bound(grid, field_, surface_dictionary(grid, box, seed=seed))
    if bc is not None and bc.kind == "affine" and grid.spec.kind == ANNULUS:
        rep.jensen = jensen_check(grid, field_, law, bc.lam, bc.b_z).to_dict()
    rep.concentration = concentration_profile(grid, field_, deltas)
    med = cofactor_median(grid, field_)
    split = sorted(deltas)[len(deltas) // 2]
    rep.equi_integrability = equi_integrability_table(grid, field_, [k * med for k in EQUI_FACTORS], split)
    rep.injectivity_overlap = injectivity_overlap(grid, field_, raster_resolution).to_dict()
    return rep
