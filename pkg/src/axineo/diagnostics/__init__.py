"""Discrete checks of the identities satisfied by minimizers and diffeomorphisms."""

from .concentration import cofactor_median, concentration_profile, equi_integrability_table
from .defect import defect_gap
from .determinant import det_gap, det_pairings, surface_energy_lower_bound, surface_energy_value
from .inner import EMTensorSample, em_residual, em_tensor, em_weak_pairing, inner_variation_derivative
from .injectivity import OverlapResult, injectivity_overlap
from .jensen import JensenRecord, jensen_check
from .report import DiagnosticsReport, build_report
from .testfields import (Bump, SurfaceTestField, TargetField, TestField, scalar_dictionary,
                         surface_dictionary, variation_dictionary)

__all__ = [
    "Bump", "DiagnosticsReport", "EMTensorSample", "JensenRecord", "OverlapResult", "SurfaceTestField",
    "TargetField", "TestField", "build_report", "cofactor_median", "concentration_profile", "defect_gap",
    "det_gap", "det_pairings", "em_residual", "em_tensor", "em_weak_pairing", "equi_integrability_table",
    "injectivity_overlap", "inner_variation_derivative", "jensen_check", "scalar_dictionary",
    "surface_dictionary", "surface_energy_lower_bound", "surface_energy_value", "variation_dictionary",
]
