import pytest

from axineo import DeformationField
from axineo import fields
from axineo.diagnostics import injectivity_overlap


def test_identity_is_injective(annulus):
    res = injectivity_overlap(annulus, DeformationField.from_function(annulus, fields.identity()))
    assert res.fraction == 0 and res.skipped_cells == 0
    assert res.covered_area == pytest.approx(1.5, rel=0.02)


def test_monotone_map_is_injective(annulus):
    res = injectivity_overlap(annulus, DeformationField.from_function(annulus, fields.radial_square(1.0)))
    assert res.fraction == 0


def test_fold_overlaps_half(annulus):
    res = injectivity_overlap(annulus, DeformationField.from_function(annulus, fields.fold(1.0, 2.0)))
    assert res.fraction == pytest.approx(0.5, abs=0.01)


def test_axis_pinch_is_injective(axis_grid):
    res = injectivity_overlap(axis_grid, DeformationField.from_function(axis_grid, fields.pinch(0.05)))
    assert res.fraction == 0
    assert set(res.to_dict()) == {"fraction", "skipped_cells", "covered_area"}
