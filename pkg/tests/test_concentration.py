import numpy as np
import pytest

from axineo import DeformationField, tube_region
from axineo import fields
from axineo.diagnostics import cofactor_median, concentration_profile, equi_integrability_table


@pytest.mark.parametrize("delta", [0.25, 0.5])
def test_identity_tube_mass(axis_grid, delta):
    f = DeformationField.from_function(axis_grid, fields.identity())
    row = concentration_profile(axis_grid, f, [delta])[0]
    # |Du|^2 = 3 and |cof Du| = sqrt 3, integrated against r over r < delta
    assert row["tube_dirichlet"] == pytest.approx(1.5 * delta ** 2, rel=1e-13)
    assert row["tube_cofactor"] == pytest.approx(np.sqrt(3) * delta ** 2 / 2, rel=1e-13)
    assert row["tube_dirichlet"] + row["outer_dirichlet"] == pytest.approx(row["total_dirichlet"])
    assert row["total_dirichlet"] == pytest.approx(1.5, rel=1e-13)


def test_affine_tube_ratio(axis_grid):
    lam = 1.7
    a = concentration_profile(axis_grid, DeformationField.from_function(axis_grid, fields.affine(lam)), [0.25])[0]
    b = concentration_profile(axis_grid, DeformationField.from_function(axis_grid, fields.identity()), [0.25])[0]
    assert a["tube_dirichlet"] / b["tube_dirichlet"] == pytest.approx(lam ** 2)
    assert a["tube_cofactor"] / b["tube_cofactor"] == pytest.approx(lam ** 2)


def test_profile_is_monotone_in_delta(axis_grid):
    f = DeformationField.from_function(axis_grid, fields.pinch(0.1))
    rows = concentration_profile(axis_grid, f, [0.1, 0.2, 0.4])
    tube = [r["tube_cofactor"] for r in rows]
    assert tube[0] < tube[1] < tube[2]
    assert len(tube_region(axis_grid, 0.1)) > 0


def test_equi_table(axis_grid):
    f = DeformationField.from_function(axis_grid, fields.pinch(0.1))
    prof = concentration_profile(axis_grid, f, [0.2])[0]
    rows = equi_integrability_table(axis_grid, f, [0.0, cofactor_median(axis_grid, f), 1e6], 0.2)
    assert rows[0]["outer_tail"] == prof["outer_cofactor"] and rows[0]["tube_tail"] == prof["tube_cofactor"]
    assert rows[1]["outer_tail"] + rows[1]["tube_tail"] < prof["total_cofactor"]
    assert rows[2]["outer_tail"] == 0 and rows[2]["tube_tail"] == 0
    with pytest.raises(ValueError):
        equi_integrability_table(axis_grid, f, [-1.0], 0.2)


def test_constant_cofactor_above_threshold(annulus):
    f = DeformationField.from_function(annulus, fields.affine(1.1))
    assert cofactor_median(annulus, f) == pytest.approx(np.sqrt(3) * 1.1 ** 2)
    rows = equi_integrability_table(annulus, f, [2.0, 2.2], 1.5)
    assert rows[0]["outer_tail"] > 0 and rows[1]["outer_tail"] == 0
