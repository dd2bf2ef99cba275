import numpy as np
import pytest

from axineo import DeformationField, DomainSpec, build_grid, check_feasibility, sample_kinematics
from axineo import fields
from axineo.kinematics import evaluate_field, kinematics_from_values
from conftest import random_feasible_field


def test_identity_samples(annulus):
    ks = sample_kinematics(annulus, DeformationField.from_function(annulus, fields.identity()))
    assert np.allclose(ks.Dv, np.eye(2), atol=1e-13)
    assert np.allclose(ks.det_Dv, 1) and np.allclose(ks.det_Du, 1)
    assert np.allclose(ks.grad_sq, 3)
    # D = (v1/r)(v ^ dz v, 0, -v ^ dr v) = (r, 0, z)
    assert np.allclose(ks.Dvec[:, 0], ks.r, atol=1e-13)
    assert np.allclose(ks.Dvec[:, 1], ks.z, atol=1e-13)


@pytest.mark.parametrize("lam", [0.7, 1.0, 1.5])
def test_affine_samples(annulus, lam):
    ks = sample_kinematics(annulus, DeformationField.from_function(annulus, fields.affine(lam, 0.3)))
    assert np.allclose(ks.det_Dv, lam ** 2)
    assert np.allclose(ks.det_Du, lam ** 3)
    assert np.allclose(ks.grad_sq, 3 * lam ** 2)


def test_separable_affine_has_constant_gradient(annulus):
    f = DeformationField.from_function(annulus, lambda r, z: (2.0 * r + 0.5, 0.7 * z - 1.0))
    ks = sample_kinematics(annulus, f)
    assert np.allclose(ks.Dv, [[2.0, 0.0], [0.0, 0.7]], atol=1e-12)


def test_cofactor_identity_on_random_field():
    g = build_grid(DomainSpec("annulus-rect", 0.5, 1.5, 0.0, 1.0, 64, 64))
    ks = sample_kinematics(g, random_feasible_field(g, seed=3, amplitude=0.3))
    Du, cof = ks.Du(), ks.cof_Du()
    lhs = np.einsum("qki,qkj->qij", Du, cof)
    err = np.abs(lhs - ks.det_Du[:, None, None] * np.eye(3))
    scale = 1 + (Du ** 2).sum(axis=(1, 2))
    assert (err.max(axis=(1, 2)) < 1e-12 * scale).all()
    # |Du|^2 from the stored expression equals the Frobenius norm of the 3x3 matrix
    assert np.allclose(ks.grad_sq, (Du ** 2).sum(axis=(1, 2)), rtol=1e-14)
    assert np.allclose(ks.det_Du, np.linalg.det(Du), rtol=1e-12)


def test_algebraic_identities(axis_grid):
    ks = sample_kinematics(axis_grid, random_feasible_field(axis_grid, seed=1))
    assert np.array_equal(ks.det_Du * ks.r, ks.v1 / ks.r * ks.det_Dv * ks.r)
    assert np.allclose(ks.det_Du * ks.r, ks.v1 * ks.det_Dv, rtol=1e-14, atol=1e-16)
    # D = cof Du^T (v1, 0, v2)
    u = np.column_stack([ks.v1, np.zeros(len(ks)), ks.v2])
    D = np.einsum("qji,qj->qi", ks.cof_Du(), u)
    assert np.allclose(D[:, 0], ks.Dvec[:, 0], atol=1e-14)
    assert np.allclose(D[:, 1], 0)
    assert np.allclose(D[:, 2], ks.Dvec[:, 1], atol=1e-14)


def test_feasibility_examples(annulus):
    ident = DeformationField.from_function(annulus, fields.identity())
    fz = check_feasibility(sample_kinematics(annulus, ident), ident)
    assert fz.feasible and fz.min_det_Dv == pytest.approx(1.0)

    swap = DeformationField.from_function(annulus, lambda r, z: (z, r))
    fz = check_feasibility(sample_kinematics(annulus, swap), swap)
    assert not fz.feasible and fz.min_det_Dv == pytest.approx(-1.0)

    neg = ident.copy()
    neg.v1[annulus.node_index(3, 3)] = -0.1
    fz = check_feasibility(sample_kinematics(annulus, neg), neg)
    assert not fz.feasible and fz.min_v1 == -0.1


def test_flagged_samples_are_kept(annulus):
    swap = DeformationField.from_function(annulus, lambda r, z: (z + 1, r))
    ks = sample_kinematics(annulus, swap)
    assert len(ks) == annulus.n_quad and ks.flagged.all()


def test_field_validation(annulus):
    with pytest.raises(ValueError):
        DeformationField([1.0, np.nan], [0.0, 0.0])
    with pytest.raises(ValueError):
        DeformationField([1.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        sample_kinematics(annulus, DeformationField(np.ones(3), np.ones(3)))


def test_evaluate_field_matches_quadrature_samples(annulus):
    f = random_feasible_field(annulus, seed=5)
    ks = sample_kinematics(annulus, f)
    v1, v2, a, b, c, d = evaluate_field(annulus, f, ks.r, ks.z)
    assert np.allclose(v1, ks.v1) and np.allclose(v2, ks.v2)
    assert np.allclose(np.stack([a, b, c, d], -1), ks.Dv.reshape(-1, 4))


def test_from_values_single_point():
    ks = kinematics_from_values(np.array([2.0]), np.array([0.0]), np.array([3.0]), np.array([1.0]),
                                np.array([1.0]), np.array([0.5]), np.array([0.2]), np.array([2.0]))
    assert ks.det_Dv[0] == pytest.approx(1.9)
    assert ks.det_Du[0] == pytest.approx(1.5 * 1.9)
    assert ks.cof_norm()[0] == pytest.approx(np.sqrt(1.5 ** 2 * (4 + 0.04 + 0.25 + 1) + 1.9 ** 2))
