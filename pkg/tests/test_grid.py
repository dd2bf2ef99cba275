import numpy as np
import pytest

from axineo import DomainSpec, build_grid, tube_region
from axineo.grid import locate


def test_two_by_two_weights():
    g = build_grid(DomainSpec("annulus-rect", 1.0, 2.0, 0.0, 1.0, 2, 2))
    assert g.weights.sum() == pytest.approx(1.5, abs=1e-15)
    assert g.area_weights.sum() == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("n", [2, 5, 17, 64])
@pytest.mark.parametrize("order", [1, 2, 3])
def test_area_and_radial_weights(n, order):
    g = build_grid(DomainSpec("annulus-rect", 1.0, 2.0, 0.0, 1.0, n, n + 3, order))
    assert g.area_weights.sum() == pytest.approx(1.0, abs=1e-13)
    # the r weight is linear, so every rule integrates it exactly
    assert g.weights.sum() == pytest.approx(1.5, abs=1e-13)
    assert (g.weights > 0).all()


def test_axis_mask():
    g = build_grid(DomainSpec("axis-rect", 0.0, 1.0, 0.0, 1.0, 33, 33))
    assert g.axis_mask.sum() == 33
    assert (g.nodes[g.axis_mask, 0] == 0).all()
    assert (g.qr > 0).all()


def test_boundary_mask_is_rectangle_boundary():
    g = build_grid(DomainSpec("annulus-rect", 0.5, 1.5, -1.0, 1.0, 6, 7))
    r, z = g.nodes[:, 0], g.nodes[:, 1]
    expected = np.isclose(r, 0.5) | np.isclose(r, 1.5) | np.isclose(z, -1.0) | np.isclose(z, 1.0)
    assert (g.boundary_mask == expected).all()
    assert g.boundary_mask.sum() == 2 * (6 + 7) - 4
    assert (g.boundary_mask ^ g.interior_mask).all()


@pytest.mark.parametrize("kw", [
    dict(kind="annulus-rect", r_min=0.0),
    dict(kind="axis-rect", r_min=0.5),
    dict(nr=1),
    dict(nz=1),
    dict(r_max=0.9),
    dict(kind="torus"),
])
def test_invalid_specs(kw):
    base = dict(kind="annulus-rect", r_min=1.0, r_max=2.0, z_min=0.0, z_max=1.0, nr=4, nz=4)
    base.update(kw)
    with pytest.raises(ValueError):
        DomainSpec(**base)


def test_tube_region_examples():
    ann = build_grid(DomainSpec("annulus-rect", 1.0, 2.0, 0.0, 1.0, 5, 5))
    assert tube_region(ann, 0.5).size == 0
    assert tube_region(ann, 3.0).size == ann.n_quad
    g = build_grid(DomainSpec("axis-rect", 0.0, 1.0, 0.0, 1.0, 5, 5))
    idx = tube_region(g, 0.3)
    assert idx.size == 4
    assert np.allclose(g.qr[idx], 0.125)
    with pytest.raises(ValueError):
        tube_region(g, 0.0)


def test_radial_weights_converge_under_refinement():
    # midpoint weights integrate r exactly; r^3 is integrated to O(h^2)
    errs = []
    for n in (9, 17, 33):
        g = build_grid(DomainSpec("annulus-rect", 1.0, 2.0, 0.0, 1.0, n, n))
        errs.append(abs(g.integrate(g.qr ** 2) - (2 ** 4 - 1) / 4))
    assert errs[0] / errs[1] > 3.8 and errs[1] / errs[2] > 3.8


def test_refined_and_quadrature_variants():
    spec = DomainSpec("annulus-rect", 1.0, 2.0, 0.0, 1.0, 5, 9)
    fine = spec.refined(2)
    assert (fine.nr, fine.nz) == (9, 17)
    g = build_grid(spec)
    g5 = g.with_quadrature(5)
    assert g5.n_quad == 25 * g.n_quad
    assert np.array_equal(g5.nodes, g.nodes)


def test_locate_roundtrip():
    g = build_grid(DomainSpec("annulus-rect", 1.0, 2.0, 0.0, 1.0, 5, 9))
    i, j, xi, eta = locate(g, np.array([1.0, 1.3, 2.0]), np.array([0.0, 0.51, 1.0]))
    assert list(i) == [0, 1, 3] and list(j) == [0, 4, 7]
    assert np.allclose(g.r[i] + xi * g.hr, [1.0, 1.3, 2.0])
    assert np.allclose(g.z[j] + eta * g.hz, [0.0, 0.51, 1.0])


def test_bilinear_shape_functions_interpolate_exactly():
    g = build_grid(DomainSpec("annulus-rect", 1.0, 2.0, 0.0, 1.0, 6, 4, 2))
    r, z = g.nodes[:, 0], g.nodes[:, 1]
    f = 2 + 3 * r - z + 0.5 * r * z
    assert np.allclose(g.B_val @ f, 2 + 3 * g.qr - g.qz + 0.5 * g.qr * g.qz, atol=1e-13)
    assert np.allclose(g.B_r @ f, 3 + 0.5 * g.qz, atol=1e-12)
    assert np.allclose(g.B_z @ f, -1 + 0.5 * g.qr, atol=1e-12)
