"""Mesh construction, quadrature, and the boundary-distance weight."""

import numpy as np
import pytest

from deltalab import GridFunction, MeshMismatchError, build_mesh, integrate


def test_build_mesh_basic_geometry():
    m = build_mesh(4)
    assert m.n_cells == 16
    assert m.h == 0.25
    assert m.delta.min() == pytest.approx(0.125)
    # cells at distance h/2 from each wall
    assert m.xc[0] == pytest.approx(0.125)
    assert m.xc[-1] == pytest.approx(0.875)


def test_total_measure_is_one():
    for n in (4, 7, 64):
        m = build_mesh(n)
        assert m.n_cells * m.cell_measure == pytest.approx(1.0, abs=1e-12)


def test_delta_formula_and_minimum():
    m = build_mesh(16)
    X, Y = m.meshgrid()
    expected = np.minimum.reduce([X, 1 - X, Y, 1 - Y])
    assert np.array_equal(m.delta, expected)
    assert m.delta.min() == pytest.approx(m.h / 2)


def test_delta_at_center_cell_n64():
    m = build_mesh(64)
    assert m.delta[32, 32] == pytest.approx(0.5 - m.h / 2)
    assert m.delta[32, 32] == pytest.approx(0.4921875)


def test_rejects_too_coarse():
    with pytest.raises(ValueError):
        build_mesh(3)
    with pytest.raises(TypeError):
        build_mesh(4.0)


def test_boundary_faces_count_and_normals():
    m = build_mesh(5)
    assert len(m.boundary_faces) == 4 * 5
    for f in m.boundary_faces:
        nx, ny = f.normal
        assert nx * nx + ny * ny == pytest.approx(1.0)
        if f.side == "left":
            assert f.ix == 0 and f.normal == (-1.0, 0.0)
        if f.side == "top":
            assert f.iy == m.n - 1 and f.normal == (0.0, 1.0)


def test_integrate_constant():
    m = build_mesh(8)
    assert integrate(GridFunction.constant(m, 1.0)) == pytest.approx(1.0)
    assert integrate(GridFunction.constant(m, 3.5)) == pytest.approx(3.5)


def test_integrate_against_delta_hand_sum():
    # n=4: twelve ring cells with delta=1/8, four center cells with delta=3/8.
    m = build_mesh(4)
    one = GridFunction.constant(m, 1.0)
    assert integrate(one, m.delta) == pytest.approx(0.1875, abs=1e-14)


def test_integrate_indicator_left_half():
    m = build_mesh(16)
    chi = GridFunction.sample(m, lambda x, y: (x < 0.5).astype(float))
    assert integrate(chi) == pytest.approx(0.5, abs=1e-14)


def test_integrate_weight_gridfunction_and_mismatch():
    m = build_mesh(8)
    other = build_mesh(16)
    u = GridFunction.constant(m, 2.0)
    w = GridFunction.constant(m, 0.5)
    assert integrate(u, w) == pytest.approx(1.0)
    with pytest.raises(MeshMismatchError):
        integrate(u, GridFunction.constant(other, 1.0))
    with pytest.raises(MeshMismatchError):
        u + GridFunction.constant(other, 1.0)


def test_quadrature_exact_for_cellwise_constant():
    rng = np.random.default_rng(7)
    m = build_mesh(9)
    vals = rng.uniform(-2, 2, (9, 9))
    u = GridFunction(m, vals)
    assert integrate(u) == pytest.approx(vals.sum() * m.cell_measure, rel=1e-14)


def test_delta_weight_bounded_by_half():
    rng = np.random.default_rng(8)
    m = build_mesh(12)
    u = GridFunction(m, rng.uniform(0, 5, (12, 12)))
    assert integrate(u, m.delta) <= 0.5 * integrate(u) + 1e-14


def test_gridfunction_arithmetic_and_immutability():
    m = build_mesh(4)
    u = GridFunction.constant(m, 2.0)
    v = GridFunction.sample(m, lambda x, y: x)
    w = abs(-(u * v - 1.0))
    assert w.values.shape == (4, 4)
    assert w.max() == pytest.approx(abs(2 * 0.875 - 1.0))
    with pytest.raises(ValueError):
        u.values[0, 0] = 3.0
    with pytest.raises(ValueError):
        m.delta[0, 0] = 9.9
