"""Potentials, stream-function velocities, cutoffs, and data families."""

import numpy as np
import pytest

from deltalab import GridFunction, build_mesh, integrate
from deltalab.fields import (
    Cutoff,
    DataSpec,
    PotentialSpec,
    StreamSpec,
    check_field,
    make_cutoff,
    make_data,
    make_potential,
    make_stream,
    make_velocity,
    truncate_potential,
    velocity_from_stream,
    zero_velocity,
)


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------

def test_power_potential_values():
    m = build_mesh(8)
    V = make_potential(m, PotentialSpec.power(1.0, 2.0))
    # cell (2, 2) has delta = 2.5 h = 0.3125; pick one with delta = 0.25
    iy = 1  # delta = 1.5h = 0.1875 at n=8... use explicit delta instead
    assert np.allclose(V.values, m.delta**-2.0)
    cell = np.unravel_index(np.argmin(np.abs(m.delta - 0.25)), m.delta.shape)
    if m.delta[cell] == 0.25:
        assert V.values[cell] == pytest.approx(16.0)


def test_power_potential_boundary_cell_n64():
    m = build_mesh(64)
    V = make_potential(m, PotentialSpec.power(1.0, 3.0))
    assert V.values[0, 0] == pytest.approx(128.0**3)
    assert V.values[0, 0] == pytest.approx(2_097_152.0)


def test_zero_and_bounded_potentials():
    m = build_mesh(8)
    assert make_potential(m, PotentialSpec.zero()).max() == 0.0
    Vb = make_potential(m, PotentialSpec.bounded(3.0))
    assert Vb.min() == Vb.max() == 3.0


def test_potential_spec_validation():
    with pytest.raises(ValueError):
        PotentialSpec("power", c=-1.0, r=2.0)
    with pytest.raises(ValueError):
        PotentialSpec("gaussian")


def test_truncate_potential():
    m = build_mesh(8)
    V = GridFunction.constant(m, 16.0)
    assert truncate_potential(V, 10.0).max() == 10.0
    assert truncate_potential(V, 100.0).max() == 16.0
    with pytest.raises(ValueError):
        truncate_potential(V, 0.0)


def test_truncate_power_potential_clips_only_near_boundary():
    # c delta^-r = k  <=>  delta = (c/k)^(1/r): for c=1, r=2, k=64 the clip
    # region is exactly delta < 1/8.
    m = build_mesh(32)
    V = make_potential(m, PotentialSpec.power(1.0, 2.0))
    Vk = truncate_potential(V, 64.0)
    clipped = Vk.values < V.values
    assert np.array_equal(clipped, m.delta < 0.125)


def test_truncation_monotone_and_dominated():
    m = build_mesh(16)
    V = make_potential(m, PotentialSpec.power(1.0, 1.5))
    V8, V32 = truncate_potential(V, 8.0), truncate_potential(V, 32.0)
    assert np.all(V8.values <= V32.values + 1e-15)
    assert np.all(V32.values <= V.values + 1e-15)
    assert np.all(V8.values <= 8.0)


# ---------------------------------------------------------------------------
# velocities
# ---------------------------------------------------------------------------

def test_zero_stream_gives_zero_velocity():
    u = zero_velocity(build_mesh(8))
    assert u.is_zero()


def test_sine_stream_matches_analytic_curl_second_order():
    errs = []
    for n in (32, 64, 128):
        m = build_mesh(n)
        u = make_velocity(m, StreamSpec("sine", 1.0))
        X, Y = m.meshgrid()
        ux_exact = np.pi * np.sin(np.pi * X) * np.cos(np.pi * Y)
        uy_exact = -np.pi * np.cos(np.pi * X) * np.sin(np.pi * Y)
        errs.append(max(np.abs(u.ux - ux_exact).max(), np.abs(u.uy - uy_exact).max()))
    assert errs[1] / errs[0] == pytest.approx(0.25, abs=0.05)
    assert errs[2] / errs[1] == pytest.approx(0.25, abs=0.05)


def test_discrete_divergence_is_machine_zero():
    # The centered differences on the odd extension commute exactly, so the
    # discrete divergence vanishes identically (not just O(h^2)).
    for n in (32, 64):
        for kind in ("poly", "sine"):
            u = make_velocity(build_mesh(n), StreamSpec(kind, 1.0))
            rep = check_field(u)
            assert rep.max_div <= 1e-12
            assert rep.max_un == 0.0


def test_velocity_rejects_nonvanishing_trace():
    m = build_mesh(16)
    with pytest.raises(ValueError):
        velocity_from_stream(GridFunction.constant(m, 1.0))


def test_velocity_scaled():
    m = build_mesh(16)
    u = make_velocity(m, StreamSpec("poly", 1.0))
    u2 = u.scaled(2.0)
    assert np.allclose(u2.ux, 2.0 * u.ux)


def test_check_field_zero():
    rep = check_field(zero_velocity(build_mesh(16)))
    assert rep.max_div == rep.max_un == rep.lorentz_N1_norm == 0.0


def test_check_field_norm_stability():
    vals = []
    for n in (64, 128):
        rep = check_field(make_velocity(build_mesh(n), StreamSpec("poly", 1.0)))
        vals.append(rep.lorentz_N1_norm)
        assert rep.l2p5_norm > 0.0
    assert abs(vals[1] / vals[0] - 1.0) <= 0.02


def test_convection_pairing_vanishes_for_interior_fields():
    # Sum over cells of (u . grad(phi)) G(phi) with G = 1 is the discrete
    # version of the vanishing convection pairing; it decays at least O(h^2).
    from deltalab.mesh import gradient

    residuals = []
    for n in (32, 64):
        m = build_mesh(n)
        u = make_velocity(m, StreamSpec("poly", 1.0))
        phi = GridFunction.sample(m, lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y))
        gx, gy = gradient(phi)
        residuals.append(abs(float(((u.ux * gx + u.uy * gy)).sum() * m.cell_measure)))
    assert residuals[0] <= 1e-3
    assert residuals[1] <= 0.35 * residuals[0] + 1e-14


# ---------------------------------------------------------------------------
# cutoffs
# ---------------------------------------------------------------------------

def test_cutoff_profile_values():
    m = build_mesh(64)
    eps = 0.25
    cut = make_cutoff(m, eps)
    d = m.delta
    vals = cut.values.values
    assert np.all(vals[d > eps] == 1.0)
    assert np.all(vals[d < eps / 2] == 0.0)
    # smoothstep midpoint: delta = 3 eps / 4 -> sigma = 1/2 -> 0.5
    mid = np.isclose(d, 0.75 * eps)
    if mid.any():
        assert np.allclose(vals[mid], 0.5)


def test_cutoff_midpoint_exact():
    # eps chosen so that a cell-center delta hits 3 eps/4 exactly
    m = build_mesh(32)
    eps = 5.5 / 24.0  # 3 eps/4 = 5.5 h
    cut = make_cutoff(m, eps)
    sel = np.isclose(m.delta, 0.75 * eps)
    assert sel.any()
    assert np.allclose(cut.values.values[sel], 0.5)


def test_cutoff_eps_validation():
    m = build_mesh(16)
    with pytest.raises(ValueError):
        make_cutoff(m, 2.0 * m.h)  # needs eps > 2h
    with pytest.raises(ValueError):
        make_cutoff(m, 0.5)


def test_cutoff_gradient_bound():
    # |grad h_eps| <= 3/eps: the smoothstep has slope <= 3/2 and the argument
    # has gradient 2/eps.
    from deltalab.mesh import gradient_magnitude

    m = build_mesh(128)
    for eps in (0.1, 0.2, 0.4):
        cut = make_cutoff(m, eps)
        gmax = gradient_magnitude(cut.values).max()
        assert gmax <= 3.0 / eps * 1.05


def test_cutoff_weighted_defect_decreases():
    # integral of |1 - h_eps| delta^r decreases monotonically as eps -> 0.
    m = build_mesh(128)
    r = 2.0
    defects = []
    for eps in (0.4, 0.2, 0.1, 0.05):
        cut = make_cutoff(m, eps)
        defects.append(integrate(abs(1.0 - cut.values), m.delta**r))
    assert all(a > b for a, b in zip(defects, defects[1:]))


# ---------------------------------------------------------------------------
# data families
# ---------------------------------------------------------------------------

def test_data_constant_and_sine():
    m = build_mesh(16)
    assert make_data(m, DataSpec("constant", value=2.5)).max() == 2.5
    s = make_data(m, DataSpec("sine", amplitude=3.0))
    assert s.max() <= 3.0
    assert s.min() >= 0.0


def test_data_bump_support_and_positivity():
    m = build_mesh(64)
    f = make_data(m, DataSpec("bump", cx=0.5, cy=0.5, width=0.2))
    X, Y = m.meshgrid()
    outside = (X - 0.5) ** 2 + (Y - 0.5) ** 2 >= 0.2**2
    assert np.all(f.values[outside] == 0.0)
    assert f.min() >= 0.0
    assert f.max() > 0.0


def test_data_boundary_bump_location():
    m = build_mesh(128)
    d = 1.0 / 8.0
    f = make_data(m, DataSpec("boundary_bump", distance=d))
    X, Y = m.meshgrid()
    assert np.all(f.values[Y > d + d / 2] == 0.0)
    assert integrate(f, m.delta) > 0.0


def test_data_indicator_measure():
    m = build_mesh(16)
    f = make_data(m, DataSpec("indicator", box=(0.0, 0.5, 0.0, 0.5)))
    assert integrate(f) == pytest.approx(0.25)


def test_data_spec_validation():
    with pytest.raises(ValueError):
        DataSpec("spiral")
    with pytest.raises(ValueError):
        StreamSpec("vortex")
