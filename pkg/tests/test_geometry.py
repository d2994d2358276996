import math

import numpy as np
import pytest

from electrovac import (
    DomainError,
    RadialProfile,
    RNParameters,
    SphericalStaticData,
    constant_profile,
    contracted_gauss_residual,
    flat_data,
    grad_norm,
    hessian_radial,
    horizon_gradient_limit,
    laplacian_radial,
    level_set_geometry,
    ricci_radial,
    richardson_limit,
    rn_data,
    rn_horizon,
    scalar_curvature,
    scalar_curvature_d1,
    surface_gravity,
)


def round_sphere_data(n, L):
    """Polar-coordinate round sphere of radius L: A = 1/(1 - r^2/L^2), C = r.

    Every sectional curvature equals 1/L^2, so Ric = (n-1)/L^2 g and
    R = n(n-1)/L^2. Independent of the warped-product formulas under test.
    """
    L2 = L * L

    def a(r):
        return 1.0 / (1.0 - r * r / L2)

    def a1(r):
        return (2.0 * r / L2) / (1.0 - r * r / L2) ** 2

    def a2(r):
        w = 1.0 - r * r / L2
        return (2.0 / L2) / w**2 + (8.0 * r * r / (L2 * L2)) / w**3

    return SphericalStaticData(
        n=n,
        lam=0.0,
        A=RadialProfile(a, a1, a2, domain=(0.0, L)),
        V=constant_profile(1.0, domain=(0.0, L)),
        Emag=constant_profile(0.0, domain=(0.0, L)),
    )


def test_flat_space_curvature_vanishes():
    data = flat_data(3)
    rs = np.geomspace(0.2, 50.0, 40)
    ric = ricci_radial(data, rs)
    assert np.allclose(ric.radial, 0.0, atol=1e-15)
    assert np.allclose(ric.tangential, 0.0, atol=1e-15)
    assert np.allclose(scalar_curvature(data, rs), 0.0, atol=1e-15)


def test_round_sphere_curvature_exact():
    for n, L in [(3, 2.0), (4, 1.5), (5, 3.0)]:
        data = round_sphere_data(n, L)
        rs = np.linspace(0.1 * L, 0.9 * L, 25)
        ric = ricci_radial(data, rs)
        assert np.allclose(ric.radial, (n - 1) / L**2, rtol=1e-13)
        assert np.allclose(ric.tangential, (n - 1) / L**2, rtol=1e-13)
        assert np.allclose(scalar_curvature(data, rs), n * (n - 1) / L**2, rtol=1e-13)


def test_curvature_closed_form_matches_finite_difference():
    p = RNParameters(3, 1.0, 0.7)
    closed = rn_data(p)
    # same metric, derivatives by central differences only
    fd = SphericalStaticData(
        n=3, lam=0.0,
        A=RadialProfile(lambda r: np.asarray(closed.A(r)), domain=closed.A.domain),
        V=closed.V, Emag=closed.Emag, v_zeros=closed.v_zeros,
    )
    rs = np.geomspace(2.1, 40.0, 30)
    ric_c = ricci_radial(closed, rs)
    ric_f = ricci_radial(fd, rs)
    assert np.allclose(ric_c.radial, ric_f.radial, atol=2e-6)
    assert np.allclose(ric_c.tangential, ric_f.tangential, atol=2e-6)
    assert np.allclose(scalar_curvature(closed, rs), scalar_curvature(fd, rs), atol=5e-6)


def test_scalar_curvature_derivative_matches_difference_quotient():
    data = rn_data(RNParameters(4, 1.0, 0.4))
    rs = np.linspace(1.5, 6.0, 15)
    h = 1e-5
    fd = (scalar_curvature(data, rs + h) - scalar_curvature(data, rs - h)) / (2 * h)
    assert np.allclose(scalar_curvature_d1(data, rs), fd, atol=1e-6)


def test_hessian_of_r_squared_in_flat_space():
    data = flat_data(3)
    f = RadialProfile(lambda r: r**2, d1=lambda r: 2 * r, d2=lambda r: 2 * np.ones_like(r))
    rs = np.linspace(0.5, 10.0, 9)
    h = hessian_radial(data, f, rs)
    assert np.allclose(h.radial, 2.0, atol=1e-14)
    assert np.allclose(h.tangential, 2.0, atol=1e-14)
    assert np.allclose(laplacian_radial(data, f, rs), 6.0, atol=1e-13)
    assert np.allclose(grad_norm(data, f, rs) ** 2, 4 * rs**2, rtol=1e-14)


def test_laplacian_equals_hessian_trace():
    # the two are coded with different groupings; agreement is a consistency check
    for p in [RNParameters(3, 1.0, 0.0), RNParameters(3, 1.0, 0.9), RNParameters(5, 2.0, 1.3)]:
        data = rn_data(p)
        lo = data.domain[0]
        rs = np.geomspace(lo * 1.05 if lo > 0 else 0.5, 30.0, 50)
        h = hessian_radial(data, data.V, rs)
        tr = h.trace(data.n)
        lap = laplacian_radial(data, data.V, rs)
        assert np.allclose(tr, lap, rtol=0, atol=1e-12 * (1 + np.abs(lap).max()))


def test_level_set_geometry_flat():
    data = flat_data(4)
    g = level_set_geometry(data, 2.0)
    assert np.isclose(g.H, 3.0 / 2.0)
    assert np.isclose(g.B_tan, 1.0 / 2.0)
    assert np.isclose(g.R_S, 6.0 / 4.0)
    assert np.isclose(g.ric_nn, 0.0)


def test_level_set_mean_curvature_schwarzschild():
    data = rn_data(RNParameters(3, 1.0, 0.0))
    g = level_set_geometry(data, 3.0)
    # H = (n-1) sqrt(W) / r with W = 1 - 2/3
    assert np.isclose(g.H, 2.0 * math.sqrt(1.0 / 3.0) / 3.0, rtol=1e-14)
    assert np.isclose(g.R_S, 2.0 / 9.0, rtol=1e-14)


def test_contracted_gauss_residual_small():
    for p in [RNParameters(3, 1.0, 0.0), RNParameters(3, 1.0, 0.8), RNParameters(4, 1.5, 0.6)]:
        data = rn_data(p)
        rs = np.geomspace(data.domain[0] * 1.02, 25.0, 30)
        res = contracted_gauss_residual(data, rs)
        assert np.all(np.abs(res) < 1e-12)
    flat = flat_data(3)
    assert abs(contracted_gauss_residual(flat, 2.0)) < 1e-15


def test_richardson_limit_recovers_synthetic_limit():
    L, c1, c2 = 0.73, 2.1, -5.4
    hs = [1e-3 / 10.0**k for k in range(6)]
    samples = [L + c1 * h + c2 * h * h for h in hs]
    assert abs(richardson_limit(samples, ratio=10.0) - L) < 1e-14


def test_horizon_gradient_limit_matches_surface_gravity():
    for p in [RNParameters(3, 1.0, 0.0), RNParameters(3, 1.0, 0.5), RNParameters(4, 1.0, 0.3)]:
        data = rn_data(p)
        lim = horizon_gradient_limit(data, rn_horizon(p))
        assert np.isclose(lim, surface_gravity(p), rtol=1e-10)


def test_require_interior_respects_v_zero_margin():
    p = RNParameters(3, 1.0, 0.0)
    data = rn_data(p)
    with pytest.raises(DomainError):
        data.require_interior(2.0)
    with pytest.raises(DomainError):
        data.require_interior(2.0 + 1e-10)
    data.require_interior(2.0 + 1e-6)


def test_frame_tensor_helpers():
    from electrovac import FrameTensor2

    t = FrameTensor2(radial=np.array([1.0, -3.0]), tangential=np.array([2.0, 0.5]))
    assert np.allclose(t.trace(3), [5.0, -2.0])
    assert t.max_abs() == 3.0
