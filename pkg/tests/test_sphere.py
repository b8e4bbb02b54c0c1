import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from flagball.errors import DomainError, ShapeError
from flagball.sphere import (
    SphereCoefficients,
    SphereParams,
    SphereSamples,
    legendre_table,
    lm_index,
    n_samples,
    sph_harm_eval,
    sht_forward,
    sht_inverse,
    sphere_convolve_axisym,
    sphere_grid,
)

SCHEMES = ["GL", "MW"]


def random_sphere_coeffs(L, scheme="GL", seed=0):
    rng = np.random.default_rng(seed)
    n = L * L
    return SphereCoefficients(rng.standard_normal(n) + 1j * rng.standard_normal(n), SphereParams(L, scheme))


class TestGrid:
    def test_gl_single_point(self):
        g = sphere_grid(SphereParams(1, "GL"))
        assert g.size == 1
        np.testing.assert_allclose(g.colatitudes, [np.pi / 2], rtol=1e-15)
        np.testing.assert_allclose(g.sample_weights(), [4 * np.pi], rtol=1e-15)

    @pytest.mark.parametrize("scheme, L, expected", [("GL", 4, 28), ("MW", 4, 22), ("MW", 2, 4), ("MW", 1, 1)])
    def test_sample_counts(self, scheme, L, expected):
        params = SphereParams(L, scheme)
        assert n_samples(params) == expected
        assert sphere_grid(params).size == expected

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_points_and_weights(self, scheme):
        g = sphere_grid(SphereParams(6, scheme))
        theta, phi = g.points()
        assert theta.shape == phi.shape == (g.size,)
        assert np.all((theta >= 0) & (theta <= np.pi)) and np.all((phi >= 0) & (phi < 2 * np.pi))
        # both rules integrate band-limited functions exactly: the area of the sphere
        assert g.sample_weights().sum() == pytest.approx(4 * np.pi, rel=1e-13)

    def test_mw_layout(self):
        g = sphere_grid(SphereParams(5, "MW"))
        np.testing.assert_allclose(g.colatitudes, np.pi * (2 * np.arange(5) + 1) / 9, rtol=1e-15)
        assert list(g.nphi) == [9, 9, 9, 9, 1]

    def test_gl_weights_match_reference(self):
        # Gauss-Legendre weights in cos(theta), times 2 pi / (2L-1) per sample
        L = 20
        x, w = special.roots_legendre(L)
        g = sphere_grid(SphereParams(L))
        np.testing.assert_allclose(np.sort(np.cos(g.colatitudes)), np.sort(x), atol=1e-14)
        np.testing.assert_allclose(np.sort(g.weights), np.sort(w * 2 * np.pi / (2 * L - 1)), rtol=1e-12)

    def test_params_validation(self):
        with pytest.raises(DomainError):
            SphereParams(0)
        with pytest.raises(DomainError):
            SphereParams(4, "HEALPix")
        assert SphereParams(4, "mw").scheme == "MW"


class TestHarmonics:
    def test_matches_scipy(self):
        L = 12
        rng = np.random.default_rng(1)
        theta = rng.uniform(0, np.pi, 15)
        phi = rng.uniform(0, 2 * np.pi, 15)
        Y = sph_harm_eval(L, theta, phi)
        for ell in range(L):
            for m in range(-ell, ell + 1):
                want = special.sph_harm_y(ell, m, theta, phi)
                np.testing.assert_allclose(Y[lm_index(ell, m)], want, rtol=1e-12, atol=1e-13)

    @pytest.mark.parametrize("L, rtol", [(64, 1e-12), (2048, 1e-9)])
    def test_addition_theorem_at_large_degree(self, L, rtol):
        # sum_m |Y_lm|^2 = (2l+1)/(4 pi) for every l and theta
        theta = np.array([1e-3, 0.4, np.pi / 2, 2.9, np.pi - 1e-6])
        lam = legendre_table(L, theta)  # (m, l, t)
        assert np.all(np.isfinite(lam))
        total = lam[0] ** 2 + 2 * np.sum(lam[1:] ** 2, axis=0)
        ells = np.arange(L)[:, None]
        np.testing.assert_allclose(total, np.broadcast_to((2 * ells + 1) / (4 * np.pi), total.shape), rtol=rtol)

    def test_poles(self):
        lam = legendre_table(10, np.array([0.0, np.pi]))
        ells = np.arange(10)
        np.testing.assert_allclose(lam[0, :, 0], np.sqrt((2 * ells + 1) / (4 * np.pi)), rtol=1e-14)
        np.testing.assert_allclose(lam[0, :, 1], (-1.0) ** ells * np.sqrt((2 * ells + 1) / (4 * np.pi)), rtol=1e-14)
        assert np.abs(lam[1:]).max() <= 1e-15


class TestTransforms:
    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_constant(self, scheme):
        params = SphereParams(8, scheme)
        c = sht_forward(SphereSamples(np.ones(n_samples(params)), params))
        expected = np.zeros(64)
        expected[0] = np.sqrt(4 * np.pi)
        np.testing.assert_allclose(c.values, expected, atol=1e-12)
        unit = SphereCoefficients(expected, params)
        np.testing.assert_allclose(sht_inverse(unit).values, 1.0, atol=1e-13)

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_single_harmonic(self, scheme):
        params = SphereParams(6, scheme)
        theta, phi = sphere_grid(params).points()
        y21 = special.sph_harm_y(2, 1, theta, phi)
        c = sht_forward(y21, params)
        expected = np.zeros(36, complex)
        expected[lm_index(2, 1)] = 1
        assert np.abs(c.values - expected).max() <= 1e-12

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_zero(self, scheme):
        params = SphereParams(5, scheme)
        assert np.all(sht_inverse(SphereCoefficients(np.zeros(25), params)).values == 0)

    @pytest.mark.parametrize("scheme, L", [("GL", 16), ("GL", 32), ("GL", 128), ("MW", 16), ("MW", 32), ("MW", 64)])
    def test_round_trip(self, scheme, L):
        c = random_sphere_coeffs(L, scheme, seed=L)
        back = sht_forward(sht_inverse(c))
        assert np.abs(back.values - c.values).max() <= 1e-12

    @pytest.mark.parametrize("L", [1, 2, 8, 32])
    def test_gl_quadrature_exact_for_products(self, L):
        params = SphereParams(L)
        g = sphere_grid(params)
        Y = sph_harm_eval(L, *g.points())
        gram = (Y * g.sample_weights()) @ Y.conj().T
        assert np.abs(gram - np.eye(L * L)).max() <= 1e-12

    @pytest.mark.parametrize("L", [2, 8, 32])
    def test_mw_transform_orthonormal(self, L):
        # MW weights are not product-exact; the transform itself is exact on sampled harmonics
        params = SphereParams(L, "MW")
        Y = sph_harm_eval(L, *sphere_grid(params).points())
        coeffs = np.array([sht_forward(row, params).values for row in Y])
        assert np.abs(coeffs - np.eye(L * L)).max() <= 1e-12

    def test_parseval(self):
        c = random_sphere_coeffs(24, seed=5)
        samples = sht_inverse(c).values
        w = sphere_grid(c.params).sample_weights()
        assert np.sum(w * np.abs(samples) ** 2) == pytest.approx(np.sum(np.abs(c.values) ** 2), rel=1e-12)

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_reality_fast_path(self, scheme):
        params = SphereParams(20, scheme)
        rng = np.random.default_rng(3)
        real = sht_inverse(random_sphere_coeffs(20, scheme, 1)).values.real + rng.standard_normal(n_samples(params))
        full = sht_forward(real, params)
        fast = sht_forward(real, params, reality=True)
        assert np.abs(full.values - fast.values).max() <= 1e-14

    def test_inverse_on_other_grid(self):
        c = random_sphere_coeffs(10, "GL", 2)
        mw = SphereParams(10, "MW")
        back = sht_forward(sht_inverse(c, mw))
        assert np.abs(back.values - c.values).max() <= 1e-12

    def test_shape_errors(self):
        with pytest.raises(ShapeError):
            SphereCoefficients(np.zeros(10), SphereParams(4))
        with pytest.raises(ShapeError):
            sht_forward(np.zeros(5), SphereParams(4))
        with pytest.raises(ShapeError):
            sht_forward(np.zeros(28))
        with pytest.raises(ShapeError):
            sht_inverse(random_sphere_coeffs(4), SphereParams(5))

    @settings(max_examples=25, deadline=None)
    @given(L=st.integers(1, 24), scheme=st.sampled_from(SCHEMES), seed=st.integers(0, 2**32 - 1))
    def test_round_trip_property(self, L, scheme, seed):
        c = random_sphere_coeffs(L, scheme, seed)
        back = sht_forward(sht_inverse(c))
        assert np.abs(back.values - c.values).max() <= 1e-12


class TestConvolution:
    def test_identity_kernel(self):
        f = random_sphere_coeffs(8)
        h = np.sqrt((2 * np.arange(8) + 1) / (4 * np.pi))
        np.testing.assert_allclose(sphere_convolve_axisym(f, h).values, f.values, rtol=1e-15)

    def test_zero_kernel(self):
        f = random_sphere_coeffs(8)
        assert np.all(sphere_convolve_axisym(f, np.zeros(8)).values == 0)

    def test_matches_rotated_inner_product(self):
        # (f * h)(w) = integral of f(w') conj(h rotated to w) over the sphere,
        # with the rotated kernel built from Legendre polynomials of w.w'
        L = 8
        f = random_sphere_coeffs(L, seed=11)
        rng = np.random.default_rng(12)
        h = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        g = sphere_grid(f.params)
        theta, phi = g.points()
        fs = sht_inverse(f).values
        w = g.sample_weights()
        out = sphere_convolve_axisym(f, h)
        pts_t = rng.uniform(0, np.pi, 20)
        pts_p = rng.uniform(0, 2 * np.pi, 20)
        got = out.values @ sph_harm_eval(L, pts_t, pts_p)
        ells = np.arange(L)
        for k in range(20):
            cosg = np.cos(pts_t[k]) * np.cos(theta) + np.sin(pts_t[k]) * np.sin(theta) * np.cos(phi - pts_p[k])
            rotated = np.sum(h[:, None] * np.sqrt((2 * ells[:, None] + 1) / (4 * np.pi)) * special.eval_legendre(ells[:, None], cosg), axis=0)
            want = np.sum(w * fs * np.conj(rotated))
            assert abs(got[k] - want) <= 1e-10

    def test_kernel_shape(self):
        with pytest.raises(ShapeError):
            sphere_convolve_axisym(random_sphere_coeffs(4), np.zeros(3))
