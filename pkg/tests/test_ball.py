import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import brute_force_ball_convolution, random_axisymmetric
from flagball import radial
from flagball.ball import (
    BallParams,
    BallSignal,
    FlagCoefficients,
    ball_convolve_axisym,
    ball_grid,
    ball_translate_radial,
    energy,
    flag_eval,
    flag_forward,
    flag_index,
    flag_inverse,
    random_coefficients,
)
from flagball.errors import DomainError, PreconditionError, ShapeError
from flagball.radial import RadialCoefficients, basis_table, radial_translate
from flagball.sphere import sph_harm_eval

SCHEMES = ["GL", "MW"]


class TestGrid:
    @pytest.mark.parametrize(
        "L, P, scheme, expected", [(4, 4, "MW", 88), (2, 2, "MW", 8), (8, 8, "MW", 8 * (15 * 7 + 1)), (4, 4, "GL", 112)]
    )
    def test_sample_counts(self, L, P, scheme, expected):
        params = BallParams(L, P, scheme=scheme)
        assert params.n_samples == expected
        assert ball_grid(params).size == expected

    def test_points(self):
        params = BallParams(3, 2, tau=0.5)
        r, theta, phi = ball_grid(params).points()
        assert r.shape == theta.shape == phi.shape == (params.n_samples,)
        nodes = radial.radial_quadrature(params.radial).nodes
        np.testing.assert_array_equal(np.unique(r), nodes)

    def test_params_validation(self):
        with pytest.raises(DomainError):
            BallParams(0, 4)
        with pytest.raises(DomainError):
            BallParams(4, 4, tau=-1.0)
        with pytest.raises(DomainError):
            BallParams(4, 4, scheme="XY")


class TestTransforms:
    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_lowest_basis_function(self, scheme):
        params = BallParams(4, 4, scheme=scheme)
        unit = np.zeros(params.n_coefficients, complex)
        unit[0] = 1
        signal = flag_inverse(FlagCoefficients(unit, params))
        nodes = radial.radial_quadrature(params.radial).nodes
        expected = np.repeat(basis_table(4, nodes)[0] / np.sqrt(4 * np.pi), signal.as_array().shape[1])
        np.testing.assert_allclose(signal.values, expected, rtol=1e-13)
        back = flag_forward(signal)
        assert np.abs(back.values - unit).max() <= 1e-12

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_zero(self, scheme):
        params = BallParams(5, 3, scheme=scheme)
        assert np.all(flag_forward(BallSignal(np.zeros(params.n_samples), params)).values == 0)
        assert np.all(flag_inverse(FlagCoefficients(np.zeros(params.n_coefficients), params)).values == 0)

    @pytest.mark.parametrize("scheme", SCHEMES)
    @pytest.mark.parametrize("L, P", [(16, 16), (7, 23), (24, 3)])
    def test_round_trip(self, scheme, L, P):
        c = random_coefficients(BallParams(L, P, tau=0.8, scheme=scheme), seed=L + P)
        back = flag_forward(flag_inverse(c))
        assert np.abs(back.values - c.values).max() <= 1e-10

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_orders_agree(self, scheme):
        signal = flag_inverse(random_coefficients(BallParams(12, 10, scheme=scheme), seed=4))
        a = flag_forward(signal, order="angular")
        b = flag_forward(signal, order="radial")
        assert np.abs(a.values - b.values).max() <= 1e-12
        with pytest.raises(DomainError):
            flag_forward(signal, order="diagonal")

    @pytest.mark.parametrize("L, P", [(1, 1), (3, 5), (8, 8)])
    def test_orthonormal_exhaustive(self, L, P):
        params = BallParams(L, P)
        grid = ball_grid(params)
        r, theta, phi = grid.points()
        Z = (basis_table(P, r)[:, None, :] * sph_harm_eval(L, theta, phi)[None, :, :]).reshape(P * L * L, -1)
        gram = (Z * grid.sample_weights()) @ Z.conj().T
        assert np.abs(gram - np.eye(P * L * L)).max() <= 1e-12

    def test_orthonormal_random_pairs(self):
        params = BallParams(32, 32)
        grid = ball_grid(params)
        rng = np.random.default_rng(8)
        w = grid.sample_weights()
        for _ in range(6):
            a, b = rng.integers(params.n_coefficients, size=2)
            za = np.zeros(params.n_coefficients, complex)
            zb = np.zeros(params.n_coefficients, complex)
            za[a] = zb[b] = 1
            sa = flag_inverse(FlagCoefficients(za, params)).values
            sb = flag_inverse(FlagCoefficients(zb, params)).values
            assert abs(np.sum(w * sa * np.conj(sb)) - (a == b)) <= 1e-12
            assert abs(np.sum(w * sa * np.conj(sa)) - 1) <= 1e-12

    @pytest.mark.parametrize("scheme", SCHEMES)
    def test_parseval(self, scheme):
        c = random_coefficients(BallParams(16, 12, scheme=scheme), seed=9)
        assert energy(flag_inverse(c)) == pytest.approx(energy(c), rel=1e-10)

    def test_eval_matches_grid(self):
        c = random_coefficients(BallParams(6, 5, tau=1.3), seed=2)
        grid = ball_grid(c.params)
        pts = grid.points()
        idx = np.arange(0, grid.size, 17)
        got = flag_eval(c, *(a[idx] for a in pts))
        np.testing.assert_allclose(got, flag_inverse(c).values[idx], rtol=1e-12, atol=1e-13)

    @settings(max_examples=20, deadline=None)
    @given(
        L=st.integers(1, 12),
        P=st.integers(1, 12),
        tau=st.floats(0.2, 4.0),
        scheme=st.sampled_from(SCHEMES),
        seed=st.integers(0, 2**32 - 1),
    )
    def test_round_trip_property(self, L, P, tau, scheme, seed):
        c = random_coefficients(BallParams(L, P, tau, scheme), seed)
        assert np.abs(flag_forward(flag_inverse(c)).values - c.values).max() <= 1e-11


class TestContainers:
    def test_indexing(self):
        params = BallParams(4, 3)
        c = random_coefficients(params, seed=1)
        assert c[2, -1, 1] == c.values[1 * 16 + 4 + 2 - 1]
        assert flag_index(2, -1, 1, 4) == 21
        assert c.as_array().shape == (3, 16)

    def test_resized(self):
        c = random_coefficients(BallParams(4, 3), seed=1)
        big = c.resized(6, 5)
        assert big.params.L == 6 and big.params.P == 5
        assert big[3, 2, 2] == c[3, 2, 2] and big[5, 0, 4] == 0
        np.testing.assert_array_equal(big.resized(4, 3).values, c.values)

    def test_shape_errors(self):
        params = BallParams(4, 3)
        with pytest.raises(ShapeError):
            FlagCoefficients(np.zeros(47), params)
        with pytest.raises(ShapeError):
            BallSignal(np.zeros(params.n_samples + 1), params)

    def test_random_is_seeded(self):
        params = BallParams(5, 5)
        np.testing.assert_array_equal(random_coefficients(params, 3).values, random_coefficients(params, 3).values)
        assert not np.array_equal(random_coefficients(params, 3).values, random_coefficients(params, 4).values)


class TestTranslation:
    def test_zero(self):
        params = BallParams(4, 4)
        z = FlagCoefficients(np.zeros(params.n_coefficients), params)
        assert np.all(ball_translate_radial(z, 0.3).values == 0)

    def test_matches_radial_translation_per_slice(self):
        c = random_coefficients(BallParams(5, 9, tau=0.7), seed=6)
        moved = ball_translate_radial(c, 0.45)
        for lm in range(25):
            col = RadialCoefficients(c.as_array()[:, lm], c.params.radial)
            np.testing.assert_array_equal(moved.as_array()[:, lm], radial_translate(col, 0.45).values)

    def test_negative_shift(self):
        with pytest.raises(DomainError):
            ball_translate_radial(random_coefficients(BallParams(2, 2), 0), -0.5)


class TestConvolution:
    def test_single_radial_index_filter(self):
        params = BallParams(6, 5)
        f = random_coefficients(params, seed=1)
        h = np.zeros((5, 36))
        ells = np.arange(6)
        h[2, ells * ells + ells] = np.sqrt((2 * ells + 1) / (4 * np.pi))
        out = ball_convolve_axisym(f, FlagCoefficients(h.ravel(), params)).as_array()
        expected = np.zeros_like(out)
        expected[2] = f.as_array()[2]
        np.testing.assert_allclose(out, expected, rtol=1e-15, atol=0)

    def test_zero(self):
        params = BallParams(4, 4)
        f = random_coefficients(params, seed=1)
        zero = FlagCoefficients(np.zeros(params.n_coefficients), params)
        assert np.all(ball_convolve_axisym(f, zero).values == 0)
        h = FlagCoefficients(random_axisymmetric(params, 2), params)
        assert np.all(ball_convolve_axisym(zero, h).values == 0)

    def test_matches_brute_force(self):
        params = BallParams(8, 8, tau=0.25)
        f = random_coefficients(params, seed=21)
        h = FlagCoefficients(random_axisymmetric(params, 22), params)
        rng = np.random.default_rng(23)
        n = 24
        r = rng.uniform(0, 3.0, n)
        theta = rng.uniform(0, np.pi, n)
        phi = rng.uniform(0, 2 * np.pi, n)
        got = flag_eval(ball_convolve_axisym(f, h), r, theta, phi)
        want = brute_force_ball_convolution(f, h, r, theta, phi)
        assert np.abs(got - want).max() <= 1e-10

    def test_axisymmetric_inputs_give_axisymmetric_output(self):
        params = BallParams(8, 6)
        f = FlagCoefficients(random_axisymmetric(params, 1), params)
        h = FlagCoefficients(random_axisymmetric(params, 2), params)
        out = ball_convolve_axisym(f, h).as_array()
        ells = np.arange(8)
        off = np.ones(64, bool)
        off[ells * ells + ells] = False
        assert np.abs(out[:, off]).max() <= 1e-14

    def test_non_axisymmetric_kernel_rejected(self):
        params = BallParams(4, 4)
        f = random_coefficients(params, seed=1)
        with pytest.raises(PreconditionError):
            ball_convolve_axisym(f, random_coefficients(params, seed=2))

    def test_parameter_mismatch(self):
        f = random_coefficients(BallParams(4, 4), seed=1)
        h = FlagCoefficients(random_axisymmetric(BallParams(4, 5), 2), BallParams(4, 5))
        with pytest.raises(ShapeError):
            ball_convolve_axisym(f, h)
