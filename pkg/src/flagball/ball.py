"""Fourier-Laguerre transform on the ball, radial translation and axisymmetric convolution.

Basis functions are Z_lmp(r, theta, phi) = K_p(r) Y_lm(theta, phi).  Samples
live on the product of the radial Gauss-Laguerre nodes and a sphere grid,
stored shell by shell.  Coefficients are stored p-major: flat index
p*L**2 + l**2 + l + m.
"""
from dataclasses import dataclass

import numpy as np

from . import radial, sphere
from .errors import DomainError, PreconditionError, ShapeError

__all__ = [
    "BallParams",
    "BallGrid",
    "FlagCoefficients",
    "BallSignal",
    "ball_grid",
    "flag_index",
    "flag_forward",
    "flag_inverse",
    "flag_eval",
    "ball_translate_radial",
    "ball_convolve_axisym",
    "random_coefficients",
    "energy",
]

AXISYM_TOL = 1e-12


@dataclass(frozen=True)
class BallParams:
    L: int
    P: int
    tau: float = 1.0
    scheme: str = "GL"

    def __post_init__(self):
        # reuse the component validation
        sp = sphere.SphereParams(self.L, self.scheme)
        rp = radial.RadialParams(self.P, self.tau)
        object.__setattr__(self, "L", sp.L)
        object.__setattr__(self, "scheme", sp.scheme)
        object.__setattr__(self, "P", rp.P)
        object.__setattr__(self, "tau", rp.tau)

    @property
    def sphere(self):
        return sphere.SphereParams(self.L, self.scheme)

    @property
    def radial(self):
        return radial.RadialParams(self.P, self.tau)

    @property
    def n_coefficients(self):
        return self.P * self.L**2

    @property
    def n_samples(self):
        return self.P * sphere.n_samples(self.sphere)

    def with_bandlimits(self, L, P):
        return BallParams(L, P, self.tau, self.scheme)


@dataclass(frozen=True, eq=False)
class BallGrid:
    params: BallParams
    radial: radial.RadialQuadrature
    sphere: sphere.SphereGrid

    @property
    def size(self):
        return self.params.n_samples

    def points(self):
        """(r, theta, phi) of every sample in storage order."""
        theta, phi = self.sphere.points()
        n = theta.size
        r = np.repeat(self.radial.nodes, n)
        return r, np.tile(theta, self.params.P), np.tile(phi, self.params.P)

    def sample_weights(self):
        """Product quadrature weights; exact for products of band-limited signals on the GL grid."""
        return np.outer(self.radial.sample_weights, self.sphere.sample_weights()).ravel()


@dataclass(frozen=True, eq=False)
class FlagCoefficients:
    values: np.ndarray
    params: BallParams

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        n = self.params.n_coefficients
        if values.shape != (n,):
            raise ShapeError(f"expected {n} Fourier-Laguerre coefficients for {self.params}, got shape {values.shape}")
        object.__setattr__(self, "values", values)

    def as_array(self):
        """View of the coefficients with shape ``(P, L**2)``."""
        return self.values.reshape(self.params.P, self.params.L**2)

    def __getitem__(self, lmp):
        ell, m, p = lmp
        return self.values[flag_index(ell, m, p, self.params.L)]

    def resized(self, L, P):
        """Truncate or zero-pad to band-limits ``(L, P)``."""
        out = np.zeros((P, L * L), dtype=complex)
        Lc, Pc = min(L, self.params.L), min(P, self.params.P)
        out[:Pc, : Lc * Lc] = self.as_array()[:Pc, : Lc * Lc]
        return FlagCoefficients(out.ravel(), self.params.with_bandlimits(L, P))


@dataclass(frozen=True, eq=False)
class BallSignal:
    values: np.ndarray
    params: BallParams

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        n = self.params.n_samples
        if values.shape != (n,):
            raise ShapeError(f"expected {n} samples for {self.params}, got shape {values.shape}")
        object.__setattr__(self, "values", values)

    def as_array(self):
        """View with shape ``(P, samples per shell)``."""
        return self.values.reshape(self.params.P, -1)


def flag_index(ell, m, p, L):
    return p * L * L + ell * ell + ell + m


def ball_grid(params):
    """Product grid of radial nodes and sphere samples; ``.size`` is the sample count N."""
    return BallGrid(params, radial.radial_quadrature(params.radial), sphere.sphere_grid(params.sphere))


def flag_forward(signal, order="angular"):
    """Fourier-Laguerre coefficients f_lmp = <f | Z_lmp> of a ball signal.

    ``order`` selects whether the angular transform per shell ("angular")
    or the radial transform per sample direction ("radial") runs first;
    both are exact and agree to rounding.
    """
    p = signal.params
    A = radial._analysis_matrix(p.P, p.tau)
    shells = signal.as_array()
    if order == "angular":
        harm = sphere._forward_array(shells, p.L, p.scheme)
        out = A @ harm
    elif order == "radial":
        out = sphere._forward_array(A @ shells, p.L, p.scheme)
    else:
        raise DomainError(f"order must be 'angular' or 'radial', got {order!r}")
    return FlagCoefficients(out.ravel(), p)


def flag_inverse(coeffs):
    """Samples of sum_lmp f_lmp Z_lmp on the ball grid."""
    p = coeffs.params
    S = radial._synthesis_matrix(p.P, p.tau)
    shell_harm = S.T @ coeffs.as_array()
    return BallSignal(sphere._inverse_array(shell_harm, p.L, p.scheme).ravel(), p)


def flag_eval(coeffs, r, theta, phi):
    """Evaluate the band-limited signal at arbitrary points (broadcast 1-d arrays)."""
    p = coeffs.params
    r, theta, phi = np.broadcast_arrays(
        np.atleast_1d(np.asarray(r, float)), np.atleast_1d(np.asarray(theta, float)), np.atleast_1d(np.asarray(phi, float))
    )
    K = radial.basis_table(p.P, r, p.tau)  # (P, n)
    Y = sphere.sph_harm_eval(p.L, theta, phi)  # (L^2, n)
    return np.einsum("pk,pn,kn->n", coeffs.as_array(), K, Y)


def ball_translate_radial(coeffs, s):
    """Radial translation on the ball: f_lmp -> K_p(s) f_lmp."""
    p = coeffs.params
    k = radial.basis_table(p.P, np.asarray(float(s)), p.tau)
    return FlagCoefficients((coeffs.as_array() * k[:, None]).ravel(), p)


def _convolution_factor(L):
    ells = sphere.ell_of_index(L)
    return np.sqrt(4 * np.pi / (2 * ells + 1))


def ball_convolve_axisym(f, h):
    """Axisymmetric convolution: (f * h)_lmp = sqrt(4 pi/(2l+1)) f_lmp conj(h_l0p)."""
    if f.params != h.params:
        raise ShapeError(f"parameter mismatch: {f.params} vs {h.params}")
    L = f.params.L
    harr = h.as_array()
    zonal = np.array([sphere.lm_index(ell, 0) for ell in range(L)])
    off = np.ones(L * L, bool)
    off[zonal] = False
    if off.any() and np.abs(harr[:, off]).max() > AXISYM_TOL:
        raise PreconditionError("kernel is not axisymmetric: coefficients with m != 0 exceed 1e-12")
    h_l0 = harr[:, zonal][:, sphere.ell_of_index(L)]  # (P, L^2), broadcast over m
    out = _convolution_factor(L)[None, :] * f.as_array() * np.conj(h_l0)
    return FlagCoefficients(out.ravel(), f.params)


def random_coefficients(params, seed=None):
    """Independent standard complex Gaussian coefficients (unit expected modulus squared)."""
    rng = np.random.default_rng(seed)
    n = params.n_coefficients
    values = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    return FlagCoefficients(values, params)


def energy(obj):
    """Squared L2 norm on the ball.

    For coefficients this is the Parseval sum; for a signal it is the
    quadrature sum, which is exact on the GL grid.  MW signals are first
    transformed, since the MW weights are exact only for band-limited
    integrands, not for |f|**2.
    """
    if isinstance(obj, FlagCoefficients):
        return float(np.sum(np.abs(obj.values) ** 2))
    if obj.params.scheme == "MW":
        return energy(flag_forward(obj))
    w = ball_grid(obj.params).sample_weights()
    return float(np.sum(w * np.abs(obj.values) ** 2))
