"""Spherical Laguerre analysis on the radial half-line.

The orthonormal radial basis is

    K_p(r) = sqrt(p!/(p+2)!) * exp(-r/(2 tau)) / sqrt(tau**3) * L_p^(2)(r/tau)

with respect to the measure r**2 dr.  A P-point generalised Gauss-Laguerre
rule (weight x**2 exp(-x)) integrates products of band-limited functions
exactly, which gives a sampling theorem on the radial line.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError, NumericError, ShapeError

__all__ = [
    "RadialParams",
    "RadialQuadrature",
    "RadialCoefficients",
    "RadialSamples",
    "laguerre_eval",
    "basis_eval",
    "basis_table",
    "radial_quadrature",
    "radial_forward",
    "radial_inverse",
    "radial_translate",
    "radial_dirac",
    "radial_convolve",
    "tau_for_radius",
]

ALPHA = 2
_RESCALE_BITS = 300
_RESCALE_LIMIT = 2.0**_RESCALE_BITS


@dataclass(frozen=True)
class RadialParams:
    """Radial band-limit ``P`` and scale factor ``tau``."""

    P: int
    tau: float = 1.0

    def __post_init__(self):
        if int(self.P) != self.P or self.P < 1:
            raise DomainError(f"radial band-limit P must be a positive integer, got {self.P!r}")
        if not np.isfinite(self.tau) or self.tau <= 0:
            raise DomainError(f"tau must be positive and finite, got {self.tau!r}")
        object.__setattr__(self, "P", int(self.P))
        object.__setattr__(self, "tau", float(self.tau))


@dataclass(frozen=True, eq=False)
class RadialQuadrature:
    """Gauss-Laguerre nodes on R+ for a given :class:`RadialParams`.

    ``weights`` are the generalised Gauss-Laguerre weights for
    x**2 exp(-x), mapped to r = tau*x (i.e. multiplied by tau**3), so that
    ``sum(weights * q(nodes))`` equals the integral of r**2 exp(-r/tau) q(r)
    for polynomials q of degree < 2P.

    ``sample_weights`` absorb the exponential, ``weights * exp(nodes/tau)``,
    and are the ones to use on raw samples of band-limited functions:
    ``sum(sample_weights * f * g)`` is the exact integral of r**2 f g.
    They are computed directly (not through the exponential) so they stay
    finite at large P.
    """

    nodes: np.ndarray
    weights: np.ndarray
    sample_weights: np.ndarray
    params: RadialParams


@dataclass(frozen=True, eq=False)
class RadialCoefficients:
    values: np.ndarray
    params: RadialParams

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.params.P,):
            raise ShapeError(f"expected {self.params.P} radial coefficients, got shape {values.shape}")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True, eq=False)
class RadialSamples:
    """Function values at the nodes of ``radial_quadrature(params)``."""

    values: np.ndarray
    params: RadialParams

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.params.P,):
            raise ShapeError(f"expected {self.params.P} radial samples, got shape {values.shape}")
        object.__setattr__(self, "values", values)


def _check_finite_nonneg(x, name):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} must be finite")
    if np.any(x < 0):
        raise DomainError(f"{name} must be non-negative")
    return x


def laguerre_eval(p, x):
    """Generalised Laguerre polynomial L_p^(2)(x) by three-term recurrence."""
    if int(p) != p or p < 0:
        raise DomainError(f"degree must be a non-negative integer, got {p!r}")
    x = _check_finite_nonneg(x, "x")
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(int(p)):
        prev, cur = cur, ((2 * k + ALPHA + 1 - x) * cur - (k + ALPHA) * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def _damped_laguerre_table(P, x):
    """Rows k = 0..P-1 of exp(-x/2) * L_k^(2)(x).

    The exponential seeds the recurrence as mantissa * 2**e, and the
    running pair is renormalised whenever it grows past 2**300 so that
    neither the polynomial nor the exponential over/underflows on its own.
    """
    x = np.asarray(x, dtype=float)
    log2_seed = -x / (2 * np.log(2))
    exponent = np.floor(log2_seed)
    prev = np.zeros_like(x)
    cur = np.exp2(log2_seed - exponent)
    exponent = exponent.astype(np.int64)
    out = np.empty((P,) + x.shape)
    out[0] = np.ldexp(cur, exponent)
    for k in range(P - 1):
        prev, cur = cur, ((2 * k + ALPHA + 1 - x) * cur - (k + ALPHA) * prev) / (k + 1)
        big = np.abs(cur) > _RESCALE_LIMIT
        if np.any(big):
            cur = np.where(big, np.ldexp(cur, -_RESCALE_BITS), cur)
            prev = np.where(big, np.ldexp(prev, -_RESCALE_BITS), prev)
            exponent = exponent + _RESCALE_BITS * big
        out[k + 1] = np.ldexp(cur, exponent)
    return out


def _norms(P, tau):
    p = np.arange(P)
    # p!/(p+2)! without factorials
    return np.sqrt(1.0 / ((p + 1.0) * (p + 2.0))) / tau**1.5


def basis_table(P, r, tau=1.0):
    """K_p(r) for p = 0..P-1 at every radius; shape ``(P,) + r.shape``."""
    r = _check_finite_nonneg(r, "r")
    if not np.isfinite(tau) or tau <= 0:
        raise DomainError(f"tau must be positive and finite, got {tau!r}")
    table = _damped_laguerre_table(P, r / tau)
    return table * _norms(P, tau).reshape((P,) + (1,) * r.ndim)


def basis_eval(p, r, tau=1.0):
    """Normalised spherical Laguerre basis function K_p(r)."""
    if int(p) != p or p < 0:
        raise DomainError(f"degree must be a non-negative integer, got {p!r}")
    out = basis_table(int(p) + 1, r, tau)[-1]
    return out if out.ndim else float(out)


def _laguerre_with_derivative(P, x):
    """exp(-x/2)-scaled L_P^(2)(x) and its x-derivative (same scaling)."""
    table = _damped_laguerre_table(P + 1, x)
    lp, lpm1 = table[P], table[P - 1]
    # x L_n' = n L_n - (n + alpha) L_{n-1}
    return lp, (P * lp - (P + ALPHA) * lpm1) / x


def _gauss_laguerre_nodes(P, tol=1e-10):
    """Golub-Welsch eigenvalues of the Jacobi matrix, then one Newton polish.

    The recurrence evaluates L_P near the smallest nodes with relative
    noise around 1e-13 at P ~ 256, so further Newton steps only wander;
    ``tol`` bounds the relative size of the follow-up correction.
    """
    k = np.arange(P)
    diag = 2.0 * k + ALPHA + 1
    off = np.sqrt(k[1:] * (k[1:] + float(ALPHA)))
    x = np.sort(eigh_tridiagonal(diag, off, eigvals_only=True))
    val, der = _laguerre_with_derivative(P, x)
    x = x - val / der
    val, der = _laguerre_with_derivative(P, x)
    resid = np.abs(val / der) / x
    worst = int(np.nanargmax(np.where(np.isfinite(resid), resid, np.inf)))
    if not np.isfinite(resid[worst]) or resid[worst] > tol:
        raise NumericError(
            f"Gauss-Laguerre node {worst} of P={P} did not converge (relative Newton residual {resid[worst]:.3e})"
        )
    return x


@lru_cache(maxsize=64)
def _quadrature_cached(P, tau):
    x = _gauss_laguerre_nodes(P)
    if np.any(np.diff(x) <= 0) or x[0] <= 0:
        raise NumericError(f"Gauss-Laguerre nodes for P={P} are not strictly increasing")
    K = _damped_laguerre_table(P, x) * _norms(P, 1.0)[:, None]
    # Christoffel numbers of the orthonormal system
    sample_w = 1.0 / np.einsum("pi,pi->i", K, K)
    weights = np.exp(np.log(sample_w) - x)
    nodes = tau * x
    for a in (nodes, weights, sample_w):
        a.setflags(write=False)
    return nodes, weights * tau**3, sample_w * tau**3


def radial_quadrature(params):
    """Exact radial quadrature rule for band-limit ``params.P``."""
    nodes, weights, sample_w = _quadrature_cached(params.P, params.tau)
    return RadialQuadrature(nodes, weights, sample_w, params)


def tau_for_radius(P, R):
    """Scale factor placing the largest of the ``P`` nodes at radius ``R``."""
    if not np.isfinite(R) or R <= 0:
        raise DomainError(f"radius must be positive, got {R!r}")
    nodes, _, _ = _quadrature_cached(int(P), 1.0)
    return float(R / nodes[-1])


@lru_cache(maxsize=64)
def _analysis_matrix(P, tau):
    """``A[p, i] = sample_weight_i * K_p(node_i)``; forward transform is ``A @ samples``."""
    nodes, _, sample_w = _quadrature_cached(P, tau)
    A = basis_table(P, nodes, tau) * sample_w[None, :]
    A.setflags(write=False)
    return A


@lru_cache(maxsize=64)
def _synthesis_matrix(P, tau):
    nodes, _, _ = _quadrature_cached(P, tau)
    S = basis_table(P, nodes, tau)
    S.setflags(write=False)
    return S


def radial_forward(samples):
    """Coefficients f_p = <f | K_p> from samples at the quadrature nodes."""
    p = samples.params
    return RadialCoefficients(_analysis_matrix(p.P, p.tau) @ samples.values, p)


def radial_inverse(coeffs, radii=None):
    """Evaluate sum_p f_p K_p(r) at ``radii`` (default: the quadrature nodes)."""
    p = coeffs.params
    if radii is None:
        return _synthesis_matrix(p.P, p.tau).T @ coeffs.values
    radii = _check_finite_nonneg(radii, "radius")
    return np.tensordot(coeffs.values, basis_table(p.P, radii, p.tau), axes=(0, 0))


def radial_translate(coeffs, s):
    """Radial translation by ``s``: (T_s f)_p = K_p(s) f_p.

    Translation by zero is not the identity; it multiplies by K_p(0).
    """
    p = coeffs.params
    return RadialCoefficients(basis_table(p.P, np.asarray(float(s)), p.tau) * coeffs.values, p)


def radial_dirac(s, params):
    """Band-limited Dirac delta at radius ``s``: coefficients K_p(s), p < P."""
    return RadialCoefficients(basis_table(params.P, np.asarray(float(s)), params.tau).astype(complex), params)


def radial_convolve(f, h):
    """Radial convolution in harmonic space, (f * h)_p = f_p h_p."""
    if f.params != h.params:
        raise ShapeError(f"parameter mismatch: {f.params} vs {h.params}")
    return RadialCoefficients(f.values * h.values, f.params)
