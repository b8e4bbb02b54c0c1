"""Exact spherical harmonic transforms on sampling-theorem grids.

Two grids are supported:

``GL``
    Gauss-Legendre colatitudes with 2L-1 equispaced longitudes per ring,
    L(2L-1) samples.  Products of band-limited functions are integrated
    exactly by the ring weights, so it serves as the reference quadrature.
``MW``
    The equiangular grid theta_t = pi(2t+1)/(2L-1), t < L, with a single
    sample at the south pole, (2L-1)(L-1)+1 samples.  Per ring and order m
    the longitudinal Fourier coefficient is a trigonometric polynomial of
    degree < L in theta once reflected onto [0, 2pi), so it is recovered
    exactly from the equiangular samples and resampled onto the
    Gauss-Legendre colatitudes before the Legendre projection.

Harmonics are orthonormal with the Condon-Shortley phase;
Y_lm(theta, phi) = lambda_lm(theta) exp(i m phi) and coefficient (l, m)
sits at flat index l**2 + l + m.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, ShapeError

__all__ = [
    "SCHEMES",
    "SphereParams",
    "SphereGrid",
    "SphereCoefficients",
    "SphereSamples",
    "sphere_grid",
    "n_samples",
    "lm_index",
    "ell_of_index",
    "legendre_table",
    "sph_harm_eval",
    "sht_forward",
    "sht_inverse",
    "sphere_convolve_axisym",
]

SCHEMES = ("GL", "MW")
_RESCALE_BITS = 300
_RESCALE_LIMIT = 2.0**_RESCALE_BITS


@dataclass(frozen=True)
class SphereParams:
    L: int
    scheme: str = "GL"

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 1:
            raise DomainError(f"angular band-limit L must be a positive integer, got {self.L!r}")
        scheme = str(self.scheme).upper()
        if scheme not in SCHEMES:
            raise DomainError(f"unknown sampling scheme {self.scheme!r}; expected one of {SCHEMES}")
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "scheme", scheme)


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Ring layout of a sphere grid.

    Samples are stored ring-major, longitude-minor.  ``weights`` holds one
    quadrature weight per sample on each ring (the same for every sample of
    a ring).  For MW these weights integrate band-limited functions
    (l < L) exactly but not their products.
    """

    params: SphereParams
    colatitudes: np.ndarray
    nphi: np.ndarray
    weights: np.ndarray

    @property
    def size(self):
        return int(self.nphi.sum())

    def longitudes(self, ring):
        n = int(self.nphi[ring])
        return 2 * np.pi * np.arange(n) / n

    def points(self):
        """Colatitude and longitude of every sample, in storage order."""
        theta = np.repeat(self.colatitudes, self.nphi)
        phi = np.concatenate([self.longitudes(t) for t in range(len(self.nphi))])
        return theta, phi

    def sample_weights(self):
        return np.repeat(self.weights, self.nphi)


@dataclass(frozen=True, eq=False)
class SphereCoefficients:
    values: np.ndarray
    params: SphereParams

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.params.L**2,):
            raise ShapeError(f"expected {self.params.L**2} harmonic coefficients, got shape {values.shape}")
        object.__setattr__(self, "values", values)


@dataclass(frozen=True, eq=False)
class SphereSamples:
    values: np.ndarray
    params: SphereParams

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        n = n_samples(self.params)
        if values.shape != (n,):
            raise ShapeError(f"expected {n} samples for {self.params}, got shape {values.shape}")
        object.__setattr__(self, "values", values)


def lm_index(ell, m):
    return ell * ell + ell + m


def ell_of_index(L):
    """Degree l of every flat index below L**2."""
    return np.repeat(np.arange(L), 2 * np.arange(L) + 1)


def _m_of_index(L):
    return np.concatenate([np.arange(-ell, ell + 1) for ell in range(L)]) if L else np.zeros(0, int)


def n_samples(params):
    L = params.L
    if params.scheme == "MW":
        return (2 * L - 1) * (L - 1) + 1
    return L * (2 * L - 1)


def legendre_table(L, theta):
    """lambda_lm(theta) for 0 <= m <= l < L, shape ``(L, L, ntheta)`` indexed [m, l, t].

    Entries with l < m are zero.  Computed by the normalised three-term
    recurrence in l, stepped for all orders at once; each sectoral seed
    sin(theta)**m is carried as mantissa * 2**e so high orders near the
    poles underflow to zero gracefully instead of poisoning the recurrence.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    x = np.cos(theta)
    nt = theta.size
    out = np.zeros((L, L, nt))
    with np.errstate(divide="ignore"):
        log2_sin = np.log2(np.abs(np.sin(theta)))
    # log2 of sqrt((2m+1)/(4 pi) * prod_{k<=m} (2k-1)/(2k)) * sin**m
    m = np.arange(L)
    k = np.arange(1, L)
    log2_prod = np.concatenate([[0.0], np.cumsum(np.log2((2 * k - 1) / (2 * k)))])
    log2_seed = np.repeat(0.5 * (np.log2((2 * m + 1) / (4 * np.pi)) + log2_prod)[:, None], nt, axis=1)
    log2_seed[1:] += m[1:, None] * log2_sin[None, :]
    finite = np.isfinite(log2_seed)
    safe = np.where(finite, log2_seed, 0.0)
    seed_exp = np.floor(safe)
    seed = np.where(finite, np.exp2(safe - seed_exp), 0.0) * ((-1.0) ** m)[:, None]
    seed_exp = seed_exp.astype(np.int64)

    # rows m < ell advance by the recurrence; row m = ell is seeded
    cur = np.zeros((L, nt))
    prev = np.zeros((L, nt))
    exponent = np.zeros((L, nt), dtype=np.int64)
    mf = m.astype(float)
    for ell in range(L):
        if ell:
            mm = mf[:ell]
            a = np.sqrt((4.0 * ell * ell - 1) / (ell * ell - mm * mm))[:, None]
            b = np.sqrt(((ell - 1.0) ** 2 - mm * mm) / (4.0 * (ell - 1) ** 2 - 1))[:, None]
            nxt = a * (x * cur[:ell] - b * prev[:ell])
            prev[:ell] = cur[:ell]
            cur[:ell] = nxt
            big = np.abs(nxt) > _RESCALE_LIMIT
            if np.any(big):
                cur[:ell] = np.where(big, np.ldexp(cur[:ell], -_RESCALE_BITS), cur[:ell])
                prev[:ell] = np.where(big, np.ldexp(prev[:ell], -_RESCALE_BITS), prev[:ell])
                exponent[:ell] += _RESCALE_BITS * big
        cur[ell] = seed[ell]
        exponent[ell] = seed_exp[ell]
        out[: ell + 1, ell] = np.ldexp(cur[: ell + 1], exponent[: ell + 1])
    return out


def sph_harm_eval(L, theta, phi):
    """Y_lm(theta, phi) for all l < L at the given points, shape ``(L**2, npoints)``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    lam = legendre_table(L, theta)
    ells = ell_of_index(L)
    ms = _m_of_index(L)
    absm = np.abs(ms)
    sign = np.where((ms < 0) & (absm % 2 == 1), -1.0, 1.0)
    return sign[:, None] * lam[absm, ells] * np.exp(1j * ms[:, None] * phi[None, :])


def _legendre_pair(n, theta):
    """P_n(cos theta) and P_{n-1}(cos theta), n >= 1.

    The Bonnet recurrence is run on differences D_k = P_k - P_{k-1} with
    u = 1 - cos(theta) = 2 sin(theta/2)**2, so no accuracy is lost to the
    rounding of cos(theta) near the north pole.
    """
    u = 2 * np.sin(theta / 2) ** 2
    prev, cur = np.ones_like(u), 1 - u
    diff = -u
    for k in range(1, n):
        diff = (k * diff - (2 * k + 1) * u * cur) / (k + 1)
        prev, cur = cur, cur + diff
    return cur, prev


@lru_cache(maxsize=32)
def _gl_rule(L):
    """Gauss-Legendre colatitudes (north to south) and weights.

    Newton's method runs in theta rather than x = cos(theta), and weights use
    w = 2 sin(theta)**2 / (L P_{L-1})**2, which keeps full relative accuracy
    for the rings nearest the poles.
    """
    if L == 1:
        return np.array([np.pi / 2]), np.array([2.0])
    k = np.arange(1, L // 2 + 1)
    theta = np.pi * (4 * k - 1) / (4 * L + 2)
    for _ in range(100):
        pl, plm1 = _legendre_pair(L, theta)
        dtheta = -L * (plm1 - np.cos(theta) * pl) / np.sin(theta)
        step = pl / dtheta
        theta = theta - step
        if np.all(np.abs(step) <= 2 * np.finfo(float).eps * theta):
            break
    _, plm1 = _legendre_pair(L, theta)
    w = 2 * np.sin(theta) ** 2 / (L * plm1) ** 2
    if L % 2:
        mid_p = _legendre_pair(L, np.array([np.pi / 2]))[1]
        theta = np.concatenate([theta, [np.pi / 2], np.pi - theta[::-1]])
        w = np.concatenate([w, 2 / (L * mid_p) ** 2, w[::-1]])
    else:
        theta = np.concatenate([theta, np.pi - theta[::-1]])
        w = np.concatenate([w, w[::-1]])
    return theta, w


def _mw_colatitudes(L):
    return np.pi * (2 * np.arange(L) + 1) / (2 * L - 1)


@lru_cache(maxsize=32)
def _mw_to_gl(L):
    """Exact resampling of per-order theta profiles from MW rings to GL rings.

    Returns matrices for even and odd m, shape ``(L, L)`` [gl ring, mw ring].
    """
    N = 2 * L - 1
    theta_gl, _ = _gl_rule(L)
    theta_ext = np.pi * (2 * np.arange(N) + 1) / N
    k = np.arange(-(L - 1), L)
    # trigonometric interpolation kernel on the extended circle
    M = np.real(np.exp(1j * np.outer(theta_gl, k)) @ np.exp(-1j * np.outer(k, theta_ext))) / N
    mats = []
    for parity in (1.0, -1.0):
        A = M[:, :L].copy()
        # reflected samples: theta_{2L-2-t} = 2 pi - theta_t for t < L-1
        A[:, : L - 1] += parity * M[:, L:][:, ::-1]
        mats.append(A)
    return mats[0], mats[1]


@lru_cache(maxsize=16)
def _plan(L, scheme):
    """Precomputed tables for one (L, scheme)."""
    if scheme == "GL":
        theta, w = _gl_rule(L)
        lam = legendre_table(L, theta)
        nphi = np.full(L, 2 * L - 1)
        weights = w * 2 * np.pi / (2 * L - 1)
        # analysis[m] maps F_m over rings to f_lm over l
        analysis = lam * (2 * np.pi * w)[None, None, :]
        synthesis = lam
    else:
        theta = _mw_colatitudes(L)
        theta_gl, w = _gl_rule(L)
        lam_gl = legendre_table(L, theta_gl) * (2 * np.pi * w)[None, None, :]
        even, odd = _mw_to_gl(L)
        analysis = np.stack([lam_gl[m] @ (even if m % 2 == 0 else odd) for m in range(L)])
        synthesis = legendre_table(L, theta)
        nphi = np.full(L, 2 * L - 1)
        nphi[-1] = 1
        # integral of f = sqrt(4 pi) f_00
        weights = np.sqrt(4 * np.pi) * analysis[0, 0] / nphi
    for a in (theta, nphi, weights, analysis, synthesis):
        a.setflags(write=False)
    return theta, nphi, weights, analysis, synthesis


def sphere_grid(params):
    theta, nphi, weights, _, _ = _plan(params.L, params.scheme)
    return SphereGrid(params, theta, nphi, weights)


def _ring_fourier(values, L, scheme):
    """Per-ring longitudinal Fourier coefficients F[..., t, m] for m mod (2L-1)."""
    N = 2 * L - 1
    if scheme == "GL":
        rings = values.reshape(values.shape[:-1] + (L, N))
        return np.fft.fft(rings, axis=-1) / N
    body = values[..., :-1].reshape(values.shape[:-1] + (L - 1, N))
    F = np.zeros(values.shape[:-1] + (L, N), dtype=complex)
    F[..., : L - 1, :] = np.fft.fft(body, axis=-1) / N
    # the pole carries only m = 0
    F[..., L - 1, 0] = values[..., -1]
    return F


def _forward_array(values, L, scheme, reality=False):
    """Batched forward transform over the last axis of ``values``."""
    _, _, _, analysis, _ = _plan(L, scheme)
    values = np.asarray(values, dtype=complex)
    batch = values.shape[:-1]
    F = _ring_fourier(values.reshape((-1,) + values.shape[-1:]), L, scheme)
    N = 2 * L - 1
    m = np.arange(L)
    # (m, l, t) @ (m, t, B) -> (m, l, B)
    pos = np.matmul(analysis, F[:, :, m].transpose(2, 1, 0))
    if not reality:
        neg = np.matmul(analysis, F[:, :, (-m) % N].transpose(2, 1, 0))
    out = np.zeros((F.shape[0], L * L), dtype=complex)
    for mm in range(L):
        ells = np.arange(mm, L)
        out[:, ells * ells + ells + mm] = pos[mm, mm:].T
        if mm:
            sign = (-1.0) ** mm
            vals = sign * np.conj(pos[mm, mm:]) if reality else sign * neg[mm, mm:]
            out[:, ells * ells + ells - mm] = vals.T
    return out.reshape(batch + (L * L,))


def _inverse_array(coeffs, L, scheme):
    _, nphi, _, _, synthesis = _plan(L, scheme)
    coeffs = np.asarray(coeffs, dtype=complex)
    batch = coeffs.shape[:-1]
    N = 2 * L - 1
    nt = synthesis.shape[-1]
    F = np.zeros(batch + (nt, N), dtype=complex)
    for mm in range(L):
        ells = np.arange(mm, L)
        lam = synthesis[mm, mm:]  # (l, t)
        F[..., :, mm] = coeffs[..., ells * ells + ells + mm] @ lam
        if mm:
            F[..., :, N - mm] = (coeffs[..., ells * ells + ells - mm] @ lam) * (-1.0) ** mm
    rings = np.fft.ifft(F, axis=-1) * N
    if scheme == "GL":
        return rings.reshape(batch + (nt * N,))
    out = np.empty(batch + (int(nphi.sum()),), dtype=complex)
    out[..., :-1] = rings[..., : L - 1, :].reshape(batch + ((L - 1) * N,))
    out[..., -1] = F[..., L - 1, 0]
    return out


def sht_forward(samples, params=None, reality=False):
    """Spherical harmonic coefficients f_lm = <f | Y_lm> of grid samples.

    ``samples`` is a :class:`SphereSamples` or a plain array together with
    ``params``.  With ``reality=True`` the samples are taken to be real and
    negative orders are filled from f_{l,-m} = (-1)^m conj(f_lm).
    """
    if isinstance(samples, SphereSamples):
        params = samples.params
        values = samples.values
    else:
        if params is None:
            raise ShapeError("params are required when passing a raw sample array")
        values = np.asarray(samples, dtype=complex)
        n = n_samples(params)
        if values.shape != (n,):
            raise ShapeError(f"expected {n} samples for {params}, got shape {values.shape}")
    return SphereCoefficients(_forward_array(values, params.L, params.scheme, reality), params)


def sht_inverse(coeffs, params=None):
    """Samples of sum_lm f_lm Y_lm on the grid of ``params`` (default: the coefficients' own)."""
    if params is None:
        params = coeffs.params
    elif params.L != coeffs.params.L:
        raise ShapeError(f"band-limit mismatch: {coeffs.params.L} vs {params.L}")
    return SphereSamples(_inverse_array(coeffs.values, params.L, params.scheme), params)


def sphere_convolve_axisym(f, h_axisym):
    """Axisymmetric convolution: (f * h)_lm = sqrt(4 pi/(2l+1)) f_lm conj(h_l0).

    ``h_axisym`` holds the L zonal coefficients h_l0.
    """
    L = f.params.L
    h = np.asarray(h_axisym, dtype=complex)
    if h.shape != (L,):
        raise ShapeError(f"expected {L} axisymmetric kernel coefficients, got shape {h.shape}")
    ells = np.arange(L)
    factor = np.sqrt(4 * np.pi / (2 * ells + 1)) * np.conj(h)
    return SphereCoefficients(f.values * factor[ell_of_index(L)], f.params)
