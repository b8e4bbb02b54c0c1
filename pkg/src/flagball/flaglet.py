"""Flaglets: axisymmetric scale-discretised wavelets on the ball.

The l-p harmonic plane is tiled with products of smooth angular and radial
window profiles,

    Psi^{jj'}_{l0p} = sqrt((2l+1)/(4 pi)) kappa_lam(l / lam**j) kappa_nu(p / nu**j'),

where kappa_lam(t) = sqrt(k_lam(t/lam) - k_lam(t)) and k_lam is a smooth
cumulative window equal to 1 below 1/lam and 0 above 1.  The scaling
function takes whatever the wavelets leave of the unit resolution of the
identity, so the admissibility sum is 1 at every (l, p) by telescoping.
"""
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

from .ball import BallParams, FlagCoefficients
from .errors import ConfigurationError, DomainError, ShapeError

__all__ = [
    "GeneratingFunction",
    "TilingParams",
    "WaveletFamily",
    "FlagletCoefficients",
    "kappa",
    "max_scale",
    "build_kernels",
    "kernel_family",
    "admissibility_residual",
    "admissibility_check",
    "scale_bandlimits",
    "flaglet_analyze",
    "flaglet_synthesize",
    "frame_energy",
]

ADMISSIBILITY_TOL = 1e-12


def _bump(u):
    """Schwartz bump exp(-1/(1-u**2)) on (-1, 1), zero elsewhere."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1
    out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
    return out


class GeneratingFunction:
    """Smooth cumulative window k_lam on [0, inf) for dilation ``lam``.

    k_lam(t) is the integral of s_lam(s)**2 / s over [t, 1], normalised by
    its value at t = 1/lam, with s_lam the bump mapped onto (1/lam, 1).
    """

    def __init__(self, lam):
        lam = float(lam)
        if not np.isfinite(lam) or lam <= 1:
            raise ConfigurationError(f"dilation must be a finite real > 1, got {lam!r}")
        self.lam = lam
        self._cache = {}
        self.norm = self._integral(1.0 / lam)

    def _integrand(self, s):
        u = (2 * self.lam / (self.lam - 1)) * (s - 1 / self.lam) - 1
        return float(_bump(u) ** 2) / s

    def _integral(self, t):
        val, _ = integrate.quad(self._integrand, t, 1.0, epsabs=1e-15, epsrel=1e-14, limit=200)
        return val

    def _k_scalar(self, t):
        if t <= 1 / self.lam:
            return 1.0
        if t >= 1:
            return 0.0
        try:
            return self._cache[t]
        except KeyError:
            val = min(1.0, max(0.0, self._integral(t) / self.norm))
            self._cache[t] = val
            return val

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if np.any(t < 0) or not np.all(np.isfinite(t)):
            raise DomainError("window argument must be finite and non-negative")
        flat = np.array([self._k_scalar(float(v)) for v in t.ravel()])
        return flat.reshape(t.shape) if t.ndim else float(flat[0])


@lru_cache(maxsize=16)
def _generating(lam):
    return GeneratingFunction(lam)


def kappa(gen, t):
    """Wavelet profile kappa_lam(t) = sqrt(k_lam(t/lam) - k_lam(t)); zero outside (1/lam, lam)."""
    t = np.asarray(t, dtype=float)
    diff = gen(t / gen.lam) - gen(t)
    out = np.sqrt(np.maximum(diff, 0.0))
    return out if out.ndim else float(out)


def max_scale(band_limit, dilation):
    """Smallest J with dilation**J >= band_limit - 1 (0 for band-limits 1 and 2)."""
    J = 0
    while dilation**J < band_limit - 1:
        J += 1
    return J


@dataclass(frozen=True)
class TilingParams:
    lam: float = 2.0
    nu: float = 2.0
    J0: int = 0
    J0p: int = 0

    def __post_init__(self):
        for name in ("lam", "nu"):
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 1:
                raise ConfigurationError(f"{name} must be a finite real > 1, got {v!r}")
            object.__setattr__(self, name, float(v))
        for name in ("J0", "J0p"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ConfigurationError(f"{name} must be a non-negative integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    def scales(self, ball):
        """Angular and radial scale ranges ``(range(J0, J+1), range(J0p, Jp+1))`` for ``ball``."""
        J = max_scale(ball.L, self.lam)
        Jp = max_scale(ball.P, self.nu)
        if self.J0 > J:
            raise ConfigurationError(f"J0={self.J0} exceeds the maximum angular scale J={J} for L={ball.L}")
        if self.J0p > Jp:
            raise ConfigurationError(f"J0p={self.J0p} exceeds the maximum radial scale J'={Jp} for P={ball.P}")
        return range(self.J0, J + 1), range(self.J0p, Jp + 1)


@dataclass(frozen=True, eq=False)
class WaveletFamily:
    """Harmonic kernels of one flaglet configuration.

    ``psi[(j, jp)]`` and ``phi`` are real arrays of shape ``(L, P)`` holding
    Psi^{jj'}_{l0p} and Phi_{l0p}.
    """

    ball: BallParams
    tiling: TilingParams
    phi: np.ndarray
    psi: dict = field(default_factory=dict)

    @property
    def scale_keys(self):
        return list(self.psi)


@dataclass(frozen=True, eq=False)
class FlagletCoefficients:
    """Scaling coefficients and one set of wavelet coefficients per scale pair.

    With ``multires`` the wavelet coefficients of scale (j, j') are held at
    the reduced band-limits of :func:`scale_bandlimits`.
    """

    scaling: FlagCoefficients
    wavelets: dict
    multires: bool = False
    tiling: TilingParams = None


def build_kernels(ball, tiling=None):
    """Flaglet and scaling kernels for ``ball`` and ``tiling`` without the admissibility check."""
    tiling = tiling or TilingParams()
    jrange, jprange = tiling.scales(ball)
    gl, gn = _generating(tiling.lam), _generating(tiling.nu)
    ell = np.arange(ball.L, dtype=float)
    p = np.arange(ball.P, dtype=float)
    norm = np.sqrt((2 * ell + 1) / (4 * np.pi))
    ang = {j: kappa(gl, ell / tiling.lam**j) for j in jrange}
    rad = {jp: kappa(gn, p / tiling.nu**jp) for jp in jprange}
    psi = {}
    for j in jrange:
        for jp in jprange:
            psi[(j, jp)] = norm[:, None] * np.outer(ang[j], rad[jp])
    eta_l = gl(ell / tiling.lam**tiling.J0)
    eta_p = gn(p / tiling.nu**tiling.J0p)
    eta_l, eta_p = np.meshgrid(eta_l, eta_p, indexing="ij")
    phi = norm[:, None] * np.sqrt(np.maximum(eta_l + eta_p - eta_l * eta_p, 0.0))
    return WaveletFamily(ball, tiling, phi, psi)


def kernel_family(ball, tiling=None):
    """Build and verify the flaglet kernels; ConfigurationError if the residual exceeds 1e-12."""
    family = build_kernels(ball, tiling)
    resid = admissibility_check(family)
    if resid > ADMISSIBILITY_TOL:
        raise ConfigurationError(f"tiling is not admissible: residual {resid:.3e}")
    return family


def admissibility_residual(family):
    """(4 pi/(2l+1)) (|Phi_l0p|^2 + sum |Psi^{jj'}_l0p|^2) - 1 on the (L, P) grid."""
    total = np.abs(family.phi) ** 2
    for kernel in family.psi.values():
        total = total + np.abs(kernel) ** 2
    ell = np.arange(family.ball.L)
    return (4 * np.pi / (2 * ell + 1))[:, None] * total - 1.0


def admissibility_check(family):
    """Largest deviation of the resolution of the identity from 1."""
    return float(np.abs(admissibility_residual(family)).max())


def scale_bandlimits(j, jp, tiling, ball):
    """Band-limits (L_j, P_j') enclosing the support of Psi^{jj'}."""
    jrange, jprange = tiling.scales(ball)
    if j not in jrange or jp not in jprange:
        raise DomainError(f"scale ({j}, {jp}) outside angular {list(jrange)} / radial {list(jprange)}")
    Lj = min(ball.L, int(np.floor(tiling.lam ** (j + 1))) + 1)
    Pj = min(ball.P, int(np.floor(tiling.nu ** (jp + 1))) + 1)
    return Lj, Pj


def _expand(kernel, L):
    """(L, P) kernel -> (P, L**2) array broadcast over m."""
    ells = np.repeat(np.arange(L), 2 * np.arange(L) + 1)
    return kernel[ells].T


def _weighted(kernel, L):
    ells = np.repeat(np.arange(L), 2 * np.arange(L) + 1)
    return np.sqrt(4 * np.pi / (2 * ells + 1))[None, :] * _expand(kernel, L)


def _check_params(f, family):
    if f.params != family.ball:
        raise ShapeError(f"coefficients have {f.params}, family was built for {family.ball}")


def flaglet_analyze(f, family, multires=False):
    """Scaling and wavelet coefficients of ``f`` by harmonic-space axisymmetric convolution."""
    _check_params(f, family)
    ball = family.ball
    farr = f.as_array()
    scaling = FlagCoefficients((farr * _weighted(family.phi, ball.L)).ravel(), ball)
    wavelets = {}
    for key, kernel in family.psi.items():
        coeffs = FlagCoefficients((farr * _weighted(kernel, ball.L)).ravel(), ball)
        if multires:
            coeffs = coeffs.resized(*scale_bandlimits(*key, family.tiling, ball))
        wavelets[key] = coeffs
    return FlagletCoefficients(scaling, wavelets, multires, family.tiling)


def flaglet_synthesize(w, family):
    """Reconstruct f_lmp from scaling and wavelet coefficients (exact for admissible families)."""
    ball = family.ball
    if w.scaling.params != ball:
        raise ShapeError(f"scaling coefficients have {w.scaling.params}, family was built for {ball}")
    missing = [key for key in family.psi if key not in w.wavelets]
    extra = [key for key in w.wavelets if key not in family.psi]
    if missing or extra:
        raise ShapeError(f"wavelet scales do not match the family (missing {missing}, unexpected {extra})")
    total = w.scaling.as_array() * _weighted(family.phi, ball.L)
    for key in sorted(family.psi):
        coeffs = w.wavelets[key]
        if (coeffs.params.L, coeffs.params.P) != (ball.L, ball.P):
            coeffs = coeffs.resized(ball.L, ball.P)
        total = total + coeffs.as_array() * _weighted(family.psi[key], ball.L)
    return FlagCoefficients(total.ravel(), ball)


def frame_energy(w):
    """Total energy of the flaglet coefficients, sum over all scales of sum |W_lmp|^2."""
    total = float(np.sum(np.abs(w.scaling.values) ** 2))
    for coeffs in w.wavelets.values():
        total += float(np.sum(np.abs(coeffs.values) ** 2))
    return total
