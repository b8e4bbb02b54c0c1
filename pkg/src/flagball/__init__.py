"""Exact harmonic analysis on the three-dimensional ball.

Spherical Laguerre radial transform, spherical harmonic transform on
Gauss-Legendre and equiangular (MW) grids, their product (the Fourier-Laguerre
transform), radial translation, axisymmetric convolution and flaglet
wavelets.
"""
from . import io, plotdata
from .ball import (
    BallGrid,
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
from .errors import (
    ConfigurationError,
    DomainError,
    FlagError,
    FormatError,
    NumericError,
    PreconditionError,
    ShapeError,
)
from .flaglet import (
    FlagletCoefficients,
    GeneratingFunction,
    TilingParams,
    WaveletFamily,
    admissibility_check,
    admissibility_residual,
    build_kernels,
    flaglet_analyze,
    flaglet_synthesize,
    frame_energy,
    kappa,
    kernel_family,
    max_scale,
    scale_bandlimits,
)
from .radial import (
    RadialCoefficients,
    RadialParams,
    RadialQuadrature,
    RadialSamples,
    basis_eval,
    basis_table,
    laguerre_eval,
    radial_convolve,
    radial_dirac,
    radial_forward,
    radial_inverse,
    radial_quadrature,
    radial_translate,
    tau_for_radius,
)
from .sphere import (
    SphereCoefficients,
    SphereGrid,
    SphereParams,
    SphereSamples,
    lm_index,
    n_samples,
    sph_harm_eval,
    sht_forward,
    sht_inverse,
    sphere_convolve_axisym,
    sphere_grid,
)

__version__ = "0.1.0"
