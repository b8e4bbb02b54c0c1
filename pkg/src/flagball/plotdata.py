"""Tables behind the band-limited Dirac and translated-flaglet figures, and timing runs.

Each function returns ``(header, rows)`` ready for :func:`flagball.io.write_csv`.
"""
import time

import numpy as np

from . import radial, sphere
from .ball import BallParams, FlagCoefficients, ball_translate_radial, flag_forward, flag_inverse, random_coefficients
from .flaglet import TilingParams, kernel_family

__all__ = [
    "quadrature_table",
    "dirac_profiles",
    "oscillation_level",
    "flaglet_kernel",
    "flaglet_profiles",
    "angular_profile_on_grid",
    "bench",
]


def quadrature_table(P, tau=1.0):
    q = radial.radial_quadrature(radial.RadialParams(P, tau))
    rows = np.column_stack([np.arange(P), q.nodes, q.weights, q.sample_weights])
    return ["index", "node", "weight", "sample_weight"], rows


def dirac_profiles(P, positions, R=1.0, n_radii=2001, tau=None):
    """Band-limited radial Dirac deltas evaluated on [0, R].

    Columns: ``r`` followed by, for each position s, ``delta_s`` (the
    expansion sum_p K_p(s) K_p(r)) and ``r2delta_s`` (the same times r**2,
    i.e. the density against dr, which concentrates at r = s).  When ``tau``
    is omitted it is set so the largest quadrature node sits at ``R``.
    """
    tau = radial.tau_for_radius(P, R) if tau is None else tau
    params = radial.RadialParams(P, tau)
    r = np.linspace(0.0, R, n_radii)
    header = ["r"]
    cols = [r]
    for s in positions:
        d = radial.radial_inverse(radial.radial_dirac(s, params), r).real
        header += [f"delta_{s:g}", f"r2delta_{s:g}"]
        cols += [d, r**2 * d]
    return header, np.column_stack(cols)


def oscillation_level(r, density, s, window=0.05):
    """Largest |density| farther than ``window`` from ``s``, relative to the peak value."""
    far = np.abs(r - s) > window
    return float(np.abs(density[far]).max() / np.abs(density).max())


def flaglet_kernel(ball, j, jp, tiling=None):
    """Harmonic coefficients of the flaglet Psi^{jj'} as :class:`FlagCoefficients`."""
    family = kernel_family(ball, tiling or TilingParams())
    kernel = family.psi[(j, jp)]  # (L, P)
    out = np.zeros((ball.P, ball.L**2), dtype=complex)
    zonal = np.array([sphere.lm_index(ell, 0) for ell in range(ball.L)])
    out[:, zonal] = kernel.T
    return FlagCoefficients(out.ravel(), ball)


def _axis_profile(coeffs, r, theta):
    """Value of an axisymmetric band-limited signal at radii r and colatitudes theta (phi = 0)."""
    p = coeffs.params
    zonal = np.array([sphere.lm_index(ell, 0) for ell in range(p.L)])
    c = coeffs.as_array()[:, zonal]  # (P, L)
    K = radial.basis_table(p.P, np.asarray(r, float), p.tau)  # (P, nr)
    lam = sphere.legendre_table(p.L, np.asarray(theta, float))[0]  # (L, nt)
    return K.T @ c @ lam  # (nr, nt)


def flaglet_profiles(L, P, j, jp, shifts=(0.2, 0.4), R=1.0, tau=None, tiling=None, n_radii=501, n_theta=361):
    """Radial and angular profiles of a flaglet translated radially by each shift.

    Returns two tables.  The radial table holds the kernel along the
    north axis (theta = 0) for r in [0, R], raw and multiplied by r**2.
    The peak radius is where the r**2-weighted axis profile is largest
    (the raw kernel, like the radial Dirac delta, is dominated by a spike at
    the origin).  The angular table holds, for each shift, the kernel at
    its peak radius as a function of colatitude, divided by its L2 norm over
    the sphere at that radius and signed so the value at the north pole is
    positive.
    """
    tau = radial.tau_for_radius(P, R) if tau is None else tau
    ball = BallParams(L, P, tau)
    psi = flaglet_kernel(ball, j, jp, tiling)
    r = np.linspace(0.0, R, n_radii)
    theta = np.linspace(0.0, np.pi, n_theta)
    zonal = np.array([sphere.lm_index(ell, 0) for ell in range(L)])
    rad_header, rad_cols = ["r"], [r]
    ang_header, ang_cols = ["theta"], [theta]
    for s in shifts:
        moved = ball_translate_radial(psi, s)
        axis = _axis_profile(moved, r, [0.0])[:, 0].real
        peak_r = r[np.argmax(np.abs(r**2 * axis))]
        ang = _axis_profile(moved, [peak_r], theta)[0].real
        # L2 norm over the sphere at fixed radius from the zonal coefficients
        a_l = radial.basis_table(P, np.asarray(peak_r), tau) @ moved.as_array()[:, zonal]
        norm = np.sqrt(np.sum(np.abs(a_l) ** 2))
        ang = np.sign(ang[0]) * ang / norm
        rad_header += [f"psi_s{s:g}", f"r2psi_s{s:g}"]
        rad_cols += [axis, r**2 * axis]
        ang_header += [f"psi_s{s:g}_r{peak_r:.4f}"]
        ang_cols.append(ang)
    return (rad_header, np.column_stack(rad_cols)), (ang_header, np.column_stack(ang_cols))


def angular_profile_on_grid(coeffs):
    """Synthesize on the ball grid and return the normalised shell with the largest on-axis amplitude.

    The shell is the radial node whose northernmost ring carries the
    largest r**2 |value|; its samples are divided by their quadrature L2 norm on
    the sphere and signed so the first sample is positive.
    """
    p = coeffs.params
    signal = flag_inverse(coeffs).as_array()
    grid = sphere.sphere_grid(p.sphere)
    nodes = radial.radial_quadrature(p.radial).nodes
    north = nodes**2 * signal[:, 0]
    shell = signal[int(np.argmax(np.abs(north)))]
    w = grid.sample_weights()
    norm = np.sqrt(np.sum(w * np.abs(shell) ** 2)) if p.scheme == "GL" else np.sqrt(
        np.sum(np.abs(sphere.sht_forward(shell, p.sphere).values) ** 2)
    )
    profile = shell / norm
    return profile * np.sign(profile[0].real)


def bench(L_list, P_list, scheme="GL", seed=0, tau=1.0):
    """Wall time of inverse and forward transforms and round-trip error for each (L, P)."""
    rows = []
    for L in L_list:
        for P in P_list:
            params = BallParams(L, P, tau, scheme)
            # warm the cached tables so timings measure the transforms
            flag_forward(flag_inverse(FlagCoefficients(np.zeros(params.n_coefficients), params)))
            c = random_coefficients(params, seed)
            t0 = time.perf_counter()
            signal = flag_inverse(c)
            t1 = time.perf_counter()
            back = flag_forward(signal)
            t2 = time.perf_counter()
            err = float(np.abs(back.values - c.values).max())
            rows.append([L, P, params.n_samples, t1 - t0, t2 - t1, err])
    header = ["L", "P", "n_samples", "inverse_seconds", "forward_seconds", "max_error"]
    return header, np.array(rows, dtype=float).reshape(-1, len(header))

