"""
Smoothing a ball signal with an axisymmetric kernel
===================================================

Convolution with a kernel that is symmetric about the z-axis is a
pointwise product in harmonic space.  Here a Gaussian-like kernel damps
high angular and radial frequencies.
"""

import numpy as np

import flagball as fb

L, P = 24, 24
params = fb.BallParams(L, P)
f = fb.random_coefficients(params, seed=3)

# Kernel coefficients h_l0p; only m = 0 entries may be non-zero
ell = np.arange(L)
p = np.arange(P)
profile = np.exp(-((ell[None, :] / 6.0) ** 2) - (p[:, None] / 8.0) ** 2)
h = np.zeros((P, L * L))
# the sqrt((2l+1)/4pi) factor makes the kernel act as a plain multiplier
h[:, ell * ell + ell] = profile * np.sqrt((2 * ell + 1) / (4 * np.pi))
kernel = fb.FlagCoefficients(h.ravel(), params)

smooth = fb.ball_convolve_axisym(f, kernel)
print("energy before:", round(fb.energy(f), 2), " after:", round(fb.energy(smooth), 2))

# Radial translation only rescales radial coefficients by K_p(s)
moved = fb.ball_translate_radial(kernel, 2.0)
print("translated kernel still axisymmetric:", np.abs(moved.as_array()[:, np.setdiff1d(np.arange(L * L), ell * ell + ell)]).max() == 0)

# Real-space check at one point: the smoothed field is band-limited and can be sampled anywhere
print("smoothed f at (r, theta, phi) = (3, 1, 2):", fb.flag_eval(smooth, 3.0, 1.0, 2.0)[0])
