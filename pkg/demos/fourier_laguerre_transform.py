"""
Fourier-Laguerre transform on the ball
======================================

Sample a band-limited signal on the ball, transform it back to harmonic
space and check that nothing was lost.
"""

import numpy as np

import flagball as fb

# A ball signal is band-limited in angle (L) and radius (P).  tau stretches
# the radial basis; here the outermost radial node sits at r = 1.
L, P = 32, 32
tau = fb.tau_for_radius(P, 1.0)
params = fb.BallParams(L, P, tau, scheme="MW")
print(f"MW grid: {params.n_samples} samples, formula P[(2L-1)(L-1)+1] = {P * ((2 * L - 1) * (L - 1) + 1)}")

# Random harmonic coefficients, seeded so the run is reproducible
coeffs = fb.random_coefficients(params, seed=1)

# Synthesis puts the signal on the sampling grid, analysis recovers the coefficients
signal = fb.flag_inverse(coeffs)
back = fb.flag_forward(signal)
print("round-trip max error:", np.abs(back.values - coeffs.values).max())

# Energy is the same in both domains
print("energy (harmonic):", fb.energy(coeffs))
print("energy (samples): ", fb.energy(signal))

# The expansion can also be evaluated away from the grid
r = np.array([0.1, 0.5, 0.9])
theta = np.array([0.3, 1.5, 2.8])
phi = np.array([0.0, 2.0, 4.0])
print("f at three points:", fb.flag_eval(coeffs, r, theta, phi))

# The GL grid uses more samples but its weights integrate products exactly
gl = fb.BallParams(L, P, tau, scheme="GL")
print(f"GL grid: {gl.n_samples} samples")
