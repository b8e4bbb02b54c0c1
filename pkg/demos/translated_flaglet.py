"""
A flaglet moved along the radial line
=====================================

Radial translation multiplies only the radial coefficients, so the
angular shape of a flaglet is unchanged wherever it is moved.
"""

import numpy as np

from flagball import io, plotdata

(rad_header, rad), (ang_header, ang) = plotdata.flaglet_profiles(64, 64, j=5, jp=5, shifts=(0.2, 0.4))

r = rad[:, 0]
for s in (0.2, 0.4):
    col = rad[:, rad_header.index(f"r2psi_s{s:g}")]
    print(f"shift {s}: radial peak at r = {r[np.argmax(np.abs(col))]:.3f}")

print("angular columns:", ang_header[1:])
print("largest difference between normalised angular profiles:", np.abs(ang[:, 1] - ang[:, 2]).max())

io.write_csv("flaglet_radial.csv", rad_header, rad)
io.write_csv("flaglet_angular.csv", ang_header, ang)
