"""
Hermite functions, Laguerre polynomials and phase-space moments
================================================================

The oscillator eigenfunctions phi_k carry everything else in the package.
Here we check their normalization, look at their Wigner functions and
compare the closed-form phase-space moments with brute-force quadrature.
"""
import numpy as np

from polytoep import calculus as cc
from polytoep import hermite as hm

hbar = 0.1

# Gram matrix of the first 21 functions under a rescaled Gauss-Hermite rule
x, w = hm.gauss_hermite(200).scaled(hbar)
H = hm.hermite_functions(21, hbar, x)
print("max |<phi_j, phi_k> - delta_jk| =", np.abs((H * w) @ H.T - np.eye(21)).max())

# W_{phi_k}(0) = (-1)^k / (pi hbar): the odd states are negative at the origin
for k in range(4):
    print(f"W_phi{k}(0) * pi * hbar = {hm.hermite_wigner_closed(k, hbar, np.zeros(2)) * np.pi * hbar:+.3f}")

# second moments add up to the oscillator energy hbar (2k + 1)
print("\n k   int x^2 W   int xi^2 W   energy/hbar")
for k in range(5):
    a, b = cc.hermite_moment(1, 0, k, hbar), cc.hermite_moment(0, 1, k, hbar)
    print(f"{k:2d}   {a:.6f}    {b:.6f}     {(a + b) / hbar:.1f}")

# higher moments, closed form against the tensor quadrature oracle
worst = max(
    abs(cc.hermite_moment(a, b, k, hbar) - cc.hermite_moment_bruteforce(a, b, k, hbar))
    for k in range(7) for a in range(5) for b in range(5 - a)
)
print("\nworst closed-form vs quadrature moment difference:", worst)
