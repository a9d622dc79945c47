"""
Wigner, Husimi and the spectrogram expansion
=============================================

A superposition of phi_0 and phi_1 has a Wigner function with a negative
dip.  Its Husimi function is a smoothed, positive version.  Signed sums
of Hermite-window spectrograms interpolate between the two and reproduce
Wigner moments exactly up to degree 2N - 1.
"""
import math

import numpy as np

from polytoep import calculus as cc
from polytoep import phasespace as ps

hbar = 0.1
x = ps.default_axis(hbar, 16, spacing=0.1)
p0, p1 = ps.hermite_signal(0, hbar, x), ps.hermite_signal(1, hbar, x)
psi = p0.with_samples((p0.samples + p1.samples) / math.sqrt(2))

ax = ps.default_axis(hbar, 12, spacing=0.25)
W = ps.wigner(psi)
S = ps.husimi(psi, ax, ax)
print(f"Wigner:  min {W.values.min():+.3f}, mass {W.integrate():.8f}")
print(f"Husimi:  min {S.values.min():+.3e}, mass {S.integrate():.8f}")

# the Husimi function is the Wigner function blurred by a Gaussian
S2 = ps.husimi_by_convolution(psi, ax, ax)
print("STFT route vs Gaussian-convolution route:", np.abs(S.values - S2.values).max())

# moments: int q^s p^t mu^N agrees with the Wigner moment when s + t < 2N
Qw, Pw = W.mesh()
for N in (1, 2, 3):
    mu = cc.mu_density(psi, N, ax, ax)
    Q, P = mu.mesh()
    errs = []
    for s, t in cc.monomials(2 * N):
        lhs = np.sum(Q**s * P**t * mu.values).real * mu.dq * mu.dp
        rhs = np.sum(Qw**s * Pw**t * W.values) * W.dq * W.dp
        errs.append(abs(lhs - rhs))
    exact, first_miss = max(errs[: -(2 * N + 1)]), max(errs[-(2 * N + 1):])
    print(f"N={N}: degree < {2 * N}: {exact:.1e}   degree {2 * N}: {first_miss:.1e}   min(mu) {mu.values.min():+.3f}")
