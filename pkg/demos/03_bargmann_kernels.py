"""
Polyanalytic Bargmann transforms and their reproducing kernels
===============================================================

B_k sends a signal to a function on the complex plane that is
polyanalytic of exact degree k.  The images of the Hermite functions form
the special Hermite basis, the spaces for different k are orthogonal and
each has a Laguerre-type reproducing kernel.
"""
import math

import numpy as np

from polytoep import bargmann as bg
from polytoep import phasespace as ps

hbar = 0.25
x = ps.default_axis(hbar, 24)
ax = bg.fock_axis(hbar, 10, spacing=0.3)

# B phi_k is a monomial in z
F = bg.bargmann(ps.hermite_signal(3, hbar, x), ax, ax)
mono = (math.pi * hbar) ** -0.5 * (2.0**4 * 6) ** -0.5 * (F.z / math.sqrt(hbar)) ** 3
disc = np.abs(F.z) < 3 * math.sqrt(hbar)
print("B phi_3 vs closed-form monomial:", np.abs(F.values - mono)[disc].max())

# the transforms are partial isometries with orthogonal ranges
psi = ps.hermite_signal(2, hbar, x).with_samples(
    (ps.hermite_signal(2, hbar, x).samples - 1j * ps.hermite_signal(5, hbar, x).samples) / math.sqrt(2))
imgs = [bg.poly_bargmann(k, psi, ax, ax) for k in range(3)]
print("norms:", [round(G.norm(), 12) for G in imgs])
print("|<B_0 psi, B_1 psi>| =", abs(imgs[0].inner(imgs[1])))

# B_k psi is killed by k + 1 conjugate derivatives, not by k
G = imgs[2]
for j in range(4):
    wt = np.abs(G.unweighted() * np.exp(-np.abs(G.z) ** 2 / (4 * hbar)))[disc].max()
    print(f"dbar^{j} B_2 psi: {wt:.2e}")
    G = bg.dbar(G)

# projecting a mixture onto each true polyanalytic space picks out one piece
mix = imgs[0] + imgs[1] * 0.5 + imgs[2] * 2j
for k in range(3):
    P = bg.bergman_project(mix, k)
    target = [imgs[0], imgs[1] * 0.5, imgs[2] * 2j][k]
    err = np.abs((P.values - target.values) * np.exp(-np.abs(P.z) ** 2 / (4 * hbar)))[disc].max()
    print(f"P_{k} mixture vs its degree-{k} component: {err:.1e}")
