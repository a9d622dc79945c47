"""
Weyl, Hermite-localization and Toeplitz matrices
=================================================

All quantizations live as truncated matrices in a Hermite-type basis.
For the oscillator symbol q^2 + p^2 they differ only by constant shifts,
and the polyanalytic Toeplitz operators coincide with the
Hermite-localization operators of the flipped symbol.
"""
import numpy as np

from polytoep import experiments as ex
from polytoep import quantize as qz

hbar, n = 0.1, 8
ho = ex.get_symbol("ho")

print("Weyl diagonal / hbar:        ", np.round(np.diag(qz.weyl_matrix(ho, n, hbar).entries).real / hbar, 8))
for k in range(3):
    L = qz.localization_matrix(ho, k, n, hbar).entries
    print(f"localization k={k} / hbar:     ", np.round(np.diag(L).real / hbar, 8))

absz2 = ex.get_symbol("absz2", "complex")
print("Toeplitz |z|^2, k=0 / hbar:  ", np.round(np.diag(qz.toeplitz_matrix(absz2, 0, n, hbar).entries).real / hbar, 8))

# a narrow Gaussian is a positive symbol with a non-positive Weyl operator
narrow = qz.Symbol(lambda q, p: np.exp(-4 * (q * q + p * p) / hbar), "real")
print("\nnarrow Gaussian, lowest eigenvalues:")
print("  Weyl        ", np.round(np.linalg.eigvalsh(qz.weyl_matrix(narrow, n, hbar).entries)[:3], 4))
print("  localization", np.round(np.linalg.eigvalsh(qz.localization_matrix(narrow, 0, n, hbar).entries)[:3], 4))

# T_k(m) two ways: a Fock-plane quadrature and the transform round trip B B_k^* m B_k B^*
m = qz.Symbol(lambda z: np.exp(-np.abs(z - 0.2) ** 2) * (1 + 0.5 * np.conj(z)), "complex")
T = qz.toeplitz_matrix(m, 1, n, hbar).entries
P = qz.projected_toeplitz_matrix(m, 1, n, hbar).entries
print("\n|T_1(m) - T_{1,0}(m)| =", np.abs(T - P).max())

# op(breve p) is a signed sum of Toeplitz-type pieces for holomorphic p
print("antiholomorphic identity residual, p = 1 + z - 0.3 z^2, N = 3:",
      qz.antiholo_weyl_check(lambda z: 1 + z - 0.3 * z * z, 3, 16, hbar))
