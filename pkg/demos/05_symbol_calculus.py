"""
Semiclassical rates
===================

The second-order composition laws hold up to O(hbar^2), the commutator
law up to O(hbar) after dividing by hbar, and the Weyl-via-anti-Wick
expansion with N terms up to O(hbar^N).  Fitted log-log slopes over a
halving ladder of hbar quantify each claim.
"""
from polytoep import experiments as ex

print(f"{'experiment':28s} {'k':>2s} {'N':>2s}  errors over hbar = {ex.LADDER}")
runs = [ex.expansion_experiment("wide", N=N) for N in (1, 2, 3)]
runs += [ex.composition_experiment(kind, k) for kind in ("localization", "commutator", "toeplitz") for k in (0, 1)]
for r in runs:
    errs = "  ".join(f"{e:.2e}" for e in r.errors)
    print(f"{r.experiment:28s} {r.k:2d} {r.N:2d}  {errs}   slope {r.fit.slope:.2f}")

# polynomial symbols below degree 2N are reproduced exactly
r = ex.expansion_experiment("ho", N=2)
print("\nho, N=2 max error:", max(r.errors))

# a unit-width Gaussian is still in the pre-asymptotic regime on this ladder
r = ex.expansion_experiment("gauss", N=2)
print(f"unit-width Gaussian, N=2 slope: {r.fit.slope:.2f}")

# T(z) T(conj z) = T(|z|^2 - 2 hbar): the correction is real
print("corrected-symbol constant for m = z, mu = conj z at hbar = 0.1:", ex.wirtinger_example(0.1))
