"""Hermite-Bargmann analysis, polyanalytic Toeplitz quantization and its symbol calculus."""
from .bargmann import (
    FockField,
    bargmann_adjoint,
    bergman_project,
    demultiplex,
    fock_translate,
    load_fock,
    mixed_norm,
    multiplex,
    poly_bargmann,
    poly_bargmann_adjoint,
    reproducing_kernel,
    save_fock,
    special_hermite_basis,
)
from .calculus import (
    RateFit,
    composition_symbol_2nd,
    fit_rate,
    hermite_moment,
    hermite_moment_bruteforce,
    mu_density,
    spec_coefficients,
    toeplitz_composition_symbol,
    weyl_via_antiwick_matrix,
)
from .hermite import gauss_hermite, hermite_fn, hermite_functions, laguerre
from .phasespace import PhaseField, SignalGrid, cross_wigner, husimi, spectrogram, stft, wigner
from .quantize import (
    OperatorMatrix,
    Symbol,
    breve,
    complex_weyl_matrix,
    hat,
    load_opm,
    localization_matrix,
    projected_toeplitz_matrix,
    save_opm,
    toeplitz_matrix,
    weyl_matrix,
)

__version__ = "0.1.0"
