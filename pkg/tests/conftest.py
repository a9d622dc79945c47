import numpy as np
import pytest

from polytoep import phasespace as ps


def hermite_combo(coeffs, hbar, x):
    """sum_j c_j phi_j on the grid x as a SignalGrid."""
    out = ps.hermite_signal(0, hbar, x)
    vals = sum(c * ps.hermite_signal(j, hbar, x).samples for j, c in enumerate(coeffs))
    return out.with_samples(vals)


def random_state(rng, hbar, x, terms=6):
    c = rng.normal(size=terms) + 1j * rng.normal(size=terms)
    return hermite_combo(c / np.linalg.norm(c), hbar, x)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
