"""
Multiplexing signals through polyanalytic spaces
=================================================

Since the true polyanalytic spaces are mutually orthogonal, the sum
B_0 psi_0 + B_1 psi_1 + B_2 psi_2 is a single function on the complex
plane from which every psi_j comes back by applying B_j^*.
"""
import tempfile
from pathlib import Path

from polytoep import bargmann as bg
from polytoep import experiments as ex
from polytoep import phasespace as ps

hbar = 0.1
x = ps.default_axis(hbar, 24)
ax = ps.default_axis(hbar, 17, spacing=0.3)
signals = ex.random_signals(3, hbar, x, seed=7)

F = bg.multiplex(signals, ax, ax)
recovered = bg.demultiplex(F, 3, x)
for j, e in enumerate(bg.crosstalk(signals, recovered)):
    print(f"channel {j}: reconstruction error {e:.2e}")
print("energy defect:", abs(F.norm() ** 2 - sum(s.norm() ** 2 for s in signals)))

# the packed field can be stored and reloaded bit for bit
with tempfile.TemporaryDirectory() as d:
    path = Path(d) / "packed.fock"
    bg.save_fock(F, path)
    G = bg.load_fock(path)
    print(f"{path.name}: {path.stat().st_size} bytes, identical after reload: {(G.values == F.values).all()}")
