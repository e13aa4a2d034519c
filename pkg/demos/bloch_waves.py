"""Semiclassical Bloch waves against the exact eigenvectors at lambda = 12500.

Deep states use the single-well uniform (parabolic cylinder) form, states
near the top of the well and the first free states use the barrier + Airy
construction.  The raw WKB cosine is shown for contrast: it blows up at the
turning point and is only trusted away from it.
"""
import numpy as np

from raman_nath import ModelParams, auto_eigenvector, bohr_sommerfeld_eigenvalue, eigensolve_even, wkb_eigenvector
from raman_nath.validation import max_peak_deviation

lam = 12500.0
sol = eigensolve_even(ModelParams.from_lambda(lam))
n_max = sol.params.truncation_n

print("   j    beta       method       max |dB| / peak   join beam")
for j in (0, 8, 110, 152, 200, 202, 204):
    w = auto_eigenvector(lam, j, n_max=n_max)
    dev = max_peak_deviation(w, sol.wave(j).amplitudes)
    join = w.extras.get("join_beam", "")
    print(f"{j:4d}  {w.beta:+.5f}   {w.method:11s}  {dev:.1e}          {join}")

j = 110
w = wkb_eigenvector(lam, bohr_sommerfeld_eigenvalue(lam, j), j=j, n_max=n_max)
print(f"\nraw WKB, j={j}: {np.sum(~w.valid)} beams guarded near the turning point, "
      f"deviation elsewhere {max_peak_deviation(w, sol.wave(j).amplitudes):.1e}")

# coarse text picture of the first free state and its exact counterpart
w = auto_eigenvector(lam, 202, n_max=n_max)
ref = sol.wave(202).amplitudes
scale = np.max(np.abs(ref))
print("\nfirst free state (o = exact, * = constructed, @ = both), every 6th beam")
for n in range(0, 180, 6):
    row = [" "] * 61
    row[30] = "|"
    a = 30 + int(round(30 * ref[n] / scale))
    b = 30 + int(round(30 * w.amplitudes[n] / scale))
    row[a] = "o"
    row[b] = "@" if a == b else "*"
    print(f"{n:4d} " + "".join(row))
