"""Eigenvalues just below the separatrix.

Compares the exact even-sector eigenvalues with the single-well
Bohr-Sommerfeld rule and with the barrier-matched ("modified") condition,
which keeps working where the single-well rule loses states.
"""
import time

from raman_nath import ModelParams, eigensolve_even, bohr_sommerfeld_eigenvalue, j_max, modified_eigenvalue
from raman_nath.errors import NoRootError

for lam, js in [(12500.0, range(186, 202, 2)), (250000.0, [894, 896, 898, 900])]:
    t0 = time.perf_counter()
    sol = eigensolve_even(ModelParams.from_lambda(lam))
    print(f"lambda = {lam:g}: matrix N = {sol.params.truncation_n}, solved in {time.perf_counter() - t0:.1f}s")
    print(f"  single-well j_max = {j_max(lam)}")
    print("    j   exact       single well   modified")
    for j in js:
        try:
            bs = f"{bohr_sommerfeld_eigenvalue(lam, j):.6f}"
        except NoRootError:
            bs = "   --   "
        print(f"  {j:4d}  {sol.state(j).beta:.6f}    {bs}      {modified_eigenvalue(lam, j):.6f}")
    print()

# the single-well error grows towards the top of the well, the modified one does not
lam = 12500.0
sol = eigensolve_even(ModelParams.from_lambda(lam))
for j in (150, 170, 190, 200):
    ex = sol.state(j).beta
    print(f"j={j}: single-well error {bohr_sommerfeld_eigenvalue(lam, j) - ex:+.1e}, "
          f"modified error {modified_eigenvalue(lam, j) - ex:+.1e}")
