"""Matching across the central barrier for the first free states.

Above the separatrix the outer allowed region no longer reaches y = 0; the
wave tunnels under a barrier whose width is set by the parameter t.  The
eigenvalue condition compares two cosines at a beam between the turning
points.  The zero does not depend on which beam is used, the two cosines
agree at every beam once the eigenvalue is fixed, and the wave is stitched
to an Airy piece at the midpoint beam.
"""
import math

from raman_nath import ModelParams, eigensolve_even, eigenvalue_overdense
from raman_nath.separatrix import barrier_context, join_plan, match_phase, overdense_condition

lam = 12500.0
sol = eigensolve_even(ModelParams.from_lambda(lam))
sl = math.sqrt(lam)

for j in (202, 204):
    beta = eigenvalue_overdense(lam, j)
    ctx = barrier_context(lam, beta)
    plan = join_plan(lam, beta)
    print(f"j={j}: matched {beta:.7f}, exact {sol.state(j).beta:.7f}, barrier t = {ctx.t:.3f}")
    print(f"  turning points y = {ctx.inner_tp:.4f} and {ctx.outer_tp:.4f}, join beam {plan.join_beam} (y = {plan.y_join:.4f})")
    lo, hi = int(ctx.inner_tp * sl) + 1, int(math.ceil(ctx.outer_tp * sl)) - 1
    worst = max(abs(overdense_condition(lam, beta, m, match_phase(j))) for m in range(lo, hi + 1))
    print(f"  largest cosine mismatch over beams {lo}..{hi}: {worst:.1e}")
    for m in (lo + 5, plan.join_beam, hi - 5):
        print(f"  eigenvalue matched at beam {m}: {eigenvalue_overdense(lam, j, m=m):.10f}")
