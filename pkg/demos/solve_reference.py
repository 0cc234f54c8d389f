"""Solve both stages of the shipped reference scenario and print the diagnostics.

Run with ``python3 demos/solve_reference.py``; takes about half a minute.
"""

import numpy as np

from qgevrey.borel_solver import measure_decay_b
from qgevrey.pipelines import stage_b, stage_q, validate_scenario
from qgevrey.scenario import reference_scenario
from qgevrey.summation import assemble_up, residual_q

sc = reference_scenario()
rep = validate_scenario(sc)
print(f"validation: {'ok' if rep.ok else 'failed ' + ', '.join(rep.failed())}")

q = stage_q(sc)
t, z = sc.t_probes(), sc.z_probes()
for p, res in q.items():
    s = res["series"]
    print(f"sector {p}: eps={complex(s.eps):.3g} terms={len(s)} "
          f"max ratio={max(s.ratios):.3f} residual={s.residual:.1e} "
          f"equation residual={residual_q(s, t, z):.1e}")

u = assemble_up(q[0]["series"], t, z)
print("|u_0(t, z)| on the probe grid (rows t, columns z):")
print(np.array2string(np.abs(u), precision=4))

b = stage_b(sc, q)
for (p, pp), series in b.items():
    decay = measure_decay_b(series)
    print(f"sub-sector ({p}, {pp}): Picard iterations={series.iterations} "
          f"max ratio={max(series.picard_ratios):.3f} residual={series.residual:.1e} "
          f"K={decay.K_triangle:.3f}")
