"""Compare Gevrey and q-Gevrey fits of the cocycle differences.

Run with ``python3 demos/flatness_regimes.py``; takes a minute or two.
The same-sector Borel pair decays like exp(-M / eps^k) while neighbouring
sectors differ by a q-Gevrey amount exp(-kappa log(eps)^2 / (2 log q)).
"""

from qgevrey.pipelines import cocycle_samples, flatness_reports
from qgevrey.scenario import reference_scenario

sc = reference_scenario()
samples, seconds = cocycle_samples(sc)
fits = flatness_reports(sc, samples)
for name, cs in samples.items():
    f = fits[name]
    print(f"{name:8s} {seconds[name]:6.1f}s  route error {cs.max_route_error:.1e}")
    for e, d in zip(abs(cs.eps), cs.delta_sup):
        print(f"    |eps|={e:.3e}  sup|delta|={d:.3e}")
    if f.degenerate:
        print("    identically zero")
    else:
        print(f"    best model {f.model}, margin {f.margin:.3g}x, "
              f"kappa={f.q_gevrey['kappa']:.4g}, gevrey k={f.gevrey['k']} M={f.gevrey['M']:.4g}")
