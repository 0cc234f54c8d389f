"""Laplace transforms, Euler operators and the Dirichlet sum on small examples.

Run with ``python3 demos/transforms_tour.py``; finishes in a few seconds.
"""

import math

import numpy as np

from qgevrey.asymptotics import dirichlet_sum, euler_maclaurin_check
from qgevrey.borel_solver import expand_euler_operators
from qgevrey.transforms import RaySpec, check_laplace_dilation, mk_laplace

T = 0.7 * np.exp(0.2j)
ray = RaySpec(float(np.angle(T)))

print("k-Laplace transform of u^n against Gamma(n/k) T^n")
for k in (1, 2, 3):
    errs = []
    for n in range(1, 7):
        val = mk_laplace(lambda u, n=n: u**n, k, ray, T)
        errs.append(abs(val - math.gamma(n / k) * T**n) / abs(T**n))
    print(f"  k={k}: max relative error {max(errs):.2e}")

print("dilation commutes with the transform (q = 2)")
for k in (1, 2):
    r = check_laplace_dilation(lambda u: u**2 * np.exp(-u), k, 2.0, 1.0, 0.3 * np.exp(0.1j))
    print(f"  k={k}: residual {r:.2e}")

print("T^{(k+1) delta} d^delta written in powers of T^{k+1} d, k = 1")
for delta in (2, 3, 4):
    A = expand_euler_operators(delta, 1)
    print(f"  delta={delta}: " + ", ".join(f"{j}: {str(a)}" for j, a in sorted(A.items())))

print("Euler-Maclaurin residual for e^{-t} on [0, n]")
for n in (1, 5, 12):
    print(f"  n={n}: {euler_maclaurin_check('exp', n):.2e}")

print("Dirichlet-type sum sum_j q^{-j^2} exp(-D3 D4^j / eps), q = 2")
for eps in (1e-3, 1e-1, 1.0, 1e3):
    print(f"  eps={eps:g}: {dirichlet_sum(1.0, 1.0, 1.0, 0.5, 2.0, eps):.6e}")
