#!/usr/bin/env python3
"""Tour of the closed-form Landau-Zener results.

Evaluates the standard single-crossing formula, the exact qubit-oscillator
sweep result, the finite-temperature closed form with its characteristic
non-monotonic temperature dependence, and the exact zero-temperature damped
result.  Everything here is analytic; no integration is performed.
"""

import numpy as np

from lzcqed import (b_function, lz_generalized, path_prob_up, pud_finite_t,
                    pud_zero_t_dissipative, standard_lz, sum_ck2,
                    thermal_avg_direct)

g, v = 0.04, 0.01

print("== single avoided crossing ==")
print(f"diabatic passage w(2g)        = {standard_lz(2 * g, v):.6f}")
print(f"full-sweep flip probability   = {lz_generalized(g, v):.6f}")
print(f"identity 1 - w(2g) == P_flip  : "
      f"{abs(1 - standard_lz(2 * g, v) - lz_generalized(g, v)):.2e}")

print("\n== independent-crossing paths from |up, n> ==")
for n in range(4):
    print(f"P(up,{n} -> up) = {path_prob_up(n, g, v):.6f}")

print("\n== thermal initial state: closed form vs brute-force average ==")
print(f"{'kT':>5} {'closed form':>12} {'brute force':>12} {'B(g^2/v)':>10}")
for T in (0.05, 0.2, 0.4, 0.6, 0.8, 1.0):
    closed = pud_finite_t(g, v, T)
    brute = thermal_avg_direct(g, v, T)
    print(f"{T:5.2f} {closed:12.8f} {brute:12.8f} {b_function(g*g/v, T):10.6f}")

ts = np.linspace(0.01, 1.2, 120)
curve = [pud_finite_t(g, v, t) for t in ts]
k = int(np.argmax(curve))
print(f"\nflip probability peaks at kT = {ts[k]:.3f} "
      f"(P = {curve[k]:.4f}), endpoints {curve[0]:.4f} / {curve[-1]:.4f}")

print("\n== zero-temperature damping ==")
print(f"{'gamma':>6} {'coupling weight':>16} {'P_flip':>10}")
for gamma in (0.0, 0.005, 0.02, 0.1, 0.5):
    print(f"{gamma:6.3f} {sum_ck2(gamma):16.8f} "
          f"{pud_zero_t_dissipative(g, v, gamma):10.6f}")
