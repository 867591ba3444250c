#!/usr/bin/env python3
"""Dissipative sweeps at zero temperature against the exact damped result.

The damped oscillator acts on the qubit as a structured bath whose total
coupling weight shrinks with the damping rate, so the flip probability
decreases.  The Bloch-Redfield solver should stay within one percent of the
exact normalized probability.
"""

from lzcqed import SystemParams, integrate, lz_generalized, pud_zero_t_dissipative

g, v, T = 0.04, 0.05, 0.01

base = integrate(SystemParams(g=g, v=v, gamma=0.0, temperature=T, n_trunc=8))
print(f"gamma = 0 reference: P = {base.p_flip_final:.6f} "
      f"(exact {lz_generalized(g, v):.6f})\n")

print(f"{'gamma':>6} {'P(gamma)':>10} {'ratio num':>10} {'ratio exact':>12} "
      f"{'rel dev':>9}")
for gamma in (0.005, 0.01, 0.02):
    res = integrate(SystemParams(g=g, v=v, gamma=gamma, temperature=T, n_trunc=8))
    ratio_num = res.p_flip_final / base.p_flip_final
    ratio_ana = pud_zero_t_dissipative(g, v, gamma) / lz_generalized(g, v)
    dev = ratio_num / ratio_ana - 1.0
    print(f"{gamma:6.3f} {res.p_flip_final:10.6f} {ratio_num:10.6f} "
          f"{ratio_ana:12.6f} {dev:+9.2e}")
