#!/usr/bin/env python3
"""A full sweep integration at zero damping, checked against the exact result.

Uses a fast sweep (v = 0.05) so the run finishes in seconds.  The solver
expands the density operator in the oscillator Liouvillian eigenbasis; at
gamma = 0 the dynamics is unitary and the final flip probability must land
on 1 - exp(-2 pi g^2 / v).
"""

import time

from lzcqed import SystemParams, integrate, lz_generalized

params = SystemParams(g=0.04, v=0.05, gamma=0.0, temperature=0.01, n_trunc=8)

t0 = time.perf_counter()
res = integrate(params)
wall = time.perf_counter() - t0

exact = lz_generalized(params.g, params.v)
print(f"integrated {res.n_steps} adaptive steps in {wall:.1f} s")
print(f"final flip probability : {res.p_flip_final:.6f}")
print(f"exact sweep result     : {exact:.6f}")
print(f"difference             : {abs(res.p_flip_final - exact):.2e}")
print(f"trace residual         : {res.trace_residual:.2e}")
print(f"hermiticity residual   : {res.herm_residual:.2e}")
print(f"truncation-edge spill  : {res.edge_spill:.2e}")

print("\npopulation milestones (t, p_up, p_up_n0):")
marks = [0, len(res.times) // 4, len(res.times) // 2,
         3 * len(res.times) // 4, len(res.times) - 1]
for k in marks:
    print(f"  t = {res.times[k]:+8.1f}   p_up = {res.p_up[k]:.6f}   "
          f"p(up,0) = {res.p_fock[('up', 0)][k]:.6f}")
