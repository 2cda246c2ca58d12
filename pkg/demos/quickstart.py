"""A short tour: build a Hubbard chain, propagate a string, check it densely.

Run with `python3 demos/quickstart.py`.
"""

import numpy as np

from majprop import (
    MPConfig,
    MajoranaPolynomial,
    build_hubbard_1d,
    frobenius_norm,
    greedy_color_partition,
    mp_propagate,
)
from majprop.oracle import exact_heisenberg, normalized_frobenius, poly_to_dense

# A three-site Hubbard chain: 6 fermionic modes = 12 Majorana modes.
h = build_hubbard_1d(3, u=1.0)
schedule = greedy_color_partition(h)
print(h)
print(f"sparsity {h.sparsity}, {schedule.n_groups} rotation groups")

# Start from the pair string of the central up-spin orbital (modes 8, 9).
a = MajoranaPolynomial({0b11 << 8: 1.0}, h.n_modes)
print(f"observable: {a}, ||A||_F = {frobenius_norm(a):.3f}")

# Propagate to t = 0.5 with degree cutoff 4.
cfg = MPConfig(delta_t=0.01, ell=4)
out, trace = mp_propagate(a, h, schedule, t=0.5, cfg=cfg)
print(f"propagated: {out}")
print(f"cumulative discarded weight: {trace.cumulative_discarded_weight:.2e}")

# This system is small enough to check against exact dense evolution.
exact = exact_heisenberg(a, h, 0.5)
err = normalized_frobenius(poly_to_dense(out) - exact)
print(f"distance to exact Heisenberg evolution: {err:.4f}")

# The low-degree part carries almost all of the weight:
weights = {}
for mask, coeff in out.terms.items():
    d = int(mask).bit_count()
    weights[d] = weights.get(d, 0.0) + abs(coeff) ** 2
for d in sorted(weights):
    print(f"  degree {d}: weight {np.sqrt(weights[d]):.4f}")
