#!/usr/bin/env python3
"""Lidskii and Ky Fan eigenvalue inequalities, checked as majorization
verdicts, and the three equivalent faces of strong operator commutation."""

import numpy as np

from ejaopt import (
    SymMatrix,
    eigenvalues,
    kyfan_holds,
    lidskii_holds,
    majorizes,
    random_element,
    sort_desc,
    spectral_decompose,
    strongly_operator_commute,
    synthesize_from_frame,
    t_transform_sample,
)

rng = np.random.default_rng(1)
alg = SymMatrix(4)

print("=== majorization: prefix sums of sorted vectors ===")
v = np.array([2.0, 0.0])
u = np.array([1.0, 1.0])
print("(1,1) < (2,0):", majorizes(v, u))
print("averaging steps produce majorized vectors:")
w = rng.standard_normal(5)
for _ in range(3):
    w2 = t_transform_sample(w, rng)
    print("  verdict:", majorizes(w, w2).holds, " strict:", majorizes(w, w2).strict)
    w = w2

print("\n=== Lidskii: lambda(a) - lambda(b) < lambda(a - b) ===")
for _ in range(3):
    a = random_element(alg, rng)
    b = random_element(alg, rng)
    vd = lidskii_holds(a, b)
    print(f"  holds={vd.holds}  worst prefix margin={vd.worst_prefix_gap:.2e}  sum gap={vd.sum_gap:.2e}")

print("\n=== Ky Fan: lambda(a + b) < lambda(a) + lambda(b) ===")
for _ in range(3):
    a = random_element(alg, rng)
    b = random_element(alg, rng)
    vd = kyfan_holds(a, b)
    print(f"  holds={vd.holds}  worst prefix margin={vd.worst_prefix_gap:.2e}")

print("\n=== the equality cases characterize strong commutation ===")
frame = spectral_decompose(random_element(alg, rng)).frame
a = synthesize_from_frame(frame, sort_desc(rng.standard_normal(4)))
b = synthesize_from_frame(frame, sort_desc(rng.standard_normal(4)))
print("constructed aligned pair:")
print("  strong commute:", strongly_operator_commute(a, b))
print("  lambda(a+b) == lambda(a)+lambda(b):",
      np.max(np.abs(eigenvalues(a + b) - (eigenvalues(a) + eigenvalues(b)))) < 1e-10)
print("  (lambda(a)-lambda(b))^down == lambda(a-b):",
      np.max(np.abs(sort_desc(eigenvalues(a) - eigenvalues(b)) - eigenvalues(a - b))) < 1e-10)

a = random_element(alg, rng)
b = random_element(alg, rng)
print("generic pair:")
print("  strong commute:", strongly_operator_commute(a, b))
print("  additivity gap:", float(np.max(np.abs(eigenvalues(a + b) - (eigenvalues(a) + eigenvalues(b))))))
