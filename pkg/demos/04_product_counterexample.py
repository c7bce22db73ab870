#!/usr/bin/env python3
"""Why simplicity matters: on a product algebra, a weak-orbit minimizer of
|x - a| need not strongly commute with a, even though it still operator
commutes, and the full eigenvalue orbit reaches a strictly better value."""

import numpy as np

from ejaopt import (
    SymMatrix,
    builtin,
    counterexample_no_strong,
    eigenvalues,
    norm,
    product_algebra,
    sym_from_matrix,
    weak_orbit_reps,
)
from ejaopt.algebra import join, split

s2 = SymMatrix(2)
alg = product_algebra(s2, s2)

a = join(alg, [sym_from_matrix(s2, np.diag([4.0, 3.0])),
               sym_from_matrix(s2, np.diag([2.0, 1.0]))])
b = join(alg, [sym_from_matrix(s2, np.diag([4.0, 1.0])),
               sym_from_matrix(s2, np.diag([3.0, 2.0]))])

print("a has factor spectra ((4,3), (2,1)); b has ((4,1), (3,2)).")
print("Both have full spectrum (4,3,2,1), so a lies on the eigenvalue orbit [b],")
print("but a is NOT in the automorphism (weak) orbit of b: automorphisms can only")
print("permute the two isomorphic factors, never move eigenvalues across them.\n")

reps = weak_orbit_reps(alg, b)
print("weak-orbit assignment representatives of b:")
for r in reps:
    print("  ", [tuple(np.round(eigenvalues(p), 3)) for p in split(r)])

fn = builtin("schatten", 4, p=2)
rep = counterexample_no_strong(alg, a, b, fn)

print("\nweak-orbit components of [b] and their minima of |x - a|:")
for comp in rep.components:
    tag = "  <- component of b" if comp.contains_b else ""
    print(f"  spectra {comp.spectra}: min = {comp.value:.6f}"
          f"  strong commute at optimizer: {comp.any_strong_commute}{tag}")

b_comp = next(c for c in rep.components if c.contains_b)
print("\nat b's component optimizer:")
print("  operator commutes with a:   ", b_comp.certificate.checks["operator_commute"])
print("  strongly commutes with a:   ", b_comp.certificate.checks["strong_commute_with_a"])
print("  inner-product gap <a,x> - <lam(a),lam(x)>:",
      b_comp.certificate.residuals["inner_gap_a"])

full = rep.spectral_set_solution
print("\nover the whole orbit [b] the minimum is", full.value, "attained at x = a:",
      norm(full.x_star - a) < 1e-9)
print("counterexample confirmed:", rep.is_counterexample)
