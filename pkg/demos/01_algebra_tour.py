#!/usr/bin/env python3
"""Tour of the algebra kernels: products, spectra, frames, Peirce blocks,
and the two commutation tests."""

import numpy as np

from ejaopt import (
    Element,
    SpinFactor,
    SymMatrix,
    eigenvalues,
    inner,
    jordan_product,
    norm,
    operator_commute,
    peirce_project,
    product_algebra,
    random_element,
    spectral_decompose,
    strongly_operator_commute,
    sym_from_matrix,
    sym_to_matrix,
    synthesize_from_frame,
    unit,
)

rng = np.random.default_rng(0)

print("=== symmetric matrices: X o Y = (XY + YX)/2 ===")
s3 = SymMatrix(3)
x = random_element(s3, rng)
y = random_element(s3, rng)
print("tr(x o y) =", inner(x, y), " (the trace inner product)")
print("x o y symmetric part:\n", np.round(sym_to_matrix(jordan_product(x, y)), 3))

print("\n=== spectral decomposition: x = sum_i lambda_i c_i ===")
dec = spectral_decompose(x)
print("eigenvalues:", np.round(dec.eigenvalues, 6))
recon = synthesize_from_frame(dec.frame, dec.eigenvalues)
print("reconstruction residual:", norm(recon - x))
c0 = dec.frame[0]
print("frame member is idempotent:", norm(jordan_product(c0, c0) - c0) < 1e-12)

print("\n=== spin factor: (x0, xb) with eigenvalues x0 +/- |xb| ===")
sp = SpinFactor(4)
z = Element(sp, [1.0, 0.0, 3.0, 4.0])
print("eigenvalues of (1, (0,3,4)):", eigenvalues(z), " (1 +/- 5)")
dz = spectral_decompose(z)
print("frame:", np.round(dz.frame[0].coords, 3), np.round(dz.frame[1].coords, 3))

print("\n=== products concatenate factors; eigenvalues merge sorted ===")
prod = product_algebra(SymMatrix(2), SpinFactor(3))
w = random_element(prod, rng)
print("rank", prod.rank, "spectrum:", np.round(eigenvalues(w), 4))

print("\n=== Peirce decomposition for an idempotent p ===")
p = sym_from_matrix(SymMatrix(2), np.diag([1.0, 0.0]))
m = sym_from_matrix(SymMatrix(2), np.array([[1.7, 2.5], [2.5, -0.4]]))
x1, x0, xh = peirce_project(p, m)
print("block with eigenvalue 1:\n", sym_to_matrix(x1))
print("block with eigenvalue 0:\n", sym_to_matrix(x0))
print("half block:\n", sym_to_matrix(xh))

print("\n=== commutation: shared frame vs aligned shared frame ===")
frame = spectral_decompose(random_element(s3, rng)).frame
a = synthesize_from_frame(frame, [3.0, 1.0, -2.0])
b_aligned = synthesize_from_frame(frame, [5.0, 2.0, 0.0])
b_shuffled = synthesize_from_frame(frame, [0.0, 5.0, 2.0])
print("operator commute (any shared frame):", operator_commute(a, b_shuffled))
print("strong commute needs sorted alignment:",
      strongly_operator_commute(a, b_aligned), "vs", strongly_operator_commute(a, b_shuffled))
print("unit element commutes with everything:", operator_commute(unit(s3), a))
