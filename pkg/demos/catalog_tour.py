"""Tour of the homogeneous model spaces.

For each space: Weyl spectra, curvature extremes, and the Euler
characteristic and signature recovered from curvature integrands.
"""
import numpy as np

from curv4 import all_extremes, catalog, invariants, weyl_blocks

np.set_printoptions(precision=4, suppress=True)

for name, space in catalog().items():
    R = space.curvature
    blocks = weyl_blocks(R)
    ext = all_extremes(R)
    rep = invariants(space)
    print(f"{name}  (S = {R.scalar:g}, volume = {space.volume:.4f})")
    print(f"  W+ spectrum {blocks.plus_eigenvalues}   W- spectrum {blocks.minus_eigenvalues}")
    print(f"  K in [{ext.kmin.value:.4f}, {ext.kmax.value:.4f}]   "
          f"K_perp in [{ext.kperp_min.value:.4f}, {ext.kperp_max.value:.4f}]")
    print(f"  chi = {rep.chi:.10f}   tau = {rep.tau:.10f}   "
          f"nonnegative isotropic: {rep.isotropic_nonneg}")
    print()
