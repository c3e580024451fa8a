"""The Euler characteristic chain for Einstein metrics with K <= 1.

Also shows why the lower bound K_min >= beta(K_max) can only be checked on
actual Einstein manifolds: an algebraic Einstein curvature tensor can have
K_max = 1 and K_min = -1.
"""
import numpy as np

from curv4 import (compose, kmin_from_kmax, lower_from_upper_check,
                   positive_intersection_contradiction, weyl_from_blocks)
from curv4.models import catalog

rep = positive_intersection_contradiction(1.0)
print("chain at alpha = 1")
for key, value in rep.chain.items():
    print(f"  {key:<34}{value:.10f}")
print(f"  contradiction: {rep.contradiction}")
print()

print("beta(alpha) for a few alpha")
for alpha in (1 / 3, 0.5, 0.75, 1.0):
    print(f"  alpha = {alpha:.4f}  beta = {kmin_from_kmax(alpha):+.6f}")
print()

print("lower bound on the Einstein catalog (rescaled to Rc = g)")
for name, space in catalog().items():
    check = lower_from_upper_check(space.curvature)
    print(f"  {name:<13} K_max {check.kmax:.4f}  K_min {check.kmin:+.4f}  "
          f"bound {check.bound:+.4f}  holds {check.holds}")
print()

w = np.diag([-4 / 3, 2 / 3, 2 / 3])
R = compose(4.0, weyl=weyl_from_blocks(w, w))
check = lower_from_upper_check(R)
print("algebraic Einstein tensor with W+ = W- = diag(-4/3, 2/3, 2/3), Rc = g")
print(f"  K_max {check.kmax:.4f}  K_min {check.kmin:+.4f}  bound {check.bound:+.4f}  "
      f"holds {check.holds}")
