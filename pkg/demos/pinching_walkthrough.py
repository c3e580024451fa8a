"""Why S^2 x S^2 fails the pinching conditions while CP^2 passes.

Both are Einstein; normalize them to Rc = g (S = 4).  The product has
max K_perp = 1, which equals S/4 and so sits above every threshold, whereas
CP^2 has max K_perp = 2/3.
"""
from curv4 import (SpectralContext, check_conditions, cp2, discriminant_certificate,
                   product_s2s2, threshold)

spaces = {"S2xS2": product_s2s2().curvature, "CP2": cp2(4.0).curvature}
ctx = SpectralContext(lambda1=4 / 3, k=1.0)   # the smallest lambda1 allowed by Rc >= 1

for name, R in spaces.items():
    print(f"{name}: threshold(S=4, lambda1=4/3) = {threshold(4.0, 4 / 3):.6f}")
    rep = check_conditions(R, ctx)
    for c in rep.conditions:
        verdict = "holds" if c.passed else "fails"
        print(f"  condition {c.condition}: measured {c.measured:.6f} {c.direction} "
              f"{c.threshold:.6f}  {verdict}")
    cert = discriminant_certificate(R, ctx)
    print(f"  pointwise certificate: {cert.status}")
    if cert.status != "not-applicable":
        print(f"    leading coefficient {cert.leading:.6f} >= floor {cert.leading_floor:.6f}")
        for key, value in cert.chain.items():
            print(f"    discriminant bound [{key}] = {value:.6f}")
    print()

# a larger lambda1 raises the threshold towards S/4 but never reaches it
for lam in (1.0, 10.0, 1e3, 1e6):
    print(f"lambda1 = {lam:>9g}: threshold = {threshold(4.0, lam):.9f}")
