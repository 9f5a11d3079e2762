"""Stability of the fundamental equation on the open and closed domains.

An exact family member comes back with its parameters; a bounded
perturbation moves the recovered solution by at most K(alpha) * epsilon.

Run: python3 demos/fundamental_stability.py
"""

from infostab import (
    FunctionSum,
    FundamentalParametric,
    PowerFamily,
    ScaledBump,
    TriangleGrid,
    certify_fundamental_closed,
    certify_fundamental_open,
    residual,
    stability_constant_K,
    stability_constant_T,
)

print("stability constants")
print(f"{'alpha':>6} {'K':>14} {'T':>14}")
for a in (0.25, 0.5, 2.0, 3.0, 5.0):
    print(f"{a:>6} {stability_constant_K(a):>14.4f} {stability_constant_T(a):>14.4f}")
print(f"{0.0:>6} {stability_constant_K(0.0):>14.4f}   (T undefined at alpha=0)")

alpha = 0.5
exact = PowerFamily(2.0, 1.0, alpha)
noisy = FunctionSum((exact, ScaledBump(0.5, 0.2, 1e-3)))

# residual sweep: sup of the equation defect over the open triangle
grid = TriangleGrid(128)
for label, f in (("exact ", exact), ("noisy ", noisy)):
    rep = residual(FundamentalParametric(alpha), f, grid)
    print(f"\n{label} residual: sup {rep.sup:.3e} over {rep.samples} points, "
          f"argmax {tuple(round(t, 4) for t in rep.argmax_point)}")

# the open certificate recovers (a, b) and checks |f - candidate| <= K eps
cert = certify_fundamental_open(noisy, alpha, 256)
print(f"\nopen certificate at alpha={alpha}")
print(f"  epsilon   {cert.epsilon:.6e}")
print(f"  candidate {cert.candidate}")
print(f"  distance  {cert.distance:.6e} <= bound {cert.bound:.6e}: {cert.satisfied}")

# closed variant: lattice includes the boundary, bound max(K, T+1) eps
cert_c = certify_fundamental_closed(noisy, alpha, 256)
print(f"closed certificate: distance {cert_c.distance:.6e} "
      f"<= bound {cert_c.bound:.6e}: {cert_c.satisfied}")
