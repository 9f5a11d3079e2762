"""Negative degree is hyperstable: bounded noise is not survivable.

For alpha < 0 the only functions satisfying the equation within ANY finite
bound on the open domain are the exact family members, so a perturbed input
must fail, and the defect blows up as the domain margin h shrinks.

Run: python3 demos/hyperstability.py
"""

from infostab import (
    FunctionSum,
    PowerFamily,
    ScaledBump,
    certify_hyperstable,
    hyperstability_blowup_probe,
)

alpha = -1.0
exact = PowerFamily(1.0, 1.0, alpha)
noisy = FunctionSum((exact, ScaledBump(0.5, 0.2, 5e-4)))

c1 = certify_hyperstable(exact, alpha, 128)
print(f"exact member:  distance {c1.distance:.3e} <= {c1.bound:.3e}  "
      f"satisfied={c1.satisfied}")

c2 = certify_hyperstable(noisy, alpha, 128)
print(f"bump added:    distance {c2.distance:.3e} >  {c2.bound:.3e}  "
      f"satisfied={c2.satisfied}")

# shrinking-margin sweep on {x + y <= 1 - h}: sup defect grows like h^alpha
print(f"\n{'h':>12} {'sup defect':>14}")
rows = hyperstability_blowup_probe(noisy, alpha, [2.0**-k for k in range(3, 10)])
for h, sup in rows:
    print(f"{h:>12.6f} {sup:>14.6e}")
print(f"growth ratio last/first: {rows[-1][1] / rows[0][1]:.1f}")
