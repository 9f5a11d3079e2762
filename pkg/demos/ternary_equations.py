"""Ternary functional equations on the positive cone.

Three certificates: the entropy equation, the splitting recursion with a
modified power part, and the associativity bridge that glues two bivariate
operations into a single function of the sum.

Run: python3 demos/ternary_equations.py
"""

from infostab import (
    Constant,
    EntropySolution,
    ModifiedEntropySolution,
    PhiOfSum,
    PowerLaw,
    Sum3,
    Wave3,
    certify_associativity,
    certify_entropy_equation,
    certify_modified_entropy,
)

# entropy equation: exact solution, then trig noise on the interior
exact = EntropySolution(0.7, 2.0)
cert = certify_entropy_equation(exact, 2.0, 12)
print("entropy equation, exact solution:")
print(f"  eps1 {cert.epsilon:.2e}  distance {cert.distance:.2e} "
      f"<= {cert.bound:.2e}  ({cert.satisfied})")

noisy = Sum3((exact, Wave3(1e-4, seed=3, interior_only=True)))
cert = certify_entropy_equation(noisy, 2.0, 12)
print("entropy equation, wave noise 1e-4:")
print(f"  eps1 {cert.epsilon:.2e}  distance {cert.distance:.2e} "
      f"<= {cert.bound:.2e}  ({cert.satisfied})")

# modified power part on the box (0, 3]^3
f = ModifiedEntropySolution(0.4, 2.0, Constant(0.2))
cert = certify_modified_entropy(f, 2.0, 3, 12)
print("\nmodified recursion, exact, alpha=2:")
print(f"  fitted coefficient {cert.trace['a']:.6f} (built with 0.4)")
print(f"  distance {cert.distance:.2e} <= {cert.bound:.2e}  ({cert.satisfied})")

# associativity: A(u+v, w) ~ B(u, v+w) forces both near phi(u+v+w)
base = PhiOfSum(PowerLaw(1.0, 2.0))
box = (0.0, 1.0)
cert = certify_associativity(base, base, box, box, box, 16)
print("\nassociativity bridge, exact pair:")
print(f"  epsilon {cert.epsilon:.1e}")
print(f"  |A - phi(sum)| = {cert.distance_a:.2e} <= {cert.bound_a:.2e}")
print(f"  |B - phi(sum)| = {cert.distance_b:.2e} <= {cert.bound_b:.2e}")
print(f"  phi(1.5) = {cert.phi(1.5):.6f} (the exact core gives 1.5^2 = 2.25)")
