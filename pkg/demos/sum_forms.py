"""Sum-form characterizations on the closed simplex.

Run: python3 demos/sum_forms.py
"""

from infostab import (
    FunctionSum,
    PowerLaw,
    ScaledBump,
    certify_sum_form,
    certify_sum_form_mixed,
    certify_sum_form_multiplicative,
)

# the minimax fit pulls the additive slope out of additive-plus-bounded data
phi = FunctionSum((PowerLaw(0.8, 1.0), ScaledBump(0.4, 0.15, 1e-5)))
cert = certify_sum_form(phi, 3, 64)
print("additive sum form:")
print(f"  epsilon {cert.epsilon:.3e}")
print(f"  kappa   {cert.trace['kappa']:.8f} (built with 0.8)")
print(f"  remainder {cert.distance:.3e} <= {cert.bound:.3e}  ({cert.satisfied})")

# multiplicative data splits into kappa*p + p^beta + bounded part
g = FunctionSum((PowerLaw(1.0, 1.7), PowerLaw(0.3, 1.0)))
cert = certify_sum_form_multiplicative(g, 3, 3, 48)
print("\nmultiplicative sum form:")
print(f"  kappa {cert.trace['kappa']:.6f}  beta {cert.trace['beta']:.6f} "
      f"(built with 0.3, 1.7)")
print(f"  remainder {cert.distance:.3e} <= {cert.bound:.3e}  ({cert.satisfied})")

# mixed weights: the regular representative is c * (p^a - p^b)
f = FunctionSum((PowerLaw(0.6, 2.0), PowerLaw(-0.6, 0.5)))
cert = certify_sum_form_mixed(f, 2.0, 0.5, 3, 3, 48)
print("\nmixed-degree sum form:")
print(f"  c {cert.trace['c']:.8f} (built with 0.6)")
print(f"  remainder {cert.distance:.3e} <= {cert.bound:.3e}  ({cert.satisfied})")
