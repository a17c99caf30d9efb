"""A conditionally negatively associated measure that one external field breaks.

Run: python3 demos/field_sensitivity.py
"""

from fractions import Fraction

from negdep import apply_field, check_cna, check_plus, recheck_plus_witness
from negdep.models import field_sensitive_cna_measure, field_sensitive_threshold

for eps in (0, Fraction(2, 5), Fraction(4, 5), 1):
    print(f"eps = {eps}: CNA {check_cna(field_sensitive_cna_measure(eps)).verdict}")

eps = Fraction(1, 2)
mu = field_sensitive_cna_measure(eps)
lam_star = field_sensitive_threshold(eps)
print(f"\nAt eps = {eps} the field (lam, 1, 1) keeps Cov(X1, X2) <= 0 only for lam >= {lam_star}.")
for lam in (Fraction(1), lam_star, Fraction(1, 2), Fraction(1, 10)):
    cov = apply_field(mu, [lam, 1, 1]).covariance(1, 2)
    print(f"  lam = {lam}: Cov = {cov}")

# The sampled "+" search finds the same phenomenon without being told where to look.
r = check_plus(mu, "cna", samples=100)
print(f"\ncheck_plus(cna): {r.verdict}, witness field {r.witness['field']}")
print("witness re-checks:", recheck_plus_witness(mu, "cna", r.witness))
