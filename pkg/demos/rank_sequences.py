"""Exchangeable measures: ultra log-concavity decides every negative dependence property.

Run: python3 demos/rank_sequences.py
"""

from fractions import Fraction

import numpy as np

from negdep import check_association, check_cna, check_jnrd, check_lattice, convolve, is_ulc
from negdep.models import exchangeable_measure
from negdep.sequences import random_rank_sequence, random_ulc

rng = np.random.default_rng(0)
print("rank law                         ULC    h-NLC  CNA    JNRD")
for i in range(8):
    r = random_ulc(rng, 4) if i % 2 else random_rank_sequence(rng, 4)
    mu = exchangeable_measure(r)
    row = [bool(is_ulc(r.a)), check_lattice(mu, hereditary=True).holds, check_cna(mu).holds, check_jnrd(mu).holds]
    print(f"{' '.join(str(a) for a in r.a):32s} " + "  ".join(f"{str(v):5s}" for v in row))

# Negative association alone is weaker: this rank law gives an NA measure that is not ULC.
a = (0, Fraction(1, 3), Fraction(4, 9), Fraction(2, 9))
mu = exchangeable_measure(a)
print(f"\nrank law {[str(v) for v in a]}: NA {check_association(mu).verdict}, ULC {bool(is_ulc(a))}")

s, t = random_ulc(rng, 3), random_ulc(rng, 5)
print("\nconvolution of two ULC laws is ULC:", bool(is_ulc(convolve(s.a, t.a))))
