"""Seeded counterexample searches over small lattices.

Run: python3 demos/conjecture_search.py  (about a minute)
"""

from negdep.harness import search, verify_counterexample

for cid, n, budget in (("figure1-strictness", 3, 200), ("always-ulc", 4, 2000), ("rank-cover", 4, 2000), ("hnlc-implies-na", 4, 2000)):
    r = search(cid, n, budget, seed=1)
    print(r.summary())
    if r.found:
        print("   atoms:", {k: str(v) for k, v in r.counterexample["measure"].atoms().items()})
        print("   independently verified:", verify_counterexample(r))
