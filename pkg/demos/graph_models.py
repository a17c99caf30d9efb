"""Spanning trees, random-cluster measures and urns on small graphs.

Run: python3 demos/graph_models.py
"""

from fractions import Fraction

from negdep import check_association, check_nc, rank_sequence
from negdep.models import complete_graph, random_cluster_measure, spanning_tree_measure, urn_measure

g = complete_graph(4)
ust = spanning_tree_measure(g)
print(f"K4 has {len(ust.support())} spanning trees; each edge is in a tree with probability {ust.means()[0]}")
print("edge correlations:", [str(c) for c in sorted({ust.covariance(i, j) for i in range(6) for j in range(i + 1, 6)})])
print("negative association:", check_association(ust).verdict)

# With p small and q much smaller than p, the random-cluster measure concentrates on trees.
for e in (Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000)):
    rc = random_cluster_measure(g, e, e * e)
    print(f"  p = {e}, q = p^2: TV to uniform spanning tree = {float(rc.tv_distance(ust)):.3g}")
print("q = 1/2 pairwise correlations nonpositive:", check_nc(random_cluster_measure(g, Fraction(1, 2), Fraction(1, 2))).verdict)

mu = urn_measure(4, 3, [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)])
print("\nthree balls in four urns, occupied-urn indicators:")
print("  negative association:", check_association(mu).verdict)
print("  occupied-count law:", [str(a) for a in rank_sequence(mu).a])
