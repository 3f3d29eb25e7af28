"""Combinatorics of the 56-vertex E7 polytope and a sampled look at its
Coxeter matroids.

Run: python3 demos/e7_structure.py
"""

from collections import Counter

from coxdressian import build_quotient, is_coxeter_matroid, is_strong_matroid, strong_exchange_system
from coxdressian.coxeter import antipodal_pairs, cross_polytope_faces
from coxdressian.verify import Sampler, candidate_subset

q = build_quotient(("E7", 7, 7))
print(f"{len(q)} vertices in dimension {q.dimension}, {len(q.edges)} edges, {len(q.roots)} roots")
print(f"{len(antipodal_pairs(q))} antipodal pairs, {len(cross_polytope_faces(q))} cross-polytope faces")
sizes = Counter(len(f) for f in strong_exchange_system(q))
print("equation lengths:", dict(sizes))

s = Sampler(1, "demo")
found = Counter()
for t in range(1, 400):
    cell = candidate_subset(s, q, t)
    if cell and is_coxeter_matroid(q, cell)[0]:
        found[(len(cell), is_strong_matroid(q, cell)[0])] += 1
print("sampled Coxeter matroids by (size, strong exchange):")
for key in sorted(found):
    print("  ", key, found[key])
