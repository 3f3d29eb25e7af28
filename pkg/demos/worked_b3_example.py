"""The 3-cube with heights (0,0,0,-1,2,1,1,0): every cell is a strong Coxeter
matroid polytope, yet the heights violate the single B3 equation. A linear
program then finds different heights, inside the Dressian, that induce the very
same five tetrahedra.

Run: python3 demos/worked_b3_example.py
"""

from coxdressian import build_quotient, classify, is_member, regular_subdivision, strong_exchange_system
from coxdressian.cli import format_provenance
from coxdressian.subdivision import subdivision_to_off
from coxdressian.verify import example_42_heights, member_with_subdivision

q = build_quotient(("B", 3, 3))
mu = example_42_heights(q)
system = strong_exchange_system(q)
print("heights:", {str(lab): str(v) for lab, v in zip(q.labels, mu)})

ok, bad = is_member(mu, system)
print("member:", ok, "| fails", format_provenance(q, bad.provenance))

sub = regular_subdivision(q, mu)
reports, summary = classify(q, mu, sub)
print(f"{len(sub)} cells, summary {summary}")
for r in reports:
    print("  ", sorted(str(q.labels[i]) for i in r.cell.vertices), "strong" if r.is_strong_matroid else "")

nu = member_with_subdivision(("B", 3, 3), [sorted(c.vertices) for c in sub.cells])
print("member inducing the same cells:", {str(lab): str(v) for lab, v in zip(q.labels, nu)})
print("  is member:", is_member(nu, system)[0], "| same cells:", regular_subdivision(q, nu).key == sub.key)

with open("worked_b3_cells.off", "w") as fh:
    fh.write(subdivision_to_off(q, sub))
print("wrote worked_b3_cells.off")
