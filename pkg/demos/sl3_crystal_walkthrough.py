"""Walk through the smallest interesting case: the swap involution on sl3.

Run with ``python3 demos/sl3_crystal_walkthrough.py``. It builds the module
out to depth 5, lists each crystal vertex with its string lengths, matches
the graph against the IC-sheaf reference model and writes the graph as
sl3_crystal.dot in the current directory.
"""

from pathlib import Path

from symcry import ThetaModule, build_crystal, builtin
from symcry.geometry_model import check_isomorphism, reference_graph

DEPTH = 5

datum = builtin("sl3")
model = ThetaModule(datum, DEPTH)

# Weight spaces are graded by the number of F's. Because theta swaps the two
# simple roots, only the total count matters, so each depth is one space.
print("dimension by depth:", model.dims_by_depth(DEPTH))

graph = build_crystal(model, DEPTH)
print("crystal vertices by depth:", graph.counts_by_depth())
for b in graph.vertices:
    print(f"  b{b.id:<2} depth {b.depth}  eps_1={b.eps[1]}  eps_-1={b.eps[-1]}")

# F_1 and F_-1 coincide on some vertices and split on others. The split
# vertices are where a new IC label r appears one depth further down.
print("F-edges:")
for s, i, t in graph.edges():
    print(f"  b{s} -[{i}]-> b{t}")

# The reference model labels vertices IC^n_r with 0 <= 2r <= n and predicts
# eps_1 = n - 2r. The isomorphism check returns the explicit bijection.
report = check_isomorphism(reference_graph(DEPTH), graph)
print(report)
if report.ok:
    for ic, b in sorted(report.checks[0].witness.items()):
        print(f"  {ic:>8} <-> {b}")

out = Path("sl3_crystal.dot")
out.write_text(graph.to_dot())
print("wrote", out)
