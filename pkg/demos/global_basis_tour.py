"""Compute the lower global basis for sl3 up to depth 4 and inspect it.

Each G(b) is printed in the word basis of its weight space. We then apply
F_1 and E_1 to a few basis elements and expand the results back in the
global basis, which is where the leading-coefficient estimates become
visible: F_1 G(b) hits G(f_1 b) with coefficient [eps_1(b)+1], and E_1 G(b)
hits G(e_1 b) with coefficient v^(1-eps_1(b)).
"""

from symcry import ThetaModule, build_crystal, builtin, compute_global_basis
from symcry.global_basis import run_criterion, verify_estimates, verify_global

DEPTH = 4

model = ThetaModule(builtin("sl3"), DEPTH)
graph = build_crystal(model, DEPTH)
table = compute_global_basis(model, graph, DEPTH)


def show(vec):
    words = model.piece(vec.grade).words
    terms = [f"({c})*F[{' '.join(map(str, w)) or 'vac'}]" for w, c in zip(words, vec.coords) if c]
    return " + ".join(terms) or "0"


for b in graph.vertices:
    print(f"G(b{b.id}) [eps_1={b.eps[1]}] = {show(table.G[b.id])}")

print()
for b in graph.vertices:
    if b.depth >= DEPTH:
        continue
    up = table.expand(model.apply_F(1, table.G[b.id]))
    line = ", ".join(f"b{k}: {c}" for k, c in sorted(up.items()))
    print(f"F_1 G(b{b.id}) = {{{line}}}   (f_1 b{b.id} = b{graph.f_edges[(b.id, 1)]})")
    if b.depth:
        down = table.expand(model.apply_E(1, table.G[b.id]))
        line = ", ".join(f"b{k}: {c}" for k, c in sorted(down.items()))
        print(f"E_1 G(b{b.id}) = {{{line}}}")

# The same facts, checked mechanically.
print()
for rep in (verify_global(table), verify_estimates(table), run_criterion(table)):
    print(rep)
