"""The combinatorial side: theta-quivers, shift formulas and U_v^- dimensions.

Uses the A4 chain with theta(i) = 5 - i. The script validates the built-in
orientation and tabulates quiver shifts for a few dimension vectors. It
then compares the sl3 module dimensions with the folded half quantum group.
"""

from symcry import ThetaModule, builtin
from symcry.half_quantum import HalfQuantum, folding_dims_by_depth, kostant_partition_count
from symcry.quiver import builtin_quiver, dim_rep_space, shift_div, shift_E, shift_F, validate_quiver

q, omega = builtin_quiver("a4_chain")
print(validate_quiver(q, builtin("a4_chain")))
print("orientation:", sorted(omega))

for values in [(1, 0, 0, 1), (1, 1, 1, 1), (2, 1, 1, 2)]:
    d = dict(zip(q.vertices, values))
    print(f"d={values}: dim Rep = {dim_rep_space(d, omega, q)}")
    for i in q.vertices:
        row = [shift_div(d, i, a, omega, q) for a in range(4)]
        print(f"   i={i}: shift_F={shift_F(d, i, omega, q):>3} shift_E={shift_E(d, i, omega, q):>3} divided shifts a=0..3: {row}")

# Kostant partition function versus the Gram-rank dimension of U_v^-(A3).
hq = HalfQuantum(builtin("a3"))
for w in hq.weights(4):
    print(f"A3 weight {w}: dim={hq.dim(w)}, partitions={kostant_partition_count(w)}")

# Folding: quotient U_v^- by the left ideal generated by f_i - f_theta(i).
depth = 5
print("V_theta(0) dims :", ThetaModule(builtin("sl3"), depth).dims_by_depth(depth))
print("folded quotient:", folding_dims_by_depth(depth, builtin("sl3")))
