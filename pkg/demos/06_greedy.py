"""
Greedy construction for large q
===============================

Far beyond the range of exhaustive search we can pick y_1, y_2, y_3 one
after another, each as the least element satisfying a few power-residue
conditions.  The conditions come from a fixed table keyed by the class of
1 - xi.  The result is certified the same way as a search witness.
"""
from diff_forge import find_constrained_element, field_of_order, greedy_lift_search, make_problem

# least x with x - 1 in the cube class C_0 and x - 2 in C_1
F = field_of_order(1009)
print(find_constrained_element(F, 3, [(1, 0), (2, 1)]))  # 0 qualifies: -1 is a cube
print(find_constrained_element(F, 3, [(1, 0), (2, 1)], exclude=(0,)))

for q in (323473, 323509, 323581):
    res = greedy_lift_search(make_problem(13, "quarter", q, lam=1))
    print(q, res.status, res.witness(), f"{res.seconds:.2f} s")
