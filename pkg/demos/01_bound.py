"""
How large must q be?
====================

The existence argument for the quarter-type search only kicks in above a
threshold Q(d, m).  It is a square-root expression in big integers, so we
evaluate it exactly and print both the integer floor and a 6-digit form.
"""
from diff_forge import q_bound

for d, m in [(3, 5), (3, 9), (2, 13), (4, 13), (12, 12)]:
    b = q_bound(d, m)
    print(f"Q({d},{m:2d}) = {b.decimal(6):>12}   floor = {b.floor}")

# any prime power q >= threshold is covered without searching
b = q_bound(3, 5)
print("\nfor d=3, m=5 the first uncovered-by-search q is", b.threshold)
print("U =", b.U)
