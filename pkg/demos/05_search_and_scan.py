"""
Searching for the unknowns
==========================

For a given q we look for y_1, y_2, y_3 such that every D_h is a system of
representatives for the cyclotomic classes of index d.  The search is
exhaustive, so "exhausted" is a proof of nonexistence for that q.
"""
from diff_forge import make_problem, scan_range, search

res = search(make_problem(13, "quarter", 13, lam=1))
print("q=13:", res.status, res.witness(), f"{res.nodes} candidates")

res = search(make_problem(13, "quarter", 37, lam=1))
print("q=37:", res.status, f"after {res.nodes} candidates")

# scanning a range; the exhausted ones form the exception set
recs = scan_range(13, "quarter", 1, 13, 1000, jobs=2)
print("\nexceptions up to 1000:", [r["q"] for r in recs if r["status"] == "exhausted"])
print("witnesses found for", sum(r["status"] == "found" for r in recs), "other primes")
