"""
Paley SDFs and their D_h tables
===============================

The first-type Paley SDF on F_p is a single block.  Labelling its entries
with unknowns y_1, y_2, ... and grouping the differences by their first
coordinate gives a symbolic table D_h that the search later evaluates.
"""
from diff_forge import build_scheme, paley_sdf, symbolic_dh, verify_sdf

for p in (5, 7, 9, 13):
    v = verify_sdf(paley_sdf(p))
    print(f"Paley SDF over F_{p}: mu={v.observed} ok={v.ok}")

scheme = build_scheme(13, "quarter")
print("\nblock template over F_13:", scheme.template_strings())
table = symbolic_dh(scheme)
for h in table.keys:
    print(f"  D_{h}: {', '.join(table.rendered(h))}")
