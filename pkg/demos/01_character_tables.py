"""Character tables of GL_2(F_q) and their mod-l reductions.

Run: python3 demos/01_character_tables.py
"""

from __future__ import annotations

from gl2def.brute import compare_table
from gl2def.fq_reps import char_table, conj_classes, fq_model, group_order
from gl2def.modl import modl_classify, valid_thetas

q = 5
model = fq_model(q)
print(f"F_{q}^2 is F_{model.p}[x] modulo {model.F2.modulus}; g2 = x generates it, g = g2^{q + 1} generates F_{q}^x.")

classes, table = conj_classes(q), char_table(q)
print(f"GL_2(F_{q}) has order {group_order(q)}, {len(classes)} conjugacy classes and {len(table)} irreducibles.")
by_label: dict[str, list] = {}
for chi in table:
    by_label.setdefault(chi.label, []).append(chi.dim)
for label, dims in by_label.items():
    print(f"  {len(dims):3d} of type {label:10s} dimension {dims[0]}")
print("sum of squared dimensions:", sum(c.dim ** 2 for c in table))

print("closed forms against brute-force matrix enumeration:", "agree" if not compare_table(q) else "DISAGREE")

l = 3
mc = modl_classify(q, l)
print(f"\nmod {l}: case {mc.case}, {len(mc.irreps)} irreducible Brauer characters, "
      f"{mc.regular_class_count} {l}-regular classes")
print("cuspidal theta exponents with nonempty lift set:", valid_thetas(q, l))
