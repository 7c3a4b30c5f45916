"""Deformation rings of cuspidal mod-l representations of GL_2(F_q).

For theta != theta^q the ring is the group ring of the l-part of the
torus; for theta = theta^q it is W[[t]]/Q(t).

Run: python3 demos/02_deformation_rings.py
"""

from __future__ import annotations

from gl2def.defring import compute_Q, defring_report, weil_pi1_ring

for q, l, a in [(5, 3, 1), (7, 3, 1), (5, 3, 0), (17, 3, 0)]:
    rep = defring_report(q, l, a, verify=True)
    pres = rep.algebra.presentation
    bad = [k for k, f in rep.flags.items() if not f.ok]
    print(f"q={q:2d} l={l} theta=g2^{a}  [{rep.case}]")
    print(f"   ring: {pres.describe()}   tangent dimension {rep.tangent_dim}")
    print(f"   checks not verified: {bad or 'none'}")

print("\nThe idempotent check fails for theta = theta^q: the class sum is not l-integral there.")
rep = defring_report(5, 3, 0, verify=True)
print("   witness:", rep.flags["idempotent"].witness)

print("\nQ(t) for l | q+1:")
for q, l in [(5, 3), (17, 3), (9, 5)]:
    print(f"   q={q:2d} l={l}: {compute_Q(q, l).to_json()['display']}")

R = weil_pi1_ring(17, 3)
print("\nThe trivial-theta representation of GL_2(F) with q = 17, l = 3:")
print("  ", R.presentation.describe(), " tangent dimension", R.presentation.tangent_dim())
