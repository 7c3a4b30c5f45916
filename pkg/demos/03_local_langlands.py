"""From an admissible pair to matching deformation rings on both sides.

Run: python3 demos/03_local_langlands.py
"""

from __future__ import annotations

from fractions import Fraction

from gl2def.galois import InducedRepDesc, cft_dictionary, check_induction, galois_ring, match_pair, rectifier
from gl2def.local_chars import TameChar, WildMarker, coefficient_for, quadratic, restrict_to_base
from gl2def.types_transport import check_transport, pair_to_type, type_to_pi

q, l = 5, 3
E = quadratic(q, "unramified")
chi = TameChar.from_exponents(E, l, 1)
t = pair_to_type(E, chi)
pi = type_to_pi(t)
print(f"chi on E^x: unit part {chi.unit}, uniformizer {chi.unif} (Q/Z labels)")
print(f"type: case {t.case}, residual theta exponent {t.theta.exponent}, supercuspidal {pi.supercuspidal}")

A = coefficient_for("O", l, chi, restrict_to_base(chi), a=2)
rep = check_transport(t, A)
print(f"transport over {A.name}: {rep.lifts} character lifts <-> {rep.pi_points} deformations of pi, ok={rep.ok}")

R = rectifier(q, l)
print(f"\nrectifying character: trivial on units, uniformizer -> {R.unif_value}, "
      f"same value for {len(R.certified_over)} different pairs")

m = match_pair(E, chi)
print(f"ring on the GL_2 side:    {m.pi_ring.describe()}")
print(f"ring on the Galois side:  {m.rho_ring.describe()}")
iso = m.iso
print("generator map: t' ->", iso["t'"], " z' ->", iso["z'"], " with u =", iso["u"])
print(f"   other candidate maps reproducing the matching: {m.iso['candidates_matching'] - 1}")
print(f"points over {m.ring}: {m.points}, all checks {m.ok()}")

print("\nA tamely ramified character where induction loses a direction:")
R5 = quadratic(5, "ramified")
xi = TameChar.from_exponents(R5, l, 1)
ind = check_induction(InducedRepDesc(R5, cft_dictionary(xi)), galois_ring("dual", l, xi, restrict_to_base(xi)))
print(f"   tangent dimension of the character ring {ind.tangent_dim_from_points}, "
      f"of the induced representation {ind.ad_dim}")

wild = TameChar.from_exponents(quadratic(7, "ramified"), l, 1, Fraction(1, 4), WildMarker(1, "w"))
m = match_pair(quadratic(7, "ramified"), wild)
print(f"\nminimal ramified pair at q=7: branch {m.branch}, points {m.points}, all checks {m.ok()}")
