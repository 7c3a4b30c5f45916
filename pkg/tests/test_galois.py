from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl2def.galois import (
    DetDeterminedDesc,
    GaloisError,
    InducedRepDesc,
    admissible_level0,
    cft_dictionary,
    cft_inverse,
    check_induction,
    det_of_induced,
    det_oracle,
    galois_char_defring,
    galois_dichotomy,
    galois_ring,
    h1_h2_dims,
    langlands_match,
    match_pair,
    omega,
    rectifier,
)
from gl2def.local_chars import (
    TameChar,
    WildMarker,
    char_defring,
    local_field,
    quadratic,
    restrict_to_base,
)
from gl2def.types_transport import pi1_universal, primitive_type, type_to_pi


def tame(host, l, a, unif=0, wild=None):
    return TameChar.from_exponents(host, l, a, unif, wild)


# dictionary and cohomology ----------------------------------------------------------


def test_dictionary_trivial_and_omega():
    F = local_field(5, "F")
    triv = cft_dictionary(TameChar.trivial(F, 3))
    assert triv.frob == 0 and triv.inertia == 0
    A = galois_ring("O", 3, TameChar.trivial(F, 3), a=1)
    w = omega(F, A)
    assert w.inertia == 0 and w.label == "cyclotomic"
    # Frobenius goes to 5 = 2 mod 3
    assert A.target.root_of_unity(int(w.frob * A.target.M)) == 2


@settings(max_examples=100, deadline=None)
@given(
    st.sampled_from([(5, "F"), (7, "F"), (5, "E-unr"), (7, "E-ram"), (4, "E-unr")]),
    st.integers(0, 200),
    st.sampled_from([0, Fraction(1, 2), Fraction(1, 4), Fraction(3, 8)]),
)
def test_dictionary_round_trip(host, k, unif):
    K = local_field(*host)
    chi = TameChar.from_exponents(K, 3, k, unif)
    assert cft_inverse(cft_dictionary(chi)) == chi


def test_h1_table():
    assert h1_h2_dims(5, 3, "trivial") == (1, 0)
    assert h1_h2_dims(5, 3, "omega") == (1, 1)
    assert h1_h2_dims(7, 3, "trivial") == (2, 1)
    assert h1_h2_dims(7, 3, "other") == (0, 0)
    assert h1_h2_dims(7, 5, "other") == (0, 0)
    with pytest.raises(GaloisError):
        h1_h2_dims(9, 3, "trivial")


@pytest.mark.parametrize("q,l", [(5, 3), (7, 3), (4, 5), (7, 5), (11, 3), (13, 7)])
def test_h1_euler_characteristic(q, l):
    # local Euler characteristic: h0 - h1 + h2 = 0 for l != p
    for cls in ("trivial", "omega", "other"):
        h1, h2 = h1_h2_dims(q, l, cls)
        omega_trivial = q % l == 1
        h0 = 1 if cls == "trivial" or (cls == "omega" and omega_trivial) else 0
        assert h0 - h1 + h2 == 0


@pytest.mark.parametrize("q,role,l,n", [(7, "F", 3, 1), (5, "E-unr", 3, 1), (7, "F", 5, 0), (17, "E-unr", 3, 2)])
def test_galois_char_defring_matches_cft_partner(q, role, l, n):
    K = local_field(q, role)
    for k in range(3):
        chi = TameChar.from_exponents(K, l, k)
        R = galois_char_defring(cft_dictionary(chi))
        assert R.n == n
        assert R.presentation == char_defring(chi).presentation


# induced representations ------------------------------------------------------------


def _induced_inputs():
    out = []
    for q, ext in [(5, "unramified"), (7, "unramified"), (5, "ramified"), (7, "ramified"), (11, "unramified"), (13, "ramified")]:
        E = quadratic(q, ext)
        for a in range(4):
            for u in (0, Fraction(1, 2), Fraction(1, 4)):
                try:
                    chi = tame(E, 3, a, u)
                except ValueError:
                    continue
                r = InducedRepDesc(E, cft_dictionary(chi))
                if r.irreducible:
                    out.append(r)
    return out


def test_det_formula_agrees_with_matrix_oracle():
    inputs = _induced_inputs()
    assert len(inputs) > 20
    for r in inputs:
        res = det_oracle(r)
        assert res["ok"], (r.to_json(), res)


def test_det_of_trivial_xi_is_quadratic_character():
    E = quadratic(5, "unramified")
    d = cft_inverse(det_of_induced(InducedRepDesc(E, cft_dictionary(TameChar.trivial(E, 3)))))
    assert d.unit == 0 and d.unif == Fraction(1, 2)  # unramified of order 2
    R = quadratic(7, "ramified")
    d = cft_inverse(det_of_induced(InducedRepDesc(R, cft_dictionary(TameChar.trivial(R, 3)))))
    assert d.unit == Fraction(1, 2)


def test_det_is_multiplicative_under_norm_twists():
    from gl2def.local_chars import norm_transfer

    E = quadratic(7, "unramified")
    F = E.base()
    xi = tame(E, 3, 1)
    phi = tame(F, 3, 1, Fraction(1, 4))
    d1 = cft_inverse(det_of_induced(InducedRepDesc(E, cft_dictionary(xi))))
    d2 = cft_inverse(det_of_induced(InducedRepDesc(E, cft_dictionary(xi * norm_transfer(phi, E)))))
    # det Ind(xi (phi o N)) = det Ind(xi) phi^2
    assert d2 == d1 * phi.power(2)


@pytest.mark.parametrize("kind,a", [("residue", 1), ("dual", 1), ("O", 2)])
def test_induction_point_counts(kind, a):
    for q, ext, chi_args in [
        (5, "unramified", (1,)),
        (7, "unramified", (1,)),
        (7, "ramified", (1, Fraction(1, 4), WildMarker(1, "w"))),
        (5, "ramified", (1, 0, WildMarker(1, "w"))),
    ]:
        E = quadratic(q, ext)
        chi = tame(E, 3, *chi_args)
        r = InducedRepDesc(E, cft_dictionary(chi))
        A = galois_ring(kind, 3, chi, restrict_to_base(chi), a=a)
        rep = check_induction(r, A)
        assert rep.ok and rep.ad_matches, rep.to_json()


def test_induction_from_tame_ramified_can_miss_directions():
    # xi(-1) = -1 and q = -1 mod l: xi^sigma / xi = omega on G_E, so Ad rho has an
    # extra class and Ind xi also comes from the unramified extension
    E = quadratic(5, "ramified")
    chi = tame(E, 3, 1)
    r = InducedRepDesc(E, cft_dictionary(chi))
    A = galois_ring("dual", 3, chi, restrict_to_base(chi))
    rep = check_induction(r, A)
    assert rep.tangent_dim_from_points == 1 and rep.ad_dim == 2
    assert galois_dichotomy(r, A).branch == "induced-from-unramified"


def test_dichotomy_branches():
    E = quadratic(5, "unramified")
    chi = tame(E, 3, 1)
    A = galois_ring("O", 3, chi, a=1)
    assert galois_dichotomy(InducedRepDesc(E, cft_dictionary(chi)), A).branch == "induced-from-unramified"
    R = quadratic(7, "ramified")
    wchi = tame(R, 5, 1, 0, WildMarker(1, "w"))
    A5 = galois_ring("O", 5, wchi, a=1)
    d = galois_dichotomy(InducedRepDesc(R, cft_dictionary(wchi)), A5)
    assert d.branch == "det-determined" and d.det_determined
    # q = 7 is not +-1 mod 5: a generic unramified-induced rho is det-determined too
    E7 = quadratic(7, "unramified")
    c = tame(E7, 5, 1)
    assert galois_dichotomy(InducedRepDesc(E7, cft_dictionary(c)), galois_ring("O", 5, c, a=1)).det_determined
    with pytest.raises(GaloisError):
        galois_dichotomy("opaque", A)
    assert galois_dichotomy(DetDeterminedDesc(cft_dictionary(TameChar.trivial(E.base(), 3)), "x"), A).det_determined


# rectifier and matching ----------------------------------------------------------------


@pytest.mark.parametrize("q,l", [(5, 3), (7, 3), (7, 5), (11, 3)])
def test_rectifier_is_chi_independent(q, l):
    R = rectifier(q, l)
    assert len(R.certified_over) >= 3
    assert R.unif_value == Fraction(-1, q)


def test_rectifier_rejects_too_few_characters():
    with pytest.raises(GaloisError):
        rectifier(5, 3, chis=admissible_level0(5, 3)[:2])


@pytest.mark.parametrize("q,l", [(5, 3), (7, 3)])
def test_level0_matching(q, l):
    E = quadratic(q, "unramified")
    for chi in admissible_level0(q, l)[:2]:
        rep = match_pair(E, chi)
        assert rep.ok(), rep.checks
        assert rep.points["pi"] == rep.points["rho"]
        assert rep.iso["candidates_matching"] == 1


def test_level0_matching_point_count_example():
    # theta of order 8 at (5,3): both rings W[[t]][z]/(z^3 - 1)
    rep = match_pair(quadratic(5, "unramified"), tame(quadratic(5, "unramified"), 3, 1))
    assert rep.pi_ring.describe() == rep.rho_ring.describe()
    assert "z**3 - 1" in str(rep.rho_ring.presentation.relations[0].as_expr())
    assert rep.points == {"pi": 81, "rho": 81}


@pytest.mark.parametrize("kind,a", [("dual", 1), ("O", 1), ("O", 2)])
def test_ramified_and_primitive_matching(kind, a):
    R = quadratic(7, "ramified")
    rep = match_pair(R, tame(R, 3, 1, Fraction(1, 4), WildMarker(1, "w")), kind=kind, a=a)
    assert rep.ok(), rep.checks
    assert rep.branch == "det-determined"
    rep = langlands_match(type_to_pi(primitive_type(7, 3, 1, "1/4", 3)), kind=kind, a=a)
    assert rep.ok(), rep.checks


def test_case3_matching():
    E = quadratic(5, "unramified")
    rep = match_pair(E, tame(E, 3, 1, 0, WildMarker(2, "b")))
    assert rep.ok(), rep.checks


def test_matching_rejects_non_supercuspidal():
    pi, _ = pi1_universal(5, 3)
    with pytest.raises(GaloisError):
        langlands_match(pi)


def test_report_json_has_conventions():
    rep = match_pair(quadratic(5, "unramified"), tame(quadratic(5, "unramified"), 3, 1))
    js = rep.to_json()
    conv = js["conventions"]
    assert conv["frobenius"].startswith("arithmetic")
    assert conv["delta"]["unif_value"] == "-1/5"
    assert "N(varpi_E)" in str(conv) or "ramified" in str(conv)
