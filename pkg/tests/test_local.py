from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl2def.coeff_rings import coefficient_ring
from gl2def.local_chars import (
    LocalCharError,
    TameChar,
    WildFlagError,
    WildMarker,
    char_defring,
    coefficient_for,
    deformation_points,
    galois_conjugate,
    is_admissible,
    local_field,
    minimal_decompose,
    norm_preimage,
    norm_transfer,
    parse_wild,
    quadratic,
    restrict_extend_ramified,
    restrict_lift,
    restrict_to_base,
    sqrt_candidates,
    sqrt_unit_lift,
    teichmuller_lift,
)
from gl2def.types_transport import (
    TransportError,
    case3_baseline_check,
    check_ramified_transport,
    check_transport,
    pair_to_type,
    pi1_universal,
    primitive_type,
    transport_deformation,
    type_to_pi,
)
from gl2def.defring import finite_ring


def tame(host, l, a, unif=0, wild=None):
    return TameChar.from_exponents(host, l, a, unif, wild)


def unit_exps(host, l):
    Np = host.residue_size - 1
    while Np % l == 0:
        Np //= l
    return range(Np)


# fields and characters -------------------------------------------------------------


def test_field_descriptors():
    E = quadratic(5, "unramified")
    assert E.residue_size == 25 and E.ramification == 1 and E.base().role == "F"
    R = quadratic(5, "ramified")
    assert R.residue_size == 5 and R.ramification == 2
    with pytest.raises(LocalCharError):
        quadratic(4, "ramified")


def test_unit_order_must_be_prime_to_l():
    F = local_field(7, "F")
    with pytest.raises(LocalCharError):
        TameChar(F, 3, Fraction(1, 3))
    with pytest.raises(LocalCharError):
        TameChar(F, 3, Fraction(1, 4))  # 4 does not divide q - 1 = 6


def test_wild_flags_must_be_exclusive():
    with pytest.raises(WildFlagError):
        WildMarker(2, "a", factors_through_norm=True, minimal=True)
    with pytest.raises(WildFlagError):
        WildMarker(2, "a", factors_through_norm=False, minimal=False)
    w = parse_wild("level=3,id=a,ftn=0,minimal=1")
    assert w.level == 3 and w.minimal
    assert WildMarker.from_json(w.to_json()) == w


def test_norm_transfer_examples():
    F = local_field(5, "F")
    E = quadratic(5, "unramified")
    assert norm_transfer(TameChar.trivial(F, 3), E).is_trivial
    c = TameChar(F, 3, Fraction(0), Fraction(1, 4))
    assert norm_transfer(c, E).unif == Fraction(1, 2)
    R = quadratic(7, "ramified")
    F7 = local_field(7, "F")
    # unit exponent a on mu_6 becomes 2a
    assert norm_transfer(tame(F7, 5, 1), R).unit == Fraction(2, 6)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(5, 3, "unramified"), (7, 3, "unramified"), (7, 3, "ramified"), (7, 5, "ramified")]), st.data())
def test_norm_transfer_is_homomorphism(case, data):
    q, l, ext = case
    E = quadratic(q, ext)
    F = E.base()
    ex = list(unit_exps(F, l))
    a, b = data.draw(st.sampled_from(ex)), data.draw(st.sampled_from(ex))
    u, v = data.draw(st.sampled_from([0, Fraction(1, 2), Fraction(1, 4)])), data.draw(st.sampled_from([0, Fraction(1, 2)]))
    p1, p2 = tame(F, l, a, u), tame(F, l, b, v)
    assert norm_transfer(p1 * p2, E) == norm_transfer(p1, E) * norm_transfer(p2, E)


def test_admissibility_examples():
    E = quadratic(5, "unramified")
    assert is_admissible(E, tame(E, 3, 1))[0]
    # unit exponent divisible by q+1 on the prime-to-l part factors through the norm
    ok, why = is_admissible(E, tame(E, 3, 0, Fraction(1, 2)))
    assert not ok
    R = quadratic(7, "ramified")
    assert not is_admissible(R, tame(R, 3, 1))[0]
    assert is_admissible(R, tame(R, 3, 1, 0, WildMarker(1, "w")))[0]
    F = E.base()
    assert not is_admissible(E, norm_transfer(tame(F, 3, 1, Fraction(1, 4)), E))[0]


def test_admissibility_against_brute_force_kernel():
    """chi tame on unramified E factors through N iff it is trivial on ker N = mu^(q-1)."""
    for q, l in [(5, 3), (7, 3), (4, 3), (7, 5)]:
        E = quadratic(q, "unramified")
        Np = E.residue_size - 1
        while Np % l == 0:
            Np //= l
        for a in range(Np):
            # kernel of x -> x^(q+1) on mu_{N'} is generated by g^(N'/gcd(N',q+1))
            k = Np // gcd(Np, q + 1)
            trivial_on_kernel = (a * k) % Np == 0
            assert is_admissible(E, tame(E, l, a))[0] == (not trivial_on_kernel)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(5, 3), (7, 3), (7, 5)]), st.data())
def test_admissibility_is_twist_invariant(ql, data):
    q, l = ql
    E = quadratic(q, "unramified")
    F = E.base()
    chi = tame(E, l, data.draw(st.sampled_from(list(unit_exps(E, l)))), data.draw(st.sampled_from([0, Fraction(1, 2)])))
    phi = tame(F, l, data.draw(st.sampled_from(list(unit_exps(F, l)))), data.draw(st.sampled_from([0, Fraction(1, 4)])))
    tw = chi * norm_transfer(phi, E)
    assert is_admissible(E, chi)[0] == is_admissible(E, tw)[0]
    if is_admissible(E, chi)[0]:
        # the canonical minimal part is twist invariant
        assert minimal_decompose(chi)[1] == minimal_decompose(tw)[1]


def test_minimal_decompose_roundtrip_and_wild():
    E = quadratic(5, "unramified")
    chi = tame(E, 3, 1)
    phi, cp = minimal_decompose(chi)
    assert phi.is_trivial and cp == chi
    R = quadratic(7, "ramified")
    chi = tame(R, 3, 1, Fraction(1, 4), WildMarker(3, "w"))
    phi, cp = minimal_decompose(chi)
    assert phi.wild is None and cp.wild == chi.wild
    assert norm_transfer(phi, R) * cp == chi
    assert norm_preimage(cp) is None


def test_galois_conjugate_is_involution():
    E = quadratic(7, "unramified")
    for a in unit_exps(E, 3):
        c = tame(E, 3, a, Fraction(1, 2))
        assert galois_conjugate(galois_conjugate(c)) == c


# coefficient lifts ----------------------------------------------------------------


def test_sqrt_unit_lift_examples():
    A = coefficient_ring("O", 1, 3, 2)  # Z/9
    assert sqrt_candidates(A, A.from_int(4), 2) == [A.from_int(2)]
    assert sqrt_unit_lift(A, A.from_int(4), 2) == A.from_int(2)
    assert sqrt_unit_lift(A, A.from_int(4), 1) == A.from_int(7)
    assert sqrt_unit_lift(A, A.one, 1) == A.one
    with pytest.raises(LocalCharError):
        sqrt_unit_lift(A, A.from_int(4), 0)


@pytest.mark.parametrize("a", [1, 2, 3])
def test_sqrt_unique_and_exact(a):
    A = coefficient_ring("O", 1, 5, a)
    for x in A.units():
        sq = A.mul(x, x)
        r = A.residue(x)
        assert sqrt_unit_lift(A, sq, r) == x
        assert len(sqrt_candidates(A, sq, r)) == 1


@pytest.mark.parametrize(
    "q,ext,l,n",
    [(7, "F", 3, 1), (5, "E-unr", 3, 1), (7, "F", 5, 0), (17, "E-unr", 3, 2), (4, "E-unr", 5, 1)],
)
def test_char_defring_shape(q, ext, l, n):
    host = local_field(q, ext)
    P = char_defring(TameChar.trivial(host, l))
    assert P.n == n
    assert P.has_zeta == (n > 0)


@pytest.mark.parametrize("q,ext,l", [(5, "E-unr", 3), (7, "F", 3), (7, "F", 5), (4, "F", 3), (7, "E-ram", 3)])
@pytest.mark.parametrize("kind,a", [("residue", 1), ("dual", 1), ("O", 1), ("O", 2), ("O", 3)])
def test_point_counts_agree(q, ext, l, kind, a):
    host = local_field(q, ext)
    chi = TameChar.trivial(host, l)
    P = char_defring(chi)
    A = coefficient_for(kind, l, chi, a=a)
    pts = deformation_points(chi, A)
    assert len(pts) == len(P.points(A))
    assert {c.key() for c in pts} == {c.key() for c in P.points(A)}
    if kind == "residue":
        assert len(pts) == 1
    if kind == "dual":
        # tangent dimension 1 + (1 if the l-part of mu is nontrivial)
        assert len(pts) == A.K.size ** (1 + (P.n > 0))


def test_universal_character_round_trip():
    E = quadratic(5, "unramified")
    chi = tame(E, 3, 1)
    P = char_defring(chi)
    A = coefficient_for("O", 3, chi, a=2)
    for c in deformation_points(chi, A):
        assert P.to_char(A, P.from_char(c)) == c


@pytest.mark.parametrize("q,l", [(7, 3), (5, 3), (11, 5)])
@pytest.mark.parametrize("kind,a", [("residue", 1), ("dual", 1), ("O", 2)])
def test_restrict_extend_ramified_bijection(q, l, kind, a):
    R = quadratic(q, "ramified")
    chi = tame(R, l, 1, Fraction(1, 4), WildMarker(1, "w"))
    central = restrict_to_base(chi)
    A = coefficient_for(kind, l, chi, central, a=a)
    phis = deformation_points(central, A)
    ext = [restrict_extend_ramified(p, chi) for p in phis]
    assert all(e.reduces_to(chi) for e in ext)
    assert [restrict_lift(e) for e in ext] == phis
    assert {e.key() for e in ext} == {c.key() for c in deformation_points(chi, A)}


# types and transport ------------------------------------------------------------------


def test_pair_to_type_cases():
    E = quadratic(5, "unramified")
    t1 = pair_to_type(E, tame(E, 3, 1))
    assert t1.case == 1 and not t1.theta.is_q_fixed()
    assert type_to_pi(t1).supercuspidal
    R = quadratic(7, "ramified")
    t2 = pair_to_type(R, tame(R, 3, 1, 0, WildMarker(3, "w")))
    assert t2.case == 2 and t2.stratum.parity == "odd"
    t3 = pair_to_type(E, tame(E, 3, 1, 0, WildMarker(2, "w")))
    assert t3.case == 3 and t3.eta == "eta(w)" and len(t3.normalization) == 3
    with pytest.raises(TransportError):
        pair_to_type(R, tame(R, 3, 1))


def test_admissible_level0_pairs_give_supercuspidals():
    # a q-fixed theta factors through the norm on the prime-to-l part, so it never
    # comes from an admissible pair; the non-supercuspidal family is pi(1) only
    for q, l in [(5, 3), (7, 3), (17, 3), (7, 5)]:
        E = quadratic(q, "unramified")
        for a in unit_exps(E, l):
            chi = tame(E, l, a)
            if is_admissible(E, chi)[0]:
                t = pair_to_type(E, chi)
                assert not t.theta.is_q_fixed()
                assert type_to_pi(t).supercuspidal


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(5, 3), (7, 3), (7, 5), (4, 3)]), st.data())
def test_twist_equivariance_of_types(ql, data):
    q, l = ql
    E = quadratic(q, "unramified")
    F = E.base()
    adm = [a for a in unit_exps(E, l) if is_admissible(E, tame(E, l, a))[0]]
    chi = tame(E, l, data.draw(st.sampled_from(adm)))
    phi = tame(F, l, data.draw(st.sampled_from(list(unit_exps(F, l)))), data.draw(st.sampled_from([0, Fraction(1, 2)])))
    tw = chi * norm_transfer(phi, E)
    a, b = pair_to_type(E, chi), pair_to_type(E, tw)
    assert a.chi_prime == b.chi_prime and a.case == b.case
    assert norm_transfer(b.phi, E) == norm_transfer(a.phi, E) * norm_transfer(phi, E)
    assert type_to_pi(a).ring == type_to_pi(b).ring


@pytest.mark.parametrize("q,l", [(5, 3), (7, 3), (7, 5)])
@pytest.mark.parametrize("kind,a", [("residue", 1), ("dual", 1), ("O", 1), ("O", 2)])
def test_case1_transport_bijective(q, l, kind, a):
    E = quadratic(q, "unramified")
    adm = [x for x in unit_exps(E, l) if is_admissible(E, tame(E, l, x))[0]]
    for x in adm[:2]:
        chi = tame(E, l, x, Fraction(1, 2))
        t = pair_to_type(E, chi)
        A = coefficient_for(kind, l, chi, restrict_to_base(chi), a=a)
        rep = check_transport(t, A)
        assert rep.ok, rep.to_json()


def test_case1_teichmuller_lift_gives_teichmuller_theta():
    E = quadratic(5, "unramified")
    chi = tame(E, 3, 1)
    t = pair_to_type(E, chi)
    A = coefficient_for("O", 3, chi, a=2)
    d = transport_deformation(t, teichmuller_lift(chi, A))
    assert d.coords[0] == teichmuller_lift(t.chi_prime, A).unit
    assert A.pow(d.coords[0], 8) == A.one  # prime-to-l order: theta tilde is the Teichmuller lift


@pytest.mark.parametrize("kind,a", [("dual", 1), ("O", 2)])
def test_case2_and_case3_transport(kind, a):
    E = quadratic(5, "unramified")
    for chi in [tame(E, 3, 3, Fraction(1, 2), WildMarker(3, "c")), tame(E, 3, 1, 0, WildMarker(2, "b"))]:
        t = pair_to_type(E, chi)
        A = coefficient_for(kind, 3, chi, restrict_to_base(chi), a=a)
        assert check_transport(t, A).ok
        if t.case == 3:
            assert case3_baseline_check(t, A)["ok"]


@pytest.mark.parametrize("kind,a", [("residue", 1), ("dual", 1), ("O", 2)])
def test_ramified_and_primitive_transport(kind, a):
    R = quadratic(7, "ramified")
    t = pair_to_type(R, tame(R, 3, 1, Fraction(1, 4), WildMarker(1, "w")))
    tp = primitive_type(7, 3, 1, "1/4", 3)
    assert tp.shape == "primitive"
    for ty in (t, tp):
        A = coefficient_for(kind, 3, ty.chi, restrict_to_base(ty.chi), a=a)
        assert check_transport(ty, A).ok
        rep = check_ramified_transport(ty, A)
        assert rep.ok and rep.lifts == rep.pi_points


def test_pi1_universal():
    pi, R = pi1_universal(5, 3)
    assert not pi.supercuspidal and pi.type.shape == "pi1"
    assert R.tangent_dim() == 1
    _, R17 = pi1_universal(17, 3)
    assert R17.tangent_dim() == 1 + finite_ring(17, 3).tangent_dim()
    assert R17.tangent_dim_by_points() == R17.tangent_dim()
    with pytest.raises(TransportError):
        pi1_universal(7, 3)
