from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl2def.brute import check_classes, compare_table
from gl2def.cyclo import CycloElem
from gl2def.fq_reps import (
    CharTheta,
    char_table,
    conj_classes,
    cuspidal_char,
    first_orthogonality_defects,
    fq_model,
    group_order,
    second_orthogonality_defects,
)
from gl2def.modl import (
    ModlError,
    check_q_l,
    congruence_case,
    lift_set,
    modl_classify,
    modl_theta,
    valid_thetas,
)

QS = [2, 3, 4, 5, 7, 9, 11]


@pytest.mark.parametrize("q", QS)
def test_table_is_complete(q):
    classes = conj_classes(q)
    table = char_table(q)
    assert len(classes) == q * q - 1
    assert len(table) == q * q - 1
    assert sum(c.size for c in classes) == group_order(q)
    assert sum(chi.dim**2 for chi in table) == group_order(q)
    assert {chi.dim for chi in table} <= {1, q - 1, q, q + 1}


@pytest.mark.parametrize("q", QS)
def test_model_invariants(q):
    m = fq_model(q)
    F = m.F2
    assert F.element_order(m.g2) == q * q - 1
    assert m.norm(m.g2) == m.g
    assert len(m.fq_elements()) == q


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_orthogonality(q):
    assert first_orthogonality_defects(q) == []
    assert second_orthogonality_defects(q) == []


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_brute_force_classes(q):
    assert check_classes(q) == []


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_brute_force_values(q):
    assert compare_table(q) == []


def test_spot_values():
    q = 5
    classes = conj_classes(q)
    chi = cuspidal_char(CharTheta(q, "Fq2", 1))
    vals = dict(zip(((c.tag, c.params) for c in classes), chi.values))
    assert vals[("z", (0,))] == CycloElem.from_rational(24, q - 1)
    assert vals[("zu", (0,))] == CycloElem.from_rational(24, -1)
    assert vals[("t", (0, 1))].is_zero()


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([3, 4, 5, 7]), st.data())
def test_elliptic_class_is_frobenius_stable(q, data):
    """g2^k and g2^(kq) land in the same class, and cuspidal values agree there."""
    classes = conj_classes(q)
    N = q * q - 1
    k = data.draw(st.integers(1, N - 1))
    assert classes.of_torus_element(k) == classes.of_torus_element(k * q)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([4, 5, 7]), st.data())
def test_cuspidal_depends_on_frobenius_orbit(q, data):
    N = q * q - 1
    a = data.draw(st.integers(1, N - 1).filter(lambda a: (a * (q - 1)) % N))
    th = CharTheta(q, "Fq2", a)
    assert cuspidal_char(th).values == cuspidal_char(th.frobenius()).values


# mod-l classification -------------------------------------------------------------


def test_bad_primes_rejected():
    for q, l in [(5, 2), (5, 5), (9, 3), (7, 4)]:
        with pytest.raises(ModlError):
            check_q_l(q, l)


def test_congruence_cases():
    assert congruence_case(7, 3) == "q=1"
    assert congruence_case(5, 3) == "q=-1"
    assert congruence_case(7, 5) == "generic"


@pytest.mark.parametrize("q,l", [(5, 3), (7, 3), (3, 7), (4, 3), (4, 5), (7, 5), (9, 5)])
def test_classification_checks(q, l):
    cl = modl_classify(q, l)
    assert all(cl.checks.values()), cl.checks


def test_lift_sets():
    L = lift_set(modl_theta(5, 3, 1))
    assert L.lifts == (3, 11, 19) and len(L.classes) == 3 and not L.fixed
    L0 = lift_set(modl_theta(5, 3, 0))
    assert L0.lifts == (8, 16) and len(L0.classes) == 1 and L0.fixed
    assert len(lift_set(modl_theta(17, 3, 0)).classes) == 4
    assert valid_thetas(5, 3) == [0, 1, 2, 3, 4, 6]


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([(5, 3), (7, 3), (4, 5), (9, 5), (11, 3)]), st.data())
def test_lifts_reduce_to_theta(ql, data):
    q, l = ql
    a = data.draw(st.sampled_from(valid_thetas(q, l)))
    L = lift_set(modl_theta(q, l, a))
    N = q * q - 1
    for e in L.lifts:
        # lifts agree with the Teichmuller lift on the prime-to-l part
        assert (e - L.teich) % (N // l**L.n) == 0
        assert (e * (q - 1)) % N != 0
    assert sum(len(c) for c in L.classes) >= len(L.lifts)
