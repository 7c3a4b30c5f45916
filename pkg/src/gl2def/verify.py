"""Invariant suites behind `gl2def verify`.

Each job is a top-level function of plain arguments returning a list of
check records, so jobs can run in worker processes.  Records carry no
timings; ordering is fixed by the job list, which keeps summaries
byte-deterministic.
"""

from __future__ import annotations

from fractions import Fraction

SCOPES = ("fq", "defring", "local", "langlands")

FQ_GRID = (2, 3, 4, 5, 7, 9, 11)
BRUTE_MAX_Q = 5
DEFRING_GRID = ((5, 3), (7, 3), (4, 3), (7, 5), (4, 5), (9, 5), (17, 3))
LOCAL_GRID = ((5, 3), (7, 3))
LANGLANDS_GRID = ((5, 3), (7, 3))
RECTIFIER_GRID = ((5, 3), (7, 3), (7, 5), (11, 3))
RING_SPECS = (("dual", 1), ("O", 1), ("O", 2))


def record(suite: str, name: str, params: dict, ok, witness=None, status: str | None = None) -> dict:
    out = {"suite": suite, "check": name, "params": params,
           "status": status or ("verified" if ok else "failed")}
    if witness is not None and (out["status"] != "verified" or isinstance(witness, (int, str))):
        out["witness"] = witness
    return out


# ---------------------------------------------------------------------------
# fq


def fq_job(q: int) -> list[dict]:
    from .brute import check_classes, compare_table
    from .fq_reps import char_table, conj_classes, first_orthogonality_defects, group_order, second_orthogonality_defects

    p = {"q": q}
    n = q * q - 1
    classes = conj_classes(q)
    table = char_table(q)
    out = [
        record("fq", "class_count", p, len(classes) == n, len(classes)),
        record("fq", "irreducible_count", p, len(table) == n, len(table)),
        record("fq", "sum_of_squared_degrees", p, sum(c.dim ** 2 for c in table) == group_order(q),
               sum(c.dim ** 2 for c in table)),
        record("fq", "class_sizes_sum", p, sum(c.size for c in classes) == group_order(q)),
    ]
    d1 = first_orthogonality_defects(q)
    out.append(record("fq", "row_orthogonality", p, not d1, [str(x) for x in d1[:3]]))
    d2 = second_orthogonality_defects(q)
    out.append(record("fq", "column_orthogonality", p, not d2, [str(x) for x in d2[:3]]))
    if q <= BRUTE_MAX_Q:
        cp = check_classes(q)
        out.append(record("fq", "classes_match_brute_force", p, not cp, cp[:3]))
        tp = compare_table(q)
        out.append(record("fq", "values_match_brute_force", p, not tp, tp[:3]))
    return out


# ---------------------------------------------------------------------------
# defring


def defring_job(q: int, l: int) -> list[dict]:
    from .defring import defring_report
    from .modl import valid_thetas

    out = []
    for a in valid_thetas(q, l):
        rep = defring_report(q, l, a, verify=True)
        p = {"q": q, "l": l, "theta": a, "case": rep.case}
        for name in sorted(rep.flags):
            f = rep.flags[name]
            out.append(record("defring", name, p, f.ok, f.witness, f.status))
    if not out:
        out.append(record("defring", "valid_thetas", {"q": q, "l": l}, True, status="skipped"))
    return out


# ---------------------------------------------------------------------------
# local: transport bijections


def _local_cases(q: int, l: int):
    from .galois import admissible_level0
    from .local_chars import TameChar, WildMarker, quadratic
    from .types_transport import pair_to_type, primitive_type

    E = quadratic(q, "unramified")
    R = quadratic(q, "ramified")
    out = [("level0", pair_to_type(E, chi)) for chi in admissible_level0(q, l)[:3]]
    out.append(("odd-unramified", pair_to_type(E, TameChar.from_exponents(E, l, 1, 0, WildMarker(1, "w")))))
    out.append(("even-unramified", pair_to_type(E, TameChar.from_exponents(E, l, 1, 0, WildMarker(2, "b")))))
    out.append(("ramified", pair_to_type(R, TameChar.from_exponents(R, l, 1, Fraction(1, 4), WildMarker(1, "w")))))
    out.append(("primitive", primitive_type(q, l, 1, "1/4", 3)))
    return out


def local_job(q: int, l: int) -> list[dict]:
    from .local_chars import coefficient_for, restrict_to_base
    from .types_transport import case3_baseline_check, check_ramified_transport, check_transport

    out = []
    for label, t in _local_cases(q, l):
        for kind, a in RING_SPECS:
            A = coefficient_for(kind, l, t.chi, restrict_to_base(t.chi), a=a)
            p = {"q": q, "l": l, "pair": label, "chi": t.chi.to_json(), "ring": A.name, "case": t.case}
            rep = check_transport(t, A)
            out.append(record("local", "transport_bijective", p, rep.ok, rep.to_json()))
            if t.case == 3:
                c3 = case3_baseline_check(t, A)
                out.append(record("local", "baseline_change_is_translation", p, c3["ok"], c3))
            if t.E.role == "E-ram":
                rr = check_ramified_transport(t, A)
                out.append(record("local", "central_parametrisation_bijective", p, rr.ok, rr.to_json()))
    return out


# ---------------------------------------------------------------------------
# Galois side and the correspondence


def galois_job(q: int, l: int) -> list[dict]:
    """Cohomology table, dictionary agreement, det oracle and induction counts."""
    from .galois import (
        InducedRepDesc, cft_dictionary, check_induction, det_oracle, galois_char_defring, galois_ring, h1_h2_dims,
    )
    from .local_chars import TameChar, WildMarker, char_defring, local_field, quadratic, restrict_to_base

    out = []
    p = {"q": q, "l": l}
    for cls in ("trivial", "omega", "other"):
        h1, h2 = h1_h2_dims(q, l, cls)
        h0 = 1 if cls == "trivial" or (cls == "omega" and q % l == 1) else 0
        out.append(record("langlands", "euler_characteristic", dict(p, cls=cls), h0 - h1 + h2 == 0, [h0, h1, h2]))
    bad = []
    for role in ("F", "E-unr", "E-ram"):
        K = local_field(q, role)
        Np = TameChar.trivial(K, l).N_prime
        for k in range(Np):
            for unif in (0, Fraction(1, 2)):
                chi = TameChar.from_exponents(K, l, k, unif)
                if galois_char_defring(cft_dictionary(chi)).presentation != char_defring(chi).presentation:
                    bad.append([role, k, str(unif)])
    out.append(record("langlands", "galois_defring_matches_local", p, not bad, bad[:3]))
    bad = []
    n = 0
    for ext in ("unramified", "ramified"):
        E = quadratic(q, ext)
        for a in range(4):
            for u in (0, Fraction(1, 2), Fraction(1, 4)):
                r = InducedRepDesc(E, cft_dictionary(TameChar.from_exponents(E, l, a, u)))
                if not r.irreducible:
                    continue
                n += 1
                res = det_oracle(r)
                if not res["ok"]:
                    bad.append(r.to_json())
    out.append(record("langlands", "det_formula_matches_matrix_model", dict(p, inputs=n), not bad, bad[:2]))
    for ext, args in (("unramified", (1,)), ("ramified", (1, Fraction(1, 4), WildMarker(1, "w")))):
        E = quadratic(q, ext)
        chi = TameChar.from_exponents(E, l, *args)
        r = InducedRepDesc(E, cft_dictionary(chi))
        for kind, a in RING_SPECS:
            A = galois_ring(kind, l, chi, restrict_to_base(chi), a=a)
            rep = check_induction(r, A)
            out.append(record("langlands", "induction_counts_match_h1", dict(p, ext=ext, ring=A.name),
                              rep.ok, rep.to_json()))
    return out


def rectifier_job(q: int, l: int) -> list[dict]:
    from .galois import GaloisError, rectifier

    p = {"q": q, "l": l}
    try:
        R = rectifier(q, l)
    except GaloisError as exc:
        return [record("langlands", "rectifier_chi_independent", p, False, str(exc))]
    ok = len(R.certified_over) >= 3 and R.unif_value == Fraction(-1, q)
    return [record("langlands", "rectifier_chi_independent", p, ok, R.to_json())]


def _match_cases(q: int, l: int):
    from .galois import admissible_level0
    from .local_chars import TameChar, WildMarker, quadratic
    from .types_transport import pair_to_type, primitive_type, type_to_pi

    E = quadratic(q, "unramified")
    R = quadratic(q, "ramified")
    out = [("level0", type_to_pi(pair_to_type(E, chi))) for chi in admissible_level0(q, l)[:3]]
    out.append(("even-unramified", type_to_pi(pair_to_type(E, TameChar.from_exponents(E, l, 1, 0, WildMarker(2, "b"))))))
    ram = TameChar.from_exponents(R, l, 1, Fraction(1, 4), WildMarker(1, "w"))
    out.append(("ramified", type_to_pi(pair_to_type(R, ram))))
    out.append(("primitive", type_to_pi(primitive_type(q, l, 1, "1/4", 3))))
    return out


def match_job(q: int, l: int, index: int) -> list[dict]:
    from .galois import langlands_match

    label, pi = _match_cases(q, l)[index]
    rep = langlands_match(pi, kind="O", a=2)
    p = {"q": q, "l": l, "pair": label, "chi": pi.type.chi.to_json(), "ring": rep.ring}
    out = [record("langlands", "match_" + name, p, bool(v)) for name, v in sorted(rep.checks.items())]
    out.append(record("langlands", "match_points", p, rep.points["pi"] == rep.points["rho"], rep.points))
    return out


def match_count(q: int, l: int) -> int:
    return len(_match_cases(q, l))


# ---------------------------------------------------------------------------
# planning and running


def plan(scope: str, max_q: int | None = None) -> list[tuple]:
    """Deterministic list of (function name, args) for the scope."""
    if scope != "all" and scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}")
    scopes = SCOPES if scope == "all" else (scope,)

    def keep(q):
        return max_q is None or q <= max_q

    jobs: list[tuple] = []
    for s in scopes:
        if s == "fq":
            jobs += [("fq_job", (q,)) for q in FQ_GRID if keep(q)]
        elif s == "defring":
            jobs += [("defring_job", ql) for ql in DEFRING_GRID if keep(ql[0])]
        elif s == "local":
            jobs += [("local_job", ql) for ql in LOCAL_GRID if keep(ql[0])]
        else:
            jobs += [("galois_job", ql) for ql in LANGLANDS_GRID if keep(ql[0])]
            jobs += [("rectifier_job", ql) for ql in RECTIFIER_GRID if keep(ql[0])]
            for q, l in LANGLANDS_GRID:
                if keep(q):
                    jobs += [("match_job", (q, l, i)) for i in range(match_count(q, l))]
    return jobs


def run_job(job: tuple) -> list[dict]:
    name, args = job
    return globals()[name](*args)


def run_plan(jobs: list[tuple], n_jobs: int = 1) -> list[dict]:
    if n_jobs <= 1 or len(jobs) <= 1:
        results = [run_job(j) for j in jobs]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=n_jobs) as ex:
            results = list(ex.map(run_job, jobs))  # map preserves job order
    return [r for rs in results for r in rs]


def summarise(scope: str, max_q: int | None, records: list[dict]) -> dict:
    counts = {"verified": 0, "failed": 0, "skipped": 0}
    for r in records:
        counts[r["status"]] += 1
    failures = [{k: r[k] for k in ("suite", "check", "params")} for r in records if r["status"] == "failed"]
    return {
        "scope": scope,
        "max_q": max_q,
        "counts": counts,
        "failures": failures,
        "checks": records,
    }


def verify_suite(scope: str, max_q: int | None = None, n_jobs: int = 1) -> dict:
    return summarise(scope, max_q, run_plan(plan(scope, max_q), n_jobs))
