"""Mod-l representations of GL_2(F_q): lifts, Brauer characters, classification.

Conventions.  N = q^2 - 1 and N' is its prime-to-l part, l^n = N / N'.
A mod-l character theta of F_{q^2}^x is an exponent a mod N' meaning
theta(g2) = reduction of zeta_N^(a l^n) under ``modl_target(N, l)``.  Its
Teichmuller lift (the unique lift of order prime to l) is therefore
g2 |-> zeta_N^(a l^n).  Characters of F_q^x work the same way with q - 1 in
place of N.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

from .cyclo import CycloElem, modl_target, prime_to
from .finite_field import FiniteField
from .fq_reps import (
    CharTheta,
    IrrChar,
    char_table,
    conj_classes,
    cuspidal_terms,
    det_twist_terms,
    elliptic_key,
    principal_terms,
    steinberg_terms,
)
from .lattice import vl


class ModlError(ValueError):
    pass


def check_q_l(q: int, l: int) -> None:
    from sympy import isprime

    from .finite_field import prime_power

    p, _ = prime_power(q)
    if l == 2:
        raise ModlError("l = 2 is not supported; l must be odd")
    if not isprime(l):
        raise ModlError(f"l = {l} is not prime")
    if l == p:
        raise ModlError(f"l = {l} equals the residue characteristic")


def congruence_case(q: int, l: int) -> str:
    if (q - 1) % l == 0:
        return "q=1"
    if (q + 1) % l == 0:
        return "q=-1"
    return "generic"


def lpow(n: int, l: int) -> int:
    return n // prime_to(n, l)


def teich_exponent(a: int, n: int, l: int) -> int:
    """Exponent mod n of the Teichmuller lift of the mod-l exponent a (mod n')."""
    return (a * lpow(n, l)) % n


def modl_exponent(e: int, n: int, l: int) -> int:
    """Mod-l exponent (mod n') of the reduction of zeta_n^e."""
    np_ = prime_to(n, l)
    if np_ == 1:
        return 0
    return (e * pow(lpow(n, l), -1, np_)) % np_


def modl_theta(q: int, l: int, a: int) -> CharTheta:
    return CharTheta(q, "Fq2", a, "modl", l)


# ---------------------------------------------------------------------------
# S_theta


@dataclass(frozen=True)
class LiftSet:
    q: int
    l: int
    theta: CharTheta
    n: int  # l-adic valuation of q^2 - 1
    teich: int  # exponent mod N of the Teichmuller lift
    lifts: tuple  # exponents mod N
    classes: tuple  # tuples (e,) or (e, e q)

    @property
    def N(self) -> int:
        return self.q * self.q - 1

    @property
    def fixed(self) -> bool:
        """theta^q = theta."""
        return self.theta.is_q_fixed()

    @property
    def scalar_order(self) -> int:
        """Order m of the Teichmuller lift; W is realised as Z_(l)[zeta_m]."""
        from math import gcd

        return self.N // gcd(self.teich, self.N)

    @property
    def modulus(self) -> int:
        """Least M with every lift valued in Q(zeta_M)."""
        from math import gcd

        M = 1
        for e in self.lifts:
            o = self.N // gcd(e, self.N)
            M = M * o // gcd(M, o)
        return M

    def labels(self) -> list[str]:
        return ["[" + ",".join(str(e) for e in c) + "]" for c in self.classes]

    def to_json(self):
        return {
            "theta": self.theta.to_json(),
            "n": self.n,
            "teichmuller_exponent": self.teich,
            "lifts": list(self.lifts),
            "classes": [list(c) for c in self.classes],
            "theta_q_fixed": self.fixed,
        }


def lift_set(theta: CharTheta) -> LiftSet:
    if theta.world != "modl" or theta.host != "Fq2":
        raise ModlError("lift_set needs a mod-l character of F_{q^2}^x")
    q, l = theta.q, theta.l
    check_q_l(q, l)
    N = q * q - 1
    Np = prime_to(N, l)
    ln = N // Np
    e0 = teich_exponent(theta.exponent, N, l)
    lifts = []
    for j in range(ln):
        e = (e0 + Np * j) % N
        if (e * (q - 1)) % N:
            lifts.append(e)
    lifts.sort()
    if not lifts:
        raise ModlError(f"theta={theta.exponent} has no lift with theta~^q != theta~ (q={q}, l={l})")
    classes = []
    seen = set()
    for e in lifts:
        if e in seen:
            continue
        eq = (e * q) % N
        cls = (e,) if eq == e else tuple(sorted({e, eq}))
        seen.update(cls)
        classes.append(cls)
    return LiftSet(q, l, theta, vl(N, l) if ln > 1 else 0, e0, tuple(lifts), tuple(classes))


def valid_thetas(q: int, l: int) -> list[int]:
    """Mod-l exponents a (one per {theta, theta^q} orbit) with S_theta nonempty."""
    N = q * q - 1
    Np = prime_to(N, l)
    out = []
    for a in range(Np):
        if min(a, (a * q) % Np) != a:
            continue
        try:
            lift_set(modl_theta(q, l, a))
        except ModlError:
            continue
        out.append(a)
    return out


# ---------------------------------------------------------------------------
# Brauer characters


class BrauerContext:
    """Reduction of root-sum character values at the l-regular classes."""

    def __init__(self, q: int, l: int):
        check_q_l(q, l)
        self.q, self.l = q, l
        self.N = q * q - 1
        self.target = modl_target(self.N, l)
        self.K: FiniteField = self.target.field
        self.classes = conj_classes(q)
        self.regular = [i for i, c in enumerate(self.classes) if c.is_l_regular(l)]
        K = self.K
        self.powers = [K.pow(self.target.rho, e) for e in range(self.N)]

    def reduce_terms(self, terms) -> int:
        K = self.K
        acc = 0
        for e, c in terms:
            acc = K.add(acc, K.mul(K.scalar(c), self.powers[e % self.N]))
        return acc

    def reduce(self, chi_terms) -> tuple[int, ...]:
        return tuple(self.reduce_terms(chi_terms[i]) for i in self.regular)


def brauer_reduce(chi: IrrChar, l: int) -> dict:
    """Reduced values of chi on the l-regular classes, keyed by class index."""
    ctx = brauer_context(isqrt(chi.N + 1), l)
    return dict(zip(ctx.regular, ctx.reduce(chi.terms)))


@lru_cache(maxsize=None)
def brauer_context(q: int, l: int) -> BrauerContext:
    return BrauerContext(q, l)


def ff_rank(K: FiniteField, rows) -> int:
    rows = [list(r) for r in rows]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = K.inv(rows[rank][col])
        rows[rank] = [K.mul(inv, x) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [K.sub(x, K.mul(f, y)) for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# classification


@dataclass
class ModlIrrep:
    label: str  # det, steinberg, principal, cuspidal
    params: tuple  # mod-l exponents
    dim: int
    cuspidal: bool
    supercuspidal: bool
    brauer: tuple
    lifts: LiftSet | None = None

    def to_json(self, K: FiniteField):
        out = {
            "label": self.label,
            "params": list(self.params),
            "dim": self.dim,
            "cuspidal": self.cuspidal,
            "supercuspidal": self.supercuspidal,
            "brauer": [list(K.digits(x)) for x in self.brauer],
        }
        if self.lifts is not None:
            out["lifts"] = self.lifts.to_json()
        return out


@dataclass
class ModlClassification:
    q: int
    l: int
    case: str
    irreps: list
    regular_class_count: int
    checks: dict
    notes: list

    def to_json(self):
        ctx = brauer_context(self.q, self.l)
        return {
            "q": self.q,
            "l": self.l,
            "case": self.case,
            "target": ctx.target.to_json(),
            "regular_classes": [ctx.classes[i].tag + str(list(ctx.classes[i].params)) for i in ctx.regular],
            "irreducibles": [r.to_json(ctx.K) for r in self.irreps],
            "checks": self.checks,
            "notes": self.notes,
        }


def _fq_teich(a: int, q: int, l: int) -> int:
    return teich_exponent(a, q - 1, l)


def modl_classify(q: int, l: int, rank_check: bool | None = None) -> ModlClassification:
    check_q_l(q, l)
    ctx = brauer_context(q, l)
    classes, case = ctx.classes, congruence_case(q, l)
    N = q * q - 1
    m1 = prime_to(q - 1, l)
    Np = prime_to(N, l)
    irreps: list[ModlIrrep] = []
    notes: list[str] = []
    checks: dict = {}

    det_b, st_b = {}, {}
    for a in range(m1):
        at = _fq_teich(a, q, l)
        det_b[a] = ctx.reduce(det_twist_terms(at, classes))
        st_b[a] = ctx.reduce(steinberg_terms(at, classes))
        irreps.append(ModlIrrep("det", (a,), 1, False, False, det_b[a]))
    if case != "q=-1":
        for a in range(m1):
            irreps.append(ModlIrrep("steinberg", (a,), q, False, False, st_b[a]))
    for a in range(m1):
        for b in range(a + 1, m1):
            at, bt = sorted((_fq_teich(a, q, l), _fq_teich(b, q, l)))
            irreps.append(
                ModlIrrep("principal", (a, b), q + 1, False, False, ctx.reduce(principal_terms(at, bt, classes)))
            )
    lift_independent = True
    for a in range(Np):
        if min(a, (a * q) % Np) != a:
            continue
        theta = modl_theta(q, l, a)
        try:
            S = lift_set(theta)
        except ModlError:
            continue
        rows = {ctx.reduce(cuspidal_terms(e, classes)) for e in S.lifts}
        if len(rows) != 1:
            lift_independent = False
        br = min(rows)
        fixed = theta.is_q_fixed()
        irreps.append(ModlIrrep("cuspidal", (a,), q - 1, True, not fixed, br, S))
    checks["brauer_independent_of_lift"] = lift_independent

    K = ctx.K
    checks["count_matches_regular_classes"] = len(irreps) == len(ctx.regular)
    checks["brauer_pairwise_distinct"] = len({r.brauer for r in irreps}) == len(irreps)
    if case == "q=-1":
        # Ind_B(phi x phi) = 2 (phi o det) + pi_phi in the Grothendieck group,
        # i.e. the Steinberg reduces to phi o det + pi_phi.
        ok = True
        for a in range(m1):
            at = _fq_teich(a, q, l)
            theta_a = modl_exponent((q + 1) * at, N, l)
            pi = next(r for r in irreps if r.label == "cuspidal" and r.params == (min(theta_a, (theta_a * q) % Np),))
            summed = tuple(K.add(x, y) for x, y in zip(det_b[a], pi.brauer))
            ok &= summed == st_b[a]
        checks["steinberg_reduces_to_det_plus_pi_phi"] = ok
        notes.append(
            "q = -1 mod l: for phi1 = phi2, Ind_B^G phi has constituents phi o det (twice) and pi_phi; "
            "pi_phi is cuspidal but not supercuspidal"
        )
    elif case == "q=1":
        notes.append("q = 1 mod l: for phi1 = phi2, Ind_B^G phi splits as phi o det plus a Steinberg")
    else:
        char0 = char_table(q)
        checks["reduction_is_bijective"] = (
            len({ctx.reduce(chi.terms) for chi in char0}) == len(char0) == len(irreps)
        )
        notes.append("q is not +-1 mod l: reduction mod l is a bijection on irreducibles")
    if rank_check is None:
        rank_check = len(ctx.regular) <= 64
    if rank_check:
        r_modl = ff_rank(K, [r.brauer for r in irreps])
        r_all = ff_rank(K, [r.brauer for r in irreps] + [ctx.reduce(chi.terms) for chi in char_table(q)])
        checks["brauer_rank"] = r_modl == len(irreps)
        checks["char0_reductions_span_same_space"] = r_all == r_modl
    return ModlClassification(q, l, case, irreps, len(ctx.regular), checks, notes)
