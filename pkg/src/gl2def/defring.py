"""Deformation rings of the mod-l cuspidal representations pi_theta of GL_2(F_q).

The ring is realised as the W-subalgebra of prod_{[theta~] in S_theta} K
generated by the trace vectors x_sigma, (x_sigma)_[theta~] = tr pi_theta~(sigma).
W is realised as Z_(l)[zeta_m] with m the order of the Teichmuller lift of
theta, and every lattice lives in Q(zeta_M)^{S_theta} for the least M
containing all values of all lifts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import sympy as sp

from .cyclo import CycloElem, CycloVec, is_l_integral, prime_to
from .cyclo import field as cyclo_field
from .fq_reps import CharTheta, conj_classes, cuspidal_terms, group_order
from .lattice import (
    LLattice,
    WittBase,
    lattice_saturate,
    min_poly,
    module_span,
    poly_eval_vec,
    vl,
)
from .modl import LiftSet, ModlError, lift_set, modl_theta
from .presentation import RingPresentation


# ---------------------------------------------------------------------------
# tri-state verification flags


@dataclass
class Flag:
    status: str  # verified | failed | skipped
    detail: str = ""
    witness: object = None

    def __post_init__(self):
        if self.status not in ("verified", "failed", "skipped"):
            raise ValueError(self.status)
        if self.status == "failed" and self.witness is None:
            raise ValueError("a failed flag needs a witness")

    @property
    def ok(self) -> bool:
        return self.status == "verified"

    def to_json(self):
        out = {"status": self.status}
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def verified(detail: str = "") -> Flag:
    return Flag("verified", detail)


def failed(witness, detail: str = "") -> Flag:
    return Flag("failed", detail, witness)


def skipped(reason: str) -> Flag:
    return Flag("skipped", reason)


def check(cond: bool, witness, detail: str = "") -> Flag:
    return verified(detail) if cond else failed(witness, detail)


# ---------------------------------------------------------------------------
# trace vectors


class TraceFamily:
    """x_sigma for every conjugacy class and y_sigma for every sigma in E."""

    def __init__(self, theta: CharTheta, lifts: LiftSet | None = None):
        self.theta = theta
        self.lifts = lifts if lifts is not None else lift_set(theta)
        self.q, self.l = theta.q, theta.l
        self.N = self.q * self.q - 1
        self.M = self.lifts.modulus
        self.step = self.N // self.M
        self.base = WittBase(self.l, self.lifts.scalar_order)
        self.labels = tuple(self.lifts.labels())
        lifted = set(self.lifts.lifts)
        self.reps = [min(e for e in c if e in lifted) for c in self.lifts.classes]
        self.classes = conj_classes(self.q)
        self.fixed = self.lifts.fixed
        cols = [cuspidal_terms(e, self.classes) for e in self.reps]
        self.x = [
            CycloVec(self.labels, [self._elem(col[i]) for col in cols]) for i in range(len(self.classes))
        ]
        self._y = {}

    def _elem(self, terms) -> CycloElem:
        conv = []
        for k, c in terms:
            if k % self.step:
                raise ArithmeticError("character value outside Q(zeta_M)")
            conv.append((k // self.step, c))
        return CycloElem.from_exponents(self.M, conv)

    def root(self, k: int) -> CycloElem:
        """zeta_N^k as an element of Q(zeta_M)."""
        return self._elem([(k % self.N, 1)])

    def y(self, j: int) -> CycloVec:
        """y at sigma = g2^j."""
        j %= self.N
        if j not in self._y:
            q = self.q
            if self.fixed:
                ent = [self._elem([((e * j) % self.N, 1), ((e * j * q) % self.N, 1)]) for e in self.reps]
            else:
                ent = [self.root(e * j) for e in self.reps]
            self._y[j] = CycloVec(self.labels, ent)
        return self._y[j]

    def x_torus(self, j: int) -> CycloVec:
        return self.x[self.classes.of_torus_element(j)]

    def teich_value(self, j: int) -> CycloElem:
        """theta~_l(g2^j)."""
        return self.root(self.lifts.teich * j)

    def unique_x(self) -> list[CycloVec]:
        seen, out = set(), []
        for v in self.x:
            if v not in seen:
                seen.add(v)
                out.append(v)
        return out

    def class_name(self, i: int) -> str:
        c = self.classes[i]
        return f"{c.tag}{list(c.params)}"

    @property
    def l_part_generator(self) -> int:
        """Exponent j with g2^j generating the l-Sylow subgroup of E."""
        return prime_to(self.N, self.l)

    @property
    def n(self) -> int:
        return self.lifts.n

    def to_json(self):
        return {
            "lifts": self.lifts.to_json(),
            "modulus": self.M,
            "scalar_root_order": self.base.m,
            "labels": list(self.labels),
        }


def x_vectors(theta: CharTheta) -> TraceFamily:
    return TraceFamily(theta)


# ---------------------------------------------------------------------------
# conditions of the deformation-theoretic criterion


def idempotent_check(fam: TraceFamily) -> Flag:
    """Is e_pi = sum over S_theta classes of the central idempotents l-integral?"""
    q, l = fam.q, fam.l
    G = group_order(q)
    for i, v in enumerate(fam.x):
        total = sum((e for e in v.entries), CycloElem.zero(fam.M))
        coeff = total.conj() * Fraction(q - 1, G)
        if not is_l_integral(coeff, l):
            return failed({"class": fam.class_name(i), "coefficient": coeff.to_json()}, "non-integral coefficient")
    return verified(f"all {len(fam.x)} class coefficients are {l}-integral")


def center_image_check(fam: TraceFamily, cap: int | None = None) -> Flag:
    """Every x_sigma lies in the W-algebra generated by the class-sum scalars
    z_sigma = |C_sigma| x_sigma / (q - 1)."""
    q = fam.q
    zs, seen = [], set()
    for c, v in zip(fam.classes, fam.x):
        z = v * CycloElem.from_rational(fam.M, Fraction(c.size, q - 1))
        if z not in seen:
            seen.add(z)
            zs.append(z)
    L = lattice_saturate(zs, fam.base, cap=cap)
    if not L.stabilized:
        return failed({"degree_cap": cap}, "class-sum algebra did not stabilise")
    for i, v in enumerate(fam.x):
        if not L.contains(v):
            return failed({"class": fam.class_name(i)}, "trace not in the image of the centre")
    return verified(f"all traces lie in the centre image (degree {L.degree})")


# ---------------------------------------------------------------------------
# Q(t)


def _int_coeffs(poly: list[CycloElem]) -> list[int]:
    out = []
    for c in poly:
        if not c.is_rational():
            raise ArithmeticError("coefficient is not rational")
        r = c.to_rational()
        if r.denominator != 1:
            raise ArithmeticError("coefficient is not integral")
        out.append(int(r))
    return out


def _poly_mul_linear(poly, root, M):
    nxt = [CycloElem.zero(M)] * (len(poly) + 1)
    for i, c in enumerate(poly):
        nxt[i + 1] = nxt[i + 1] + c
        nxt[i] = nxt[i] - c * root
    return nxt


@dataclass
class QPoly:
    q: int
    l: int
    n: int
    coeffs: tuple  # integers, low degree first
    square_check: bool

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def expr(self, t=None):
        t = t if t is not None else sp.Symbol("t")
        return sum(c * t**i for i, c in enumerate(self.coeffs))

    def to_json(self):
        return {
            "n": self.n,
            "coeffs": list(self.coeffs),
            "degree": self.degree,
            "display": str(sp.factor(self.expr())),
            "square_matches_product": self.square_check,
        }


def compute_Q(q: int, l: int) -> QPoly:
    """Q(t) with Q(t)^2 = prod over nontrivial l^n-th roots of unity zeta of
    (t - zeta - zeta^-1 + 2), n = v_l(q^2 - 1)."""
    if l == 2 or (q + 1) % l:
        raise ValueError(f"compute_Q needs l odd dividing q+1 (q={q}, l={l})")
    n = vl(q * q - 1, l)
    L = l**n
    zeta = lambda j: CycloElem.root(L, j)
    one, two = CycloElem.one(L), CycloElem.from_rational(L, 2)
    poly = [one]
    for j in range(1, (L - 1) // 2 + 1):
        poly = _poly_mul_linear(poly, zeta(j) + zeta(-j) - two, L)
    coeffs = _int_coeffs(poly)
    full = [one]
    for j in range(1, L):
        full = _poly_mul_linear(full, zeta(j) + zeta(-j) - two, L)
    Qs = sp.Poly(list(reversed(coeffs)), sp.Symbol("t"))
    square_ok = (Qs * Qs).all_coeffs()[::-1] == [int(c) for c in _int_coeffs(full)]
    return QPoly(q, l, n, tuple(coeffs), square_ok)


# ---------------------------------------------------------------------------
# the trace subalgebra and its presentation


@dataclass
class TraceAlgebra:
    lattice: LLattice
    presentation: RingPresentation
    generator: CycloVec | None
    generator_name: str
    generator_lattice_equal: bool
    w_rank: int


def w_degree(base: WittBase) -> int:
    return cyclo_field(base.m).phi if base.m > 2 else 1


def trace_subalgebra(fam: TraceFamily, cap: int | None = None) -> TraceAlgebra:
    L = lattice_saturate(fam.unique_x(), fam.base, cap=cap)
    w_rank = L.rank // w_degree(fam.base)
    t_sym, z_sym = sp.symbols("t z")
    if fam.fixed:
        Q = compute_Q(fam.q, fam.l)
        j = fam.N // fam.l**fam.n
        gen = fam.y(j) - CycloVec.constant(fam.labels, CycloElem.from_rational(fam.M, 2))
        powers = _powers(gen, Q.degree)
        pres = RingPresentation(
            fam.base, ["t"], [Q.expr(t_sym)], "power-series-mod-Q", power_series=["t"],
            notes=[f"t |-> y_sigma - 2, sigma = g2^{j}"],
        )
        name = f"y(g2^{j}) - 2"
    elif fam.n >= 1:
        j = fam.l_part_generator
        gen = fam.y(j) * fam.teich_value(j).inverse()
        powers = _powers(gen, fam.l**fam.n)
        pres = RingPresentation(
            fam.base, ["z"], [z_sym ** (fam.l**fam.n) - 1], "character-group ring", residue={"z": 1},
            notes=[f"z |-> y_sigma / theta_l(sigma), sigma = g2^{j} of order {fam.l ** fam.n}"],
        )
        name = f"y(g2^{j}) / teich(g2^{j})"
    else:
        gen = None
        powers = [CycloVec.constant(fam.labels, CycloElem.one(fam.M))]
        pres = RingPresentation(fam.base, [], [], "trace-subalgebra", notes=["single lift: R = W"])
        name = "1"
    Lg = module_span(powers, fam.base)
    return TraceAlgebra(L, pres, gen, name, Lg.equals(L) and L.stabilized, w_rank)


def _powers(v: CycloVec, count: int) -> list[CycloVec]:
    out = [CycloVec.constant(v.labels, CycloElem.one(v.modulus))]
    for _ in range(count - 1):
        out.append(out[-1] * v)
    return out


# ---------------------------------------------------------------------------
# theta != theta^q: the ring equals the deformation ring of theta


@dataclass
class Lvl0Report:
    flags: dict
    literal_identity_failures: list

    def ok(self) -> bool:
        return all(f.ok for f in self.flags.values())


def verify_lvl0(fam: TraceFamily, trace_lattice: LLattice | None = None, cap: int | None = None) -> Lvl0Report:
    if fam.fixed:
        raise ValueError("verify_lvl0 needs theta != theta^q")
    N, q, l = fam.N, fam.q, fam.l
    Lx = trace_lattice if trace_lattice is not None else lattice_saturate(fam.unique_x(), fam.base, cap=cap)
    ys = []
    seen = set()
    for j in range(N):
        v = fam.y(j)
        if v not in seen:
            seen.add(v)
            ys.append(v)
    Ly = lattice_saturate(ys, fam.base, cap=cap)
    flags = {}
    bad_y = next((j for j in range(N) if not Lx.contains(fam.y(j))), None)
    flags["y_in_trace_algebra"] = check(bad_y is None, {"sigma": f"g2^{bad_y}"})
    bad_x = next((i for i, v in enumerate(fam.x) if not Ly.contains(v)), None)
    flags["x_in_character_algebra"] = check(bad_x is None, {"class": bad_x is not None and fam.class_name(bad_x)})
    flags["lattices_equal"] = check(Lx.equals(Ly), {"rank_x": Lx.rank, "rank_y": Ly.rank})

    # central sigma: y_sigma = -x_{sigma u}
    bad_c = None
    for i in range(q - 1):
        j = (q + 1) * i
        if fam.y(j) != -fam.x[fam.classes.of_central_unipotent(i)]:
            bad_c = j
            break
    flags["central_y_is_minus_x_zu"] = check(bad_c is None, {"sigma": f"g2^{bad_c}"})

    # averaging over the prime-to-l subgroup E^l
    Np = prime_to(N, l)
    ln = N // Np
    inv_count = CycloElem.from_rational(fam.M, Fraction(-1, Np))
    bad_avg = None
    literal_bad = []
    for j in range(N):
        if j % (q + 1) == 0:
            continue
        acc_hat = CycloVec.constant(fam.labels, CycloElem.zero(fam.M))
        acc_lit = acc_hat
        for k in range(Np):
            tau = ln * k
            w = fam.teich_value(-tau)
            st = (j + tau) % N
            x_lit = fam.x_torus(st)
            if st % (q + 1) == 0:
                x_hat = fam.x[fam.classes.of_central_unipotent(st // (q + 1))] * 2
            else:
                x_hat = x_lit
            acc_hat = acc_hat + x_hat * w
            acc_lit = acc_lit + x_lit * w
        if acc_hat * inv_count != fam.y(j) and bad_avg is None:
            bad_avg = j
        if acc_lit * inv_count != fam.y(j):
            literal_bad.append(j)
    flags["averaging_identity"] = check(
        bad_avg is None,
        {"sigma": f"g2^{bad_avg}"},
        "y_s = -(1/#E^l) sum_t teich^-1(t) xhat_(s t), xhat = trace formula -th(g)-th^q(g) on all of E",
    )
    return Lvl0Report(flags, literal_bad)


# ---------------------------------------------------------------------------
# theta = theta^q: the ring W[[t]]/Q(t)


def verify_cusp1(fam: TraceFamily, sigma_exp: int | None = None, trace_lattice: LLattice | None = None) -> dict:
    if not fam.fixed:
        raise ValueError("verify_cusp1 needs theta = theta^q")
    q, l, N = fam.q, fam.l, fam.N
    if (q + 1) % l:
        raise ValueError("verify_cusp1 needs q = -1 mod l")
    ln = l**fam.n
    j = sigma_exp if sigma_exp is not None else N // ln
    if (j * ln) % N or (j * ln // l) % N == 0:
        raise ValueError(f"g2^{j} does not have order {ln}")
    Q = compute_Q(q, l)
    two = CycloVec.constant(fam.labels, CycloElem.from_rational(fam.M, 2))
    t = fam.y(j) - two
    flags = {}
    flags["Q_integral"] = check(Q.square_check, Q.to_json(), "Q has integer coefficients and Q^2 is the product")
    flags["degree_is_class_count"] = check(
        Q.degree == len(fam.labels) == (ln - 1) // 2, {"deg": Q.degree, "classes": len(fam.labels)}
    )
    Qt = [CycloElem.from_rational(fam.M, c) for c in Q.coeffs]
    val = poly_eval_vec(Qt, t)
    flags["Q_vanishes"] = check(val.is_zero(), {"value": val.to_json()})
    ent = list(t.entries)
    flags["entries_distinct"] = check(len(set(ent)) == len(ent), {"entries": [e.to_json() for e in ent]})
    mp = min_poly(t, fam.base)
    flags["min_poly_is_Q"] = check(
        all(c.is_rational() for c in mp) and [c.to_rational() for c in mp] == list(Q.coeffs),
        {"min_poly": [c.to_json() for c in mp]},
    )
    Lp = module_span(_powers(t, Q.degree), fam.base)
    bad = next((i for i, v in enumerate(fam.x) if not Lp.contains(v)), None)
    flags["powers_span_traces"] = check(bad is None, {"class": bad is not None and fam.class_name(bad)})
    if trace_lattice is not None:
        flags["powers_lattice_is_trace_lattice"] = check(Lp.equals(trace_lattice), {"rank": Lp.rank})
    x_sigma = fam.x_torus(j)
    flags["trace_identity"] = check(x_sigma == -t - two, {"x_sigma": x_sigma.to_json()}, "x_sigma = -(y_sigma-2)-2")
    flags["Q_nilpotent_roots"] = check(
        Q.coeffs[0] != 0 and all(c % l == 0 for c in Q.coeffs[:-1]), {"Q": list(Q.coeffs)}, "Q = t^deg mod l"
    )
    return flags


# ---------------------------------------------------------------------------
# reports


@dataclass
class DefRingReport:
    q: int
    l: int
    theta: CharTheta
    case: str
    family: TraceFamily
    algebra: TraceAlgebra | None
    flags: dict = field(default_factory=dict)
    tangent_dim: int | None = None
    notes: list = field(default_factory=list)
    literal_identity_failures: list = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(f.status == "failed" for f in self.flags.values())

    def to_json(self):
        out = {
            "q": self.q,
            "l": self.l,
            "theta": self.theta.to_json(),
            "case": self.case,
            "family": self.family.to_json(),
            "flags": {k: v.to_json() for k, v in self.flags.items()},
            "tangent_dim": self.tangent_dim,
            "notes": self.notes,
        }
        if self.algebra is not None:
            a = self.algebra
            out["lattice"] = a.lattice.to_json()
            out["lattice_stabilized"] = a.lattice.stabilized
            out["lattice_degree"] = a.lattice.degree
            out["w_rank"] = a.w_rank
            out["presentation"] = a.presentation.to_json()
            out["generator"] = a.generator_name
        if self.case == "theta!=theta^q":
            out["literal_averaging_identity_fails_at"] = [f"g2^{j}" for j in self.literal_identity_failures]
        return out


def defring_report(q: int, l: int, a: int, verify: bool = True, cap: int | None = None) -> DefRingReport:
    theta = modl_theta(q, l, a)
    fam = TraceFamily(theta)
    case = "theta=theta^q" if fam.fixed else "theta!=theta^q"
    alg = trace_subalgebra(fam, cap=cap)
    rep = DefRingReport(q, l, theta, case, fam, alg)
    rep.tangent_dim = alg.presentation.tangent_dim()
    rep.flags["lattice_stabilized"] = check(alg.lattice.stabilized, {"degree_cap": cap})
    rep.flags["presentation_generates"] = check(alg.generator_lattice_equal, {"generator": alg.generator_name})
    rep.flags["w_rank_is_class_count"] = check(
        alg.w_rank == len(fam.labels), {"w_rank": alg.w_rank, "classes": len(fam.labels)}
    )
    if alg.presentation.variables and len(alg.presentation.variables) == 1:
        pts = alg.presentation.char0_point_count()
        rep.flags["char0_points"] = check(
            pts == len(fam.labels) if fam.fixed else pts == len(fam.lifts.lifts),
            {"points": pts},
            "characteristic-zero points match the lifts",
        )
    if not verify:
        return rep
    rep.flags["idempotent"] = idempotent_check(fam)
    rep.flags["center_image"] = center_image_check(fam, cap=cap)
    if fam.fixed:
        rep.flags.update({"cusp1_" + k: v for k, v in verify_cusp1(fam, trace_lattice=alg.lattice).items()})
    else:
        lv = verify_lvl0(fam, trace_lattice=alg.lattice, cap=cap)
        rep.flags.update({"lvl0_" + k: v for k, v in lv.flags.items()})
        rep.literal_identity_failures = lv.literal_identity_failures
        if lv.literal_identity_failures:
            rep.notes.append(
                "the averaging identity with x_(s t) in place of xhat fails exactly where s t is central, "
                "because there x = (q-1) theta~ instead of -2 theta~"
            )
    return rep


# ---------------------------------------------------------------------------
# pi(1) of GL_2(F)


@dataclass
class Pi1Ring:
    q: int
    l: int
    Q: QPoly
    presentation: RingPresentation
    descriptor: dict

    def to_json(self):
        return {
            "q": self.q,
            "l": self.l,
            "Q": self.Q.to_json(),
            "presentation": self.presentation.to_json(),
            "descriptor": self.descriptor,
            "tangent_dim": self.presentation.tangent_dim(),
        }


def weil_pi1_ring(q: int, l: int) -> Pi1Ring:
    if (q + 1) % l:
        raise ValueError(f"weil_pi1_ring needs q = -1 mod l (q={q}, l={l})")
    Q = compute_Q(q, l)
    x, t = sp.symbols("x t")
    pres = RingPresentation(WittBase(l), ["x", "t"], [Q.expr(t)], "mixed", power_series=["x", "t"])
    desc = {
        "central_character": "unramified, uniformizer |-> 1 + x",
        "finite_group_direction": "t: U-invariants carry pi_{1,t}, trace of sigma is -t-2",
        "theta": "trivial",
    }
    return Pi1Ring(q, l, Q, pres, desc)


def finite_ring(q: int, l: int) -> RingPresentation:
    """W[[t]]/Q(t) alone."""
    Q = compute_Q(q, l)
    t = sp.Symbol("t")
    return RingPresentation(WittBase(l), ["t"], [Q.expr(t)], "power-series-mod-Q", power_series=["t"])
