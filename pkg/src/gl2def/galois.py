"""The Galois side: tame characters of G_K through class field theory, the
cohomology table for G_F, induced representations, and the ring-level
matching with the representation side under the Tate normalization.

Galois representations are never materialised as functions on G_F.  A
character of G_K is recorded by its value at arithmetic Frobenius and at a
generator of tame inertia (plus an opaque wild marker); a 2-dimensional rho
is either ``Ind_{G_E}^{G_F} xi`` or a descriptor determined by det rho.  The
explicit finite model of the tame Galois group is used only to validate the
determinant formula for induced representations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import sympy as sp

from .coeff_rings import CoeffRing
from .cyclo import CycloElem
from .lattice import WittBase, vl
from .local_chars import (
    CONVENTIONS,
    CharDefPresentation,
    CharLift,
    LocalCharError,
    LocalFieldDesc,
    TameChar,
    WildMarker,
    char_defring,
    context_modulus,
    coefficient_for,
    deformation_points,
    galois_conjugate,
    is_admissible,
    quadratic,
    restrict_lift,
    restrict_to_base,
    teichmuller_lift,
)
from .presentation import RingPresentation
from .types_transport import (
    PiDesc,
    TransportError,
    check_ramified_transport,
    deformation_central,
    inverse_transport,
    pair_to_type,
    pi_side_points,
    type_to_pi,
)

CFT_CONVENTION = {
    "frobenius": "arithmetic Frobenius <-> uniformizer",
    "inertia": "tame inertia generator <-> Teichmuller generator of the residue field",
    "transfer": "restriction to G_E^ab <-> inclusion F^x in E^x",
    "langlands": "Tate normalization: central character of pi <-> omega~ det rho",
}


class GaloisError(ValueError):
    pass


# ---------------------------------------------------------------------------
# characters of G_K


@dataclass(frozen=True)
class GaloisCharDesc:
    """A character of G_K: values at arithmetic Frobenius and tame inertia, in Q/Z."""

    host: LocalFieldDesc
    l: int
    frob: Fraction
    inertia: Fraction
    wild: WildMarker | None = None
    label: str = "generic"

    def to_json(self):
        return {
            "host": self.host.to_json(),
            "l": self.l,
            "frobenius": str(self.frob),
            "tame_inertia": str(self.inertia),
            "wild": self.wild.to_json() if self.wild else None,
            "label": self.label,
        }


def cft_dictionary(chi: TameChar, label: str = "generic") -> GaloisCharDesc:
    return GaloisCharDesc(chi.host, chi.l, chi.unif, chi.unit, chi.wild, label)


def cft_inverse(xi: GaloisCharDesc) -> TameChar:
    return TameChar(xi.host, xi.l, xi.inertia, xi.frob, xi.wild)


def encode_residue(A: CoeffRing, x: int) -> Fraction:
    """The Q/Z label r of a nonzero residue x, with residue_value(A, r) = x."""
    M = A.target.M
    for k in range(M):
        r = Fraction(k, M)
        if r.denominator % A.l and A.target.root_of_unity(k) == x:
            return r
    raise GaloisError(f"{x} is not a prime-to-l root of unity of order dividing {M}")


def galois_ring(kind: str, l: int, *chars: TameChar, a: int = 2) -> CoeffRing:
    """A coefficient ring whose residue field holds the values of ``chars`` and F_l^x."""
    return coefficient_for(kind, l, *chars, a=a, M=lcm(context_modulus(*chars), l - 1))


def omega(K: LocalFieldDesc, A: CoeffRing) -> GaloisCharDesc:
    """The mod-l cyclotomic character of G_K: unramified, Frobenius |-> q_K."""
    q = K.residue_size
    return GaloisCharDesc(K, A.l, encode_residue(A, q % A.l), Fraction(0), None, "cyclotomic")


def omega_lift(K: LocalFieldDesc, A: CoeffRing) -> CharLift:
    """The cyclotomic character with values in W(F_l), read in A."""
    return CharLift(K, A, A.from_int(K.residue_size), A.one)


# ---------------------------------------------------------------------------
# cohomology of characters


def h1_h2_dims(q: int, l: int, rho_class: str) -> tuple[int, int]:
    """dim H^1(G_F, rho), dim H^2(G_F, rho) for an irreducible rho, by congruence case."""
    if l % 2 == 0 or q % l == 0:
        raise GaloisError(f"needs l odd and prime to q (q={q}, l={l})")
    if rho_class not in ("trivial", "omega", "other"):
        raise GaloisError(f"unknown class {rho_class}")
    if q % l == 1:
        # omega is trivial here
        is_trivial = rho_class in ("trivial", "omega")
        return (2, 1) if is_trivial else (0, 0)
    if rho_class == "trivial":
        return 1, 0
    if rho_class == "omega":
        return 1, 1
    return 0, 0


def classify_char(xi: GaloisCharDesc, A: CoeffRing) -> str:
    if xi.wild is not None and not xi.wild.factors_through_norm:
        return "other"
    if xi.inertia != 0:
        return "other"
    if xi.frob == 0:
        return "trivial"
    if A.target.root_of_unity(int(xi.frob * A.target.M)) == xi.host.residue_size % A.l:
        return "omega"
    return "other"


# ---------------------------------------------------------------------------
# character deformation rings on the Galois side


def galois_char_defring(xi: GaloisCharDesc) -> CharDefPresentation:
    """Fr |-> Teichmuller(xi(Fr)) (1 + t), l-part of tame inertia |-> zeta."""
    l = xi.l
    n = vl(xi.host.residue_size - 1, l)
    t, zeta = sp.symbols("t z")
    chi = cft_inverse(xi)
    base = WittBase(l, chi.modulus if chi.modulus > 2 else 1)
    if n:
        pres = RingPresentation(base, ["t", "z"], [zeta ** (l**n) - 1], "mixed", power_series=["t"], residue={"z": 1})
    else:
        pres = RingPresentation(base, ["t"], [], "mixed", power_series=["t"])
    return CharDefPresentation(chi, n, pres)


# ---------------------------------------------------------------------------
# induced representations


@dataclass(frozen=True)
class InducedRepDesc:
    E: LocalFieldDesc
    xi: GaloisCharDesc

    @property
    def sigma_ratio(self) -> TameChar:
        """Tame part of xi^sigma / xi."""
        chi = cft_inverse(self.xi).tame()
        return galois_conjugate(chi) * chi.inverse()

    @property
    def ratio_is_wild(self) -> bool:
        w = self.xi.wild
        return w is not None and not w.factors_through_norm

    @property
    def irreducible(self) -> bool:
        return self.ratio_is_wild or not self.sigma_ratio.is_trivial()

    def to_json(self):
        return {"E": self.E.to_json(), "xi": self.xi.to_json(), "irreducible": self.irreducible}


@dataclass(frozen=True)
class DetDeterminedDesc:
    """rho known through det rho only (deformations of rho = deformations of det)."""

    det: GaloisCharDesc
    source: str

    def to_json(self):
        return {"det": self.det.to_json(), "source": self.source}


def _eta(E: LocalFieldDesc, l: int) -> TameChar:
    F = E.base()
    if E.role == "E-unr":
        return TameChar(F, l, 0, Fraction(1, 2))
    # eta(-varpi_F) = 1 since -varpi_F = N(varpi_E); eta is the Legendre symbol on units
    return TameChar(F, l, Fraction(1, 2), Fraction((F.q - 1) // 2 % 2, 2))


def det_of_induced(r: InducedRepDesc) -> GaloisCharDesc:
    """det Ind xi = eta_{E/F} * (xi o transfer), read on F^x as eta * xi|F^x."""
    xi = cft_inverse(r.xi)
    d = _eta(r.E, xi.l) * restrict_to_base(xi)
    return cft_dictionary(d, "det")


def eta_lift(E: LocalFieldDesc, A: CoeffRing) -> CharLift:
    F = E.base()
    minus = A.neg(A.one)
    if E.role == "E-unr":
        return CharLift(F, A, minus, A.one)
    return CharLift(F, A, A.pow(minus, (F.q - 1) // 2), minus)


def det_of_induced_lift(E: LocalFieldDesc, xi_lift: CharLift) -> CharLift:
    out = eta_lift(E, xi_lift.A) * restrict_lift(xi_lift)
    return CharLift(out.host, out.A, out.unif, out.unit)


# finite model of the tame Galois group ------------------------------------------------


class TameGaloisModel:
    """sigma^i phi^j with phi sigma phi^-1 = sigma^q; i mod N, j mod r.

    Unramified E: N = q^2 - 1, G_E = {j even}, Art_E(varpi_E) = phi^2,
    Art_E(g2) = sigma.  Ramified E: N = 2(q - 1), G_E = {i even},
    Art_E(varpi_E) = phi, Art_E(g) = sigma^2.
    """

    def __init__(self, E: LocalFieldDesc, r: int):
        self.E, self.q = E, E.q
        self.N = E.q * E.q - 1 if E.role == "E-unr" else 2 * (E.q - 1)
        self.r = r
        if pow(self.q, r, self.N) != 1:
            raise GaloisError("phi order incompatible with the inertia action")

    def mul(self, x, y):
        (i, j), (k, m) = x, y
        return ((i + k * pow(self.q, j, self.N)) % self.N, (j + m) % self.r)

    def inv(self, x):
        i, j = x
        jj = (-j) % self.r
        return ((-i * pow(self.q, jj, self.N)) % self.N, jj)

    def in_GE(self, x) -> bool:
        return x[1] % 2 == 0 if self.E.role == "E-unr" else x[0] % 2 == 0

    @property
    def coset_reps(self):
        return [(0, 0), (0, 1)] if self.E.role == "E-unr" else [(0, 0), (1, 0)]

    def art_F(self, which: str):
        """Images of varpi_F and of the generator g of mu_{q-1} in G_F^ab."""
        q = self.q
        if self.E.role == "E-unr":
            return {"unif": (0, 1), "unit": (1, 0)}[which]
        # Art_F(-varpi_F) = phi and -1 = g^((q-1)/2)
        return {"unif": self.mul((0, 1), (-(q - 1) // 2 % self.N, 0)), "unit": (1, 0)}[which]


def _model_char(model: TameGaloisModel, a: Fraction, c: Fraction, M: int):
    """xi on G_E: Art_E(unit generator) |-> e(a), Art_E(varpi_E) |-> e(c)."""
    def root(fr):
        return CycloElem.root(M, int(fr * M) % M)

    if model.E.role == "E-unr":
        def xi(x):
            i, j = x
            return root(a * i) * root(c * (j // 2))
    else:
        def xi(x):
            i, j = x
            return root(a * (i // 2)) * root(c * j)
    return xi


def _induced_matrix(model: TameGaloisModel, xi, g):
    reps = model.coset_reps
    n = len(reps)
    mat = [[None] * n for _ in range(n)]
    for j, gj in enumerate(reps):
        x = model.mul(g, gj)
        for i, gi in enumerate(reps):
            h = model.mul(model.inv(gi), x)
            if model.in_GE(h):
                mat[i][j] = xi(h)
    return mat


def _det2(mat, M):
    zero = CycloElem.zero(M)
    e = [[m if m is not None else zero for m in row] for row in mat]
    return e[0][0] * e[1][1] - e[0][1] * e[1][0]


def _transfer(model: TameGaloisModel, g):
    reps = model.coset_reps
    out = []
    for gj in reps:
        x = model.mul(g, gj)
        for gi in reps:
            h = model.mul(model.inv(gi), x)
            if model.in_GE(h):
                out.append(h)
                break
    return out


def det_oracle(r: InducedRepDesc) -> dict:
    """Compare det_of_induced with determinants of explicit induced matrices."""
    E = r.E
    xi = cft_inverse(r.xi)
    F = E.base()
    q = E.q
    # roots of unity exponents: xi(unit gen) and xi(varpi_E)
    a, c = xi.unit, xi.unif
    ordc = c.denominator
    r_phi = 2 * ordc * (2 if E.role == "E-unr" else 1)
    while pow(q, r_phi, q * q - 1 if E.role == "E-unr" else 2 * (q - 1)) != 1:
        r_phi *= 2
    model = TameGaloisModel(E, r_phi)
    M = lcm(a.denominator, c.denominator, 2)
    chi_model = _model_char(model, a, c, M)
    det = det_of_induced(r)
    d = cft_inverse(det)
    checks = {}
    for which, val in (("unif", d.unif), ("unit", d.unit)):
        g = model.art_F(which)
        brute = _det2(_induced_matrix(model, chi_model, g), M)
        formula = CycloElem.root(M, int(val * M) % M)
        # the transfer formula inside the model: det = eta * (xi o V)
        eta = _eta(E, xi.l)
        eta_val = CycloElem.root(M, int((eta.unif if which == "unif" else eta.unit) * M) % M)
        prod = CycloElem.one(M)
        for h in _transfer(model, g):
            prod = prod * chi_model(h)
        checks[which] = {"brute": brute == formula, "transfer": brute == eta_val * prod}
    checks["F"] = F.role
    checks["ok"] = all(v["brute"] and v["transfer"] for k, v in checks.items() if k in ("unif", "unit"))
    return checks


# ---------------------------------------------------------------------------
# the dichotomy and induction of deformations


@dataclass
class Dichotomy:
    branch: str  # induced-from-unramified | det-determined
    h1_ad0: int
    det_determined: bool
    reason: str

    def to_json(self):
        return dict(self.__dict__)


def h1_ad0(r: InducedRepDesc, A: CoeffRing) -> int:
    """dim H^1(G_F, Ad^0 Ind xi) = h1(G_F, eta) + h1(G_E, xi^sigma/xi) (Shapiro)."""
    E, F = r.E, r.E.base()
    l = r.xi.l
    eta = cft_dictionary(_eta(E, l))
    h_eta = h1_h2_dims(F.q, l, classify_char(eta, A))[0]
    if r.ratio_is_wild:
        h_ratio = 0
    else:
        ratio = cft_dictionary(r.sigma_ratio)
        h_ratio = h1_h2_dims(E.residue_size, l, classify_char(ratio, A))[0]
    return h_eta + h_ratio


def h1_ad(r: InducedRepDesc, A: CoeffRing) -> int:
    F = r.E.base()
    return h1_h2_dims(F.q, r.xi.l, "trivial")[0] + h1_ad0(r, A)


def galois_dichotomy(rho, A: CoeffRing) -> Dichotomy:
    if isinstance(rho, DetDeterminedDesc):
        return Dichotomy("det-determined", 0, True, "descriptor carries det only")
    if not isinstance(rho, InducedRepDesc):
        raise GaloisError("insufficient descriptor data: need an induced or det-determined descriptor")
    if not rho.irreducible:
        raise GaloisError("Ind xi is reducible")
    h = h1_ad0(rho, A)
    if rho.E.role == "E-unr":
        return Dichotomy("induced-from-unramified", h, h == 0, "rho is induced from the unramified quadratic extension")
    if h == 0:
        return Dichotomy("det-determined", 0, True, "H^1(G_F, Ad^0 rho) = 0")
    return Dichotomy(
        "induced-from-unramified",
        h,
        False,
        "xi^sigma/xi = omega on G_E: rho = rho (x) omega, so rho is also induced from the unramified extension",
    )


@dataclass(frozen=True)
class InducedLift:
    """Ind xi_A, recorded by the unordered pair {xi_A, xi_A^sigma}."""

    E: LocalFieldDesc
    pair: frozenset

    def to_json(self):
        return {"E": self.E.role, "pair": sorted(map(str, self.pair))}


def conjugate_lift(lift: CharLift) -> CharLift:
    A, E = lift.A, lift.host
    if E.role == "E-unr":
        return CharLift(E, A, lift.unif, A.pow(lift.unit, E.q), lift.wild)
    minus_one = A.pow(lift.unit, (E.q - 1) // 2)
    return CharLift(E, A, A.mul(lift.unif, minus_one), lift.unit, lift.wild)


def induce_deformation(r: InducedRepDesc, xi_lift: CharLift) -> InducedLift:
    if not r.irreducible:
        raise GaloisError("reducible induction")
    return InducedLift(r.E, frozenset({xi_lift.key(), conjugate_lift(xi_lift).key()}))


@dataclass
class InductionReport:
    ring: str
    xi_points: int
    rho_points: int
    injective: bool
    onto: bool
    predicted_dim: int  # h1(G_E, 1) from the cohomology table
    ad_dim: int  # h1(G_F, Ad rho) from the cohomology table and Shapiro
    tangent_dim_from_points: int | None

    @property
    def ok(self) -> bool:
        dim_ok = self.tangent_dim_from_points is None or self.tangent_dim_from_points == self.predicted_dim
        return self.injective and self.onto and self.xi_points == self.rho_points and dim_ok

    @property
    def ad_matches(self) -> bool:
        return self.ad_dim == self.predicted_dim

    def to_json(self):
        return dict(self.__dict__, ok=self.ok, ad_matches=self.ad_matches)


def check_induction(r: InducedRepDesc, A: CoeffRing) -> InductionReport:
    xi = cft_inverse(r.xi)
    pts = deformation_points(xi, A)
    images = [induce_deformation(r, p) for p in pts]
    # rho side: all unordered pairs {psi, psi^sigma} with psi deforming xi or xi^sigma
    xs = cft_inverse(r.xi)
    conj_pts = deformation_points(galois_conjugate(xs), A) if not r.ratio_is_wild else []
    rho_side = {induce_deformation(r, p) for p in pts}
    rho_side |= {induce_deformation(r, conjugate_lift(p)) for p in conj_pts if conjugate_lift(p).reduces_to(xs)}
    E = r.E
    predicted = h1_h2_dims(E.residue_size, xi.l, "trivial")[0]
    tdim = None
    if A.name.endswith("[eps]"):
        size, k = len(pts), A.K.size
        tdim = 0
        while k ** (tdim + 1) <= size:
            tdim += 1
    return InductionReport(
        A.name, len(pts), len(rho_side), len(set(images)) == len(images), set(images) == rho_side,
        predicted, h1_ad(r, A), tdim,
    )


# ---------------------------------------------------------------------------
# the rectifier


@dataclass
class Rectifier:
    """Delta~ on E^x (E unramified): trivial on units, varpi_E |-> unif_value in Z_(l)^x."""

    q: int
    l: int
    unif_value: Fraction
    certified_over: list
    solution_counts: dict

    def lift(self, A: CoeffRing, E: LocalFieldDesc) -> CharLift:
        v = self.unif_value
        return CharLift(E, A, A.mul(A.from_int(v.numerator), A.inv(A.from_int(v.denominator))), A.one)

    def residual(self, A: CoeffRing, E: LocalFieldDesc) -> TameChar:
        return TameChar(E, self.l, 0, encode_residue(A, A.residue(self.lift(A, E).unif)))

    def to_json(self):
        return {
            "q": self.q,
            "l": self.l,
            "unit_part": "trivial",
            "unif_value": str(self.unif_value),
            "certified_over": self.certified_over,
            "solution_counts": self.solution_counts,
        }


def _solve_delta(E: LocalFieldDesc, chi: TameChar, a: int):
    """Solve central = omega~ det Ind(chi~ Delta~) for Delta~, by enumeration.

    At varpi_F the constraint only sees uniformizer values, so it is solved in
    the ring generated by those (length a).  On units Delta~ takes roots of
    unity, which are solved in the residue field.
    """
    l = chi.l
    chi_u = TameChar(E, l, 0, chi.unif)
    A = galois_ring("O", l, chi_u, restrict_to_base(chi_u), a=a)
    lift = teichmuller_lift(chi_u, A)
    central = restrict_lift(lift)
    om = omega_lift(E.base(), A)
    unifs = [d for d in A.units()
             if A.mul(om.unif, det_of_induced_lift(E, lift * CharLift(E, A, d, A.one)).unif) == central.unif]
    K = galois_ring("O", l, chi, restrict_to_base(chi), a=1)
    lift = teichmuller_lift(chi, K)
    central = restrict_lift(lift)
    om = omega_lift(E.base(), K)
    Q1 = E.residue_size - 1
    units = [u for u in K.units() if K.pow(u, Q1) == K.one
             and K.mul(om.unit, det_of_induced_lift(E, lift * CharLift(E, K, K.one, u)).unit) == central.unit]
    return A, unifs, K, units


def rectifier(q: int, l: int, chis: list[TameChar] | None = None, a: int = 2) -> Rectifier:
    """Solve Delta~ from the normalization constraint and certify it does not depend on chi."""
    E = quadratic(q, "unramified")
    if chis is None:
        base = admissible_level0(q, l)
        chis = [TameChar(E, l, c.unit, v) for c, v in zip(base, (0, Fraction(1, 2), Fraction(1, 4)))]
    if len(chis) < 3:
        raise GaloisError(f"need at least 3 admissible characters at (q,l)=({q},{l})")
    # the value the constraint predicts: Delta~(varpi_F) = 1 / (omega~(varpi_F) eta(varpi_F))
    value = Fraction(1, q * -1)
    cand = Rectifier(q, l, value, [], {})
    unit_sols = set()
    for chi in chis:
        A, unifs, K, units = _solve_delta(E, chi, a)
        if len(unifs) != 1:
            raise GaloisError(f"Delta(varpi_E) not uniquely determined for {chi.label()}: {len(unifs)} solutions")
        if unifs[0] != cand.lift(A, E).unif:
            raise GaloisError(f"rectifier depends on chi: {chi.label()} gives {A.label(unifs[0])}")
        if K.one not in units:
            raise GaloisError(f"trivial unit part is not a solution for {chi.label()}")
        unit_sols.add(len(units))
        cand.certified_over.append(chi.label())
    if len(unit_sols) != 1:
        raise GaloisError("rectifier unit solutions depend on chi")
    cand.solution_counts = {"unif": 1, "unit": unit_sols.pop()}
    return cand


def admissible_level0(q: int, l: int) -> list[TameChar]:
    E = quadratic(q, "unramified")
    Np = E.residue_size - 1
    while Np % l == 0:
        Np //= l
    out = []
    for k in range(Np):
        chi = TameChar.from_exponents(E, l, k)
        if is_admissible(E, chi)[0]:
            out.append(chi)
    return out


# ---------------------------------------------------------------------------
# the correspondence


@dataclass
class CorrespondenceReport:
    branch: str
    pi: PiDesc
    rho: object
    dichotomy: Dichotomy
    pi_ring: CharDefPresentation
    rho_ring: CharDefPresentation
    iso: dict
    ring: str
    points: dict
    checks: dict
    rectifier: Rectifier | None = None
    char0: dict = field(default_factory=dict)

    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self):
        return {
            "branch": self.branch,
            "pi": self.pi.to_json(),
            "rho": self.rho.to_json(),
            "dichotomy": self.dichotomy.to_json(),
            "pi_ring": self.pi_ring.to_json(),
            "rho_ring": self.rho_ring.to_json(),
            "iso": self.iso,
            "ring": self.ring,
            "points": self.points,
            "checks": self.checks,
            "char0": self.char0,
            "conventions": dict(CONVENTIONS, **CFT_CONVENTION,
                                delta=self.rectifier.to_json() if self.rectifier else None),
        }


def _unit_ratio(A: CoeffRing, x):
    """x / Teichmuller(x), the principal-unit part of x."""
    return A.mul(x, A.inv(A.teich(A.residue(x))))


def _generator_map(pi_ring: CharDefPresentation, rho_ring: CharDefPresentation, A, u, j: int = 1):
    """Point map of t' |-> u (1 + t) - 1, z' |-> z^j."""
    def f(lift: CharLift) -> CharLift:
        pt = pi_ring.from_char(lift)
        new = {"t": A.sub(A.mul(u, A.add(A.one, pt["t"])), A.one)}
        if rho_ring.n:
            new["z"] = A.pow(pt["z"], j)
        return rho_ring.to_char(A, new)
    return f


def _uniqueness(pi_ring, rho_ring, A, matched: dict) -> int | None:
    """Number of candidate generator maps reproducing the matched points.

    None over the residue field, where there is a single point."""
    if A.size == A.K.size:
        return None
    ls = [j for j in range(1, A.l ** rho_ring.n + 1) if j % A.l] if rho_ring.n else [1]
    count = 0
    for v in A.one_plus_m():
        for j in ls:
            f = _generator_map(pi_ring, rho_ring, A, v, j)
            if all(f(p).key() == q_.key() for p, q_ in matched.items()):
                count += 1
    return count


def frobenius_lift(lift: CharLift) -> CharLift:
    A = lift.A
    return CharLift(lift.host, A, A.frobenius(lift.unif), A.frobenius(lift.unit), lift.wild)


def frobenius_char(chi: TameChar) -> TameChar:
    """chi^Frob_l: values raised to the l-th power."""
    return TameChar(chi.host, chi.l, chi.unit * chi.l, chi.unif * chi.l, chi.wild)


def langlands_match(pi: PiDesc, kind: str = "O", a: int = 2, uniqueness: bool = True) -> CorrespondenceReport:
    t = pi.type
    if not pi.supercuspidal:
        raise GaloisError("langlands_match needs a supercuspidal descriptor")
    if t.chi is None:
        raise GaloisError("descriptor does not come from an admissible pair")
    if t.E.role == "E-unr":
        return _match_unramified(pi, kind, a, uniqueness)
    return _match_det(pi, kind, a, uniqueness)


def _match_unramified(pi: PiDesc, kind: str, a: int, uniqueness: bool) -> CorrespondenceReport:
    t = pi.type
    E, chi, l = t.E, t.chi, t.chi.l
    F = E.base()
    rect = rectifier(E.q, l)
    A = galois_ring(kind, l, chi, restrict_to_base(chi), a=a)
    delta = rect.residual(A, E)
    xi = cft_dictionary(chi * delta)
    rho = InducedRepDesc(E, xi)
    dich = galois_dichotomy(rho, A)
    pi_ring = char_defring(chi)
    rho_ring = galois_char_defring(xi)
    D = rect.lift(A, E)
    u = _unit_ratio(A, D.unif)
    iso_map = _generator_map(pi_ring, rho_ring, A, u)

    pi_pts = pi_side_points(t, A)
    rho_pts = deformation_points(cft_inverse(xi), A)
    om = omega_lift(F, A)
    matched, central_ok, iso_ok = {}, True, True
    for d in pi_pts:
        chi_A = inverse_transport(t, d)
        xi_A = chi_A * D
        matched[chi_A] = xi_A
        det = det_of_induced_lift(E, xi_A)
        c = deformation_central(t, d)
        central_ok &= (c.unif, c.unit) == (A.mul(om.unif, det.unif), A.mul(om.unit, det.unit))
        iso_ok &= iso_map(chi_A).key() == xi_A.key()
    images = [m.key() for m in matched.values()]
    bij = len(set(images)) == len(pi_pts) and set(images) == {p.key() for p in rho_pts}

    # descent: conjugating every label by Frobenius commutes with the matching
    equiv = True
    if hasattr(A, "a"):
        chi_s = frobenius_char(chi)
        for chi_A, xi_A in matched.items():
            equiv &= (frobenius_lift(chi_A) * D).key() == frobenius_lift(xi_A).key()
            equiv &= frobenius_lift(chi_A).reduces_to(chi_s)
    uniq = _uniqueness(pi_ring, rho_ring, A, matched) if uniqueness else None
    char0 = _char0_unramified(E, chi, rect)
    checks = {
        "transport_bijective": check_transport_ok(t, A),
        "points_bijective": bij,
        "central_is_omega_det": central_ok,
        "generator_map_realises_matching": iso_ok,
        "presentations_isomorphic": pi_ring.presentation == rho_ring.presentation,
        "rectifier_chi_independent": len(rect.certified_over) >= 3,
        "galois_equivariant": equiv,
        "char0_normalization": char0["ok"],
    }
    if uniq is not None:
        checks["generator_map_unique"] = uniq == 1
    iso = {
        "t'": "u*(1 + t) - 1",
        "z'": "z" if rho_ring.n else None,
        "u": "Delta~(varpi_E) / Teichmuller(Delta(varpi_E))",
        "u_in_ring": A.label(u),
        "candidates_matching": uniq,
    }
    return CorrespondenceReport(
        "unramified-pair", pi, rho, dich, pi_ring, rho_ring, iso, A.name,
        {"pi": len(pi_pts), "rho": len(rho_pts)}, checks, rect, char0,
    )


def check_transport_ok(t, A) -> bool:
    from .types_transport import check_transport

    return check_transport(t, A).ok


def _char0_unramified(E: LocalFieldDesc, chi: TameChar, rect: Rectifier, samples: int = 3) -> dict:
    """Exact characteristic-zero points: chi~ = roots of unity times 1 + l s."""
    l = chi.l
    n = vl(E.residue_size - 1, l)
    M = lcm(context_modulus(chi), l**n if n else 1, 2)
    q = E.q
    ok = True
    count = 0
    for s in range(samples):
        for k in range(l**n if n else 1):
            unif = CycloElem.root(M, int(chi.unif * M) % M) * (1 + l * s)
            unit = CycloElem.root(M, int(chi.unit * M) % M) * (CycloElem.root(M, k * M // l**n) if n else CycloElem.one(M))
            xi_unif = unif * rect.unif_value
            # central character at varpi_F and omega~ det at varpi_F (eta(varpi_F) = -1)
            central = unif
            om_det = (-xi_unif) * q
            ok &= central == om_det
            # on g = g2^(q+1): omega~ and eta are trivial, Delta~ is trivial on units
            delta_unit = CycloElem.one(M)
            ok &= unit ** (q + 1) == (unit * delta_unit) ** (q + 1)
            count += 1
    return {"points": count, "ok": ok}


def _match_det(pi: PiDesc, kind: str, a: int, uniqueness: bool) -> CorrespondenceReport:
    t = pi.type
    E, chi, l = t.E, t.chi, t.chi.l
    F = E.base()
    central = restrict_to_base(chi)
    A = galois_ring(kind, l, chi, central, a=a)
    om = omega(F, A)
    det_res = central * TameChar(F, l, 0, -om.frob)
    det = cft_dictionary(det_res, "det")
    rho = DetDeterminedDesc(det, f"ramified pair ({t.shape})")
    dich = galois_dichotomy(rho, A)
    pi_ring = char_defring(central)
    rho_ring = galois_char_defring(det)
    om_A = omega_lift(F, A)
    om_inv = om_A.inverse()
    u = _unit_ratio(A, om_inv.unif)
    iso_map = _generator_map(pi_ring, rho_ring, A, u)

    phis = deformation_points(central, A)
    rho_pts = deformation_points(det_res, A)
    matched, central_ok, iso_ok = {}, True, True
    for p in phis:
        d_A = p * om_inv
        d_A = CharLift(F, A, d_A.unif, d_A.unit)
        matched[p] = d_A
        prod = om_A * d_A
        central_ok &= (prod.unif, prod.unit) == (p.unif, p.unit)
        iso_ok &= iso_map(p).key() == d_A.key()
    images = [m.key() for m in matched.values()]
    bij = len(set(images)) == len(phis) and set(images) == {p.key() for p in rho_pts}
    equiv = True
    if hasattr(A, "a"):
        for p, d_A in matched.items():
            equiv &= (frobenius_lift(p) * om_inv).key() == frobenius_lift(d_A).key()
    uniq = _uniqueness(pi_ring, rho_ring, A, matched) if uniqueness else None
    checks = {
        "pi_is_central_deformation": check_ramified_transport(t, A).ok,
        "det_determined": dich.det_determined,
        "points_bijective": bij,
        "central_is_omega_det": central_ok,
        "generator_map_realises_matching": iso_ok,
        "presentations_isomorphic": pi_ring.presentation == rho_ring.presentation,
        "galois_equivariant": equiv,
    }
    if uniq is not None:
        checks["generator_map_unique"] = uniq == 1
    iso = {
        "t'": "u*(1 + t) - 1",
        "z'": "z" if rho_ring.n else None,
        "u": "omega~(varpi_F)^-1 / Teichmuller(omega(varpi_F)^-1)",
        "u_in_ring": A.label(u),
        "candidates_matching": uniq,
    }
    return CorrespondenceReport(
        "det-determined", pi, rho, dich, pi_ring, rho_ring, iso, A.name,
        {"pi": len(phis), "rho": len(rho_pts)}, checks, None, {},
    )


def match_pair(E: LocalFieldDesc, chi: TameChar, **kw) -> CorrespondenceReport:
    try:
        t = pair_to_type(E, chi)
    except TransportError as exc:
        raise GaloisError(str(exc)) from None
    return langlands_match(type_to_pi(t), **kw)
