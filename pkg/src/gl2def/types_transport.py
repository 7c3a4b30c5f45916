"""Types (J, Lambda) attached to admissible pairs and the transport of
deformations from characters of E^x to cuspidal representations of GL_2(F).

Representations are never materialised.  A cuspidal pi is recorded by its
type: case 1 (level 0, J = F^x GL_2(O_F), Lambda inflated from pi_theta),
case 2 (odd level, Lambda a character of J = E^x U^m), case 3 (even positive
level, Lambda' = eta (x) chi' with eta opaque).  A deformation of pi over a
finite ring A is recorded by the coordinates the construction actually
uses, so transport and its inverse are explicit maps between finite sets.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .coeff_rings import CoeffRing
from .defring import weil_pi1_ring
from .fq_reps import CharTheta
from .local_chars import (
    CONVENTIONS,
    CharLift,
    LocalFieldDesc,
    TameChar,
    char_defring,
    deformation_points,
    is_admissible,
    local_field,
    minimal_decompose,
    norm_lift,
    residue_value,
    restrict_extend_ramified,
    restrict_lift,
    restrict_to_base,
    teichmuller_lift,
)
from .modl import ModlError, lift_set, modl_theta
from .presentation import RingPresentation


class TransportError(ValueError):
    pass


@dataclass(frozen=True)
class StratumDesc:
    level: int
    parity: str  # level-0 | odd | even-positive
    embedding: str  # role of E
    alpha_id: str
    psi_alpha: str | None

    def __post_init__(self):
        want = "level-0" if self.level == 0 else ("odd" if self.level % 2 else "even-positive")
        if want != self.parity:
            raise TransportError(f"parity {self.parity} inconsistent with level {self.level}")

    def to_json(self):
        return {
            "level": self.level,
            "parity": self.parity,
            "E": self.embedding,
            "alpha": self.alpha_id,
            "psi_alpha": self.psi_alpha,
        }


NORMALIZATION_CASE3 = (
    "Lambda' restricted to J^1 is eta",
    "Lambda' restricted to F^x is a multiple of chi restricted to F^x",
    "trace of Lambda'(zeta) is -chi(zeta) for prime-to-p roots of unity zeta in E^x - F^x",
)


@dataclass
class TypeDesc:
    case: int
    E: LocalFieldDesc
    chi: TameChar | None
    phi: TameChar | None
    chi_prime: TameChar | None
    stratum: StratumDesc
    theta: CharTheta | None = None
    eta: str | None = None
    normalization: tuple = ()
    shape: str = "pair"

    @property
    def J(self) -> str:
        if self.case == 1:
            return "F^x GL_2(O_F)"
        m = (self.stratum.level + 1) // 2
        return f"E^x U^{m}_A"

    def to_json(self):
        out = {
            "case": self.case,
            "shape": self.shape,
            "E": self.E.to_json(),
            "J": self.J,
            "stratum": self.stratum.to_json(),
            "chi": self.chi.to_json() if self.chi else None,
            "twist_phi": self.phi.to_json() if self.phi else None,
            "chi_prime": self.chi_prime.to_json() if self.chi_prime else None,
        }
        if self.theta is not None:
            out["theta"] = self.theta.to_json()
        if self.case == 3:
            out["eta"] = self.eta
            out["normalization"] = list(self.normalization)
        return out


@dataclass
class PiDesc:
    type: TypeDesc
    central: TameChar
    supercuspidal: bool
    ring: RingPresentation | None = None
    coordinates: dict = field(default_factory=dict)
    induction: str = "c-Ind_J^G"

    def to_json(self):
        return {
            "type": self.type.to_json(),
            "induction": self.induction,
            "central_character": self.central.to_json(),
            "supercuspidal": self.supercuspidal,
            "ring": self.ring.to_json() if self.ring is not None else None,
            "coordinates": self.coordinates,
            "conventions": CONVENTIONS,
        }


# ---------------------------------------------------------------------------
# pairs -> types -> representations


def pair_to_type(E: LocalFieldDesc, chi: TameChar) -> TypeDesc:
    ok, why = is_admissible(E, chi)
    if not ok:
        raise TransportError(f"not an admissible pair: {why}")
    phi, chip = minimal_decompose(chi)
    n = chip.level
    if n == 0:
        if E.role != "E-unr":
            raise TransportError("level-0 admissible pairs have E unramified")
        theta = modl_theta(E.q, chi.l, chip.unit_exp)
        try:
            lift_set(theta)
        except ModlError as exc:
            raise TransportError(f"no valid pi_theta: {exc}") from None
        st = StratumDesc(0, "level-0", E.role, "none", None)
        return TypeDesc(1, E, chi, phi, chip, st, theta=theta)
    w = chip.wild
    if n % 2:
        st = StratumDesc(n, "odd", E.role, f"alpha({w.ident})", f"psi_alpha({w.ident})")
        return TypeDesc(2, E, chi, phi, chip, st)
    if E.role != "E-unr":
        raise TransportError("even positive level needs E unramified")
    st = StratumDesc(n, "even-positive", E.role, f"alpha({w.ident})", f"psi_alpha({w.ident})")
    return TypeDesc(3, E, chi, phi, chip, st, eta=f"eta({w.ident})", normalization=NORMALIZATION_CASE3)


def central_character(t: TypeDesc) -> TameChar:
    """Central character of (c-Ind Lambda') (x) (phi o det): chi'|F^x * phi^2."""
    cp = restrict_to_base(t.chi_prime)
    return cp * t.phi.tame().power(2)


def type_to_pi(t: TypeDesc) -> PiDesc:
    central = central_character(t)
    if t.chi is not None and central != restrict_to_base(t.chi):
        raise TransportError("central character differs from chi restricted to F^x")
    superc = True
    if t.case == 1 and t.theta is not None and t.theta.is_q_fixed():
        superc = False
    if t.case == 2 and t.E.role == "E-ram":
        ring = char_defring(central).presentation
    else:
        ring = char_defring(t.chi_prime.tame()).presentation
    return PiDesc(t, central, superc, ring)


# ---------------------------------------------------------------------------
# deformations


@dataclass(frozen=True)
class PiDeformation:
    """A deformation of pi over A, by the coordinates of its construction.

    case 1: (theta_A on mu_{q^2-1}, value of the central character of Lambda at varpi_F)
    case 2: (chi'_A on E^x; the wild part psi_alpha lifts uniquely)
    case 3: (twist coordinate chi'_A / Teichmuller(chi') at varpi_E and on mu)
    """

    case: int
    coords: tuple
    A: CoeffRing = field(compare=False, hash=False)

    def to_json(self):
        return {"case": self.case, "ring": self.A.name, "coords": [self.A.label(c) for c in self.coords]}


def _phi_tilde(t: TypeDesc, A: CoeffRing) -> CharLift:
    return norm_lift(teichmuller_lift(t.phi.tame(), A), t.E)


def _chi_prime_lift(t: TypeDesc, chi_lift: CharLift) -> CharLift:
    """chi'_A = chi_A / (Teichmuller(phi) o N)."""
    return chi_lift * _phi_tilde(t, chi_lift.A).inverse()


def transport_deformation(t: TypeDesc, chi_lift: CharLift, baseline: CharLift | None = None) -> PiDeformation:
    """Case 3 measures chi'_A against ``baseline`` (default: the Teichmuller lift of chi')."""
    A = chi_lift.A
    if not chi_lift.reduces_to(t.chi):
        raise TransportError("chi_A does not reduce to chi")
    cp = _chi_prime_lift(t, chi_lift)
    if t.case == 1:
        # theta_A = chi'_A on O_E^x (inflated), central value chi'_A(varpi_F) = chi'_A(varpi_E)
        return PiDeformation(1, (cp.unit, cp.unif), A)
    if t.case == 2:
        return PiDeformation(2, (cp.unif, cp.unit), A)
    base = baseline or teichmuller_lift(t.chi_prime.tame(), A)
    return PiDeformation(3, (A.mul(cp.unif, A.inv(base.unif)), A.mul(cp.unit, A.inv(base.unit))), A)


def inverse_transport(t: TypeDesc, d: PiDeformation, baseline: CharLift | None = None) -> CharLift:
    A = d.A
    E = t.E
    if d.case == 1:
        unit, unif = d.coords
        cp = CharLift(E, A, unif, unit, t.chi_prime.wild)
    elif d.case == 2:
        unif, unit = d.coords
        cp = CharLift(E, A, unif, unit, t.chi_prime.wild)
    else:
        base = baseline or teichmuller_lift(t.chi_prime.tame(), A)
        cp = CharLift(E, A, A.mul(d.coords[0], base.unif), A.mul(d.coords[1], base.unit), t.chi_prime.wild)
    out = cp * _phi_tilde(t, A)
    return CharLift(E, A, out.unif, out.unit, t.chi.wild)


def pi_side_points(t: TypeDesc, A: CoeffRing) -> list[PiDeformation]:
    """Deformations of pi enumerated from the type side, independently of chi."""
    E = t.E
    cp = t.chi_prime
    units = [x for x in A.fiber(residue_value(A, cp.unit)) if A.pow(x, E.residue_size - 1) == A.one]
    unifs = A.fiber(residue_value(A, cp.unif))
    if t.case == 1:
        # theta_A ranges over lifts of theta to mu_{q^2-1}, the central value over the unif fiber
        return [PiDeformation(1, (x, u), A) for x in units for u in unifs]
    if t.case == 2:
        return [PiDeformation(2, (u, x), A) for u in unifs for x in units]
    ones = A.fiber(A.K.scalar(1))
    Q1 = E.residue_size - 1
    return [PiDeformation(3, (u, x), A) for u in ones for x in ones if A.pow(x, Q1) == A.one]


def deformation_central(t: TypeDesc, d: PiDeformation) -> CharLift:
    """Central character of the transported deformation (on F^x)."""
    return restrict_lift(inverse_transport(t, d))


@dataclass
class BijectionReport:
    case: int
    ring: str
    lifts: int
    pi_points: int
    injective: bool
    onto: bool
    round_trip: bool
    central_coherent: bool

    @property
    def ok(self) -> bool:
        return (
            self.injective
            and self.onto
            and self.round_trip
            and self.central_coherent
            and self.lifts == self.pi_points
        )

    def to_json(self):
        return dict(self.__dict__, ok=self.ok)


def check_transport(t: TypeDesc, A: CoeffRing) -> BijectionReport:
    lifts = deformation_points(t.chi, A)
    images = [transport_deformation(t, c) for c in lifts]
    pi_pts = pi_side_points(t, A)
    injective = len(set(images)) == len(images)
    onto = set(images) == set(pi_pts)
    round_trip = all(inverse_transport(t, d) == c for c, d in zip(lifts, images))
    central = all(deformation_central(t, d) == restrict_lift(c) for c, d in zip(lifts, images))
    return BijectionReport(t.case, A.name, len(lifts), len(pi_pts), injective, onto, round_trip, central)


def case3_baseline_check(t: TypeDesc, A: CoeffRing) -> dict:
    """Re-run case-3 transport against a non-Teichmuller baseline.

    Both parameterisations must be bijections onto the pi-side set, and they
    must differ by one fixed translation of twist coordinates.
    """
    if t.case != 3:
        raise TransportError("baseline comparison is a case-3 check")
    teich = teichmuller_lift(t.chi_prime.tame(), A)
    alt = next((c for c in deformation_points(t.chi_prime.tame(), A) if c != teich), None)
    if alt is None:
        return {"alternative_exists": False, "ok": True}
    lifts = deformation_points(t.chi, A)
    a = [transport_deformation(t, c) for c in lifts]
    b = [transport_deformation(t, c, baseline=alt) for c in lifts]
    pi_pts = set(pi_side_points(t, A))
    shift = (A.mul(alt.unif, A.inv(teich.unif)), A.mul(alt.unit, A.inv(teich.unit)))
    translated = all(
        (A.mul(y.coords[0], shift[0]), A.mul(y.coords[1], shift[1])) == x.coords for x, y in zip(a, b)
    )
    round_trip = all(inverse_transport(t, y, baseline=alt) == c for c, y in zip(lifts, b))
    ok = set(a) == pi_pts and set(b) == pi_pts and translated and round_trip
    return {
        "alternative_exists": True,
        "teichmuller_onto": set(a) == pi_pts,
        "alternative_onto": set(b) == pi_pts,
        "differ_by_translation": translated,
        "round_trip": round_trip,
        "ok": ok,
    }


# ---------------------------------------------------------------------------
# ramified and primitive shapes: deforming pi = deforming its central character


def ramified_or_primitive_transport(t: TypeDesc, phi_lift: CharLift) -> PiDeformation:
    if t.E.role != "E-ram" or t.case != 2:
        raise TransportError("needs a case-2 type over a ramified extension")
    chi_lift = restrict_extend_ramified(phi_lift, t.chi)
    return transport_deformation(t, chi_lift)


def check_ramified_transport(t: TypeDesc, A: CoeffRing) -> BijectionReport:
    central = restrict_to_base(t.chi)
    phis = deformation_points(central, A)
    images = [ramified_or_primitive_transport(t, p) for p in phis]
    pi_pts = pi_side_points(t, A)
    injective = len(set(images)) == len(images)
    onto = set(images) == set(pi_pts)
    round_trip = all(deformation_central(t, d) == p for p, d in zip(phis, images))
    return BijectionReport(t.case, A.name, len(phis), len(pi_pts), injective, onto, round_trip, round_trip)


def primitive_type(q: int, l: int, unit_exp: int, unif, level: int = 1) -> TypeDesc:
    """The primitive-representation shape: an odd-level minimal character of a ramified E."""
    from .local_chars import WildMarker

    if level % 2 == 0:
        raise TransportError("primitive shape uses odd level")
    E = local_field(q, "E-ram")
    chi = TameChar.from_exponents(E, l, unit_exp, unif, WildMarker(level, f"prim{level}"))
    t = pair_to_type(E, chi)
    t.shape = "primitive"
    return t


# ---------------------------------------------------------------------------
# pi(1)


def pi1_universal(q: int, l: int) -> tuple[PiDesc, RingPresentation]:
    if (q + 1) % l:
        raise TransportError(f"pi(1) deformation needs q = -1 mod l (q={q}, l={l})")
    E = local_field(q, "E-unr")
    F = E.base()
    theta = modl_theta(q, l, 0)
    st = StratumDesc(0, "level-0", E.role, "none", None)
    t = TypeDesc(1, E, None, TameChar.trivial(F, l), TameChar.trivial(E, l), st, theta=theta, shape="pi1")
    ring = weil_pi1_ring(q, l)
    pi = PiDesc(
        t,
        TameChar.trivial(F, l),
        False,
        ring.presentation,
        coordinates={
            "x": "unramified central direction: varpi_F |-> 1 + x",
            "t": "finite-group direction: U-invariants carry pi_{1,t}",
        },
    )
    return pi, ring.presentation
