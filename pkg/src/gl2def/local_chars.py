"""Tame characters of F^x and of quadratic extensions E/F.

A local field K with residue field of size Q is modelled through
K^x = varpi^Z x mu_{Q-1} x U^1.  A mod-l character is recorded by two roots
of unity written additively in Q/Z: ``unit`` (the value on the chosen
generator of mu_{Q-1}) and ``unif`` (the value on varpi_K), plus an optional
opaque marker for its restriction to U^1.  The generator of mu_{Q-1} is the
Teichmuller lift of g2 for unramified E and of g = g2^(q+1) for F and for
ramified E, matching :mod:`gl2def.fq_reps`.

Conventions: for E/F unramified varpi_E = varpi_F, so N(varpi_E) = varpi_F^2;
for E/F ramified varpi_E^2 = varpi_F, so N(varpi_E) = -varpi_F.

Lifts of a character to a finite coefficient ring A are recorded by the
images of varpi and of the generator of mu_{Q-1}; U^1 is pro-p while
1 + m_A is an l-group, so the wild part has exactly one lift.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import lcm

import sympy as sp

from .coeff_rings import CoeffRing
from .cyclo import prime_to
from .finite_field import prime_power
from .lattice import WittBase, vl
from .presentation import RingPresentation

ROLES = ("F", "E-unr", "E-ram")

CONVENTIONS = {
    "unramified": "varpi_E = varpi_F, N(varpi_E) = varpi_F^2",
    "ramified": "varpi_E^2 = varpi_F, N(varpi_E) = -varpi_F",
    "mu_generator": "Teichmuller lift of g2 (unramified E) or of g2^(q+1) (F, ramified E)",
}


class LocalCharError(ValueError):
    pass


class WildFlagError(LocalCharError):
    pass


def qz(r) -> Fraction:
    """Reduce into [0, 1)."""
    return Fraction(r) % 1


def prime_to_l_part(r: Fraction, l: int) -> Fraction:
    """The prime-to-l component of the root of unity r in Q/Z (its mod-l reduction)."""
    r = qz(r)
    D = r.denominator
    Dp = prime_to(D, l)
    lk = D // Dp
    if Dp == 1:
        return Fraction(0)
    return Fraction((r.numerator * pow(lk, -1, Dp)) % Dp, Dp)


def parse_qz(s) -> Fraction:
    return qz(Fraction(str(s)))


# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class LocalFieldDesc:
    q: int
    role: str = "F"
    unif: str = "varpi"

    def __post_init__(self):
        if self.role not in ROLES:
            raise LocalCharError(f"unknown role {self.role!r}")
        p, _ = prime_power(self.q)
        if self.role == "E-ram" and p == 2:
            raise LocalCharError("tamely ramified quadratic extensions need odd residue characteristic")

    @property
    def p(self) -> int:
        return prime_power(self.q)[0]

    @property
    def residue_size(self) -> int:
        return self.q * self.q if self.role == "E-unr" else self.q

    @property
    def ramification(self) -> int:
        return 2 if self.role == "E-ram" else 1

    @property
    def is_extension(self) -> bool:
        return self.role != "F"

    def base(self) -> "LocalFieldDesc":
        return LocalFieldDesc(self.q, "F", "varpi_F")

    def to_json(self):
        return {
            "p": self.p,
            "q": self.q,
            "role": self.role,
            "residue_size": self.residue_size,
            "uniformizer": self.unif,
        }


def local_field(q: int, role: str = "F") -> LocalFieldDesc:
    unif = {"F": "varpi_F", "E-unr": "varpi_E", "E-ram": "varpi_E"}[role]
    return LocalFieldDesc(q, role, unif)


def quadratic(q: int, ext: str) -> LocalFieldDesc:
    """ext in {unramified, ramified}."""
    role = {"unramified": "E-unr", "ramified": "E-ram", "E-unr": "E-unr", "E-ram": "E-ram"}.get(ext)
    if role is None:
        raise LocalCharError(f"unknown extension type {ext!r}")
    return local_field(q, role)


# ---------------------------------------------------------------------------
# wild markers


@dataclass(frozen=True)
class WildMarker:
    """Opaque restriction to U^1.  Exactly one of the two flags holds:
    either the restriction factors through the norm (so a twist removes it),
    or the character is minimal at this level."""

    level: int
    ident: str
    factors_through_norm: bool = False
    minimal: bool = True

    def __post_init__(self):
        if self.level < 1:
            raise WildFlagError("wild markers have level >= 1")
        if self.factors_through_norm == self.minimal:
            raise WildFlagError(
                "inconsistent wild flags: a restriction to U^1 that factors through the norm is never minimal, "
                "and a non-minimal one must factor (declare exactly one)"
            )

    def to_json(self):
        return {
            "level": self.level,
            "id": self.ident,
            "factors_through_norm_on_U1": self.factors_through_norm,
            "minimal": self.minimal,
        }

    @classmethod
    def from_json(cls, obj):
        if obj is None:
            return None
        return cls(
            int(obj["level"]),
            str(obj["id"]),
            bool(obj.get("factors_through_norm_on_U1", False)),
            bool(obj.get("minimal", True)),
        )


def parse_wild(s: str | None) -> WildMarker | None:
    """'level=3,id=a,ftn=0,minimal=1' (id/ftn/minimal optional)."""
    if not s:
        return None
    kv = dict(part.split("=", 1) for part in s.split(","))
    level = int(kv["level"])
    ftn = kv.get("ftn", kv.get("factors_through_norm", "0")) in ("1", "true", "True")
    minimal = kv.get("minimal", "0" if ftn else "1") in ("1", "true", "True")
    return WildMarker(level, kv.get("id", f"w{level}"), ftn, minimal)


# ---------------------------------------------------------------------------
# residual tame characters


@dataclass(frozen=True)
class TameChar:
    host: LocalFieldDesc
    l: int
    unit: Fraction
    unif: Fraction = Fraction(0)
    wild: WildMarker | None = None

    def __post_init__(self):
        object.__setattr__(self, "unit", qz(self.unit))
        object.__setattr__(self, "unif", qz(self.unif))
        Q1 = self.host.residue_size - 1
        if (self.unit * Q1).denominator != 1:
            raise LocalCharError(f"unit part {self.unit} has order not dividing {Q1}")
        for r in (self.unit, self.unif):
            if r.denominator % self.l == 0:
                raise LocalCharError(f"mod-{self.l} value {r} has order divisible by l")

    # constructors --------------------------------------------------------
    @classmethod
    def from_exponents(cls, host, l, unit_exp: int, unif=0, wild=None) -> "TameChar":
        """unit_exp against zeta_{N'}, N' the prime-to-l part of Q - 1."""
        Np = prime_to(host.residue_size - 1, l)
        return cls(host, l, Fraction(unit_exp % Np, Np), parse_qz(unif), wild)

    @classmethod
    def trivial(cls, host, l) -> "TameChar":
        return cls(host, l, Fraction(0), Fraction(0))

    # data ----------------------------------------------------------------
    @property
    def N_prime(self) -> int:
        return prime_to(self.host.residue_size - 1, self.l)

    @property
    def unit_exp(self) -> int:
        return int(self.unit * self.N_prime)

    @property
    def level(self) -> int:
        return self.wild.level if self.wild else 0

    @property
    def modulus(self) -> int:
        """Order of the group of roots of unity containing all tame values."""
        return lcm(self.unit.denominator, self.unif.denominator)

    def is_trivial(self) -> bool:
        return self.unit == 0 and self.unif == 0 and self.wild is None

    def tame(self) -> "TameChar":
        return replace(self, wild=None)

    def __mul__(self, other: "TameChar") -> "TameChar":
        if other.host != self.host or other.l != self.l:
            raise LocalCharError("characters on different groups")
        if self.wild and other.wild:
            raise LocalCharError("products of two wild markers are not modelled")
        return TameChar(self.host, self.l, self.unit + other.unit, self.unif + other.unif, self.wild or other.wild)

    def inverse(self) -> "TameChar":
        w = self.wild
        if w is not None:
            w = replace(w, ident=f"{w.ident}^-1")
        return TameChar(self.host, self.l, -self.unit, -self.unif, w)

    def power(self, k: int) -> "TameChar":
        if self.wild and k != 1:
            raise LocalCharError("powers of wild markers are not modelled")
        return TameChar(self.host, self.l, k * self.unit, k * self.unif, self.wild)

    def value_at_minus_one(self) -> Fraction:
        """chi(-1) in Q/Z; -1 is the element of order 2 in mu_{Q-1} (p odd)."""
        if self.host.p == 2:
            return Fraction(0)
        return qz(self.unit * Fraction(self.host.residue_size - 1, 2))

    def label(self) -> str:
        s = f"{self.host.role}:u={self.unit},pi={self.unif}"
        return s + (f",wild={self.wild.ident}" if self.wild else "")

    def to_json(self):
        return {
            "host": self.host.to_json(),
            "l": self.l,
            "unit_exp": self.unit_exp,
            "unit": str(self.unit),
            "unif": str(self.unif),
            "wild": self.wild.to_json() if self.wild else None,
        }

    @classmethod
    def from_json(cls, obj) -> "TameChar":
        h = obj["host"]
        host = local_field(int(h["q"]), h["role"])
        unit = parse_qz(obj["unit"]) if "unit" in obj else None
        l = int(obj["l"])
        if unit is None:
            return cls.from_exponents(host, l, int(obj["unit_exp"]), obj.get("unif", 0), WildMarker.from_json(obj.get("wild")))
        return cls(host, l, unit, parse_qz(obj.get("unif", 0)), WildMarker.from_json(obj.get("wild")))


def restrict_to_base(chi: TameChar) -> TameChar:
    """chi restricted to F^x."""
    E = chi.host
    if not E.is_extension:
        raise LocalCharError("restriction needs a character of E^x")
    F = E.base()
    if E.role == "E-unr":
        # g = g2^(q+1), varpi_F = varpi_E
        return TameChar(F, chi.l, chi.unit * (E.q + 1), chi.unif)
    # mu_{q-1} is shared and varpi_F = varpi_E^2
    return TameChar(F, chi.l, chi.unit, 2 * chi.unif)


def galois_conjugate(chi: TameChar) -> TameChar:
    """chi composed with the nontrivial automorphism sigma of E/F."""
    E = chi.host
    if not E.is_extension:
        raise LocalCharError("conjugation needs a character of E^x")
    w = chi.wild
    if w is not None and not w.factors_through_norm:
        w = replace(w, ident=f"{w.ident}^sigma")
    if E.role == "E-unr":
        return TameChar(E, chi.l, chi.unit * E.q, chi.unif, w)
    # sigma(varpi_E) = -varpi_E, trivial on the residue field
    return TameChar(E, chi.l, chi.unit, chi.unif + chi.value_at_minus_one(), w)


def norm_transfer(phi: TameChar, E: LocalFieldDesc) -> TameChar:
    """phi o N_{E/F}."""
    if phi.host.role != "F" or not E.is_extension or E.q != phi.host.q:
        raise LocalCharError("norm transfer needs phi on F and a quadratic E over the same F")
    w = None
    if phi.wild is not None:
        w = WildMarker(phi.wild.level * E.ramification, f"N*{phi.wild.ident}", True, False)
    if E.role == "E-unr":
        # N(g2) = g2^(q+1) = g; N(varpi_E) = varpi_F^2
        return TameChar(E, phi.l, phi.unit, 2 * phi.unif, w)
    # N(zeta) = zeta^2 on mu_{q-1}; N(varpi_E) = -varpi_F
    return TameChar(E, phi.l, 2 * phi.unit, phi.unif + phi.value_at_minus_one(), w)


def norm_preimage(chi: TameChar) -> TameChar | None:
    """Some tame phi on F with phi o N equal to the tame part of chi, or None."""
    E = chi.host
    F = E.base()
    if E.role == "E-unr":
        if (chi.unit * (E.q - 1)).denominator != 1:
            return None
        return TameChar(F, chi.l, chi.unit, chi.unif / 2)
    for unit in (chi.unit / 2, chi.unit / 2 + Fraction(1, 2)):
        if (unit * (F.q - 1)).denominator != 1 or unit.denominator % chi.l == 0:
            continue
        phi = TameChar(F, chi.l, unit, 0)
        return TameChar(F, chi.l, unit, chi.unif - phi.value_at_minus_one())
    return None


def is_admissible(E: LocalFieldDesc, chi: TameChar) -> tuple[bool, str]:
    if chi.host != E:
        raise LocalCharError("chi must live on E^x")
    w = chi.wild
    u1_factors = w is None or w.factors_through_norm
    if u1_factors and E.role != "E-unr":
        return False, "restriction to U^1_E factors through the norm but E/F is ramified"
    if u1_factors and norm_preimage(chi) is not None:
        return False, "chi factors through the norm"
    return True, "admissible"


def minimal_decompose(chi: TameChar) -> tuple[TameChar, TameChar]:
    """chi = (phi o N) chi' with chi' of minimal level.

    A wild part that factors through the norm is removed by a wild phi (the
    restriction to U^1_F extends to F^x since U^1_F is a direct factor),
    leaving chi' tame; a minimal wild part stays in chi'.  Among the tame
    twists the canonical chi' has chi'(varpi_E) = 1 and least unit exponent,
    and ties in phi are broken by least (unit exponent, varpi value), so
    twisting chi by some psi o N only changes the recorded phi."""
    E = chi.host
    if not E.is_extension:
        raise LocalCharError("minimal decomposition needs a character of E^x")
    F = E.base()
    l = chi.l
    NpF = prime_to(F.residue_size - 1, l)
    best = None
    for a in range(NpF):
        u = Fraction(a, NpF)
        psi = norm_transfer(TameChar(F, l, u, 0), E)
        rest = chi.unif - psi.unif
        unifs = [rest / 2, rest / 2 + Fraction(1, 2)] if E.role == "E-unr" else [rest]
        for v in unifs:
            if qz(v).denominator % l == 0:
                continue
            phi = TameChar(F, l, u, v)
            chip = chi.tame() * norm_transfer(phi, E).inverse()
            key = (chip.unit_exp, phi.unit_exp, qz(v))
            if best is None or key < best[0]:
                best = (key, phi, chip)
    _, phi, chip = best
    w = chi.wild
    if w is not None and w.minimal:
        chip = replace(chip, wild=w)
    elif w is not None:
        phi = replace(phi, wild=WildMarker(w.level, f"descent({w.ident})", False, True))
    return phi, chip


def twist_class_rep(chi: TameChar) -> TameChar:
    return minimal_decompose(chi)[1]


# ---------------------------------------------------------------------------
# lifts to finite coefficient rings


def residue_value(A: CoeffRing, r: Fraction) -> int:
    """The root of unity r in the residue field of A."""
    M = A.target.M
    if (r * M).denominator != 1:
        raise LocalCharError(f"{r} does not live in the residue field of {A}")
    return A.target.root_of_unity(int(r * M))


def teich_value(A: CoeffRing, r: Fraction):
    return A.teich(residue_value(A, r))


def context_modulus(*chars: TameChar) -> int:
    M = 1
    for c in chars:
        M = lcm(M, c.modulus)
    return M


def coefficient_for(kind: str, l: int, *chars: TameChar, a: int = 2, M: int | None = None) -> CoeffRing:
    from .coeff_rings import coefficient_ring

    M = M if M is not None else context_modulus(*chars)
    if kind == "dual":
        return coefficient_ring("dual", M, l)
    return coefficient_ring("O", M, l, a)


@dataclass(frozen=True)
class CharLift:
    host: LocalFieldDesc
    A: CoeffRing = field(compare=False)
    unif: tuple | int
    unit: tuple | int
    wild: WildMarker | None = None

    def residue(self) -> tuple[int, int]:
        return self.A.residue(self.unif), self.A.residue(self.unit)

    def reduces_to(self, chi: TameChar) -> bool:
        return (
            chi.host == self.host
            and self.wild == chi.wild
            and self.residue() == (residue_value(self.A, chi.unif), residue_value(self.A, chi.unit))
        )

    def key(self):
        return (self.host.role, self.unif, self.unit, self.wild.ident if self.wild else None)

    def __mul__(self, other: "CharLift") -> "CharLift":
        A = self.A
        return CharLift(self.host, A, A.mul(self.unif, other.unif), A.mul(self.unit, other.unit), self.wild or other.wild)

    def inverse(self) -> "CharLift":
        A = self.A
        return CharLift(self.host, A, A.inv(self.unif), A.inv(self.unit), self.wild)

    def to_json(self):
        return {
            "host": self.host.role,
            "ring": self.A.name,
            "unif": self.A.label(self.unif),
            "unit": self.A.label(self.unit),
            "wild": self.wild.ident if self.wild else None,
        }


def teichmuller_lift(chi: TameChar, A: CoeffRing) -> CharLift:
    return CharLift(chi.host, A, teich_value(A, chi.unif), teich_value(A, chi.unit), chi.wild)


def deformation_points(chi: TameChar, A: CoeffRing) -> list[CharLift]:
    """Every character of host^x over A reducing to chi (direct enumeration)."""
    if chi.host.residue_size and (chi.modulus and A.target.M % chi.modulus):
        raise LocalCharError(f"{A} does not contain the values of chi")
    Q1 = chi.host.residue_size - 1
    units = [x for x in A.fiber(residue_value(A, chi.unit)) if A.pow(x, Q1) == A.one]
    unifs = A.fiber(residue_value(A, chi.unif))
    return [CharLift(chi.host, A, u, x, chi.wild) for u in unifs for x in units]


def restrict_lift(lift: CharLift) -> CharLift:
    """An E-lift restricted to F^x."""
    E, A = lift.host, lift.A
    F = E.base()
    if E.role == "E-unr":
        return CharLift(F, A, lift.unif, A.pow(lift.unit, E.q + 1))
    return CharLift(F, A, A.mul(lift.unif, lift.unif), lift.unit)


def norm_lift(phi: CharLift, E: LocalFieldDesc) -> CharLift:
    A = phi.A
    if E.role == "E-unr":
        return CharLift(E, A, A.mul(phi.unif, phi.unif), phi.unit)
    minus_one = A.pow(phi.unit, (E.q - 1) // 2)
    return CharLift(E, A, A.mul(phi.unif, minus_one), A.mul(phi.unit, phi.unit))


def sqrt_unit_lift(A: CoeffRing, a, target: int):
    """The unique square root of the unit a in A with residue ``target``."""
    if not A.is_unit(a):
        raise LocalCharError("not a unit")
    K = A.K
    if K.mul(target, target) != A.residue(a):
        raise LocalCharError("residue target does not square to the reduction of a")
    if A.l == 2:
        raise LocalCharError("square roots are unique only for odd l")
    # Newton iteration x <- x - (x^2 - a)/(2x); precision doubles each step
    x = A.teich(target)
    half = A.inv(A.from_int(2))
    for _ in range(getattr(A, "a", 2).bit_length() + 1):
        x = A.sub(x, A.mul(A.mul(A.sub(A.mul(x, x), a), A.inv(x)), half))
    if A.mul(x, x) != a:
        raise LocalCharError("Newton iteration did not converge")
    return x


def sqrt_candidates(A: CoeffRing, a, target: int) -> list:
    """All square roots of a with the given residue, by enumeration."""
    return [x for x in A.fiber(target) if A.mul(x, x) == a]


def restrict_extend_ramified(phi_lift: CharLift, chi: TameChar) -> CharLift:
    """The unique lift of chi (on ramified E) whose restriction to F^x is phi_lift."""
    E, A = chi.host, phi_lift.A
    if E.role != "E-ram":
        raise LocalCharError("needs a ramified extension")
    if not phi_lift.reduces_to(restrict_to_base(chi)):
        raise LocalCharError("phi_A does not deform chi restricted to F^x")
    # mu_{q-1} of E is that of F; varpi_E^2 = varpi_F; U^1_E is rigid
    target = residue_value(A, chi.unif)
    return CharLift(E, A, sqrt_unit_lift(A, phi_lift.unif, target), phi_lift.unit, chi.wild)


# ---------------------------------------------------------------------------
# the universal deformation ring of a character


@dataclass
class CharDefPresentation:
    chi: TameChar
    n: int
    presentation: RingPresentation

    @property
    def has_zeta(self) -> bool:
        return self.n > 0

    def describe(self) -> str:
        return self.presentation.describe()

    def universal(self) -> dict:
        return {
            "uniformizer": "Teichmuller(chi(varpi)) * (1 + t)",
            "mu_generator": "Teichmuller(chi(g)) * z" if self.n else "Teichmuller(chi(g))",
            "wild": "unique lift of the wild part" if self.chi.wild else None,
        }

    def to_char(self, A: CoeffRing, point: dict) -> CharLift:
        base = teichmuller_lift(self.chi, A)
        unif = A.mul(base.unif, A.add(A.one, point["t"]))
        unit = A.mul(base.unit, point["z"]) if self.n else base.unit
        return CharLift(self.chi.host, A, unif, unit, self.chi.wild)

    def from_char(self, lift: CharLift) -> dict:
        A = lift.A
        base = teichmuller_lift(self.chi, A)
        pt = {"t": A.sub(A.mul(lift.unif, A.inv(base.unif)), A.one)}
        if self.n:
            pt["z"] = A.mul(lift.unit, A.inv(base.unit))
        return pt

    def points(self, A: CoeffRing) -> list[CharLift]:
        return [self.to_char(A, pt) for pt in self.presentation.points(A)]

    def to_json(self):
        return {
            "host": self.chi.host.to_json(),
            "n": self.n,
            "presentation": self.presentation.to_json(),
            "universal_character": self.universal(),
        }


def char_defring(chi: TameChar) -> CharDefPresentation:
    l = chi.l
    n = vl(chi.host.residue_size - 1, l)
    t, z = sp.symbols("t z")
    base = WittBase(l, chi.modulus if chi.modulus > 2 else 1)
    if n:
        pres = RingPresentation(
            base, ["t", "z"], [z ** (l**n) - 1], "mixed", power_series=["t"], residue={"z": 1}
        )
    else:
        pres = RingPresentation(base, ["t"], [], "mixed", power_series=["t"])
    return CharDefPresentation(chi, n, pres)
