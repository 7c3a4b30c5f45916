"""Lattices over Z localised at l, spanned by CycloVecs.

A lattice is stored as an echelon basis of integer rows together with a
denominator that is a power of l.  Integers prime to l are units, so every
row is kept free of prime-to-l content and elimination only ever multiplies
by such units.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .cyclo import CycloElem, CycloError, CycloVec, field


def vl(n: int, l: int) -> int:
    """l-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    n = abs(n)
    v = 0
    while n % l == 0:
        n //= l
        v += 1
    return v


def _split(n: int, l: int) -> tuple[int, int]:
    """n = unit * l**v; returns (unit, v)."""
    v = vl(n, l)
    return n // l**v, v


def _prime_to_l_content(row, l):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return 1
    while g and g % l == 0:
        g //= l
    return g or 1


def _normalise(row, l):
    g = _prime_to_l_content(row, l)
    if g != 1:
        row = [x // g for x in row]
    lead = next((x for x in row if x), 0)
    if lead < 0:
        row = [-x for x in row]
    return row


class SaturationError(RuntimeError):
    pass


class LLattice:
    """A Z_(l)-lattice inside Q^dim with echelon basis ``rows / den``."""

    def __init__(self, dim: int, l: int, labels=None, modulus=None):
        self.dim = dim
        self.l = l
        self.den = 1
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []
        self.labels = tuple(labels) if labels is not None else None
        self.modulus = modulus
        self.stabilized = True
        self.degree = 0

    @classmethod
    def for_vectors(cls, labels, modulus, l):
        return cls(len(labels) * field(modulus).phi, l, labels, modulus)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def copy(self) -> "LLattice":
        other = LLattice(self.dim, self.l, self.labels, self.modulus)
        other.den = self.den
        other.rows = [r[:] for r in self.rows]
        other.pivots = self.pivots[:]
        other.stabilized = self.stabilized
        other.degree = self.degree
        return other

    # ----------------------------------------------------------------------
    def _rescale(self, s_new: int):
        factor = s_new // self.den
        self.rows = [[x * factor for x in r] for r in self.rows]
        self.den = s_new

    def _prepare(self, ints, den, grow: bool):
        """Bring ints/den onto the lattice's denominator; None if impossible."""
        if len(ints) != self.dim:
            raise CycloError(f"dimension mismatch: {len(ints)} vs {self.dim}")
        l = self.l
        lpart = 1
        d = den
        while d % l == 0:
            d //= l
            lpart *= l
        if lpart > self.den:
            if not grow:
                # only a member if the numerator absorbs the extra l-power
                extra = lpart // self.den
                if any(x % extra for x in ints):
                    return None
                return [x // extra for x in ints]
            self._rescale(lpart)
        f = self.den // lpart
        return [x * f for x in ints]

    def _reduce(self, w, insert: bool) -> bool:
        """Reduce w against the basis.  Returns True iff the lattice changed
        (insert=True) or w is a member (insert=False)."""
        l = self.l
        w = _normalise(w, l)
        changed = False
        while True:
            j = next((i for i, x in enumerate(w) if x), None)
            if j is None:
                return changed if insert else True
            try:
                r = self.pivots.index(j)
            except ValueError:
                r = None
            if r is None:
                if not insert:
                    return False
                pos = next((k for k, p in enumerate(self.pivots) if p > j), len(self.pivots))
                self.rows.insert(pos, w)
                self.pivots.insert(pos, j)
                return True
            row = self.rows[r]
            ua, va = _split(row[j], l)
            ub, vb = _split(w[j], l)
            if vb < va:
                if not insert:
                    return False
                self.rows[r], w = w, row
                changed = True
                ua, va, ub, vb = ub, vb, ua, va
                row = self.rows[r]
            k = l ** (vb - va)
            w = [ua * x - ub * k * y for x, y in zip(w, row)]
            w = _normalise(w, l)

    def add_vector(self, vec: CycloVec) -> bool:
        ints, den = vec.flat()
        w = self._prepare(ints, den, grow=True)
        return self._reduce(w, insert=True)

    def add_flat(self, ints, den=1) -> bool:
        w = self._prepare(list(ints), den, grow=True)
        return self._reduce(w, insert=True)

    def contains(self, vec: CycloVec) -> bool:
        ints, den = vec.flat()
        w = self._prepare(ints, den, grow=False)
        if w is None:
            return False
        return self._reduce(w, insert=False)

    __contains__ = contains

    def contains_flat(self, ints, den=1) -> bool:
        w = self._prepare(list(ints), den, grow=False)
        if w is None:
            return False
        return self._reduce(w, insert=False)

    def vector(self, i: int) -> CycloVec:
        """The i-th basis element as a CycloVec."""
        if self.labels is None:
            raise CycloError("lattice has no CycloVec layout")
        phi = field(self.modulus).phi
        row = self.rows[i]
        entries = [
            CycloElem(self.modulus, row[k * phi : (k + 1) * phi], self.den) for k in range(len(self.labels))
        ]
        return CycloVec(self.labels, entries)

    def basis(self) -> list[CycloVec]:
        return [self.vector(i) for i in range(self.rank)]

    def issubset(self, other: "LLattice") -> bool:
        return all(other.contains_flat(r, self.den) for r in self.rows)

    def equals(self, other: "LLattice") -> bool:
        return self.issubset(other) and other.issubset(self)

    def to_json(self):
        return {"dim": self.dim, "l": self.l, "den": self.den, "hnf": [list(r) for r in self.rows]}

    @classmethod
    def from_json(cls, obj, labels=None, modulus=None):
        L = cls(obj["dim"], obj["l"], labels, modulus)
        L.den = obj["den"]
        for r in obj["hnf"]:
            L._reduce(list(r), insert=True)
        return L

    def __repr__(self):
        return f"LLattice(dim={self.dim}, l={self.l}, rank={self.rank}, den={self.den})"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WittBase:
    """W(F_{l^d}) realised inside cyclotomic fields as Z_(l)[zeta_m]."""

    l: int
    m: int = 1

    def __post_init__(self):
        if self.m % self.l == 0:
            raise ValueError("scalar root of unity must have order prime to l")

    @property
    def d(self) -> int:
        from .finite_field import multiplicative_order

        return multiplicative_order(self.l, self.m)

    def scalar_generators(self, M: int) -> list[CycloElem]:
        if M % self.m:
            raise CycloError(f"zeta_{self.m} does not live in Q(zeta_{M})")
        if self.m <= 2:
            return []
        return [CycloElem.root(M, M // self.m)]

    def galois_group(self, M: int) -> list[int]:
        """Exponents k of Gal(Q(zeta_M)/Q(zeta_m))."""
        return [k for k in range(1, M + 1) if gcd(k, M) == 1 and (k - 1) % self.m == 0]

    def to_json(self):
        return {"l": self.l, "m": self.m, "d": self.d, "residue_field": f"F_{self.l}^{self.d}"}


def _scalar_powers(base: WittBase, M: int) -> list[CycloElem]:
    """A Z-basis 1, zeta_m, ..., zeta_m^(phi(m)-1) of Z[zeta_m] inside Q(zeta_M)."""
    gens = base.scalar_generators(M)
    if not gens:
        return [CycloElem.one(M)]
    z = gens[0]
    out = [CycloElem.one(M)]
    for _ in range(1, field(base.m).phi):
        out.append(out[-1] * z)
    return out


def _add_w_multiples(L: LLattice, v: CycloVec, powers) -> bool:
    changed = False
    for s in powers:
        if L.add_vector(v * s if len(powers) > 1 else v):
            changed = True
    return changed


def module_span(vectors, base: WittBase, labels=None, modulus=None) -> LLattice:
    """The W-module spanned by ``vectors``."""
    vectors = list(vectors)
    labels = labels if labels is not None else vectors[0].labels
    modulus = modulus if modulus is not None else vectors[0].modulus
    L = LLattice.for_vectors(labels, modulus, base.l)
    powers = _scalar_powers(base, modulus)
    for v in vectors:
        _add_w_multiples(L, v, powers)
    return L


def w_generators(vectors, base: WittBase, labels=None, modulus=None) -> tuple[list[CycloVec], LLattice]:
    """A subset of ``vectors`` with the same W-span, chosen greedily."""
    vectors = list(vectors)
    labels = labels if labels is not None else vectors[0].labels
    modulus = modulus if modulus is not None else vectors[0].modulus
    L = LLattice.for_vectors(labels, modulus, base.l)
    powers = _scalar_powers(base, modulus)
    gens = []
    for v in vectors:
        if not L.contains(v):
            gens.append(v)
            _add_w_multiples(L, v, powers)
    return gens, L


def lattice_saturate(generators, base: WittBase, cap: int | None = None, strict: bool = False) -> LLattice:
    """The W-algebra generated by ``generators`` (with 1), as a lattice.

    Degree d means monomials of total degree <= d.  Stops at the first degree
    where multiplying by every generator adds nothing; ``stabilized`` records
    whether that happened before ``cap``.  Only W-module generators are
    multiplied, which suffices because every lattice here is a W-module.
    """
    generators = list(generators)
    if not generators:
        raise ValueError("need at least one generator")
    labels, M = generators[0].labels, generators[0].modulus
    for g in generators:
        if g.labels != labels or g.modulus != M:
            raise CycloError("generators must share index set and modulus")
    if cap is None:
        cap = 2 * len(labels)
    if cap < 1:
        raise ValueError("degree cap must be >= 1")
    one = CycloVec.constant(labels, CycloElem.one(M))
    gens1, L = w_generators([one] + generators, base)
    powers = _scalar_powers(base, M)
    L.degree = 1
    L.stabilized = False
    frontier = list(gens1)
    for deg in range(2, cap + 2):
        new = []
        for v in frontier:
            for g in gens1:
                w = v * g
                if not L.contains(w):
                    new.append(w)
                    _add_w_multiples(L, w, powers)
        if not new:
            L.stabilized = True
            L.degree = deg - 1
            break
        frontier = new
        L.degree = deg
        if deg > cap:
            break
    if not L.stabilized and strict:
        raise SaturationError(f"algebra did not stabilise within degree cap {cap}")
    return L


def lattice_member(v: CycloVec, L: LLattice) -> bool:
    return L.contains(v)


def algebra_closure_audit(L: LLattice) -> bool:
    """Products of any two basis elements lie in L."""
    B = L.basis()
    return all(L.contains(a * b) for i, a in enumerate(B) for b in B[i:])


def min_poly(v: CycloVec, base: WittBase) -> list[CycloElem]:
    """Monic minimal polynomial (coefficients low degree first) of v over
    Frac(W) = Q(zeta_m), annihilating v componentwise."""
    M = v.modulus
    roots = []
    seen = set()
    for e in v.entries:
        for k in base.galois_group(M):
            c = e.galois(k)
            if c not in seen:
                seen.add(c)
                roots.append(c)
    poly = [CycloElem.one(M)]
    for r in roots:
        nxt = [CycloElem.zero(M)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * r
        poly = nxt
    return poly


def poly_eval_vec(poly, v: CycloVec) -> CycloVec:
    """Evaluate a polynomial with CycloElem coefficients at v componentwise."""
    out = []
    for e in v.entries:
        acc = CycloElem.zero(v.modulus)
        for c in reversed(poly):
            acc = acc * e + c
        out.append(acc)
    return CycloVec(v.labels, out)


def rational_poly(poly) -> list[Fraction]:
    return [c.to_rational() for c in poly]
