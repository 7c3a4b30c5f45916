"""Exact arithmetic in cyclotomic fields Q(zeta_M) and reduction modulo l.

An element is stored in the power basis of Z[x]/Phi_M(x) as a tuple of
integer numerators over one positive common denominator, normalised so that
``gcd(content(num), den) == 1``.  Equality is coefficient equality.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np
from sympy import cyclotomic_poly, symbols, totient

from .finite_field import FiniteField, multiplicative_order, poly_divides, poly_mulmod, poly_rem

_X = symbols("x")
_SAFE = 2**62


class CycloError(ValueError):
    pass


@lru_cache(maxsize=None)
def cyclotomic_coeffs(M: int) -> tuple[int, ...]:
    """Coefficients of Phi_M, low degree first."""
    return tuple(int(c) for c in reversed(cyclotomic_poly(M, _X, polys=True).all_coeffs()))


class _Field:
    """Per-modulus tables: zeta^k in the power basis for every k mod M."""

    def __init__(self, M: int):
        self.M = M
        self.phi = int(totient(M))
        phi_poly = cyclotomic_coeffs(M)
        rows = []
        cur = [0] * self.phi
        cur[0] = 1
        for _ in range(M):
            rows.append(tuple(cur))
            # multiply by x and reduce with x^phi = -sum(c_i x^i)
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [a - top * c for a, c in zip(cur, phi_poly)]
        self.powers = rows
        self.power_matrix = np.array(rows, dtype=np.int64)
        self.max_power_entry = int(np.abs(self.power_matrix).max())
        self.high_matrix = self.power_matrix[[k % M for k in range(self.phi, 2 * self.phi - 1)]]
        self._galois = {}

    def reduce_counts(self, counts) -> list[int]:
        """sum_k counts[k] zeta^k in the power basis (counts: length-M ints)."""
        arr = np.asarray(counts, dtype=object)
        big = max((abs(int(c)) for c in counts), default=0)
        if big * self.max_power_entry * self.M < _SAFE:
            res = np.asarray(counts, dtype=np.int64) @ self.power_matrix
            return [int(v) for v in res]
        res = arr @ self.power_matrix.astype(object)
        return [int(v) for v in res]

    def galois_matrix(self, k: int) -> np.ndarray:
        k %= self.M
        mat = self._galois.get(k)
        if mat is None:
            mat = self.power_matrix[[(j * k) % self.M for j in range(self.phi)]]
            self._galois[k] = mat
        return mat


@lru_cache(maxsize=None)
def field(M: int) -> _Field:
    if M < 1:
        raise CycloError(f"modulus must be positive, got {M}")
    return _Field(M)


def _matvec(vec, mat, bound_entry):
    big = max((abs(v) for v in vec), default=0)
    if big * bound_entry * len(vec) < _SAFE:
        return [int(v) for v in np.asarray(vec, dtype=np.int64) @ mat]
    return [int(v) for v in np.asarray(vec, dtype=object) @ mat.astype(object)]


class CycloElem:
    """An element of Q(zeta_M)."""

    __slots__ = ("modulus", "num", "den", "_hash")

    def __init__(self, modulus: int, num, den: int = 1):
        F = field(modulus)
        num = tuple(int(c) for c in num)
        if len(num) != F.phi:
            raise CycloError(f"expected {F.phi} coefficients for M={modulus}, got {len(num)}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = tuple(-c for c in num), -den
        g = den
        for c in num:
            if g == 1:
                break
            g = gcd(g, c)
        if g > 1:
            num = tuple(c // g for c in num)
            den //= g
        if not any(num):
            den = 1
        self.modulus = modulus
        self.num = num
        self.den = den
        self._hash = None

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, M):
        return cls(M, (0,) * field(M).phi)

    @classmethod
    def from_rational(cls, M, r) -> "CycloElem":
        r = Fraction(r)
        num = [0] * field(M).phi
        num[0] = r.numerator
        return cls(M, num, r.denominator)

    @classmethod
    def one(cls, M):
        return cls.from_rational(M, 1)

    @classmethod
    def root(cls, M, k: int = 1) -> "CycloElem":
        """zeta_M ** k."""
        return cls(M, field(M).powers[k % M])

    @classmethod
    def from_exponents(cls, M, terms, den: int = 1) -> "CycloElem":
        """sum c * zeta_M**k over (k, c) pairs, divided by ``den``."""
        F = field(M)
        counts = [0] * M
        items = terms.items() if isinstance(terms, dict) else terms
        for k, c in items:
            counts[k % M] += c
        return cls(M, F.reduce_counts(counts), den)

    @classmethod
    def from_fractions(cls, M, coeffs) -> "CycloElem":
        coeffs = [Fraction(c) for c in coeffs]
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        return cls(M, [int(c * den) for c in coeffs], den)

    # views ----------------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    @property
    def phi(self) -> int:
        return len(self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise CycloError(f"{self!r} is not rational")
        return Fraction(self.num[0], self.den)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        body = " + ".join(terms) or "0"
        return f"CycloElem[{self.modulus}]({body})"

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_rational() == other
        if not isinstance(other, CycloElem):
            return NotImplemented
        return self.modulus == other.modulus and self.den == other.den and self.num == other.num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.modulus, self.num, self.den))
        return self._hash

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "CycloElem":
        if isinstance(other, CycloElem):
            if other.modulus != self.modulus:
                raise CycloError(f"modulus mismatch: {self.modulus} vs {other.modulus}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElem.from_rational(self.modulus, other)
        raise TypeError(f"cannot combine CycloElem with {type(other).__name__}")

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        den = self.den * o.den // gcd(self.den, o.den)
        a, b = den // self.den, den // o.den
        return CycloElem(self.modulus, [a * x + b * y for x, y in zip(self.num, o.num)], den)

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.modulus, [-x for x in self.num], self.den)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            r = Fraction(other)
            return CycloElem(self.modulus, [x * r.numerator for x in self.num], self.den * r.denominator)
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        F = field(self.modulus)
        n = F.phi
        if n == 1:
            return CycloElem(self.modulus, [self.num[0] * o.num[0]], self.den * o.den)
        ba = max(abs(x) for x in self.num)
        bb = max(abs(x) for x in o.num)
        if ba * bb * n * F.max_power_entry * n < _SAFE:
            conv = np.convolve(np.asarray(self.num, dtype=np.int64), np.asarray(o.num, dtype=np.int64))
            high = conv[n:]
            res = conv[:n] + (high @ F.high_matrix if len(high) else 0)
            return CycloElem(self.modulus, [int(v) for v in res], self.den * o.den)
        conv = [0] * (2 * n - 1)
        for i, x in enumerate(self.num):
            if x:
                for j, y in enumerate(o.num):
                    if y:
                        conv[i + j] += x * y
        out = conv[:n]
        for k in range(n, 2 * n - 1):
            c = conv[k]
            if c:
                row = F.powers[k % self.modulus]
                out = [a + c * r for a, r in zip(out, row)]
        return CycloElem(self.modulus, out, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        o = self._coerce(other)
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycloElem.one(self.modulus)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "CycloElem":
        """Exact inverse by solving the multiplication-by-self linear system."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_M)")
        if self.is_rational():
            return CycloElem.from_rational(self.modulus, 1 / self.to_rational())
        n = self.phi
        # columns: self * x^j
        cols = []
        for j in range(n):
            cols.append((self * CycloElem.root(self.modulus, j)).coeffs)
        mat = [[cols[j][i] for j in range(n)] + [Fraction(int(i == 0))] for i in range(n)]
        sol = _solve_fraction(mat, n)
        return CycloElem.from_fractions(self.modulus, sol)

    def galois(self, k: int) -> "CycloElem":
        """Image under zeta_M -> zeta_M**k."""
        if gcd(k, self.modulus) != 1:
            raise CycloError(f"k={k} is not coprime to M={self.modulus}")
        F = field(self.modulus)
        return CycloElem(self.modulus, _matvec(self.num, F.galois_matrix(k), F.max_power_entry), self.den)

    def conj(self) -> "CycloElem":
        return self.galois(-1)

    def embed(self, M2: int) -> "CycloElem":
        """Image in Q(zeta_M2) for M | M2, via zeta_M -> zeta_M2**(M2/M)."""
        if M2 == self.modulus:
            return self
        if M2 % self.modulus:
            raise CycloError(f"{self.modulus} does not divide {M2}")
        step = M2 // self.modulus
        return CycloElem.from_exponents(M2, [(i * step, c) for i, c in enumerate(self.num) if c], self.den)

    def norm(self) -> Fraction:
        """Absolute norm down to Q (product of all conjugates)."""
        acc = CycloElem.one(self.modulus)
        for k in range(1, self.modulus + 1):
            if gcd(k, self.modulus) == 1:
                acc = acc * self.galois(k)
        return acc.to_rational()

    def to_json(self):
        return {"modulus": self.modulus, "coeffs": [[c.numerator, c.denominator] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "CycloElem":
        return cls.from_fractions(obj["modulus"], [Fraction(n, d) for n, d in obj["coeffs"]])


def _solve_fraction(aug, n):
    """Gauss-Jordan on an n x (n+1) augmented Fraction matrix."""
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def cyclo_arith(a: CycloElem, b: CycloElem, op: str) -> CycloElem:
    if a.modulus != b.modulus:
        raise CycloError(f"modulus mismatch: {a.modulus} vs {b.modulus}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def galois_apply(a: CycloElem, k: int) -> CycloElem:
    return a.galois(k)


def is_l_integral(a: CycloElem, l: int) -> bool:
    # Z[zeta_M] is the full ring of integers of Q(zeta_M), so a lies in the
    # localisation at l iff every power-basis coefficient does.  With the
    # canonical form gcd(content, den) = 1 that is just l not dividing den.
    return a.den % l != 0


# ---------------------------------------------------------------------------
# vectors indexed by lift labels


class CycloVec:
    """A tuple of CycloElems of one modulus, indexed by fixed labels."""

    __slots__ = ("labels", "entries", "modulus")

    def __init__(self, labels, entries):
        labels = tuple(labels)
        entries = tuple(entries)
        if len(labels) != len(entries):
            raise CycloError("label/entry length mismatch")
        if not entries:
            raise CycloError("empty CycloVec")
        mods = {e.modulus for e in entries}
        if len(mods) != 1:
            raise CycloError(f"entries have mixed moduli {sorted(mods)}")
        self.labels = labels
        self.entries = entries
        self.modulus = entries[0].modulus

    @classmethod
    def constant(cls, labels, value: CycloElem):
        labels = tuple(labels)
        return cls(labels, [value] * len(labels))

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def _check(self, other):
        if not isinstance(other, CycloVec):
            raise TypeError("expected CycloVec")
        if other.labels != self.labels:
            raise CycloError("index sets differ")

    def __add__(self, other):
        self._check(other)
        return CycloVec(self.labels, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other):
        self._check(other)
        return CycloVec(self.labels, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self):
        return CycloVec(self.labels, [-a for a in self.entries])

    def __mul__(self, other):
        if isinstance(other, CycloVec):
            self._check(other)
            return CycloVec(self.labels, [a * b for a, b in zip(self.entries, other.entries)])
        return CycloVec(self.labels, [a * other for a in self.entries])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, CycloVec) and self.labels == other.labels and self.entries == other.entries

    def __hash__(self):
        return hash((self.labels, self.entries))

    def __repr__(self):
        return f"CycloVec({dict(zip(self.labels, self.entries))})"

    def is_zero(self):
        return all(e.is_zero() for e in self.entries)

    def embed(self, M2):
        return CycloVec(self.labels, [e.embed(M2) for e in self.entries])

    def flat(self) -> tuple[list[int], int]:
        """Integer coordinate vector (all entries concatenated) and common denominator."""
        den = 1
        for e in self.entries:
            den = den * e.den // gcd(den, e.den)
        out = []
        for e in self.entries:
            f = den // e.den
            out.extend(c * f for c in e.num)
        return out, den

    def to_json(self):
        return {"labels": [str(x) for x in self.labels], "entries": [e.to_json() for e in self.entries]}


# ---------------------------------------------------------------------------
# reduction modulo l


def prime_to(n: int, l: int) -> int:
    while n % l == 0:
        n //= l
    return n


def _monic_candidates(l, d):
    for low in itertools.product(range(l), repeat=d):
        yield list(low) + [1]


@lru_cache(maxsize=None)
def _least_factor(Mp: int, l: int) -> tuple[int, ...]:
    """Lexicographically least irreducible factor of Phi_Mp mod l."""
    d = multiplicative_order(l, Mp)
    phi_mod = [c % l for c in cyclotomic_coeffs(Mp)]
    if d == len(phi_mod) - 1:
        return tuple(phi_mod)
    # every irreducible factor has degree d; find one to build F_{l^d}, then
    # list all factors as minimal polynomials of the primitive Mp-th roots
    some = next(f for f in _monic_candidates(l, d) if f[0] and poly_divides(f, phi_mod, l))
    K = FiniteField(l, some)
    rho0 = K.pow(K.gen, K.order // Mp)
    factors = set()
    for j in range(1, Mp):
        if gcd(j, Mp) != 1:
            continue
        root = K.pow(rho0, j)
        # minimal polynomial = prod over Frobenius orbit of (X - root^(l^i))
        poly = [1]
        for i in range(d):
            r = K.pow(root, l**i)
            # poly * (X - r) over K
            nxt = [0] * (len(poly) + 1)
            for k, c in enumerate(poly):
                nxt[k + 1] = K.add(nxt[k + 1], c)
                nxt[k] = K.sub(nxt[k], K.mul(c, r))
            poly = nxt
        factors.add(tuple(K.digits(c)[0] for c in poly))
    return min(factors)


class ModlTarget:
    """A fixed ring map Z[zeta_M] -> F_{l^d}.

    zeta_M goes to the class rho of x in F_l[x]/(factor), where ``factor`` is
    the lexicographically least irreducible factor of Phi_{M'} mod l and M'
    is the prime-to-l part of M.  l-power roots of unity go to 1.
    """

    def __init__(self, M: int, l: int):
        if l == 2 or l < 2:
            raise CycloError("l must be an odd prime")
        self.M = M
        self.l = l
        self.Mp = prime_to(M, l)
        self.d = multiplicative_order(l, self.Mp)
        self.factor = _least_factor(self.Mp, l) if self.Mp > 1 else (l - 1, 1)
        self.field = FiniteField(l, self.factor)
        self.rho = l if self.d > 1 else self.field.scalar(-self.factor[0])

    def __repr__(self):
        return f"ModlTarget(M={self.M}, l={self.l}, d={self.d}, factor={list(self.factor)})"

    def __eq__(self, other):
        return isinstance(other, ModlTarget) and (self.M, self.l) == (other.M, other.l)

    def __hash__(self):
        return hash((self.M, self.l))

    def root_of_unity(self, k: int) -> int:
        """Image of zeta_M**k."""
        return self.field.pow(self.rho, k)

    def reduce(self, a: CycloElem) -> int:
        if not is_l_integral(a, self.l):
            raise CycloError(f"{a!r} is not {self.l}-integral")
        if a.modulus != self.M:
            a = a.embed(self.M)
        l = self.l
        inv_den = pow(a.den, -1, l)
        K = self.field
        acc = 0
        for c in reversed(a.num):
            acc = K.add(K.mul(acc, self.rho), K.scalar(c * inv_den))
        return acc

    def to_json(self):
        return {"M": self.M, "l": self.l, "d": self.d, "factor": list(self.factor)}


@lru_cache(maxsize=None)
def modl_target(M: int, l: int) -> ModlTarget:
    return ModlTarget(M, l)


def reduce_mod_l(a: CycloElem, t: ModlTarget) -> int:
    return t.reduce(a)
