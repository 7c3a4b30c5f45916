"""Finite coefficient rings with residue field F_{l^d}.

* ``GaloisRing(l, a, target)``: W(F_{l^d}) / l^a, presented as
  (Z/l^a)[X]/(f) where X is the Teichmuller lift of the generator rho of the
  residue field of ``target`` (a :class:`ModlTarget`).  The Frobenius
  automorphism is X |-> X^l.
* ``DualNumbers(target)``: F_{l^d}[eps]/(eps^2).

Both share the small interface used by the deformation code: enumeration,
ring operations, residue map, Teichmuller lifts, maximal ideal.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

from .cyclo import ModlTarget, modl_target
from .finite_field import FiniteField


class CoeffRingError(ValueError):
    pass


def _pmul(a, b, mod, n):
    """a*b mod (monic mod, n), coefficient lists low first, fixed length."""
    d = len(mod) - 1
    out = [0] * (2 * d - 1 if d else 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    for i in range(len(out) - 1, d - 1, -1):
        c = out[i] % n
        if c:
            for j in range(d + 1):
                out[i - d + j] -= c * mod[j]
    return tuple(x % n for x in out[:d])


class CoeffRing:
    """Common helpers; subclasses define the arithmetic."""

    l: int
    K: FiniteField
    name: str

    def pow(self, x, e: int):
        if e < 0:
            x, e = self.inv(x), -e
        result, base = self.one, x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_unit(self, x) -> bool:
        return self.residue(x) != 0

    def inv(self, x):
        cache = self.__dict__.setdefault("_inv", {})
        if x not in cache:
            if not self.is_unit(x):
                raise ZeroDivisionError("not a unit")
            # x^(|A^x| - 1) = x^-1
            cache[x] = self.pow(x, self.unit_group_order - 1)
        return cache[x]

    def maximal_ideal(self):
        return [x for x in self.elements() if self.residue(x) == 0]

    def one_plus_m(self):
        return [self.add(self.one, m) for m in self.maximal_ideal()]

    def units(self):
        return [x for x in self.elements() if self.is_unit(x)]

    def fiber(self, k_elem: int):
        """Elements with the given residue."""
        t = self.teich(k_elem)
        return [self.add(t, m) for m in self.maximal_ideal()]

    def roots_of_unity(self, n: int):
        return [x for x in self.units() if self.pow(x, n) == self.one]

    def __repr__(self):
        return self.name

    @property
    def size(self) -> int:
        return len(self.elements())

    @property
    def unit_group_order(self) -> int:
        return self.size - self.size // self.K.size


class GaloisRing(CoeffRing):
    def __init__(self, l: int, a: int, target: ModlTarget):
        if a < 1:
            raise CoeffRingError("length must be >= 1")
        self.l, self.a, self.n = l, a, l**a
        self.target = target
        self.K = target.field
        self.d = self.K.d
        self.name = f"GR({l}^{a},{self.d})"
        self.modulus = self._teichmuller_modulus()
        self.zero = tuple([0] * self.d)
        self.one = tuple([1] + [0] * (self.d - 1))
        self._elements = None

    def _teichmuller_modulus(self):
        """Minimal polynomial over Z/l^a of the Teichmuller lift of rho."""
        l, n, d = self.l, self.n, self.d
        f0 = list(self.target.factor)  # monic, low first, lift with same digits
        if d == 1:
            # Teichmuller of the root r: r^(l^(a-1)) iterated
            r = (-f0[0]) % l
            t = r
            for _ in range(self.a):
                t = pow(t, l, n)
            return ((-t) % n, 1)
        x = tuple([0, 1] + [0] * (d - 2))
        # T = x^(l^(d(a-1))) is the Teichmuller lift of x in (Z/l^a)[x]/(f0)
        T = x
        for _ in range(d * (self.a - 1)):
            T = self._pow_in(T, l, f0)
        conj = [T]
        for _ in range(d - 1):
            conj.append(self._pow_in(conj[-1], l, f0))
        # prod (Y - conj_i) with coefficients in (Z/l^a)[x]/(f0)
        zero = tuple([0] * d)
        one = tuple([1] + [0] * (d - 1))
        poly = [one]
        for c in conj:
            nxt = [zero] * (len(poly) + 1)
            for k, coef in enumerate(poly):
                nxt[k + 1] = tuple((u + v) % n for u, v in zip(nxt[k + 1], coef))
                prod = _pmul(coef, c, f0, n)
                nxt[k] = tuple((u - v) % n for u, v in zip(nxt[k], prod))
            poly = nxt
        out = []
        for coef in poly:
            if any(coef[1:]):
                raise CoeffRingError("Teichmuller polynomial not defined over Z/l^a")
            out.append(coef[0])
        return tuple(out)

    def _pow_in(self, x, e, mod):
        result = tuple([1] + [0] * (self.d - 1))
        base = x
        while e:
            if e & 1:
                result = _pmul(result, base, mod, self.n)
            base = _pmul(base, base, mod, self.n)
            e >>= 1
        return result

    # arithmetic -------------------------------------------------------------
    def elements(self):
        if self._elements is None:
            self._elements = [tuple(t) for t in itertools.product(range(self.n), repeat=self.d)]
        return self._elements

    def from_int(self, c: int):
        return tuple([c % self.n] + [0] * (self.d - 1))

    def add(self, x, y):
        return tuple((u + v) % self.n for u, v in zip(x, y))

    def sub(self, x, y):
        return tuple((u - v) % self.n for u, v in zip(x, y))

    def neg(self, x):
        return tuple((-u) % self.n for u in x)

    def mul(self, x, y):
        if self.d == 1:
            return ((x[0] * y[0]) % self.n,)
        return _pmul(x, y, self.modulus, self.n)

    def residue(self, x) -> int:
        return self.K.from_digits([c % self.l for c in x])

    @property
    def X(self):
        if self.d == 1:
            return ((-self.modulus[0]) % self.n,)
        return tuple([0, 1] + [0] * (self.d - 2))

    def teich(self, k_elem: int):
        """Teichmuller lift of an element of the residue field.

        Any lift raised to the power |k|^(a-1) is the Teichmuller lift, since
        1 + l*O is killed by that power modulo l^a."""
        if k_elem == 0:
            return self.zero
        cache = self.__dict__.setdefault("_teich", {})
        if k_elem not in cache:
            naive = tuple(self.K.digits(k_elem))
            cache[k_elem] = self.pow(naive, self.K.size ** (self.a - 1))
        return cache[k_elem]

    def frobenius(self, x, k: int = 1):
        """Arithmetic Frobenius X |-> X^l applied k times."""
        Xl = self.pow(self.X, self.l)
        for _ in range(k % self.d if self.d else 0):
            acc, p = self.zero, self.one
            for c in x:
                acc = self.add(acc, self.mul(self.from_int(c), p))
                p = self.mul(p, Xl)
            x = acc
        return x

    def label(self, x):
        return list(x)

    def to_json(self):
        return {"ring": "galois", "l": self.l, "a": self.a, "d": self.d, "modulus": list(self.modulus)}


class DualNumbers(CoeffRing):
    """k[eps]/(eps^2); elements are pairs (u, v) meaning u + v eps."""

    def __init__(self, target: ModlTarget):
        self.target = target
        self.l = target.l
        self.K = target.field
        self.d = self.K.d
        self.name = f"F_{self.l}^{self.d}[eps]"
        self.zero = (0, 0)
        self.one = (1, 0)
        self.eps = (0, 1)
        self._elements = None

    def elements(self):
        if self._elements is None:
            r = range(self.K.size)
            self._elements = [(u, v) for u in r for v in r]
        return self._elements

    def from_int(self, c: int):
        return (self.K.scalar(c), 0)

    def add(self, x, y):
        K = self.K
        return (K.add(x[0], y[0]), K.add(x[1], y[1]))

    def sub(self, x, y):
        K = self.K
        return (K.sub(x[0], y[0]), K.sub(x[1], y[1]))

    def neg(self, x):
        return (self.K.neg(x[0]), self.K.neg(x[1]))

    def mul(self, x, y):
        K = self.K
        return (K.mul(x[0], y[0]), K.add(K.mul(x[0], y[1]), K.mul(x[1], y[0])))

    def residue(self, x) -> int:
        return x[0]

    def teich(self, k_elem: int):
        return (k_elem, 0)

    def frobenius(self, x, k: int = 1):
        K = self.K
        return (K.frobenius(x[0], k), K.frobenius(x[1], k))

    def label(self, x):
        return [list(self.K.digits(x[0])), list(self.K.digits(x[1]))]

    def to_json(self):
        return {"ring": "dual", "l": self.l, "d": self.d}


class ResidueField(CoeffRing):
    """k itself, as the trivial coefficient ring."""

    def __init__(self, target: ModlTarget):
        self.target = target
        self.l = target.l
        self.K = target.field
        self.d = self.K.d
        self.name = f"F_{self.l}^{self.d}"
        self.zero, self.one = 0, 1

    def elements(self):
        return list(range(self.K.size))

    def from_int(self, c):
        return self.K.scalar(c)

    def add(self, x, y):
        return self.K.add(x, y)

    def sub(self, x, y):
        return self.K.sub(x, y)

    def neg(self, x):
        return self.K.neg(x)

    def mul(self, x, y):
        return self.K.mul(x, y)

    def residue(self, x):
        return x

    def teich(self, k_elem):
        return k_elem

    def frobenius(self, x, k: int = 1):
        return self.K.frobenius(x, k)

    def label(self, x):
        return list(self.K.digits(x))

    def to_json(self):
        return {"ring": "residue", "l": self.l, "d": self.d}


@lru_cache(maxsize=None)
def coefficient_ring(kind: str, M: int, l: int, a: int = 1) -> CoeffRing:
    """kind in {"dual", "O/l^a", "k"}; M fixes the residue field via ModlTarget(M, l)."""
    t = modl_target(M, l)
    if kind == "dual":
        return DualNumbers(t)
    if kind == "k":
        return ResidueField(t)
    if kind == "O":
        if not 1 <= a <= 3:
            raise CoeffRingError("supported truncations are O/l^a with a <= 3")
        if a == 1:
            return ResidueField(t)
        return GaloisRing(l, a, t)
    raise CoeffRingError(f"unsupported coefficient ring {kind!r}")


def parse_ring(spec: str, M: int, l: int) -> CoeffRing:
    """'dual', 'k', 'O/l', 'O/l^2', 'O/l^3'."""
    s = spec.replace(" ", "")
    if s in ("dual", "k[eps]"):
        return coefficient_ring("dual", M, l)
    if s in ("k", "O/l", "O/l^1"):
        return coefficient_ring("O", M, l, 1)
    if s.startswith("O/l^"):
        return coefficient_ring("O", M, l, int(s[4:]))
    raise CoeffRingError(f"unsupported coefficient ring {spec!r}")
