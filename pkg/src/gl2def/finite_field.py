"""Small finite fields F_{p^d} with log/antilog tables.

Elements are encoded as integers in ``[0, p**d)`` whose base-``p`` digits
(least significant first) are the coefficients of the polynomial
representative modulo the defining polynomial.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import gcd

from sympy import factorint


# ---------------------------------------------------------------------------
# polynomials over F_p, coefficient tuples low degree first


def poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mulmod(a, b, mod, p):
    """(a*b) mod (mod, p); ``mod`` monic."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return poly_rem(out, mod, p)


def poly_rem(a, mod, p):
    a = [x % p for x in a]
    n = len(mod) - 1
    for i in range(len(a) - 1, n - 1, -1):
        c = a[i]
        if c:
            for j in range(n + 1):
                a[i - n + j] = (a[i - n + j] - c * mod[j]) % p
    return poly_trim(a[:n] if len(a) > n else a)


def poly_divides(f, g, p) -> bool:
    """True iff monic ``f`` divides ``g`` over F_p."""
    return not poly_rem(list(g), list(f), p)


def poly_powmod(a, e, mod, p):
    result = [1]
    base = poly_rem(list(a), mod, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, mod, p)
        base = poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def multiplicative_order(a: int, m: int) -> int:
    """Order of ``a`` in (Z/m)^x."""
    if m == 1:
        return 1
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit mod {m}")
    k, x = 1, a % m
    while x != 1:
        x = x * a % m
        k += 1
    return k


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, r) with q = p**r, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, r), = f.items()
    return p, r


def _x_order_is(mod, p, order, factors) -> bool:
    """Does x have exact multiplicative order ``order`` modulo ``mod``?"""
    if poly_powmod([0, 1], order, mod, p) != [1]:
        return False
    return all(poly_powmod([0, 1], order // f, mod, p) != [1] for f in factors)


@lru_cache(maxsize=None)
def least_primitive_poly(p: int, d: int) -> tuple[int, ...]:
    """Lexicographically least (low-degree-first) primitive monic polynomial."""
    order = p**d - 1
    factors = list(factorint(order))
    for low in itertools.product(range(p), repeat=d):
        if low[0] == 0:
            continue
        mod = list(low) + [1]
        if _x_order_is(mod, p, order, factors):
            return tuple(mod)
    raise RuntimeError("no primitive polynomial found")  # unreachable


class FiniteField:
    """F_{p^d} = F_p[x]/(modulus) with exp/log tables.

    ``modulus`` must be irreducible; it need not be primitive.
    """

    def __init__(self, p: int, modulus):
        self.p = p
        self.modulus = tuple(int(c) % p for c in modulus)
        self.d = len(self.modulus) - 1
        self.size = p**self.d
        self.order = self.size - 1
        self._digits = [self._to_digits(i) for i in range(self.size)]
        self._build_tables()

    def __repr__(self):
        return f"FiniteField({self.p}^{self.d}, modulus={list(self.modulus)})"

    def _to_digits(self, n):
        out = []
        for _ in range(self.d):
            n, r = divmod(n, self.p)
            out.append(r)
        return tuple(out)

    def from_digits(self, digits) -> int:
        n = 0
        for c in reversed(list(digits)[: self.d]):
            n = n * self.p + c % self.p
        return n

    def digits(self, a: int) -> tuple[int, ...]:
        return self._digits[a]

    def _polymul(self, a, b):
        return poly_mulmod(list(self._digits[a]), list(self._digits[b]), list(self.modulus), self.p)

    def _build_tables(self):
        n = self.order
        if n == 0:
            raise ValueError("trivial field")
        factors = list(factorint(n)) if n > 1 else []
        for cand in range(1, self.size):
            if self.d > 1 and cand < self.p:
                continue  # constants lie in F_p, never primitive when d > 1
            exp = [1]
            cur = 1
            for _ in range(n - 1):
                cur = self.from_digits(self._polymul(cur, cand) + [0] * self.d)
                if cur == 1:
                    break
                exp.append(cur)
            if len(exp) == n:
                self.gen = cand
                self.exp = exp
                self.log = {v: k for k, v in enumerate(exp)}
                return
        raise ValueError("modulus is not irreducible")

    # arithmetic -----------------------------------------------------------
    def add(self, a, b):
        da, db = self._digits[a], self._digits[b]
        return self.from_digits([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a):
        return self.from_digits([(-x) % self.p for x in self._digits[a]])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % self.order]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self.exp[(-self.log[a]) % self.order]

    def pow(self, a, e):
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 0
        return self.exp[(self.log[a] * e) % self.order]

    def scalar(self, c: int) -> int:
        """Image of the integer c."""
        return c % self.p

    def element_order(self, a) -> int:
        return self.order // gcd(self.log[a], self.order)

    def frobenius(self, a, k: int = 1):
        return self.pow(a, self.p**k)

    def is_zero(self, a):
        return a == 0

    def eval_poly(self, coeffs, x):
        """Evaluate an integer-coefficient polynomial (low first) at x."""
        acc = 0
        for c in reversed(list(coeffs)):
            acc = self.add(self.mul(acc, x), self.scalar(c))
        return acc


@lru_cache(maxsize=None)
def field_with_primitive_x(p: int, d: int) -> FiniteField:
    return FiniteField(p, least_primitive_poly(p, d))
