"""GL_2(F_q): field models, conjugacy classes and the ordinary character table.

All character values are sums of (q^2-1)-th roots of unity.  They are kept
as lists of ``(exponent, multiplicity)`` terms against zeta_N, N = q^2 - 1,
and turned into CycloElems on demand.  The inner products below work
directly on the terms, which is much cheaper than multiplying CycloElems.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import gcd

import numpy as np

from .cyclo import CycloElem
from .cyclo import field as cyclo_field
from .finite_field import field_with_primitive_x, prime_power

TAGS = ("z", "zu", "t", "e")


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class FqModel:
    """F_{q^2} = F_p[x]/(least primitive polynomial), g2 = x, F_q its fixed field.

    Elements of F_q are stored as elements of F_{q^2}; g = g2^(q+1) generates
    F_q^x.  The torus E is F_{q^2}^x acting on itself in the F_q-basis {1, g2}.
    """

    def __init__(self, q: int):
        p, r = prime_power(q)
        self.p, self.r, self.q = p, r, q
        self.N = q * q - 1
        self.F2 = field_with_primitive_x(p, 2 * r)
        if self.F2.gen != p:  # x is encoded as the integer p
            raise RuntimeError("x is not the table generator")
        self.g2 = p
        self.g = self.F2.exp[(q + 1) % self.N]
        self._g2q = self.F2.pow(self.g2, q)
        self._den = self.F2.inv(self.F2.sub(self.g2, self._g2q))

    def __repr__(self):
        return f"FqModel(q={self.q})"

    # field helpers -----------------------------------------------------
    def exp2(self, j: int) -> int:
        return self.F2.exp[j % self.N]

    def log2(self, y: int) -> int:
        return self.F2.log[y]

    def gpow(self, i: int) -> int:
        """g^i as an element of F_q."""
        return self.F2.exp[((self.q + 1) * i) % self.N]

    def fq_elements(self) -> list[int]:
        return [0] + [self.gpow(i) for i in range(self.q - 1)]

    def fq_log(self, x: int) -> int:
        """log_g of x in F_q^x."""
        j = self.F2.log[x]
        if j % (self.q + 1):
            raise ValueError("not in F_q")
        return j // (self.q + 1)

    def in_fq(self, y: int) -> bool:
        return y == 0 or self.F2.log[y] % (self.q + 1) == 0

    def trace_to_fp(self, x: int) -> int:
        """Absolute trace F_q -> F_p, as an integer in [0, p)."""
        F = self.F2
        acc, y = 0, x
        for _ in range(self.r):
            acc = F.add(acc, y)
            y = F.pow(y, self.p)
        if acc >= self.p:
            raise ValueError("trace left F_p")
        return acc

    def norm(self, y: int) -> int:
        return self.F2.pow(y, self.q + 1)

    def coords(self, z: int) -> tuple[int, int]:
        """(c0, c1) with z = c0 + c1 g2, c_i in F_q."""
        F = self.F2
        c1 = F.mul(F.sub(z, F.pow(z, self.q)), self._den)
        c0 = F.sub(z, F.mul(c1, self.g2))
        return c0, c1

    def embed_E(self, y: int) -> tuple[int, int, int, int]:
        """Matrix of multiplication by y on F_{q^2} in the basis {1, g2}."""
        a0, a1 = self.coords(y)
        b0, b1 = self.coords(self.F2.mul(y, self.g2))
        return (a0, b0, a1, b1)

    # matrices (a, b, c, d) row-major -----------------------------------
    def mat_mul(self, m, n):
        F = self.F2
        a, b, c, d = m
        e, f, g, h = n
        return (
            F.add(F.mul(a, e), F.mul(b, g)),
            F.add(F.mul(a, f), F.mul(b, h)),
            F.add(F.mul(c, e), F.mul(d, g)),
            F.add(F.mul(c, f), F.mul(d, h)),
        )

    def det(self, m):
        F = self.F2
        return F.sub(F.mul(m[0], m[3]), F.mul(m[1], m[2]))

    def mat_inv(self, m):
        F = self.F2
        di = F.inv(self.det(m))
        a, b, c, d = m
        return (F.mul(d, di), F.mul(F.neg(b), di), F.mul(F.neg(c), di), F.mul(a, di))

    def label(self, x: int) -> str:
        """Print an element of F_{q^2} as 0 or g2^j."""
        return "0" if x == 0 else f"g2^{self.F2.log[x]}"

    def to_json(self):
        return {
            "q": self.q,
            "p": self.p,
            "r": self.r,
            "fq2_modulus": list(self.F2.modulus),
            "g2": "x",
            "g": f"g2^{self.q + 1}",
        }


@lru_cache(maxsize=None)
def fq_model(q: int) -> FqModel:
    return FqModel(q)


# ---------------------------------------------------------------------------
# conjugacy classes


@dataclass(frozen=True)
class ClassDatum:
    tag: str
    params: tuple
    size: int
    rep: tuple
    order: int

    def is_l_regular(self, l: int) -> bool:
        return self.order % l != 0

    @property
    def key(self):
        return (TAGS.index(self.tag), self.params)

    def to_json(self, model: FqModel):
        return {
            "tag": self.tag,
            "params": list(self.params),
            "size": self.size,
            "order": self.order,
            "rep": [model.label(x) for x in self.rep],
        }


def elliptic_key(k: int, q: int) -> int:
    N = q * q - 1
    return min(k % N, (k * q) % N)


class ClassList(list):
    """The conjugacy classes in canonical order, with lookup helpers."""

    def __init__(self, model: FqModel, classes):
        super().__init__(classes)
        self.model = model
        self.index = {(c.tag, c.params): i for i, c in enumerate(self)}

    def of_torus_element(self, j: int) -> int:
        """Class index of g2^j in E."""
        q, N = self.model.q, self.model.N
        j %= N
        if j % (q + 1) == 0:
            return self.index[("z", (j // (q + 1),))]
        return self.index[("e", (elliptic_key(j, q),))]

    def of_central_unipotent(self, i: int) -> int:
        return self.index[("zu", (i % (self.model.q - 1),))]

    def of_split(self, i: int, j: int) -> int:
        qm = self.model.q - 1
        i, j = i % qm, j % qm
        if i == j:
            return self.index[("z", (i,))]
        return self.index[("t", (min(i, j), max(i, j)))]


@lru_cache(maxsize=None)
def conj_classes(q: int) -> ClassList:
    model = fq_model(q)
    qm, N, p = q - 1, model.N, model.p
    ordq = lambda i: qm // gcd(i, qm)
    out = []
    for i in range(qm):
        z = model.gpow(i)
        out.append(ClassDatum("z", (i,), 1, (z, 0, 0, z), ordq(i)))
    for i in range(qm):
        z = model.gpow(i)
        out.append(ClassDatum("zu", (i,), N, (z, 1, 0, z), ordq(i) * p))
    for i in range(qm):
        for j in range(i + 1, qm):
            rep = (model.gpow(i), 0, 0, model.gpow(j))
            out.append(ClassDatum("t", (i, j), q * (q + 1), rep, lcm(ordq(i), ordq(j))))
    for k in range(1, N):
        if k % (q + 1) and elliptic_key(k, q) == k:
            rep = model.embed_E(model.exp2(k))
            out.append(ClassDatum("e", (k,), q * (q - 1), rep, N // gcd(k, N)))
    out.sort(key=lambda c: c.key)
    return ClassList(model, out)


def group_order(q: int) -> int:
    return (q * q - 1) * (q * q - q)


# ---------------------------------------------------------------------------
# characters of F_q^x and F_{q^2}^x


@dataclass(frozen=True)
class CharTheta:
    """A character of F_q^x or F_{q^2}^x given by an exponent.

    In characteristic zero the exponent a (mod the group order n) means
    g2 |-> zeta_n^a for F_{q^2}^x and g |-> zeta_n^a for F_q^x.  In the
    mod-l world the exponent is taken mod the prime-to-l part n' of n and
    means the reduction of zeta_{n'}^a.
    """

    q: int
    host: str  # "Fq" or "Fq2"
    exponent: int
    world: str = "zero"  # or "modl"
    l: int | None = None

    def __post_init__(self):
        if self.host not in ("Fq", "Fq2"):
            raise ValueError(f"unknown host {self.host}")
        if self.world not in ("zero", "modl"):
            raise ValueError(f"unknown coefficient world {self.world}")
        if self.world == "modl" and (self.l is None or self.l % 2 == 0):
            raise ValueError("mod-l characters need an odd prime l")
        object.__setattr__(self, "exponent", self.exponent % self.modulus)

    @property
    def group_order(self) -> int:
        return self.q - 1 if self.host == "Fq" else self.q * self.q - 1

    @property
    def modulus(self) -> int:
        n = self.group_order
        if self.world == "modl":
            while n % self.l == 0:
                n //= self.l
        return n

    @property
    def order(self) -> int:
        return self.modulus // gcd(self.exponent, self.modulus)

    def power(self, k: int) -> "CharTheta":
        return CharTheta(self.q, self.host, self.exponent * k, self.world, self.l)

    def frobenius(self) -> "CharTheta":
        """theta^q."""
        return self.power(self.q)

    def is_q_fixed(self) -> bool:
        return self.frobenius() == self

    def __call__(self, log: int) -> tuple[int, int]:
        """Value at generator^log as a root of unity (exponent, order)."""
        return (self.exponent * log) % self.modulus, self.modulus

    def to_json(self):
        out = {"host": self.host, "exponent": self.exponent, "modulus": self.modulus, "world": self.world}
        if self.l is not None:
            out["l"] = self.l
        return out


# ---------------------------------------------------------------------------
# irreducible characters


Terms = list  # list of (exponent mod N, integer multiplicity)


@dataclass
class IrrChar:
    label: str
    params: tuple
    dim: int
    terms: list  # one Terms per class, exponents against zeta_N
    N: int
    _values: list | None = dc_field(default=None, repr=False, compare=False)

    @property
    def values(self) -> list[CycloElem]:
        if self._values is None:
            self._values = [CycloElem.from_exponents(self.N, t) for t in self.terms]
        return self._values

    def value_terms(self, idx: int) -> Terms:
        return self.terms[idx]

    def name(self) -> str:
        return f"{self.label}{tuple(self.params)}"

    def to_json(self):
        return {
            "label": self.label,
            "params": list(self.params),
            "dim": self.dim,
            "values": [v.to_json() for v in self.values],
        }


def _norm_terms(terms, N) -> Terms:
    acc: dict[int, int] = {}
    for e, c in terms:
        e %= N
        acc[e] = acc.get(e, 0) + c
    return sorted((e, c) for e, c in acc.items() if c)


def _det_log(cls: ClassDatum, q: int) -> int:
    """log_{g2} of det(rep); a multiple of q+1."""
    q1 = q + 1
    if cls.tag in ("z", "zu"):
        return 2 * q1 * cls.params[0]
    if cls.tag == "t":
        return q1 * (cls.params[0] + cls.params[1])
    return q1 * cls.params[0]  # N(y) = y^(q+1)


def det_twist_terms(a: int, classes: ClassList) -> list[Terms]:
    q = classes.model.q
    N = q * q - 1
    return [[((a * _det_log(c, q)) % N, 1)] for c in classes]


def steinberg_terms(a: int, classes: ClassList) -> list[Terms]:
    q = classes.model.q
    N, q1 = q * q - 1, q + 1
    out = []
    for c in classes:
        e = (a * _det_log(c, q)) % N
        if c.tag == "z":
            out.append([(e, q)])
        elif c.tag == "zu":
            out.append([])
        elif c.tag == "t":
            out.append([(e, 1)])
        else:
            out.append([(e, -1)])
    return out


def principal_terms(a: int, b: int, classes: ClassList) -> list[Terms]:
    """Character of Ind_B^G(phi_a x phi_b), phi_a(g) = zeta_{q-1}^a."""
    q = classes.model.q
    N, q1 = q * q - 1, q + 1
    out = []
    for c in classes:
        if c.tag in ("z", "zu"):
            e = q1 * (a + b) * c.params[0]
            out.append(_norm_terms([(e, q + 1 if c.tag == "z" else 1)], N))
        elif c.tag == "t":
            i, j = c.params
            out.append(_norm_terms([(q1 * (a * i + b * j), 1), (q1 * (a * j + b * i), 1)], N))
        else:
            out.append([])
    return out


def cuspidal_terms(c_exp: int, classes: ClassList) -> list[Terms]:
    """Character of pi_theta for theta(g2) = zeta_N^c_exp (theta^q != theta)."""
    q = classes.model.q
    N, q1 = q * q - 1, q + 1
    if (c_exp * (q - 1)) % N == 0:
        raise ValueError("theta^q = theta: not a cuspidal parameter")
    out = []
    for c in classes:
        if c.tag == "z":
            out.append([((c_exp * q1 * c.params[0]) % N, q - 1)])
        elif c.tag == "zu":
            out.append([((c_exp * q1 * c.params[0]) % N, -1)])
        elif c.tag == "t":
            out.append([])
        else:
            k = c.params[0]
            out.append(_norm_terms([(c_exp * k, -1), (c_exp * k * q, -1)], N))
    return out


def cuspidal_char(theta: CharTheta, classes: ClassList | None = None) -> IrrChar:
    if theta.host != "Fq2" or theta.world != "zero":
        raise ValueError("cuspidal_char needs a characteristic-zero character of F_{q^2}^x")
    classes = classes if classes is not None else conj_classes(theta.q)
    q = theta.q
    if theta.is_q_fixed():
        raise ValueError("theta^q = theta: not a cuspidal parameter")
    N = q * q - 1
    key = elliptic_key(theta.exponent, q)
    return IrrChar("cuspidal", (key,), q - 1, cuspidal_terms(theta.exponent, classes), N)


@lru_cache(maxsize=None)
def char_table(q: int) -> tuple[IrrChar, ...]:
    classes = conj_classes(q)
    N, qm = q * q - 1, q - 1
    out = []
    for a in range(qm):
        out.append(IrrChar("det", (a,), 1, det_twist_terms(a, classes), N))
    for a in range(qm):
        out.append(IrrChar("steinberg", (a,), q, steinberg_terms(a, classes), N))
    for a in range(qm):
        for b in range(a + 1, qm):
            out.append(IrrChar("principal", (a, b), q + 1, principal_terms(a, b, classes), N))
    for k in range(1, N):
        if k % (q + 1) and elliptic_key(k, q) == k:
            out.append(IrrChar("cuspidal", (k,), q - 1, cuspidal_terms(k, classes), N))
    return tuple(out)


# ---------------------------------------------------------------------------
# orthogonality on root-sum terms


def _reduce_counts(counts: np.ndarray, N: int) -> CycloElem:
    return CycloElem(N, cyclo_field(N).reduce_counts([int(x) for x in counts]))


def inner_product(chi: IrrChar, psi: IrrChar, classes: ClassList) -> CycloElem:
    """sum over classes of size * chi * conj(psi), exactly (not divided by |G|)."""
    N = chi.N
    counts = np.zeros(N, dtype=object)
    for c, tc, tp in zip(classes, chi.terms, psi.terms):
        for e1, m1 in tc:
            for e2, m2 in tp:
                counts[(e1 - e2) % N] += c.size * m1 * m2
    return _reduce_counts(counts, N)


def column_product(table, i: int, j: int) -> CycloElem:
    """sum over characters of chi(c_i) * conj(chi(c_j))."""
    N = table[0].N
    counts = np.zeros(N, dtype=object)
    for chi in table:
        for e1, m1 in chi.terms[i]:
            for e2, m2 in chi.terms[j]:
                counts[(e1 - e2) % N] += m1 * m2
    return _reduce_counts(counts, N)


def first_orthogonality_defects(q: int) -> list[tuple[str, str, CycloElem]]:
    """All (chi, psi) pairs whose inner product is not |G| * delta."""
    classes, table, G = conj_classes(q), char_table(q), group_order(q)
    bad = []
    for a, chi in enumerate(table):
        for psi in table[a:]:
            want = G if chi is psi else 0
            got = inner_product(chi, psi, classes)
            if got != CycloElem.from_rational(chi.N, want):
                bad.append((chi.name(), psi.name(), got))
    return bad


def second_orthogonality_defects(q: int) -> list[tuple[int, int, CycloElem]]:
    classes, table, G = conj_classes(q), char_table(q), group_order(q)
    bad = []
    for i in range(len(classes)):
        for j in range(i, len(classes)):
            want = G // classes[i].size if i == j else 0
            got = column_product(table, i, j)
            if got != CycloElem.from_rational(table[0].N, want):
                bad.append((i, j, got))
    return bad


def chartable_json(q: int) -> dict:
    classes = conj_classes(q)
    return {
        "field": classes.model.to_json(),
        "group_order": group_order(q),
        "classes": [c.to_json(classes.model) for c in classes],
        "characters": [chi.to_json() for chi in char_table(q)],
    }
