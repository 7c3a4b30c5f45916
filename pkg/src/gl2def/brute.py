"""Brute-force oracles on the matrix group GL_2(F_q) for small q.

Everything here works element by element: conjugacy classes are orbits,
induced characters are sums over the whole group.  It is meant only for
cross-checking the closed forms in :mod:`gl2def.fq_reps`.
"""
from __future__ import annotations

from functools import lru_cache

from .cyclo import CycloElem
from .fq_reps import FqModel, conj_classes, fq_model, lcm


@lru_cache(maxsize=None)
def group_elements(q: int) -> tuple:
    m = fq_model(q)
    els = m.fq_elements()
    return tuple(
        (a, b, c, d) for a in els for b in els for c in els for d in els if m.det((a, b, c, d)) != 0
    )


def orbits(q: int) -> list[frozenset]:
    m = fq_model(q)
    G = group_elements(q)
    inverses = [m.mat_inv(x) for x in G]
    seen = set()
    out = []
    for g in G:
        if g in seen:
            continue
        orb = frozenset(m.mat_mul(m.mat_mul(x, g), xi) for x, xi in zip(G, inverses))
        seen |= orb
        out.append(orb)
    return out


def check_classes(q: int) -> list[str]:
    """Compare the closed-form class list with the conjugation orbits."""
    problems = []
    classes = conj_classes(q)
    orbs = orbits(q)
    if len(orbs) != len(classes):
        problems.append(f"{len(orbs)} orbits vs {len(classes)} classes")
    hit = {}
    for idx, c in enumerate(classes):
        owners = [k for k, o in enumerate(orbs) if c.rep in o]
        if len(owners) != 1:
            problems.append(f"class {c.tag}{c.params} meets {len(owners)} orbits")
            continue
        k = owners[0]
        if k in hit:
            problems.append(f"classes {hit[k]} and {idx} are conjugate")
        hit[k] = idx
        if len(orbs[k]) != c.size:
            problems.append(f"class {c.tag}{c.params}: size {c.size} vs orbit {len(orbs[k])}")
    return problems


class BruteTable:
    """Characters of GL_2(F_q) computed by brute-force induction."""

    def __init__(self, q: int):
        self.q = q
        self.m: FqModel = fq_model(q)
        self.N = q * q - 1
        self.L = lcm(self.N, self.m.p)
        self.G = group_elements(q)
        self.classes = conj_classes(q)
        inverses = [self.m.mat_inv(x) for x in self.G]
        mm = self.m.mat_mul
        self.conjugates = [[mm(mm(x, c.rep), xi) for x, xi in zip(self.G, inverses)] for c in self.classes]
        self.E = {self.m.embed_E(self.m.exp2(j)): j for j in range(self.N)}

    def _zeta_N(self, e):
        return (e * (self.L // self.N)) % self.L

    def _zeta_p(self, t):
        return (t * (self.L // self.m.p)) % self.L

    def induced(self, f, h_order: int) -> list[CycloElem]:
        """Ind_H^G f, where f(matrix) returns a list of (exponent mod L, mult)
        or None off H."""
        out = []
        for conj in self.conjugates:
            counts = {}
            for y in conj:
                val = f(y)
                if val is None:
                    continue
                for e, c in val:
                    counts[e] = counts.get(e, 0) + c
            out.append(CycloElem.from_exponents(self.L, counts, h_order))
        return out

    def class_function(self, f) -> list[CycloElem]:
        return [CycloElem.from_exponents(self.L, f(c.rep)) for c in self.classes]

    # characters -----------------------------------------------------------
    def _log(self, x):
        return self.m.log2(x)

    def phi(self, a: int, x: int) -> int:
        """Exponent against zeta_L of phi_a(x) for x in F_q^x."""
        return self._zeta_N(a * self._log(x))

    def det_twist(self, a: int):
        return self.class_function(lambda g: [(self.phi(a, self.m.det(g)), 1)])

    def principal(self, a: int, b: int):
        q = self.q

        def f(g):
            if g[2] != 0:
                return None
            return [((self.phi(a, g[0]) + self.phi(b, g[3])) % self.L, 1)]

        return self.induced(f, (q - 1) ** 2 * q)

    def steinberg(self, a: int):
        ind = self.principal(a, a)
        return [x - y for x, y in zip(ind, self.det_twist(a))]

    def cuspidal(self, c_exp: int):
        q, F = self.q, self.m.F2

        def f_zn(g):
            if g[2] != 0 or g[0] != g[3]:
                return None
            u = F.mul(g[1], F.inv(g[0]))
            t = self.m.trace_to_fp(u)
            return [((self._zeta_N(c_exp * self._log(g[0])) + self._zeta_p(t)) % self.L, 1)]

        def f_e(g):
            j = self.E.get(g)
            if j is None:
                return None
            return [(self._zeta_N(c_exp * j), 1)]

        a = self.induced(f_zn, (q - 1) * q)
        b = self.induced(f_e, self.N)
        return [x - y for x, y in zip(a, b)]

    def row(self, chi) -> list[CycloElem]:
        """Brute-force values for a closed-form IrrChar's label."""
        if chi.label == "det":
            return self.det_twist(*chi.params)
        if chi.label == "steinberg":
            return self.steinberg(*chi.params)
        if chi.label == "principal":
            return self.principal(*chi.params)
        if chi.label == "cuspidal":
            return self.cuspidal(*chi.params)
        raise ValueError(chi.label)


def compare_table(q: int) -> list[str]:
    """Entry-by-entry comparison of closed forms against brute force."""
    from .fq_reps import char_table

    bt = BruteTable(q)
    problems = []
    for chi in char_table(q):
        brute = bt.row(chi)
        for c, v, w in zip(bt.classes, chi.values, brute):
            if v.embed(bt.L) != w:
                problems.append(f"{chi.name()} at {c.tag}{c.params}: {v} vs {w}")
    return problems
