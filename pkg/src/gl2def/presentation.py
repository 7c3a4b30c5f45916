"""Finitely presented complete local W-algebras.

A presentation is a list of variables (each either a polynomial variable
with a prescribed residual value, or a formal power-series variable with
residual value 0) and a list of integer-coefficient relations.  Points over a
finite coefficient ring A are assignments of each variable to an element of
A with the prescribed residue at which every relation vanishes.
"""
from __future__ import annotations

import itertools
from math import log

import sympy as sp

from .coeff_rings import CoeffRing, coefficient_ring
from .lattice import WittBase

KINDS = ("trace-subalgebra", "character-group ring", "power-series-mod-Q", "mixed")


class PresentationError(ValueError):
    pass


class RingPresentation:
    def __init__(
        self,
        base: WittBase,
        variables,
        relations,
        kind: str,
        power_series=(),
        residue=None,
        notes=None,
    ):
        if kind not in KINDS:
            raise PresentationError(f"unknown presentation kind {kind!r}")
        self.base = base
        self.variables = tuple(variables)
        self.symbols = sp.symbols(self.variables) if self.variables else ()
        if not isinstance(self.symbols, tuple):
            self.symbols = (self.symbols,)
        self.power_series = tuple(v for v in self.variables if v in set(power_series))
        self.kind = kind
        residue = dict(residue or {})
        for v in self.variables:
            residue.setdefault(v, 0)
            if v in self.power_series and residue[v] % base.l:
                raise PresentationError(f"power-series variable {v} must have residue 0")
        self.residue = {v: residue[v] % base.l for v in self.variables}
        polys = []
        for r in relations:
            P = sp.Poly(r, *self.symbols, domain="ZZ") if self.symbols else sp.Poly(r, domain="ZZ")
            if not P.is_zero:
                if P.LC() < 0:
                    P = -P
                polys.append(P)
        self.relations = tuple(polys)
        self.notes = list(notes or [])
        for P in self.relations:
            if self._eval_mod_l(P, self.residue) != 0:
                raise PresentationError(f"relation {P.as_expr()} does not vanish at the residual point")

    # -------------------------------------------------------------------------
    def _terms(self, P):
        return [(m, int(c)) for m, c in P.terms()]

    def _eval_mod_l(self, P, point):
        l = self.base.l
        acc = 0
        for mon, c in self._terms(P):
            t = c
            for v, e in zip(self.variables, mon):
                t = t * pow(point[v], e, l)
            acc += t
        return acc % l

    def normal_form(self):
        rels = sorted(str(sp.expand(P.as_expr())) for P in self.relations)
        return (
            self.base.l,
            self.base.m,
            self.variables,
            self.power_series,
            tuple(sorted(self.residue.items())),
            tuple(rels),
        )

    def __eq__(self, other):
        return isinstance(other, RingPresentation) and self.normal_form() == other.normal_form()

    def __hash__(self):
        return hash(self.normal_form())

    def describe(self) -> str:
        W = "W" if self.base.m <= 2 else f"W(F_{self.base.l}^{self.base.d})"
        ps = ",".join(self.power_series)
        pv = [v for v in self.variables if v not in self.power_series]
        out = W
        if ps:
            out += f"[[{ps}]]"
        if pv:
            out += "[" + ",".join(pv) + "]"
        if self.relations:
            out += "/(" + ", ".join(str(sp.factor(P.as_expr())) for P in self.relations) + ")"
        return out

    def to_json(self):
        return {
            "base": self.base.to_json(),
            "kind": self.kind,
            "variables": list(self.variables),
            "power_series": list(self.power_series),
            "residue": {v: self.residue[v] for v in self.variables},
            "relations": [str(sp.expand(P.as_expr())) for P in self.relations],
            "display": self.describe(),
            "notes": self.notes,
        }

    # tangent space --------------------------------------------------------
    def jacobian_rank_mod_l(self) -> int:
        l = self.base.l
        rows = []
        for P in self.relations:
            row = []
            for s in self.symbols:
                row.append(self._eval_mod_l(P.diff(s), self.residue))
            rows.append(row)
        if not rows or not self.symbols:
            return 0
        return _rank_mod(rows, l)

    def tangent_dim(self) -> int:
        """dim over k of Hom(R, k[eps]) = #variables - rank of the Jacobian mod l."""
        return len(self.variables) - self.jacobian_rank_mod_l()

    # points ---------------------------------------------------------------
    def evaluate(self, P, A: CoeffRing, point: dict):
        acc = A.zero
        for mon, c in self._terms(P):
            t = A.from_int(c)
            for v, e in zip(self.variables, mon):
                if e:
                    t = A.mul(t, A.pow(point[v], e))
            acc = A.add(acc, t)
        return acc

    def candidates(self, A: CoeffRing, v: str):
        if v in self.power_series:
            return A.maximal_ideal()
        return A.fiber(A.K.scalar(self.residue[v]))

    def points(self, A: CoeffRing):
        """All A-points, as dicts variable -> element."""
        cands = [self.candidates(A, v) for v in self.variables]
        out = []
        for combo in itertools.product(*cands):
            pt = dict(zip(self.variables, combo))
            if all(self.evaluate(P, A, pt) == A.zero for P in self.relations):
                out.append(pt)
        return out

    def count_points(self, A: CoeffRing) -> int:
        return len(self.points(A))

    def dual_point_count(self) -> int:
        """Points over F_l[eps] by direct evaluation (independent of the Jacobian)."""
        A = coefficient_ring("dual", 1, self.base.l)
        return self.count_points(A)

    def tangent_dim_by_points(self) -> int:
        n = self.dual_point_count()
        l = self.base.l
        k = round(log(n, l))
        if l**k != n:
            raise PresentationError(f"dual-number point count {n} is not a power of {l}")
        return k

    def char0_point_count(self) -> int:
        """Number of characteristic-zero points of a monogenic presentation:
        the number of distinct roots of its relation."""
        if len(self.variables) != 1 or len(self.relations) != 1:
            raise PresentationError("only monogenic presentations are supported")
        P = self.relations[0]
        return sp.degree(sp.quo(P, sp.gcd(P, P.diff(self.symbols[0]))), self.symbols[0])


def _rank_mod(rows, l) -> int:
    rows = [[x % l for x in r] for r in rows]
    rank = 0
    ncols = len(rows[0])
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, l)
        rows[rank] = [(x * inv) % l for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(x - f * y) % l for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def tangent_dim(pres: RingPresentation) -> int:
    return pres.tangent_dim()
