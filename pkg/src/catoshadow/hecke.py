"""Iwahori-Hecke algebra, R-polynomials and Kazhdan-Lusztig polynomials.

Normalization: ``T_s^2 = (q-1) T_s + q T_e`` and the KL element
``b_w = sum_{x <= w} P_{x,w}(q) T_x``.  No half-integer powers of ``q`` occur.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .laurent import LaurentPoly
from .weyl import UsageError, WeylElem, WeylGroup

Q = LaurentPoly.q()
ONE = LaurentPoly(1)


class HeckeElement:
    """Finite sum ``sum_w c_w T_w`` with Laurent polynomial coefficients."""

    __slots__ = ("group", "terms")

    def __init__(self, group: WeylGroup, terms: Mapping[WeylElem, LaurentPoly | int] | None = None):
        self.group = group
        clean = {}
        for w, c in (terms or {}).items():
            if isinstance(c, int):
                c = LaurentPoly(c)
            if c:
                clean[w] = c
        self.terms: dict[WeylElem, LaurentPoly] = clean

    @classmethod
    def T(cls, group: WeylGroup, w: WeylElem) -> "HeckeElement":
        return cls(group, {w: ONE})

    @classmethod
    def one(cls, group: WeylGroup) -> "HeckeElement":
        return cls.T(group, group.identity)

    def _same(self, other: "HeckeElement") -> None:
        if other.group is not self.group:
            raise UsageError("Hecke elements from different groups")

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        self._same(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, LaurentPoly()) + c
        return HeckeElement(self.group, out)

    def __neg__(self) -> "HeckeElement":
        return HeckeElement(self.group, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def scale(self, c: LaurentPoly | int) -> "HeckeElement":
        return HeckeElement(self.group, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElement):
            return hecke_multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElement):
            return NotImplemented
        return self.group is other.group and self.terms == other.terms

    def __getitem__(self, w: WeylElem) -> LaurentPoly:
        return self.terms.get(w, LaurentPoly())

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=self.group.index):
            parts.append(f"({self.terms[w]})*T[{w}]")
        return " + ".join(parts)


def _left_mult_simple(group: WeylGroup, i: int, h: dict[int, LaurentPoly]) -> dict[int, LaurentPoly]:
    out: dict[int, LaurentPoly] = {}

    def add(k, c):
        v = out.get(k)
        out[k] = c if v is None else v + c

    for w, c in h.items():
        sw = int(group.left_mult[w, i])
        if group.lengths[sw] > group.lengths[w]:
            add(sw, c)
        else:
            add(w, c * (Q - 1))
            add(sw, c * Q)
    return {k: v for k, v in out.items() if v}


def hecke_multiply(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    a._same(b)
    G = a.group
    rhs = {G.index(w): c for w, c in b.terms.items()}
    total: dict[int, LaurentPoly] = {}
    for x, cx in a.terms.items():
        cur = rhs
        for i in reversed(x.word):
            cur = _left_mult_simple(G, i, cur)
        for k, c in cur.items():
            total[k] = total.get(k, LaurentPoly()) + cx * c
    return HeckeElement(G, {G.elements[k]: c for k, c in total.items()})


def specialize_q1(h: HeckeElement) -> list[int]:
    """Image in the integral group ring, as a coefficient vector over W."""
    G = h.group
    vec = [0] * len(G)
    for w, c in h.terms.items():
        vec[G.index(w)] += c.evaluate(1)
    return vec


def group_ring_multiply(group: WeylGroup, a, b) -> list[int]:
    """Product in ``Z[W]`` of two coefficient vectors."""
    out = [0] * len(group)
    nz_b = [(j, y) for j, y in enumerate(b) if y]
    for i, x in enumerate(a):
        if not x:
            continue
        row = group.mult_table[i]
        for j, y in nz_b:
            out[int(row[j])] += x * y
    return out


def r_polynomials(group: WeylGroup) -> dict[tuple[int, int], LaurentPoly]:
    """``R_{x,y}`` for all ``x <= y``, keyed by element indices."""
    N = len(group)
    leq = group.bruhat_matrix
    R: dict[tuple[int, int], LaurentPoly] = {(0, 0): ONE}
    for y in range(1, N):
        s = group.elements[y].word[-1]
        ys = int(group.right_mult[y, s])
        for x in range(N):
            if not leq[x, y]:
                continue
            xs = int(group.right_mult[x, s])
            if group.lengths[xs] < group.lengths[x]:
                val = R.get((xs, ys), LaurentPoly())
            else:
                val = (Q - 1) * R.get((x, ys), LaurentPoly()) + Q * R.get((xs, ys), LaurentPoly())
            if val:
                R[(x, y)] = val
    return R


@dataclass(frozen=True)
class KLTable:
    group: WeylGroup
    # (x index, y index) -> P_{x,y}, only for x <= y
    polys: dict[tuple[int, int], LaurentPoly] = field(repr=False)
    _mu: dict[tuple[int, int], int] = field(repr=False, default_factory=dict)

    def P(self, x: WeylElem, y: WeylElem) -> LaurentPoly:
        self.group.check(x, y)
        return self.polys.get((self.group.index(x), self.group.index(y)), LaurentPoly())

    def P_idx(self, x: int, y: int) -> LaurentPoly:
        return self.polys.get((x, y), LaurentPoly())

    @property
    def table(self) -> dict[tuple[WeylElem, WeylElem], LaurentPoly]:
        E = self.group.elements
        return {(E[x], E[y]): p for (x, y), p in self.polys.items()}

    def at_one(self) -> np.ndarray:
        """Integer matrix ``[x, y] -> P_{x,y}(1)``."""
        N = len(self.group)
        out = np.zeros((N, N), dtype=np.int64)
        for (x, y), p in self.polys.items():
            out[x, y] = p.evaluate(1)
        return out

    def rows(self):
        """``(x, y, P_{x,y})`` for every comparable pair, in index order."""
        E = self.group.elements
        for (x, y) in sorted(self.polys, key=lambda k: (k[1], k[0])):
            yield E[x], E[y], self.polys[(x, y)]


def kl_table(group: WeylGroup) -> KLTable:
    """Kazhdan-Lusztig polynomials by the standard left-descent recursion."""
    N = len(group)
    leq = group.bruhat_matrix
    L = group.lengths
    P: dict[tuple[int, int], LaurentPoly] = {(0, 0): ONE}
    mu: dict[tuple[int, int], int] = {}
    # z below v with mu(z, v) != 0, per v
    mu_below: dict[int, list[tuple[int, int]]] = {0: []}

    def get(x, y):
        return P.get((x, y))

    for y in range(1, N):
        s = group.elements[y].word[0]
        v = int(group.left_mult[y, s])
        corr = [(z, m) for z, m in mu_below[v] if group.lengths[group.left_mult[z, s]] < L[z]]
        for x in range(N):
            if not leq[x, y]:
                continue
            sx = int(group.left_mult[x, s])
            c = 1 if L[sx] < L[x] else 0
            val = LaurentPoly()
            p1 = get(sx, v)
            if p1 is not None:
                val = val + p1.shift(1 - c)
            p2 = get(x, v)
            if p2 is not None:
                val = val + p2.shift(c)
            for z, m in corr:
                pxz = get(x, z)
                if pxz is not None:
                    val = val - pxz.shift((int(L[y]) - int(L[z])) // 2) * m
            P[(x, y)] = val
        below = []
        for x in range(N):
            if leq[x, y] and x != y:
                d = int(L[y]) - int(L[x])
                if d % 2 == 1:
                    m = P[(x, y)][(d - 1) // 2]
                    if m:
                        mu[(x, y)] = m
                        below.append((x, m))
        mu_below[y] = below
    return KLTable(group, P, mu)


def kl_basis(table: KLTable, w: WeylElem) -> HeckeElement:
    G = table.group
    k = G.index(w)
    return HeckeElement(G, {G.elements[x]: table.P_idx(x, k) for x in range(len(G)) if (x, k) in table.polys})


_TABLES: dict[str, KLTable] = {}


def cached_kl_table(group: WeylGroup) -> KLTable:
    key = group.datum.name
    tab = _TABLES.get(key)
    if tab is None or tab.group is not group:
        tab = _TABLES[key] = kl_table(group)
    return tab


def poly_coeff_string(p: LaurentPoly) -> str:
    """The CSV format for KL polynomials.

    >>> poly_coeff_string(LaurentPoly.q() + 1)
    '1+1*q'
    >>> poly_coeff_string(LaurentPoly.q() ** 2 - 2)
    '-2+0*q+1*q^2'
    """
    if p.is_zero():
        return "0"
    lo = min(0, p.valuation())
    parts = []
    for k in range(lo, p.degree() + 1):
        c = p[k]
        if k == 0:
            parts.append(str(c))
        else:
            parts.append(f"{c}*q" if k == 1 else f"{c}*q^{k}")
    out = parts[0]
    for part in parts[1:]:
        out += part if part.startswith("-") else "+" + part
    return out
