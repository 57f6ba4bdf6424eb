"""Independent reference computations used only by the test-suite.

Nothing here calls the recursions under test: Bruhat order comes from the
subword property, KL polynomials from R-polynomial inversion computed with
sympy arithmetic in the Hecke algebra, type-A data from permutations,
translation matrices from actual dot-orbit weights.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import sympy

q = sympy.Symbol("q")
t = sympy.Symbol("t")


# ---- Bruhat order -----------------------------------------------------

def subword_products(group, y) -> set:
    """All elements expressible as subwords of the reduced word of ``y``."""
    out = set()
    word = y.word
    for mask in itertools.product((0, 1), repeat=len(word)):
        w = group.identity
        for bit, i in zip(mask, word):
            if bit:
                w = group.mul(w, group.simple(i))
        out.add(w)
    return out


def bruhat_subword(group) -> dict:
    return {y: subword_products(group, y) for y in group.elements}


# ---- permutations (type A) -------------------------------------------

def inversions(perm) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j])


def permutation_of_word(word, n: int) -> tuple[int, ...]:
    p = list(range(n + 1))
    for i in word:
        p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def symmetric_group_poincare(n: int) -> list[int]:
    counts: dict[int, int] = {}
    for p in itertools.permutations(range(n + 1)):
        k = inversions(p)
        counts[k] = counts.get(k, 0) + 1
    return [counts[k] for k in range(max(counts) + 1)]


# ---- Hecke algebra with sympy coefficients ---------------------------

def _hmul_simple_right(group, h: dict, i: int, inverse: bool) -> dict:
    """``h * T_s`` or ``h * T_s^{-1}`` with ``T_s^{-1} = q^{-1} T_s + (q^{-1} - 1)``."""
    out: dict = {}
    s = group.simple(i)

    def add(w, c):
        out[w] = sympy.expand(out.get(w, 0) + c)

    for w, c in h.items():
        ws = group.mul(w, s)
        # w * T_s
        if ws.length > w.length:
            prod = {ws: 1}
        else:
            prod = {w: q - 1, ws: q}
        if inverse:
            for x, d in prod.items():
                add(x, c * d / q)
            add(w, c * (1 / q - 1))
        else:
            for x, d in prod.items():
                add(x, c * d)
    return {w: c for w, c in out.items() if c != 0}


def r_polynomial_oracle(group) -> dict:
    """``R_{x,y}`` from the expansion of ``T_{y^{-1}}^{-1}``."""
    R = {}
    for y in group.elements:
        h = {group.identity: sympy.Integer(1)}
        for i in y.word:
            h = _hmul_simple_right(group, h, i, inverse=True)
        for x, c in h.items():
            sign = (-1) ** (x.length + y.length)
            R[(x, y)] = sympy.expand(sign * q ** y.length * c)
    return R


def kl_oracle(group) -> dict:
    """``P_{x,y}`` for ``x <= y`` by inverting the bar relation.

    ``q^{l(y)-l(x)} P_{x,y}(q^{-1}) - P_{x,y}(q) = sum_{x < z <= y} R_{x,z} P_{z,y}``
    and the degree bound pick out ``P`` as minus the low half of the right side.
    """
    R = r_polynomial_oracle(group)
    below = bruhat_subword(group)
    P: dict = {}
    for y in group.elements:
        xs = sorted(below[y], key=lambda w: -w.length)
        for x in xs:
            if x == y:
                P[(x, y)] = sympy.Integer(1)
                continue
            F = 0
            for z in xs:
                if z != x and z.length > x.length and x in below[z]:
                    F += R.get((x, z), 0) * P[(z, y)]
            F = sympy.Poly(sympy.expand(F), q)
            d = y.length - x.length
            low = sum(c * q ** k for (k,), c in F.terms() if 2 * k <= d - 1)
            P[(x, y)] = sympy.expand(-low)
    return P


def kl_oracle_coeffs(group) -> dict:
    """Oracle table with coefficients as integer lists, keyed by element pairs."""
    out = {}
    for key, p in kl_oracle(group).items():
        coeffs = sympy.Poly(p, q).all_coeffs()[::-1] if p != 0 else [0]
        out[key] = [int(c) for c in coeffs]
    return out


# ---- series ------------------------------------------------------------

def series_coeffs(expr, n: int) -> list[int]:
    s = sympy.series(expr, t, 0, n + 1).removeO()
    return [int(s.coeff(t, k)) for k in range(n + 1)]


def molien_coeffs(group, n: int) -> list[int]:
    """``(1/|W|) sum_w 1/det(1 - t w)`` up to ``t^n``, by power-series inversion."""
    from fractions import Fraction

    total = [Fraction(0)] * (n + 1)
    for w in group.elements:
        M = sympy.Matrix(group.matrix(w).tolist())
        den = sympy.Poly((sympy.eye(group.rank) - t * M).det(), t).all_coeffs()[::-1]
        den = [Fraction(int(c)) for c in den] + [Fraction(0)] * (n + 1)
        inv = [Fraction(1)]
        for k in range(1, n + 1):
            inv.append(-sum(den[j] * inv[k - j] for j in range(1, k + 1)))
        total = [a + b for a, b in zip(total, inv)]
    return [int(c / len(group)) for c in total]


def product_formula_oracle(degrees) -> list[int]:
    expr = sympy.prod([(1 - t ** d) / (1 - t) for d in degrees])
    poly = sympy.Poly(sympy.cancel(expr), t)
    return [int(c) for c in poly.all_coeffs()[::-1]]


def structure_algebra_oracle(degrees, n: int) -> list[int]:
    r = len(degrees)
    expr = sympy.prod([1 - t ** d for d in degrees]) / (1 - t) ** (2 * r)
    return series_coeffs(expr, n)


# ---- translation via weights -----------------------------------------

def verma_weights(group, block) -> list:
    return [group.dot_action(w, block.lam) for w in block.index_set]


def translation_oracle(group, src, dst):
    """``theta M(x.lam) = sum M(y.mu)`` using only dot-orbit weights.

    Going to a more singular weight: ``M(x.src) -> M(x.dst)``.
    Coming off the wall: ``M(x.src)`` goes to the sum of ``M(v)`` over the distinct
    weights ``v = w.dst`` with ``w.src = x.src``.
    """
    import numpy as np

    dst_pos = {wt: k for k, wt in enumerate(verma_weights(group, dst))}
    src_w = verma_weights(group, src)
    M = np.zeros((len(dst), len(src)), dtype=np.int64)
    if len(group.stabilizer_dot(src.lam)) <= len(group.stabilizer_dot(dst.lam)):
        for j, x in enumerate(src.index_set):
            M[dst_pos[group.dot_action(x, dst.lam)], j] += 1
    else:
        for j, wt in enumerate(src_w):
            hit = {group.dot_action(w, dst.lam) for w in group.elements if group.dot_action(w, src.lam) == wt}
            for v in hit:
                M[dst_pos[v], j] += 1
    return M


@lru_cache(maxsize=None)
def cached_kl_oracle(name: str):
    from catoshadow.weyl import weyl_group

    return kl_oracle_coeffs(weyl_group(name))
