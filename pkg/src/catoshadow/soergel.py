"""Bott-Samelson modules over the coinvariant algebra.

A module is a finite graded vector space together with the matrices of the
degree-one generators ``x_1..x_r`` of ``C``.  Starting from the trivial module
``C/C_+`` and repeatedly applying ``C ⊗_{C^s} -`` produces the image of
iterated wall-crossings of the dominant Verma module under Soergel's functor.

``C`` is free over ``C^s`` on ``{1, h}`` with ``h = x_s`` (so ``d_s h = 1``):
every ``f`` splits as ``(f - h d_s f) + h d_s f`` with both coefficients
``s``-invariant.  This gives the action matrices of ``C ⊗_{C^s} M`` in block
form, all with integer entries.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import sympy

from . import linalg
from .blocks import (
    BlockDescriptor,
    ClassVector,
    hom_dim,
    projective_in_verma,
    wall_crossing,
)
from .coinv import CoinvariantAlgebra, MultiPoly, root_poly
from .weyl import UsageError

SPLIT_SEED = 20240917


class SplittingIncomplete(RuntimeError):
    """No rational idempotent was found although the module may decompose."""


@dataclass(frozen=True, eq=False)
class GradedModuleOverC:
    algebra: CoinvariantAlgebra
    degrees: tuple[int, ...]  # degree of each basis vector
    gen_actions: tuple[np.ndarray, ...]  # object arrays of Fraction/int, one per generator

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def graded_dims(self) -> list[int]:
        if not self.degrees:
            return []
        lo = min(self.degrees)
        out = [0] * (max(self.degrees) - lo + 1)
        for d in self.degrees:
            out[d - lo] += 1
        return out

    def poly_action(self, f: MultiPoly) -> np.ndarray:
        """Matrix of a polynomial acting through the generators."""
        n = self.dim
        out = np.zeros((n, n), dtype=object)
        cache: dict[tuple[int, ...], np.ndarray] = {(0,) * f.nvars: np.eye(n, dtype=int).astype(object)}

        def mono(m):
            if m in cache:
                return cache[m]
            j = next(i for i, e in enumerate(m) if e)
            prev = m[:j] + (m[j] - 1,) + m[j + 1:]
            val = self.gen_actions[j].dot(mono(prev))
            cache[m] = val
            return val

        for m, c in f.terms.items():
            out = out + mono(m) * c
        return out

    def check(self) -> None:
        """Generators commute, raise degree by one, and invariants act by zero."""
        X = self.gen_actions
        for a in range(len(X)):
            for b in range(a + 1, len(X)):
                if not np.array_equal(X[a].dot(X[b]), X[b].dot(X[a])):
                    raise AssertionError("generator actions do not commute")
        for j, M in enumerate(X):
            rows, cols = np.nonzero(M != 0)
            for r, c in zip(rows, cols):
                if self.degrees[r] != self.degrees[c] + 1:
                    raise AssertionError(f"generator {j} is not homogeneous of degree 1")
        for p in self.algebra.invariant_generators:
            if (self.poly_action(p) != 0).any():
                raise AssertionError(f"invariant {p} does not act by zero")

    def to_dict(self) -> dict:
        return {"graded_dims": self.graded_dims, "dim": self.dim, "min_degree": min(self.degrees, default=0)}


def unit_module(C: CoinvariantAlgebra) -> GradedModuleOverC:
    """``C / C_+``: one dimension in degree 0, every generator acts by zero."""
    zero = np.zeros((1, 1), dtype=object)
    return GradedModuleOverC(C, (0,), tuple(zero.copy() for _ in range(C.rank)))


def apply_wall(s: int, M: GradedModuleOverC) -> GradedModuleOverC:
    """``C ⊗_{C^s} M`` on the basis ``1⊗m, h⊗m``."""
    C = M.algebra
    n = C.rank
    if not 0 <= s < n:
        raise UsageError(f"generator index {s} out of range")
    h = MultiPoly.var(n, s)
    alpha = root_poly(C.group, s)
    D = M.dim
    eye = np.eye(D, dtype=int).astype(object)
    acts = []
    for j in range(n):
        xj = MultiPoly.var(n, j)
        delta = 1 if j == s else 0
        # x_j * 1 = (x_j - delta h) + h * delta
        a = xj - h * delta
        # x_j * h = h (delta alpha - delta h) + h (x_j + delta h - delta alpha)
        a2 = h * (alpha - h) * delta
        b2 = xj + h * delta - alpha * delta
        top = np.concatenate([M.poly_action(a), M.poly_action(a2)], axis=1)
        bottom = np.concatenate([eye * delta, M.poly_action(b2)], axis=1)
        acts.append(np.concatenate([top, bottom], axis=0))
    degrees = tuple(M.degrees) + tuple(d + 1 for d in M.degrees)
    return GradedModuleOverC(C, degrees, tuple(acts))


def bott_samelson(C: CoinvariantAlgebra, word: Iterable[int]) -> GradedModuleOverC:
    """Fold :func:`apply_wall` over a 0-based word, first letter applied first."""
    M = unit_module(C)
    for s in word:
        M = apply_wall(s, M)
    return M


@dataclass(frozen=True)
class HomSpace:
    dimension: int
    by_degree: dict[int, int]
    basis: dict[int, list[np.ndarray]] = field(repr=False)


def hom_space(M: GradedModuleOverC, N: GradedModuleOverC, *, full_algebra: bool = False,
              with_basis: bool = True) -> HomSpace:
    """Module maps ``M -> N``, solved one degree shift at a time.

    With ``full_algebra=True`` every Schubert class is imposed as a constraint
    instead of only the degree-one generators.
    """
    if M.algebra is not N.algebra:
        raise UsageError("modules over different algebras")
    if full_algebra:
        C = M.algebra
        ops = [(M.poly_action(p), N.poly_action(p)) for p in C.schubert_polys[1:]]
    else:
        ops = list(zip(M.gen_actions, N.gen_actions))
    ops = [(np.asarray(a), np.asarray(b)) for a, b in ops]
    by_deg: dict[int, int] = {}
    basis: dict[int, list[np.ndarray]] = {}
    if not M.degrees or not N.degrees:
        return HomSpace(0, {}, {})
    shifts = range(min(N.degrees) - max(M.degrees), max(N.degrees) - min(M.degrees) + 1)
    for d in shifts:
        unknowns = [(r, c) for c in range(M.dim) for r in range(N.dim) if N.degrees[r] == M.degrees[c] + d]
        if not unknowns:
            continue
        pos = {u: k for k, u in enumerate(unknowns)}
        rows = []
        for XM, XN in ops:
            nzM = [(c2, c, XM[c2, c]) for c2, c in zip(*np.nonzero(XM != 0))]
            nzN = [(r2, r, XN[r2, r]) for r2, r in zip(*np.nonzero(XN != 0))]
            eqs: dict[tuple[int, int], dict[int, object]] = {}
            # (XN f)[r2, c] = sum_r XN[r2, r] f[r, c]
            for r2, r, v in nzN:
                for c in range(M.dim):
                    k = pos.get((r, c))
                    if k is not None:
                        row = eqs.setdefault((r2, c), {})
                        row[k] = row.get(k, 0) + v
            # (f XM)[r2, c] = sum_c2 f[r2, c2] XM[c2, c]
            for c2, c, v in nzM:
                for r2 in range(N.dim):
                    k = pos.get((r2, c2))
                    if k is not None:
                        row = eqs.setdefault((r2, c), {})
                        row[k] = row.get(k, 0) - v
            for row in eqs.values():
                dense = [0] * len(unknowns)
                for k, v in row.items():
                    dense[k] = v
                if any(dense):
                    rows.append(dense)
        if rows:
            if with_basis:
                kernel = linalg.nullspace(rows, len(unknowns))
                dim = len(kernel)
            else:
                dim = len(unknowns) - linalg.rank(rows, len(unknowns))
                kernel = []
        else:
            kernel = linalg.nullspace([], len(unknowns)) if with_basis else []
            dim = len(unknowns)
        if dim:
            by_deg[d] = dim
            if with_basis:
                mats = []
                for v in kernel:
                    F = np.zeros((N.dim, M.dim), dtype=object)
                    for k, (r, c) in enumerate(unknowns):
                        F[r, c] = v[k]
                    mats.append(F)
                basis[d] = mats
    return HomSpace(sum(by_deg.values()), by_deg, basis)


def kgroup_class(block: BlockDescriptor, word: Sequence[int]) -> ClassVector:
    """``theta_{s_k} ... theta_{s_1} [M_e]`` in Vermas."""
    G = block.group
    vec = np.zeros(len(G), dtype=np.int64)
    vec[0] = 1
    for s in word:
        vec = wall_crossing(G, s, block.conventions).matrix.dot(vec)
    return ClassVector(block, "Verma", tuple(int(x) for x in vec))


def kgroup_hom_prediction(block: BlockDescriptor, word1: Sequence[int], word2: Sequence[int]) -> int:
    a = kgroup_class(block, word1).to("Projective")
    b = kgroup_class(block, word2).to("Projective")
    return hom_dim(a, b)


def struktursatz_values(C: CoinvariantAlgebra, block: BlockDescriptor, word1, word2,
                        cache: dict | None = None) -> tuple[int, int]:
    """``(dim Hom_C(BS(word1), BS(word2)), K-group prediction)``."""
    if C.group is not block.group:
        raise UsageError("algebra and block belong to different root data")
    cache = {} if cache is None else cache

    def bs(word):
        key = tuple(word)
        if key not in cache:
            cache[key] = bott_samelson(C, key)
        return cache[key]

    lhs = hom_space(bs(word1), bs(word2), with_basis=False).dimension
    rhs = kgroup_hom_prediction(block, word1, word2)
    return lhs, rhs


def struktursatz_check(C: CoinvariantAlgebra, block: BlockDescriptor, word1, word2, cache: dict | None = None) -> bool:
    lhs, rhs = struktursatz_values(C, block, word1, word2, cache)
    return lhs == rhs


# ---------------------------------------------------------------------------
# splitting into indecomposables
# ---------------------------------------------------------------------------

def _degree_blocks(M: GradedModuleOverC) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for k, d in enumerate(M.degrees):
        out.setdefault(d, []).append(k)
    return out


def _charpoly_factors(phi: np.ndarray, blocks: dict[int, list[int]]):
    x = sympy.Symbol("x")
    factors: dict = {}
    for idx in blocks.values():
        sub = sympy.Matrix([[sympy.Rational(phi[r, c]) for c in idx] for r in idx])
        _, facs = sympy.factor_list(sub.charpoly(x).as_expr(), x)
        for f, e in facs:
            f = sympy.Poly(f, x, domain="QQ").monic()
            factors[f] = factors.get(f, 0) + e
    return factors


def _poly_of_matrix(p: sympy.Poly, A: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(A)
    out = [[Fraction(0)] * n for _ in range(n)]
    for c in p.all_coeffs():
        out = linalg.matmul(out, A)
        c = Fraction(int(sympy.Rational(c).p), int(sympy.Rational(c).q))
        for i in range(n):
            out[i][i] += c
    return out


def _fitting_split(M: GradedModuleOverC, phi: np.ndarray, p: sympy.Poly):
    """``M = ker p(phi)^N ⊕ im p(phi)^N`` computed degree by degree."""
    U_cols: list[list[Fraction]] = []
    V_cols: list[list[Fraction]] = []
    U_deg: list[int] = []
    V_deg: list[int] = []
    for d, idx in sorted(_degree_blocks(M).items()):
        A = [[Fraction(phi[r, c]) for c in idx] for r in idx]
        Pa = _poly_of_matrix(p, A)
        power = linalg.identity(len(idx))
        for _ in range(len(idx)):
            power = linalg.matmul(power, Pa)
        ker = linalg.nullspace(power, len(idx))
        img_rows, _ = linalg.rref(linalg.transpose(power), len(idx))
        for v in ker:
            full = [Fraction(0)] * M.dim
            for a, k in enumerate(idx):
                full[k] = v[a]
            U_cols.append(full)
            U_deg.append(d)
        for v in img_rows:
            full = [Fraction(0)] * M.dim
            for a, k in enumerate(idx):
                full[k] = v[a]
            V_cols.append(full)
            V_deg.append(d)
    if not U_cols or not V_cols:
        return None
    B = linalg.transpose(U_cols + V_cols)
    Binv = linalg.inverse(B)
    nu = len(U_cols)
    parts = []
    for sl, degs in ((slice(0, nu), U_deg), (slice(nu, M.dim), V_deg)):
        acts = []
        for X in M.gen_actions:
            Y = linalg.matmul(Binv, linalg.matmul(X.tolist(), B))
            block = np.array([row[sl] for row in Y[sl]], dtype=object)
            acts.append(block)
        parts.append(GradedModuleOverC(M.algebra, tuple(degs), tuple(acts)))
    # the complement must be invariant, i.e. the off-diagonal blocks vanish
    for X in M.gen_actions:
        Y = linalg.matmul(Binv, linalg.matmul(X.tolist(), B))
        if any(Y[i][j] for i in range(nu) for j in range(nu, M.dim)) or any(
            Y[i][j] for i in range(nu, M.dim) for j in range(nu)
        ):
            raise AssertionError("Fitting decomposition is not a module splitting")
    return parts


def split_idempotents(M: GradedModuleOverC, *, seed: int = SPLIT_SEED, attempts: int = 40) -> list[GradedModuleOverC]:
    """Decompose into indecomposable summands over the rationals.

    Uses degree-preserving endomorphisms: a generalized eigenspace of one of
    them is a direct summand.  Basis endomorphisms are tried first, then
    seeded random integer combinations.  Raises :class:`SplittingIncomplete`
    if some endomorphism shows the module is not local but none with a
    rational factor splits it.
    """
    rng = random.Random(seed)
    pending = [M]
    done: list[GradedModuleOverC] = []
    while pending:
        cur = pending.pop()
        ends = hom_space(cur, cur).basis.get(0, [])
        if len(ends) <= 1:
            done.append(cur)
            continue
        blocks = _degree_blocks(cur)
        candidates = list(ends)
        for _ in range(attempts):
            coeffs = [rng.randint(-3, 3) for _ in ends]
            candidates.append(sum((e * c for e, c in zip(ends, coeffs)), np.zeros_like(ends[0])))
        parts = None
        saw_nonlocal = False
        for phi in candidates:
            factors = _charpoly_factors(phi, blocks)
            if len(factors) < 2:
                if any(f.degree() > 1 for f in factors):
                    saw_nonlocal = True
                continue
            p = min(factors, key=lambda f: (f.degree(), str(f.as_expr())))
            parts = _fitting_split(cur, phi, p)
            if parts:
                break
        if parts:
            pending.extend(parts)
        elif saw_nonlocal:
            raise SplittingIncomplete("endomorphism ring is not local but no rational splitting was found")
        else:
            done.append(cur)
    return sorted(done, key=lambda m: (-m.dim, m.graded_dims))


def predicted_summand_dims(block: BlockDescriptor, word: Sequence[int]) -> list[int]:
    """Total dims of ``V(P_y)`` for the projective summands of ``theta_word M_e``."""
    proj = kgroup_class(block, word).to("Projective")
    Pm = projective_in_verma(block)
    dims = []
    for k, c in enumerate(proj.coeffs):
        if c < 0:
            raise AssertionError("wall-crossing produced a virtual projective")
        dims.extend([int(Pm[:, k].sum())] * c)
    return sorted(dims, reverse=True)


def parse_word(text: str, rank: int) -> tuple[int, ...]:
    """``"1,2,1"`` -> ``(0, 1, 0)``; the empty string is the empty word."""
    text = text.strip()
    if not text:
        return ()
    out = []
    for part in text.split(","):
        try:
            i = int(part) - 1
        except ValueError:
            raise UsageError(f"cannot parse word {text!r}") from None
        if not 0 <= i < rank:
            raise UsageError(f"generator {part} out of range 1..{rank}")
        out.append(i)
    return tuple(out)
