"""The coinvariant algebra of a Weyl group, Demazure operators and Schubert classes.

Polynomials are taken in variables ``x_1..x_r`` standing for the fundamental
weights.  Shifting the origin of weight space to ``-rho`` turns the dot-action
into the linear reflection action, so the ideal ``I^W`` is generated by the
ordinary positive-degree invariants.  Everything is exact over ``Fraction``.

The quotient ``C = S / I^W`` is modelled degree by degree: each graded piece of
``I^W`` is row-reduced over the monomial basis, the non-pivot monomials span
``C_k``, and products are reduced back onto them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from . import linalg
from .weyl import ParabolicData, WeylElem, WeylGroup


class ConsistencyError(RuntimeError):
    """An internal identity failed; indicates a convention bug, not bad input."""


Monomial = tuple[int, ...]


class MultiPoly:
    """Rational polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, Fraction | int] | None = None):
        self.nvars = nvars
        self.terms: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            if c:
                self.terms[tuple(m)] = Fraction(c)

    @classmethod
    def var(cls, nvars: int, i: int) -> "MultiPoly":
        return cls(nvars, {tuple(int(j == i) for j in range(nvars)): 1})

    @classmethod
    def const(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "MultiPoly":
        n = len(coeffs)
        return cls(n, {tuple(int(j == i) for j in range(n)): c for i, c in enumerate(coeffs)})

    def copy(self) -> "MultiPoly":
        return MultiPoly(self.nvars, self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.const(self.nvars, other)

    def __add__(self, other) -> "MultiPoly":
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return MultiPoly(self.nvars, {m: c * other for m, c in self.terms.items()})
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        out = MultiPoly.const(self.nvars, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            other = MultiPoly.const(self.nvars, other)
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Replace ``x_j`` by ``images[j]`` (algebra homomorphism)."""
        n = self.nvars
        powers: list[list[MultiPoly]] = [[MultiPoly.const(images[j].nvars, 1)] for j in range(n)]
        out = MultiPoly(images[0].nvars if images else n)
        for m, c in self.terms.items():
            term = MultiPoly.const(out.nvars, c)
            for j, e in enumerate(m):
                while len(powers[j]) <= e:
                    powers[j].append(powers[j][-1] * images[j])
                if e:
                    term = term * powers[j][e]
            out = out + term
        return out

    def divide_linear(self, alpha: "MultiPoly") -> "MultiPoly":
        """Exact quotient by a linear form; raises if it does not divide."""
        coeffs = [alpha.terms.get(tuple(int(j == i) for j in range(self.nvars)), Fraction(0))
                  for i in range(self.nvars)]
        k = max(i for i, a in enumerate(coeffs) if a)
        ak = coeffs[k]
        rem = dict(self.terms)
        quot: dict[Monomial, Fraction] = {}
        while rem:
            m = max(rem, key=lambda mono: (mono[k], mono))
            c = rem[m]
            if m[k] == 0:
                raise ConsistencyError("linear form does not divide polynomial")
            qm = m[:k] + (m[k] - 1,) + m[k + 1:]
            qc = c / ak
            quot[qm] = quot.get(qm, 0) + qc
            for i, a in enumerate(coeffs):
                if a:
                    mm = qm[:i] + (qm[i] + 1,) + qm[i + 1:]
                    v = rem.get(mm, 0) - qc * a
                    if v:
                        rem[mm] = v
                    else:
                        rem.pop(mm, None)
        return MultiPoly(self.nvars, quot)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                v *= Fraction(x) ** e
            total += v
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda mono: (-sum(mono), mono), reverse=False):
            c = self.terms[m]
            mono = "*".join(f"x{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(m) if e)
            parts.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(parts)


def monomials(nvars: int, degree: int) -> list[Monomial]:
    """All exponent vectors of total degree ``degree``, in reverse-lex order."""
    out = []
    for combo in itertools.combinations_with_replacement(range(nvars), degree):
        m = [0] * nvars
        for j in combo:
            m[j] += 1
        out.append(tuple(m))
    return sorted(out, reverse=True)


def linear_images(group: WeylGroup, w: WeylElem) -> list[MultiPoly]:
    M = group.matrix(w)
    n = group.rank
    return [MultiPoly.linear([M[i][j] for i in range(n)]) for j in range(n)]


def w_act(group: WeylGroup, w: WeylElem, f: MultiPoly) -> MultiPoly:
    """Action of ``w`` on a polynomial; ``x_j`` goes to ``w(omega_j)``."""
    return f.substitute(linear_images(group, w))


def root_poly(group: WeylGroup, i: int) -> MultiPoly:
    return MultiPoly.linear(group.datum.simple_roots[i].coords)


def demazure(group: WeylGroup, i: int, f: MultiPoly) -> MultiPoly:
    """``(f - s_i f) / alpha_i``."""
    diff = f - w_act(group, group.simple(i), f)
    if diff.is_zero():
        return MultiPoly(f.nvars)
    return diff.divide_linear(root_poly(group, i))


def demazure_word(group: WeylGroup, word: Iterable[int], f: MultiPoly) -> MultiPoly:
    """``d_{i1} d_{i2} ... d_{ik} f`` for the word ``(i1, ..., ik)``."""
    for i in reversed(tuple(word)):
        f = demazure(group, i, f)
    return f


@dataclass(frozen=True)
class HilbertSeries:
    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        c = list(int(x) for x in coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def dimension(self) -> int:
        return sum(self.coeffs)

    def __mul__(self, other: "HilbertSeries") -> "HilbertSeries":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return HilbertSeries(out)

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else (f"{c}t" if k == 1 else f"{c}t^{k}"))
        return " + ".join(terms) or "0"


def product_formula(degrees: Sequence[int]) -> HilbertSeries:
    """``prod_i (1 - t^{d_i}) / (1 - t)`` as a polynomial.

    >>> product_formula([2, 3]).coeffs
    (1, 2, 2, 1)
    >>> product_formula([2, 4]).dimension
    8
    """
    out = HilbertSeries([1])
    for d in degrees:
        out = out * HilbertSeries([1] * d)
    return out


def structure_algebra_hilbert_series(datum, max_degree: int) -> HilbertSeries:
    """Hilbert series of ``S ⊗_{S^W} S`` up to ``t^max_degree``.

    Equals ``prod_i (1 - t^{d_i}) / (1 - t)^{2r}``.
    """
    N = max_degree
    num = [0] * (N + 1)
    num[0] = 1
    for d in datum.degrees:
        new = num[:]
        for k in range(d, N + 1):
            new[k] -= num[k - d]
        num = new
    for _ in range(2 * datum.rank):
        for k in range(1, N + 1):
            num[k] += num[k - 1]
    return HilbertSeries(num) if any(num[1:]) else HilbertSeries(num[:1])


def truncated_coeffs(series: HilbertSeries, max_degree: int) -> list[int]:
    return [series.coeffs[k] if k < len(series.coeffs) else 0 for k in range(max_degree + 1)]


@dataclass
class _GradedPiece:
    monos: list[Monomial]
    pivot_rows: list[tuple[int, list[Fraction]]]  # (pivot column, reduced row)
    standard: list[int]  # column indices of standard monomials
    to_schubert: list[list[Fraction]] = field(default_factory=list)  # standard coords -> Schubert coords


class CoinvariantAlgebra:
    """``C = S / I^W`` with its Schubert basis ``{X_w}``.

    Vectors in ``C`` are lists of ``Fraction`` indexed by the group's element
    order; ``X_w`` sits in degree ``l(w)``.
    """

    def __init__(self, group: WeylGroup, schubert_scale: Fraction = Fraction(1)):
        self.group = group
        self.rank = n = group.rank
        self.top = int(group.lengths.max())
        self._pieces: dict[int, _GradedPiece] = {}
        self._reduce_ideal()

        # Schubert polynomials, top-down: X_w = d_i X_{w s_i} for l(w s_i) > l(w)
        G = group
        prod = MultiPoly.const(n, 1)
        for a in G.datum.positive_roots:
            prod = prod * MultiPoly.linear(a.coords)
        top_poly = prod * (Fraction(1, len(G)) * schubert_scale)
        polys: dict[int, MultiPoly] = {G.index(G.longest): top_poly}
        for k in sorted(range(len(G)), key=lambda k: -G.lengths[k]):
            if k in polys:
                continue
            for i in range(n):
                up = int(G.right_mult[k, i])
                if G.lengths[up] > G.lengths[k]:
                    polys[k] = demazure(G, i, polys[up])
                    break
        self.schubert_polys = [polys[k] for k in range(len(G))]
        self._build_schubert_coordinates()

    # ---- quotient by I^W -----------------------------------------------
    def _invariants(self, degree: int) -> list[MultiPoly]:
        G = self.group
        images = [linear_images(G, w) for w in G.elements]
        out = []
        for m in monomials(self.rank, degree):
            mono = MultiPoly(self.rank, {m: 1})
            total = MultiPoly(self.rank)
            for img in images:
                total = total + mono.substitute(img)
            if total:
                out.append(total)
        return out

    @cached_property
    def invariant_generators(self) -> list[MultiPoly]:
        """Spanning set of the invariants in each fundamental degree."""
        out = []
        for d in sorted(set(self.group.datum.degrees)):
            out.extend(self._invariants(d))
        return out

    def _reduce_ideal(self) -> None:
        n = self.rank
        max_inv = max(self.group.datum.degrees)
        prev_basis: list[MultiPoly] = []
        for k in range(0, self.top + 2):
            monos = monomials(n, k)
            col = {m: j for j, m in enumerate(monos)}
            span: list[MultiPoly] = []
            if k >= 1:
                for b in prev_basis:
                    for i in range(n):
                        span.append(b * MultiPoly.var(n, i))
                if k <= max_inv:
                    span.extend(self._invariants(k))
            rows = []
            for p in span:
                row = [Fraction(0)] * len(monos)
                for m, c in p.terms.items():
                    row[col[m]] = c
                rows.append(row)
            red, pivots = linalg.rref(rows, len(monos)) if rows else ([], ())
            pset = set(pivots)
            self._pieces[k] = _GradedPiece(
                monos=monos,
                pivot_rows=[(p, red[r]) for r, p in enumerate(pivots)],
                standard=[j for j in range(len(monos)) if j not in pset],
            )
            prev_basis = [MultiPoly(n, {monos[j]: c for j, c in enumerate(row) if c}) for row in red]
        if self._pieces[self.top + 1].standard:
            raise ConsistencyError("coinvariant algebra does not vanish above the top degree")

    def _standard_coords(self, f: MultiPoly, k: int) -> list[Fraction]:
        piece = self._pieces.get(k)
        if piece is None:
            return []
        col = {m: j for j, m in enumerate(piece.monos)}
        v = [Fraction(0)] * len(piece.monos)
        for m, c in f.terms.items():
            if sum(m) != k:
                raise ValueError("polynomial is not homogeneous of the requested degree")
            v[col[m]] += c
        for p, row in piece.pivot_rows:
            c = v[p]
            if c:
                for j, x in enumerate(row):
                    if x:
                        v[j] -= c * x
        return [v[j] for j in piece.standard]

    def _build_schubert_coordinates(self) -> None:
        for k in range(self.top + 1):
            piece = self._pieces[k]
            ws = self.elements_of_degree(k)
            if len(ws) != len(piece.standard):
                raise ConsistencyError(f"degree {k}: {len(piece.standard)} standard monomials, {len(ws)} Schubert classes")
            mat = [self._standard_coords(self.schubert_polys[w], k) for w in ws]
            if linalg.rank(mat, len(ws)) != len(ws):
                raise ConsistencyError(f"Schubert classes of degree {k} are linearly dependent")
            # rows: Schubert classes in standard coordinates; invert to go back
            piece.to_schubert = linalg.inverse(mat)

    # ---- public API ---------------------------------------------------------
    def __len__(self) -> int:
        return len(self.group)

    @property
    def dimension(self) -> int:
        return sum(len(p.standard) for k, p in self._pieces.items() if k <= self.top)

    def degree(self, k: int) -> int:
        return int(self.group.lengths[k])

    def elements_of_degree(self, k: int) -> list[int]:
        return [j for j in range(len(self.group)) if self.group.lengths[j] == k]

    @property
    def graded_basis(self) -> list[WeylElem]:
        return list(self.group.elements)

    def hilbert_series(self) -> HilbertSeries:
        return HilbertSeries(len(self._pieces[k].standard) for k in range(self.top + 1))

    def to_vector(self, f: MultiPoly) -> list[Fraction]:
        """Schubert coordinates of the class of ``f``."""
        out = [Fraction(0)] * len(self.group)
        by_degree: dict[int, MultiPoly] = {}
        for m, c in f.terms.items():
            by_degree.setdefault(sum(m), MultiPoly(self.rank)).terms[m] = c
        for k, part in by_degree.items():
            if k > self.top:
                continue
            std = self._standard_coords(part, k)
            ws = self.elements_of_degree(k)
            inv = self._pieces[k].to_schubert
            for a, w in enumerate(ws):
                out[w] = sum((std[b] * inv[b][a] for b in range(len(std)) if std[b]), Fraction(0))
        return out

    def reduces_to_zero(self, f: MultiPoly) -> bool:
        return not any(self.to_vector(f))

    def from_vector(self, vec: Sequence) -> MultiPoly:
        out = MultiPoly(self.rank)
        for k, c in enumerate(vec):
            if c:
                out = out + self.schubert_polys[k] * c
        return out

    @cached_property
    def mult_table(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        """Structure constants ``X_u X_v = sum_w c^w_{uv} X_w`` (sparse)."""
        N = len(self.group)
        L = self.group.lengths
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for u in range(N):
            for v in range(u, N):
                if L[u] + L[v] > self.top:
                    continue
                vec = self.to_vector(self.schubert_polys[u] * self.schubert_polys[v])
                entry = {w: c for w, c in enumerate(vec) if c}
                table[(u, v)] = entry
                table[(v, u)] = entry
        return table

    def structure_constant(self, u: WeylElem, v: WeylElem, w: WeylElem) -> Fraction:
        G = self.group
        return self.mult_table.get((G.index(u), G.index(v)), {}).get(G.index(w), Fraction(0))

    def multiply(self, a: Sequence, b: Sequence) -> list[Fraction]:
        out = [Fraction(0)] * len(self.group)
        for u, x in enumerate(a):
            if not x:
                continue
            for v, y in enumerate(b):
                if not y:
                    continue
                for w, c in self.mult_table.get((u, v), {}).items():
                    out[w] += x * y * c
        return out

    @cached_property
    def w_action(self) -> list[list[list[Fraction]]]:
        """Matrices of the simple reflections; column ``k`` is ``s_i(X_k)``."""
        G = self.group
        mats = []
        for i in range(self.rank):
            cols = [self.to_vector(w_act(G, G.simple(i), p)) for p in self.schubert_polys]
            mats.append(linalg.transpose(cols))
        return mats

    def element_matrix(self, w: WeylElem) -> list[list[Fraction]]:
        N = len(self.group)
        M = linalg.identity(N)
        for i in w.word:
            M = linalg.matmul(M, self.w_action[i])
        return M

    def trace(self, w: WeylElem) -> Fraction:
        M = self.element_matrix(w)
        return sum((M[k][k] for k in range(len(M))), Fraction(0))


@dataclass(frozen=True)
class InvariantSubalgebra:
    basis: tuple[tuple[Fraction, ...], ...]  # vectors in Schubert coordinates
    degrees: tuple[int, ...]
    hilbert: HilbertSeries

    @property
    def dimension(self) -> int:
        return len(self.basis)


def build_coinvariants(group: WeylGroup, schubert_scale: Fraction = Fraction(1)) -> CoinvariantAlgebra:
    """Coinvariant algebra with Schubert basis; ``X_e = 1`` is checked.

    ``schubert_scale`` multiplies the top class and exists only as a fault
    injection hook for the verification battery.
    """
    C = CoinvariantAlgebra(group, schubert_scale)
    if schubert_scale == 1 and C.schubert_polys[0] != MultiPoly.const(group.rank, 1):
        raise ConsistencyError(f"X_e = {C.schubert_polys[0]}, expected 1")
    return C


_ALGEBRAS: dict[str, CoinvariantAlgebra] = {}


def cached_coinvariants(group: WeylGroup) -> CoinvariantAlgebra:
    key = group.datum.name
    alg = _ALGEBRAS.get(key)
    if alg is None or alg.group is not group:
        alg = _ALGEBRAS[key] = build_coinvariants(group)
    return alg


def invariant_subalgebra(C: CoinvariantAlgebra, parabolic: ParabolicData) -> InvariantSubalgebra:
    """Fixed points of a subgroup acting on ``C``, degree by degree."""
    G = C.group
    G.check(*parabolic.subgroup_elements)
    mats = [C.element_matrix(w) for w in parabolic.subgroup_elements if w.length > 0]
    basis: list[tuple[Fraction, ...]] = []
    degs: list[int] = []
    hilb = []
    N = len(G)
    for k in range(C.top + 1):
        idx = C.elements_of_degree(k)
        rows = []
        for M in mats:
            for r in idx:
                rows.append([M[r][c] - (1 if r == c else 0) for c in idx])
        kernel = linalg.nullspace(rows, len(idx))
        hilb.append(len(kernel))
        for v in kernel:
            full = [Fraction(0)] * N
            for a, c in zip(idx, v):
                full[a] = c
            basis.append(tuple(full))
            degs.append(k)
    sub = InvariantSubalgebra(tuple(basis), tuple(degs), HilbertSeries(hilb))
    _check_closed(C, sub, mats)
    return sub


def _check_closed(C: CoinvariantAlgebra, sub: InvariantSubalgebra, mats) -> None:
    for a in sub.basis:
        for b in sub.basis:
            prod = C.multiply(a, b)
            for M in mats:
                image = [sum((M[r][c] * prod[c] for c in range(len(prod)) if prod[c]), Fraction(0)) for r in range(len(prod))]
                if image != prod:
                    raise ConsistencyError("invariant subspace is not closed under multiplication")
