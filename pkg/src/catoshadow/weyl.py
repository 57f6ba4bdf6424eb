"""Root systems, Weyl groups and the dot-action.

Weights live in the fundamental-weight basis, so the pairing of a weight with
the i-th simple coroot is just its i-th coordinate.  The Cartan matrix uses
the convention ``cartan_matrix[i][j] = <alpha_j, coroot_i>``; column ``j`` is
therefore the simple root ``alpha_j`` written in fundamental coordinates.

Group elements are stored by their shortlex-least reduced word (generator
indices are 0-based).  Enumeration is a breadth-first closure, which visits
elements in shortlex order, so the first word reaching an element is its
normal form.

>>> G = enumerate_weyl(build_root_system("A", 2))
>>> len(G), G.longest.word
(6, (0, 1, 0))
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

MAX_RANK = 4
MAX_ORDER = 1152


class ConfigurationError(ValueError):
    """Unsupported Cartan type or rank."""


class UsageError(ValueError):
    """Arguments that do not belong together (e.g. elements of different groups)."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Weight:
    """A weight, in fundamental-weight coordinates."""

    coords: tuple[Fraction, ...]

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(_frac(c) for c in coords))

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls([0] * rank)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "Weight":
        return Weight(-a for a in self.coords)

    def scale(self, c) -> "Weight":
        return Weight(c * a for a in self.coords)

    def pair(self, coroot: Sequence) -> Fraction:
        """Pairing with a coroot given in simple-coroot coordinates."""
        return sum((c * a for c, a in zip(coroot, self.coords)), Fraction(0))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def as_ints(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise ValueError(f"{self} is not integral")
        return tuple(int(c) for c in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


# Gram matrices of the simple roots, scaled to integers.
def _gram(type_letter: str, rank: int) -> list[list[int]]:
    n = rank
    B = [[0] * n for _ in range(n)]
    if type_letter == "A":
        for i in range(n):
            B[i][i] = 2
        for i in range(n - 1):
            B[i][i + 1] = B[i + 1][i] = -1
    elif type_letter == "B":
        if n < 2:
            raise ConfigurationError("type B needs rank >= 2")
        for i in range(n):
            B[i][i] = 4
        B[n - 1][n - 1] = 2
        for i in range(n - 1):
            B[i][i + 1] = B[i + 1][i] = -2
    elif type_letter == "C":
        if n < 2:
            raise ConfigurationError("type C needs rank >= 2")
        for i in range(n):
            B[i][i] = 2
        B[n - 1][n - 1] = 4
        for i in range(n - 2):
            B[i][i + 1] = B[i + 1][i] = -1
        B[n - 2][n - 1] = B[n - 1][n - 2] = -2
    elif type_letter == "D":
        if n < 4:
            raise ConfigurationError("type D needs rank >= 4")
        for i in range(n):
            B[i][i] = 2
        for i in range(n - 2):
            B[i][i + 1] = B[i + 1][i] = -1
        B[n - 3][n - 1] = B[n - 1][n - 3] = -1
    elif type_letter == "F":
        if n != 4:
            raise ConfigurationError("type F only exists in rank 4")
        B = [[4, -2, 0, 0], [-2, 4, -2, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    elif type_letter == "G":
        if n != 2:
            raise ConfigurationError("type G only exists in rank 2")
        B = [[2, -3], [-3, 6]]
    else:
        raise ConfigurationError(f"unknown Cartan type {type_letter!r}")
    return B


def _degrees(type_letter: str, rank: int) -> tuple[int, ...]:
    n = rank
    if type_letter == "A":
        return tuple(range(2, n + 2))
    if type_letter in "BC":
        return tuple(range(2, 2 * n + 1, 2))
    if type_letter == "D":
        return tuple(sorted(list(range(2, 2 * n - 1, 2)) + [n]))
    if type_letter == "F":
        return (2, 6, 8, 12)
    if type_letter == "G":
        return (2, 6)
    raise ConfigurationError(f"unknown Cartan type {type_letter!r}")


@dataclass(frozen=True)
class CartanDatum:
    type_letter: str
    rank: int
    cartan_matrix: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[int, ...], ...] = field(repr=False)
    simple_roots: tuple[Weight, ...] = field(repr=False)
    simple_coroots: tuple[tuple[int, ...], ...] = field(repr=False)
    # positive roots in simple-root coordinates and as weights
    positive_root_coeffs: tuple[tuple[int, ...], ...] = field(repr=False)
    positive_roots: tuple[Weight, ...] = field(repr=False)
    # positive coroots in simple-coroot coordinates, aligned with positive_roots
    positive_coroots: tuple[tuple[int, ...], ...] = field(repr=False)
    rho: Weight = field(repr=False)
    degrees: tuple[int, ...] = ()

    @property
    def name(self) -> str:
        return f"{self.type_letter}{self.rank}"

    def weight(self, coords: Iterable) -> Weight:
        w = Weight(coords)
        if w.rank != self.rank:
            raise UsageError(f"weight {w} has wrong length for {self.name}")
        return w

    @property
    def minus_rho(self) -> Weight:
        return -self.rho

    def reflect(self, i: int, lam: Weight) -> Weight:
        """Linear action of the simple reflection ``s_i``."""
        c = lam.coords[i]
        alpha = self.simple_roots[i].coords
        return Weight(x - c * a for x, a in zip(lam.coords, alpha))


def build_root_system(type_letter: str, rank: int) -> CartanDatum:
    """Cartan data for a finite type of rank at most 4.

    >>> d = build_root_system("B", 2)
    >>> len(d.positive_roots), d.degrees
    (4, (2, 4))
    """
    type_letter = str(type_letter).upper()
    if not isinstance(rank, int) or rank < 1 or rank > MAX_RANK:
        raise ConfigurationError(f"rank must be between 1 and {MAX_RANK}, got {rank!r}")
    B = _gram(type_letter, rank)
    n = rank
    A = tuple(tuple(2 * B[i][j] // B[i][i] for j in range(n)) for i in range(n))
    for i in range(n):
        for j in range(n):
            if 2 * B[i][j] % B[i][i]:
                raise ConfigurationError("non-crystallographic Gram matrix")

    # closure of the simple roots under simple reflections
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = {c: None for c in simple}
    frontier = list(simple)
    while frontier:
        nxt = []
        for c in frontier:
            for i in range(n):
                pairing = sum(c[j] * A[i][j] for j in range(n))
                if pairing == 0:
                    continue
                new = tuple(c[j] - (pairing if j == i else 0) for j in range(n))
                if all(x >= 0 for x in new) and any(new) and new not in found:
                    found[new] = None
                    nxt.append(new)
        frontier = nxt
    coeffs = sorted(found, key=lambda c: (sum(c), tuple(-x for x in c)))

    def as_weight(c):
        return Weight(sum(c[j] * A[i][j] for j in range(n)) for i in range(n))

    def norm(c):
        return sum(c[i] * B[i][j] * c[j] for i in range(n) for j in range(n))

    coroots = []
    for c in coeffs:
        nb = norm(c)
        cc = tuple(Fraction(c[j] * B[j][j], nb) for j in range(n))
        if any(x.denominator != 1 for x in cc):
            raise ConfigurationError("coroot is not integral")
        coroots.append(tuple(int(x) for x in cc))

    degrees = _degrees(type_letter, rank)
    datum = CartanDatum(
        type_letter=type_letter,
        rank=n,
        cartan_matrix=A,
        gram=tuple(tuple(r) for r in B),
        simple_roots=tuple(as_weight(c) for c in simple),
        simple_coroots=tuple(tuple(int(i == j) for j in range(n)) for i in range(n)),
        positive_root_coeffs=tuple(coeffs),
        positive_roots=tuple(as_weight(c) for c in coeffs),
        positive_coroots=tuple(coroots),
        rho=Weight([1] * n),
        degrees=degrees,
    )
    if len(coeffs) != sum(d - 1 for d in degrees):
        raise ConfigurationError(f"{datum.name}: root count does not match degrees")
    return datum


@dataclass(frozen=True, order=True)
class WeylElem:
    """A Weyl group element as its shortlex-least reduced word."""

    word: tuple[int, ...]
    length: int = field(compare=False)
    group: str = field(default="", compare=True, repr=False)

    def __str__(self) -> str:
        if not self.word:
            return "e"
        return "s" + "s".join(str(i + 1) for i in self.word)

    def word_string(self) -> str:
        """1-based comma separated word, as used on the command line."""
        return ",".join(str(i + 1) for i in self.word)


@dataclass(frozen=True)
class WeightFlags:
    integral: bool
    regular: bool
    rho_dominant: bool


@dataclass(frozen=True)
class ParabolicData:
    """A subgroup of W with the extremal representatives of its left cosets."""

    subgroup_elements: tuple[WeylElem, ...]
    min_reps: tuple[WeylElem, ...]
    max_reps: tuple[WeylElem, ...]
    generators: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.subgroup_elements)

    def __contains__(self, w: WeylElem) -> bool:
        return w in self._members

    @cached_property
    def _members(self) -> frozenset[WeylElem]:
        return frozenset(self.subgroup_elements)

    def issubset(self, other: "ParabolicData") -> bool:
        return self._members <= other._members


class WeylGroup:
    """A fully enumerated finite Weyl group.

    Elements are numbered in shortlex order of their normal forms; all tables
    (multiplication, inverses, Bruhat order) are indexed by these numbers.
    """

    def __init__(self, datum: CartanDatum):
        self.datum = datum
        n = datum.rank
        A = datum.cartan_matrix
        name = datum.name
        # key: images of the simple roots in simple-root coordinates
        simple = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

        def apply_left(i, key):
            out = []
            for v in key:
                pairing = sum(v[j] * A[i][j] for j in range(n))
                out.append(tuple(v[j] - (pairing if j == i else 0) for j in range(n)))
            return tuple(out)

        def apply_right(key, i):
            # (w s_i)(alpha_j) = w(alpha_j) - A[i][j] w(alpha_i)
            wi = key[i]
            return tuple(
                tuple(key[j][k] - A[i][j] * wi[k] for k in range(n)) for j in range(n)
            )

        words: list[tuple[int, ...]] = [()]
        keys = [simple]
        index = {simple: 0}
        parent = [-1]
        last = [-1]
        rmul_rows: list[list[int]] = []
        pos = 0
        while pos < len(keys):
            key, word = keys[pos], words[pos]
            row = []
            for i in range(n):
                k2 = apply_right(key, i)
                j = index.get(k2)
                if j is None:
                    j = len(keys)
                    index[k2] = j
                    keys.append(k2)
                    words.append(word + (i,))
                    parent.append(pos)
                    last.append(i)
                    if len(keys) > MAX_ORDER:
                        raise ConfigurationError(f"{name}: group larger than {MAX_ORDER}")
                row.append(j)
            rmul_rows.append(row)
            pos += 1

        N = len(keys)
        self._keys = keys
        self._index = index
        self.elements: list[WeylElem] = [WeylElem(w, len(w), name) for w in words]
        self._elem_index = {w: k for k, w in enumerate(self.elements)}
        self.lengths = np.array([len(w) for w in words], dtype=np.int64)
        self.right_mult = np.array(rmul_rows, dtype=np.int64).reshape(N, n)
        self.left_mult = np.array(
            [[index[apply_left(i, keys[k])] for i in range(n)] for k in range(N)],
            dtype=np.int64,
        ).reshape(N, n)
        self._parent = parent
        self._last = last

        # mult[x, y] = index of x*y, built along the normal form of y
        mult = np.empty((N, N), dtype=np.int64)
        mult[:, 0] = np.arange(N)
        for y in range(1, N):
            mult[:, y] = self.right_mult[mult[:, parent[y]], last[y]]
        self.mult_table = mult
        self.inverse_table = np.argmax(mult == 0, axis=1)
        self.longest = self.elements[int(np.argmax(self.lengths))]
        self.bruhat_matrix = self._bruhat_by_descents()

        # linear action matrices in fundamental coordinates (columns = images of basis vectors)
        gens = []
        for i in range(n):
            alpha = datum.simple_roots[i].coords
            M = [[int(r == c) - (int(alpha[r]) if c == i else 0) for c in range(n)] for r in range(n)]
            gens.append(np.array(M, dtype=object))
        mats = [np.eye(n, dtype=int).astype(object)]
        for y in range(1, N):
            mats.append(mats[parent[y]].dot(gens[last[y]]))
        self._matrices = mats

    # ---- basic access -------------------------------------------------
    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def identity(self) -> WeylElem:
        return self.elements[0]

    def index(self, w: WeylElem) -> int:
        try:
            return self._elem_index[w]
        except KeyError:
            raise UsageError(f"{w!r} is not an element of {self.datum.name}") from None

    def check(self, *elems: WeylElem) -> None:
        for w in elems:
            if w.group != self.datum.name or w not in self._elem_index:
                raise UsageError(f"{w!r} is not an element of {self.datum.name}")

    def from_word(self, word: Iterable[int]) -> WeylElem:
        """Element represented by an arbitrary (not necessarily reduced) 0-based word."""
        k = 0
        for i in word:
            if not 0 <= i < self.rank:
                raise UsageError(f"generator index {i} out of range for {self.datum.name}")
            k = int(self.right_mult[k, i])
        return self.elements[k]

    def simple(self, i: int) -> WeylElem:
        return self.from_word([i])

    def mul(self, x: WeylElem, y: WeylElem) -> WeylElem:
        return self.elements[int(self.mult_table[self.index(x), self.index(y)])]

    def inverse(self, w: WeylElem) -> WeylElem:
        return self.elements[int(self.inverse_table[self.index(w)])]

    def length(self, w: WeylElem) -> int:
        return int(self.lengths[self.index(w)])

    def descents(self, w: WeylElem, side: str = "right") -> frozenset[int]:
        k = self.index(w)
        table = self.right_mult if side == "right" else self.left_mult
        return frozenset(i for i in range(self.rank) if self.lengths[table[k, i]] < self.lengths[k])

    def matrix(self, w: WeylElem) -> np.ndarray:
        """Linear action on fundamental-weight coordinates (object dtype)."""
        return self._matrices[self.index(w)]

    def act(self, w: WeylElem, lam: Weight) -> Weight:
        M = self.matrix(w)
        return Weight(M.dot(np.array(lam.coords, dtype=object)))

    def dot_action(self, w: WeylElem, lam: Weight) -> Weight:
        rho = self.datum.rho
        return self.act(w, lam + rho) - rho

    # ---- Bruhat order -------------------------------------------------
    def _bruhat_by_descents(self) -> np.ndarray:
        # x <= y  iff  min(x, xs) <= ys  for a right descent s of y
        N = len(self.elements)
        leq = np.zeros((N, N), dtype=bool)
        leq[0, 0] = True
        idx = np.arange(N)
        for y in range(1, N):
            s = self._last[y]
            xs = self.right_mult[:, s]
            lower = np.where(self.lengths[xs] < self.lengths, xs, idx)
            leq[:, y] = leq[lower, self._parent[y]]
        return leq

    def bruhat_leq(self, x: WeylElem, y: WeylElem) -> bool:
        self.check(x, y)
        return bool(self.bruhat_matrix[self.index(x), self.index(y)])

    @cached_property
    def reflections(self) -> list[int]:
        refl = set()
        for k in range(len(self.elements)):
            inv = self.inverse_table[k]
            for i in range(self.rank):
                refl.add(int(self.mult_table[self.right_mult[k, i], inv]))
        return sorted(refl)

    def bruhat_by_reflections(self) -> np.ndarray:
        """Bruhat order as the closure of ``x -> xt`` with ``l(xt) > l(x)``."""
        N = len(self.elements)
        up = [0] * N
        for x in sorted(range(N), key=lambda k: -self.lengths[k]):
            mask = 1 << x
            for t in self.reflections:
                y = int(self.mult_table[x, t])
                if self.lengths[y] > self.lengths[x]:
                    mask |= up[y]
            up[x] = mask
        out = np.zeros((N, N), dtype=bool)
        for x in range(N):
            m = up[x]
            for y in range(N):
                if m >> y & 1:
                    out[x, y] = True
        return out

    def poincare_polynomial(self) -> list[int]:
        counts = np.bincount(self.lengths)
        return [int(c) for c in counts]

    # ---- subgroups and cosets -----------------------------------------
    def standard_parabolic(self, generators: Iterable[int]) -> ParabolicData:
        gens = tuple(sorted(set(generators)))
        members = [0]
        seen = {0}
        for k in members:
            for i in gens:
                j = int(self.right_mult[k, i])
                if j not in seen:
                    seen.add(j)
                    members.append(j)
        return self._parabolic(sorted(members), gens)

    def _parabolic(self, member_idx: Sequence[int], gens: tuple[int, ...] = ()) -> ParabolicData:
        sub = tuple(self.elements[k] for k in sorted(member_idx))
        mins = self._coset_reps_idx(member_idx, "left", "min")
        maxs = self._coset_reps_idx(member_idx, "left", "max")
        return ParabolicData(
            subgroup_elements=sub,
            min_reps=tuple(self.elements[k] for k in mins),
            max_reps=tuple(self.elements[k] for k in maxs),
            generators=gens,
        )

    def _coset_reps_idx(self, member_idx: Sequence[int], side: str, extremal: str) -> list[int]:
        members = np.array(sorted(member_idx), dtype=np.int64)
        seen = set()
        reps = []
        for w in range(len(self.elements)):
            if w in seen:
                continue
            coset = self.mult_table[w, members] if side == "left" else self.mult_table[members, w]
            coset = [int(c) for c in coset]
            seen.update(coset)
            key = (lambda c: (self.lengths[c], c)) if extremal == "min" else (lambda c: (-self.lengths[c], c))
            reps.append(min(coset, key=key))
        return sorted(reps)

    def coset_reps(self, parabolic: ParabolicData, side: str = "left", extremal: str = "min") -> list[WeylElem]:
        """Shortest or longest representatives of left (``wW'``) or right (``W'w``) cosets."""
        if side not in ("left", "right") or extremal not in ("min", "max"):
            raise UsageError("side must be left/right and extremal min/max")
        self.check(*parabolic.subgroup_elements)
        idx = [self.index(w) for w in parabolic.subgroup_elements]
        return [self.elements[k] for k in self._coset_reps_idx(idx, side, extremal)]

    def coset_rep_map(self, parabolic: ParabolicData, side: str = "left", extremal: str = "max") -> dict[WeylElem, WeylElem]:
        """Map every element to the chosen representative of its coset."""
        idx = np.array([self.index(w) for w in parabolic.subgroup_elements], dtype=np.int64)
        key = (lambda c: (self.lengths[c], c)) if extremal == "min" else (lambda c: (-self.lengths[c], c))
        out = {}
        for k, w in enumerate(self.elements):
            coset = self.mult_table[k, idx] if side == "left" else self.mult_table[idx, k]
            out[w] = self.elements[min((int(c) for c in coset), key=key)]
        return out

    def stabilizer_dot(self, lam: Weight) -> ParabolicData:
        members = [k for k, w in enumerate(self.elements) if self.dot_action(w, lam) == lam]
        gens = tuple(i for i in range(self.rank) if int(self.right_mult[0, i]) in set(members))
        return self._parabolic(members, gens)

    def classify_weight(self, lam: Weight) -> WeightFlags:
        return classify_weight(self.datum, lam)


def enumerate_weyl(datum: CartanDatum) -> WeylGroup:
    group = WeylGroup(datum)
    expected = 1
    for d in datum.degrees:
        expected *= d
    if len(group) != expected:
        raise ConfigurationError(f"{datum.name}: enumerated {len(group)} elements, expected {expected}")
    return group


def dot_action(group: WeylGroup, w: WeylElem, lam: Weight) -> Weight:
    """``w . lam = w(lam + rho) - rho``."""
    return group.dot_action(w, lam)


def stabilizer_dot(group: WeylGroup, lam: Weight) -> ParabolicData:
    return group.stabilizer_dot(lam)


def classify_weight(datum: CartanDatum, lam: Weight) -> WeightFlags:
    shifted = lam + datum.rho
    pairings = [shifted.pair(c) for c in datum.positive_coroots]
    return WeightFlags(
        integral=lam.is_integral(),
        regular=all(p != 0 for p in pairings),
        rho_dominant=all(p >= 0 for p in pairings),
    )


def bruhat_leq(group: WeylGroup, x: WeylElem, y: WeylElem) -> bool:
    return group.bruhat_leq(x, y)


def length(group: WeylGroup, w: WeylElem) -> int:
    return group.length(w)


def descents(group: WeylGroup, w: WeylElem, side: str = "right") -> frozenset[int]:
    return group.descents(w, side)


def coset_reps(group: WeylGroup, parabolic: ParabolicData, side: str = "left", extremal: str = "min") -> list[WeylElem]:
    return group.coset_reps(parabolic, side, extremal)


def parse_type(text: str) -> tuple[str, int]:
    """``"A2"`` -> ``("A", 2)``."""
    text = text.strip()
    if len(text) < 2 or not text[1:].isdigit():
        raise ConfigurationError(f"cannot parse Cartan type {text!r}")
    return text[0].upper(), int(text[1:])


def weyl_group(text: str) -> WeylGroup:
    return _cached_group(*parse_type(text))


_GROUPS: dict[tuple[str, int], WeylGroup] = {}


def _cached_group(type_letter: str, rank: int) -> WeylGroup:
    key = (type_letter, rank)
    if key not in _GROUPS:
        _GROUPS[key] = enumerate_weyl(build_root_system(type_letter, rank))
    return _GROUPS[key]


# ---- JSON ------------------------------------------------------------

def _num(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


def datum_to_dict(datum: CartanDatum) -> dict:
    return {
        "type": datum.type_letter,
        "rank": datum.rank,
        "cartan_matrix": [list(r) for r in datum.cartan_matrix],
        "simple_roots": [[_num(c) for c in a.coords] for a in datum.simple_roots],
        "simple_coroots": [list(c) for c in datum.simple_coroots],
        "positive_roots": [[_num(c) for c in a.coords] for a in datum.positive_roots],
        "positive_coroots": [list(c) for c in datum.positive_coroots],
        "rho": [_num(c) for c in datum.rho.coords],
        "degrees": list(datum.degrees),
    }


def datum_from_dict(data: dict) -> CartanDatum:
    datum = build_root_system(data["type"], int(data["rank"]))
    if datum_to_dict(datum) != data:
        raise ValueError("serialized Cartan datum does not match the rebuilt one")
    return datum


def group_to_dict(group: WeylGroup) -> dict:
    return {
        "datum": datum_to_dict(group.datum),
        "order": len(group),
        "elements": [list(w.word) for w in group.elements],
        "lengths": [int(x) for x in group.lengths],
        "longest": list(group.longest.word),
    }


def group_from_dict(data: dict) -> WeylGroup:
    datum = datum_from_dict(data["datum"])
    group = enumerate_weyl(datum)
    if group_to_dict(group) != data:
        raise ValueError("serialized Weyl group does not match the rebuilt one")
    return group


def all_subsets(n: int) -> list[tuple[int, ...]]:
    return [c for k in range(n + 1) for c in itertools.combinations(range(n), k)]
