"""Exact rational linear algebra on lists of rows.

Matrices are plain ``list[list]`` of ints or ``Fraction``; results come back as
``Fraction``.  Elimination is delegated to sympy's sparse ``DomainMatrix`` over
``QQ``, which keeps every step exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Matrix = list[list[Fraction]]


def _to_dm(rows: Sequence[Sequence], ncols: int | None = None) -> DomainMatrix:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    sdm: dict[int, dict[int, object]] = {}
    for i, row in enumerate(rows):
        if len(row) != ncols:
            raise ValueError("ragged matrix")
        nz = {j: QQ(v.numerator, v.denominator) if isinstance(v, Fraction) else QQ(v)
              for j, v in enumerate(row) if v}
        if nz:
            sdm[i] = nz
    return DomainMatrix(sdm, (len(rows), ncols), QQ)


def _from_dm(dm: DomainMatrix) -> Matrix:
    m, n = dm.shape
    out = [[Fraction(0)] * n for _ in range(m)]
    for i, row in dm.to_sparse().rep.to_sdm().items():
        for j, v in row.items():
            out[i][j] = Fraction(int(v.numerator), int(v.denominator))
    return out


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[Matrix, tuple[int, ...]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    if not rows:
        return [], ()
    dm = _to_dm(rows, ncols).to_sparse()
    red, pivots = dm.rref()
    out = _from_dm(red)[: len(pivots)]
    return out, tuple(pivots)


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return _to_dm(rows, ncols).to_sparse().rank()


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of ``{x : A x = 0}`` as a list of vectors of length ``ncols``."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def inverse(rows: Sequence[Sequence]) -> Matrix:
    n = len(rows)
    dm = _to_dm(rows, n).to_dense()
    if dm.rank() != n:
        raise ZeroDivisionError("singular matrix")
    return _from_dm(dm.inv())


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """One solution of ``A x = b`` or ``None`` if inconsistent."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [list(rows[i]) + [rhs[i]] for i in range(m)]
    red, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        x[p] = red[r][n]
    return x


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    if not a:
        return []
    inner = len(b)
    ncols = len(b[0]) if b else 0
    out = []
    for row in a:
        acc = [0] * ncols
        for k in range(inner):
            x = row[k]
            if x:
                brow = b[k]
                for j in range(ncols):
                    if brow[j]:
                        acc[j] += x * brow[j]
        out.append(acc)
    return out


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> list[list[int]]:
    return [[0] * n for _ in range(m)]


def is_zero(a: Sequence[Sequence]) -> bool:
    return all(not x for row in a for x in row)
