"""Integer Laurent polynomials in one variable ``q``.

A polynomial is stored as a mapping ``{exponent: coefficient}`` with no zero
coefficients, so equality and hashing are structural.

>>> q = LaurentPoly.q()
>>> (q - 1) * (q + 1)
LaurentPoly('-1+q^2')
>>> (q + q**-1).bar() == q + q**-1
True
"""

from __future__ import annotations

from typing import Iterator, Mapping


class LaurentPoly:
    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | int = 0):
        if isinstance(coeffs, int):
            coeffs = {0: coeffs} if coeffs else {}
        self._c = {int(k): int(v) for k, v in coeffs.items() if v}
        self._hash = None

    @classmethod
    def q(cls, power: int = 1) -> "LaurentPoly":
        return cls({power: 1})

    @classmethod
    def from_list(cls, coeffs, shift: int = 0) -> "LaurentPoly":
        """Build ``sum(coeffs[i] * q**(i + shift))``."""
        return cls({i + shift: c for i, c in enumerate(coeffs)})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self._c.items()))

    def __getitem__(self, k: int) -> int:
        return self._c.get(k, 0)

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def degree(self) -> int | None:
        return max(self._c) if self._c else None

    def valuation(self) -> int | None:
        return min(self._c) if self._c else None

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for a, x in self._c.items():
            for b, y in other._c.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials can be inverted")
            ((k, v),) = self._c.items()
            if v not in (1, -1):
                raise ValueError("monomial coefficient is not a unit")
            return LaurentPoly({k * n: v ** (-n) if n % 2 else 1})
        out = LaurentPoly(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q**k``."""
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def bar(self) -> "LaurentPoly":
        """The involution ``q -> q^{-1}``."""
        return LaurentPoly({-k: v for k, v in self._c.items()})

    def truncate(self, max_degree: int) -> "LaurentPoly":
        """Keep only terms of degree ``<= max_degree``."""
        return LaurentPoly({k: v for k, v in self._c.items() if k <= max_degree})

    def evaluate(self, q):
        if not self._c:
            return 0
        if q == 1:
            return sum(self._c.values())
        return sum(v * q**k for k, v in self._c.items())

    def __call__(self, q):
        return self.evaluate(q)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k, v in sorted(self._c.items()):
            if k == 0:
                mono = str(abs(v))
            else:
                var = "q" if k == 1 else f"q^{k}"
                mono = var if abs(v) == 1 else f"{abs(v)}*{var}"
            sign = "-" if v < 0 else "+"
            parts.append((sign, mono))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, mono in parts[1:]:
            out += sign + mono
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly('{self}')"
