"""Chern characters and Chern classes of formal K-theory classes.

Entries of a :class:`ChernVector` live in any graded commutative ring that
supports ``+``, ``-``, ``*`` and multiplication by :class:`Fraction`
(rationals themselves, Kuenneth classes, universal expressions).  Entry j
is the degree-j piece; everything above the truncation degree is zero.

The conversion is Newton's identity between the power sums
``p_m = m! ch_m`` and the elementary symmetric functions ``c_m``::

    p_m - c_1 p_{m-1} + c_2 p_{m-2} - ... + (-1)^m m c_m = 0
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Any, Sequence

CH = "ch"
C = "c"


@dataclass(frozen=True)
class ChernVector:
    rank: int
    entries: tuple[Any, ...]
    mode: str
    unit: Any = Fraction(1)

    def __post_init__(self):
        if self.mode not in (CH, C):
            raise ValueError(f"mode must be 'ch' or 'c', got {self.mode!r}")

    @property
    def truncation(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, j: int):
        if 0 <= j < len(self.entries):
            return self.entries[j]
        return self.unit * 0

    def __add__(self, other: "ChernVector") -> "ChernVector":
        _require(self, CH)
        _require(other, CH)
        d = min(self.truncation, other.truncation)
        return ChernVector(
            self.rank + other.rank,
            tuple(self[j] + other[j] for j in range(d + 1)),
            CH,
            self.unit,
        )

    def __neg__(self):
        _require(self, CH)
        return ChernVector(-self.rank, tuple(-e for e in self.entries), CH, self.unit)

    def __sub__(self, other):
        return self + (-other)


def _require(v: ChernVector, mode: str) -> None:
    if v.mode != mode:
        raise ValueError(f"expected a {mode}-mode vector, got {v.mode}-mode")


def character(rank: int, entries: Sequence[Any], truncation: int, unit: Any = Fraction(1)) -> ChernVector:
    """A ch-mode vector from its positive-degree entries ch_1, ch_2, ..."""
    zero = unit * 0
    tail = list(entries[:truncation]) + [zero] * max(0, truncation - len(entries))
    return ChernVector(rank, (unit * rank, *tail), CH, unit)


def line_character(line: Any, truncation: int, unit: Any = Fraction(1)) -> ChernVector:
    """ch of a line bundle with first Chern class ``line``: exp(line)."""
    return ChernVector(1, tuple(_exp_terms(line, truncation, unit)), CH, unit)


def _exp_terms(x: Any, truncation: int, unit: Any) -> list:
    out = [unit]
    power = unit
    for k in range(1, truncation + 1):
        power = power * x
        out.append(power * Fraction(1, factorial(k)))
    return out


def chern_from_character(v: ChernVector) -> ChernVector:
    _require(v, CH)
    d = v.truncation
    p = [None] + [v[m] * factorial(m) for m in range(1, d + 1)]
    c = [v.unit]
    for m in range(1, d + 1):
        # m c_m = sum_{i=1}^m (-1)^{i-1} c_{m-i} p_i
        acc = v.unit * 0
        for i in range(1, m + 1):
            t = c[m - i] * p[i]
            acc = acc + t if i % 2 == 1 else acc - t
        c.append(acc * Fraction(1, m))
    return ChernVector(v.rank, tuple(c), C, v.unit)


def character_from_chern(v: ChernVector) -> ChernVector:
    _require(v, C)
    d = v.truncation
    p = [None]
    for m in range(1, d + 1):
        acc = v[m] * m
        if m % 2 == 0:
            acc = -acc
        for i in range(1, m):
            t = v[i] * p[m - i]
            acc = acc + t if i % 2 == 1 else acc - t
        p.append(acc)
    entries = [v.unit * v.rank] + [p[m] * Fraction(1, factorial(m)) for m in range(1, d + 1)]
    return ChernVector(v.rank, tuple(entries), CH, v.unit)


def newton_residuals(ch: ChernVector, c: ChernVector) -> list:
    """p_m - c_1 p_{m-1} + ... + (-1)^m m c_m for m = 1..D; all zero iff consistent."""
    _require(ch, CH)
    _require(c, C)
    d = min(ch.truncation, c.truncation)
    p = [None] + [ch[m] * factorial(m) for m in range(1, d + 1)]
    out = []
    for m in range(1, d + 1):
        acc = p[m]
        for i in range(1, m):
            t = c[i] * p[m - i]
            acc = acc - t if i % 2 == 1 else acc + t
        t = c[m] * m
        acc = acc - t if m % 2 == 1 else acc + t
        out.append(acc)
    return out


def twist(v: ChernVector, line: Any) -> ChernVector:
    """ch(V (x) L) = ch(V) * exp(c_1(L)); rank unchanged."""
    _require(v, CH)
    d = v.truncation
    e = _exp_terms(line, d, v.unit)
    entries = []
    for j in range(d + 1):
        acc = v.unit * 0
        for i in range(j + 1):
            if j - i < len(e):
                acc = acc + v[i] * e[j - i]
        entries.append(acc)
    return ChernVector(v.rank, tuple(entries), CH, v.unit)


def ideal_from_structure(z: ChernVector) -> ChernVector:
    """ch(I) = 1 - ch(O_Z) for 0 -> I -> O -> O_Z -> 0."""
    _require(z, CH)
    if z.rank != 0:
        raise ValueError(f"a structure sheaf of points has rank 0, got {z.rank}")
    return ChernVector(1, (z.unit, *(-e for e in z.entries[1:])), CH, z.unit)
