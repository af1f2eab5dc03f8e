"""Fock-space model of A*(Hilb): partitions decorated by symmetric tensors.

A basis element is ``q_{k_1} ... q_{k_t}(Gamma) |0>`` with k_1 >= ... >= k_t
and Gamma a decomposable symmetric tensor: a multiset of basis symbols
attached to each part size.  Creation operators act freely by inserting
a decorated part.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Iterator, Mapping

from .surface_algebra import SurfaceClass, SurfaceData


@dataclass(frozen=True, order=True)
class FockBasisElement:
    """Canonical form: pairs (part, symbol index) sorted by decreasing part, then symbol."""

    tensor: tuple[tuple[int, int], ...]

    @classmethod
    def from_pairs(cls, pairs) -> "FockBasisElement":
        return cls(tuple(sorted(pairs, key=lambda p: (-p[0], p[1]))))

    @property
    def partition(self) -> tuple[int, ...]:
        return tuple(k for k, _ in self.tensor)

    @property
    def n(self) -> int:
        return sum(self.partition)

    def codim(self, surface: SurfaceData) -> int:
        return sum(k - 1 + surface.degrees[i] for k, i in self.tensor)

    def render(self, surface: SurfaceData) -> str:
        ops = " ".join(f"q{k}({surface.symbols[i]})" for k, i in self.tensor)
        return f"{ops} |0>" if ops else "|0>"


class FockVector:
    __slots__ = ("surface", "terms")

    def __init__(self, surface: SurfaceData, terms: Mapping[FockBasisElement, Fraction] | None = None):
        self.surface = surface
        self.terms = {b: Fraction(c) for b, c in (terms or {}).items() if c}
        ns = {b.n for b in self.terms}
        if len(ns) > 1:
            raise ValueError(f"Fock vector mixes several n: {sorted(ns)}")

    @classmethod
    def vacuum(cls, surface):
        return cls(surface, {FockBasisElement(()): Fraction(1)})

    def __eq__(self, other):
        return isinstance(other, FockVector) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for b, c in other.terms.items():
            out[b] = out.get(b, 0) + c
        return FockVector(self.surface, out)

    def __mul__(self, scalar):
        return FockVector(self.surface, {b: c * scalar for b, c in self.terms.items()})

    __rmul__ = __mul__

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{b.render(self.surface)}" for b, c in sorted(self.terms.items()))


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n in reverse lexicographic order, parts weakly decreasing."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def enumerate_basis(n: int, surface: SurfaceData) -> list[FockBasisElement]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []
    symbols = range(surface.rank)
    for lam in partitions(n):
        sizes = sorted(set(lam), reverse=True)
        blocks = [
            list(combinations_with_replacement(symbols, lam.count(k)))
            for k in sizes
        ]
        for choice in product(*blocks):
            pairs = [(k, i) for k, multiset in zip(sizes, choice) for i in multiset]
            out.append(FockBasisElement.from_pairs(pairs))
    return out


def rank(n: int, surface: SurfaceData) -> int:
    return len(enumerate_basis(n, surface))


def poincare(n: int, surface: SurfaceData) -> list[int]:
    """Coefficient list of the codimension-counting polynomial, index = codimension."""
    counts: dict[int, int] = {}
    for b in enumerate_basis(n, surface):
        d = b.codim(surface)
        counts[d] = counts.get(d, 0) + 1
    top = max(counts, default=-1)
    return [counts.get(d, 0) for d in range(top + 1)]


def generating_function_coefficients(r: int, n_max: int) -> list[int]:
    """Coefficients of prod_{m>=1} (1 - q^m)^{-r} up to q^{n_max}."""
    coeffs = [1] + [0] * n_max
    for m in range(1, n_max + 1):
        for _ in range(r):
            # multiply by 1/(1 - q^m)
            for j in range(m, n_max + 1):
                coeffs[j] += coeffs[j - m]
    return coeffs


def q_apply(k: int, gamma: SurfaceClass, v: FockVector) -> FockVector:
    """Creation operator q_k(gamma) in the free Fock model."""
    if k <= 0:
        raise ValueError("only creation operators q_k with k >= 1 are supported")
    out: dict[FockBasisElement, Fraction] = {}
    for b, c in v.terms.items():
        for i, g in gamma.coeffs.items():
            nb = FockBasisElement.from_pairs(b.tensor + ((k, i),))
            out[nb] = out.get(nb, 0) + c * g
    return FockVector(v.surface, out)


_OP = re.compile(r"q(\d+)\(\s*([\w']+)\s*\)")


def parse_basis_element(surface: SurfaceData, text: str) -> FockBasisElement:
    """Parse ``q2(h) q1(pt) |0>`` (the ket is optional)."""
    body = text.strip()
    if body.endswith("|0>"):
        body = body[:-3]
    pairs = []
    pos = 0
    for m in _OP.finditer(body):
        if body[pos:m.start()].strip():
            raise ValueError(f"cannot parse {text!r}")
        k = int(m[1])
        if k < 1:
            raise ValueError("only creation operators q_k with k >= 1 are supported")
        pairs.append((k, surface.index(m[2])))
        pos = m.end()
    if body[pos:].strip():
        raise ValueError(f"cannot parse {text!r}")
    return FockBasisElement.from_pairs(pairs)
