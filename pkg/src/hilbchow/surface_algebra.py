"""Finite graded rational algebras presenting the Chow ring of a surface.

A surface is described by a graded basis in degrees 0..2, a commutative
multiplication table, the integral on degree-2 classes, the canonical
class K_S and the Euler class c_2(T_S).  Only surfaces whose intersection
pairing is perfect are accepted, so that A*(S^k) is the k-th tensor power
of A*(S) and the diagonal has an explicit Kuenneth expansion.

File format (line oriented, ``#`` starts a comment)::

    NAME P2
    BASIS
    1 0
    h 1
    pt 2
    MULT
    h h = pt
    INTEGRAL
    pt = 1
    CANONICAL
    -3*h
    EULER
    3*pt

A linear combination is a ``+``/``-`` separated sum of ``coef*sym``,
``coef sym``, ``sym`` or a bare rational ``coef`` (a multiple of the unit).
Products with the unit are implicit; products not listed in MULT are zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Iterable, Mapping

import sympy

SECTIONS = ("NAME", "BASIS", "MULT", "INTEGRAL", "CANONICAL", "EULER")


class SurfaceError(ValueError):
    """Raised for malformed or inadmissible surface descriptions."""


@dataclass(frozen=True, eq=False)
class SurfaceData:
    """Immutable presentation of A*(S) with exact rational structure constants.

    Basis elements are addressed by index; index 0 is always the unit.
    ``table[i][j]`` maps result indices to rationals.
    """

    name: str
    symbols: tuple[str, ...]
    degrees: tuple[int, ...]
    table: tuple[tuple[Mapping[int, Fraction], ...], ...]
    integrals: tuple[Fraction, ...]
    canonical: Mapping[int, Fraction]
    euler: Mapping[int, Fraction]
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index.update({s: i for i, s in enumerate(self.symbols)})
        _validate(self)
        # dual basis data for the diagonal
        g = self.pairing_matrix()
        object.__setattr__(self, "_inverse_pairing", _invert(g))

    def __repr__(self):
        return f"SurfaceData({self.name!r}, basis={list(self.symbols)})"

    @property
    def rank(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise SurfaceError(f"unknown basis symbol {symbol!r} on {self.name}") from None

    def mul_basis(self, i: int, j: int) -> Mapping[int, Fraction]:
        return self.table[i][j]

    def pairing_matrix(self) -> list[list[Fraction]]:
        n = self.rank
        return [
            [sum((c * self.integrals[k] for k, c in self.table[i][j].items()), Fraction(0))
             for j in range(n)]
            for i in range(n)
        ]

    @property
    def inverse_pairing(self) -> list[list[Fraction]]:
        return self._inverse_pairing  # type: ignore[attr-defined]

    def diagonal_terms(self) -> list[tuple[int, int, Fraction]]:
        """Kuenneth expansion of [Delta] as triples (i, j, c) meaning c * e_i x e_j."""
        inv = self.inverse_pairing
        return [
            (i, j, inv[i][j])
            for i in range(self.rank)
            for j in range(self.rank)
            if inv[i][j]
        ]

    def diagonal_self_intersection(self) -> "SurfaceClass":
        """The restriction of [Delta] to the diagonal, sum of e_i * e_i^dual."""
        out = SurfaceClass.zero(self)
        for i, j, c in self.diagonal_terms():
            out = out + SurfaceClass(self, dict(self.table[i][j])) * c
        return out

    # classes
    def cls(self, value: str | Mapping[str, Fraction | int] | None = None) -> "SurfaceClass":
        """Build a class from a linear-combination string or a symbol->coef map."""
        if value is None:
            return SurfaceClass.zero(self)
        if isinstance(value, str):
            return SurfaceClass(self, parse_lincomb(value, self._index))
        return SurfaceClass(self, {self.index(s): Fraction(c) for s, c in value.items()})

    def basis_class(self, i: int) -> "SurfaceClass":
        return SurfaceClass(self, {i: Fraction(1)})

    def one(self) -> "SurfaceClass":
        return self.basis_class(0)

    @property
    def K(self) -> "SurfaceClass":
        return SurfaceClass(self, dict(self.canonical))

    @property
    def e(self) -> "SurfaceClass":
        return SurfaceClass(self, dict(self.euler))


class SurfaceClass:
    """An element of A*(S), possibly inhomogeneous."""

    __slots__ = ("surface", "coeffs")

    def __init__(self, surface: SurfaceData, coeffs: Mapping[int, Fraction] | None = None):
        self.surface = surface
        self.coeffs = {i: Fraction(c) for i, c in (coeffs or {}).items() if c}

    @classmethod
    def zero(cls, surface: SurfaceData) -> "SurfaceClass":
        return cls(surface, {})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SurfaceClass(self.surface, {0: Fraction(other)})
        if not isinstance(other, SurfaceClass):
            return NotImplemented
        return self.surface is other.surface and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "SurfaceClass") -> "SurfaceClass":
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, 0) + c
        return SurfaceClass(self.surface, out)

    def __neg__(self):
        return SurfaceClass(self.surface, {i: -c for i, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SurfaceClass(self.surface, {i: c * other for i, c in self.coeffs.items()})
        return mul(self, other)

    __rmul__ = __mul__

    def degree_part(self, d: int) -> "SurfaceClass":
        deg = self.surface.degrees
        return SurfaceClass(self.surface, {i: c for i, c in self.coeffs.items() if deg[i] == d})

    def degrees(self) -> set[int]:
        return {self.surface.degrees[i] for i in self.coeffs}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def __repr__(self):
        return format_lincomb(self.coeffs, self.surface.symbols)


def mul(x: SurfaceClass, y: SurfaceClass) -> SurfaceClass:
    s = x.surface
    out: dict[int, Fraction] = {}
    for i, a in x.coeffs.items():
        for j, b in y.coeffs.items():
            for k, c in s.table[i][j].items():
                out[k] = out.get(k, 0) + a * b * c
    return SurfaceClass(s, out)


def integrate(x: SurfaceClass) -> Fraction:
    """The integral over S; components below degree 2 contribute nothing."""
    ints = x.surface.integrals
    return sum((c * ints[i] for i, c in x.coeffs.items()), Fraction(0))


def todd(s: SurfaceData) -> SurfaceClass:
    """td(T_S) = 1 - K/2 + (K^2 + e)/12."""
    K = s.K
    return s.one() + K * Fraction(-1, 2) + (K * K + s.e) * Fraction(1, 12)


def todd_inverse(s: SurfaceData) -> SurfaceClass:
    """Formal inverse of the Todd class, truncated above degree 2."""
    t = todd(s)
    # t = 1 + u with u nilpotent of order 3: t^-1 = 1 - u + u^2
    u = t - s.one()
    return s.one() - u + u * u


# ---------------------------------------------------------------------------
# loading


_TERM = re.compile(r"^\s*(?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?(?P<sym>[A-Za-z_][\w']*)?\s*$")


def parse_lincomb(text: str, index: Mapping[str, int]) -> dict[int, Fraction]:
    text = text.strip()
    if not text:
        raise SurfaceError("empty linear combination")
    out: dict[int, Fraction] = {}
    for sign, body in _split_signed(text):
        m = _TERM.match(body)
        if not m or (m["coef"] is None and m["sym"] is None):
            raise SurfaceError(f"cannot parse term {body!r} in {text!r}")
        coef = Fraction(m["coef"]) if m["coef"] else Fraction(1)
        sym = m["sym"]
        if sym is None:
            i = 0
        elif sym not in index:
            raise SurfaceError(f"unknown basis symbol {sym!r} in {text!r}")
        else:
            i = index[sym]
        out[i] = out.get(i, 0) + sign * coef
    return {i: c for i, c in out.items() if c}


def _split_signed(text: str) -> Iterable[tuple[int, str]]:
    pieces = re.split(r"([+-])", text)
    sign = 1
    for piece in pieces:
        if piece == "+":
            continue
        if piece == "-":
            sign = -sign
            continue
        if piece.strip():
            yield sign, piece
            sign = 1


def format_lincomb(coeffs: Mapping[int, Fraction], symbols: tuple[str, ...]) -> str:
    if not coeffs:
        return "0"
    parts = []
    for i in sorted(coeffs):
        c = coeffs[i]
        if i == 0:
            body = str(abs(c))
        elif abs(c) == 1:
            body = symbols[i]
        else:
            body = f"{abs(c)}*{symbols[i]}"
        parts.append(("-" if c < 0 else "+", body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sgn, body in parts[1:]:
        text += f" {sgn} {body}"
    return text


def parse_surface(text: str) -> SurfaceData:
    """Parse a surface description document and validate it."""
    sections: dict[str, list[str]] = {}
    name = "S"
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head.upper() in SECTIONS and (head.isupper()):
            current = head.upper()
            if current in sections:
                raise SurfaceError(f"duplicate section {current} (line {lineno})")
            sections[current] = []
            if current == "NAME":
                name = rest.strip() or name
            elif rest.strip():
                sections[current].append(rest.strip())
            continue
        if current is None:
            raise SurfaceError(f"line {lineno}: content before any section header")
        sections[current].append(line)

    for sec in SECTIONS[1:]:
        if sec not in sections:
            raise SurfaceError(f"missing section {sec}")

    symbols, degrees = [], []
    for line in sections["BASIS"]:
        parts = line.split()
        if len(parts) != 2 or not parts[1].lstrip("-").isdigit():
            raise SurfaceError(f"bad BASIS entry {line!r}")
        if parts[0] in symbols:
            raise SurfaceError(f"duplicate basis symbol {parts[0]!r}")
        symbols.append(parts[0])
        degrees.append(int(parts[1]))
    for s, d in zip(symbols, degrees):
        if d not in (0, 1, 2):
            raise SurfaceError(f"degree violation: basis symbol {s!r} has degree {d}")
    units = [i for i, d in enumerate(degrees) if d == 0]
    if len(units) != 1:
        raise SurfaceError(f"expected exactly one degree-0 basis element, found {len(units)}")
    # unit first
    u = units[0]
    order = [u] + [i for i in range(len(symbols)) if i != u]
    symbols = [symbols[i] for i in order]
    degrees = [degrees[i] for i in order]
    index = {s: i for i, s in enumerate(symbols)}
    n = len(symbols)

    raw: dict[tuple[int, int], dict[int, Fraction]] = {}
    for line in sections["MULT"]:
        lhs, eq, rhs = line.partition("=")
        names = lhs.split()
        if not eq or len(names) != 2:
            raise SurfaceError(f"bad MULT entry {line!r}")
        for s in names:
            if s not in index:
                raise SurfaceError(f"unknown basis symbol {s!r} in MULT entry {line!r}")
        i, j = index[names[0]], index[names[1]]
        val = parse_lincomb(rhs, index)
        if (i, j) in raw and raw[i, j] != val:
            raise SurfaceError(f"conflicting MULT entries for {names[0]}*{names[1]}")
        if (j, i) in raw and raw[j, i] != val:
            raise SurfaceError(f"non-commutative table: {names[0]}*{names[1]} != {names[1]}*{names[0]}")
        raw[i, j] = val

    table = [[{} for _ in range(n)] for _ in range(n)]
    for i, j in product(range(n), repeat=2):
        if i == 0:
            table[i][j] = {j: Fraction(1)}
        elif j == 0:
            table[i][j] = {i: Fraction(1)}
        elif (i, j) in raw:
            table[i][j] = raw[i, j]
        elif (j, i) in raw:
            table[i][j] = raw[j, i]
    for (i, j), val in raw.items():
        if 0 in (i, j) and table[i][j] != val:
            raise SurfaceError(f"MULT entry {symbols[i]}*{symbols[j]} contradicts the unit")

    integrals = [Fraction(0)] * n
    for line in sections["INTEGRAL"]:
        lhs, eq, rhs = line.partition("=")
        s = lhs.strip()
        if not eq or s not in index:
            raise SurfaceError(f"bad INTEGRAL entry {line!r}")
        if degrees[index[s]] != 2:
            raise SurfaceError(f"degree violation: INTEGRAL given for {s!r} of degree {degrees[index[s]]}")
        integrals[index[s]] = Fraction(rhs.strip())

    canonical = parse_lincomb(" ".join(sections["CANONICAL"]), index)
    euler = parse_lincomb(" ".join(sections["EULER"]), index)
    return SurfaceData(
        name=name,
        symbols=tuple(symbols),
        degrees=tuple(degrees),
        table=tuple(tuple(row) for row in table),
        integrals=tuple(integrals),
        canonical=canonical,
        euler=euler,
    )


def load_surface(source: str | Path) -> SurfaceData:
    """Load a surface from a path, or one of the bundled names ``P2``, ``P1xP1``."""
    if isinstance(source, str) and source in BUNDLED:
        text = resources.files("hilbchow.data").joinpath(BUNDLED[source]).read_text()
        return parse_surface(text)
    return parse_surface(Path(source).read_text())


BUNDLED = {"P2": "p2.surface", "P1xP1": "p1xp1.surface"}


def _validate(s: SurfaceData) -> None:
    n = len(s.symbols)
    deg = s.degrees
    if deg[0] != 0 or any(d == 0 for d in deg[1:]):
        raise SurfaceError("basis must contain exactly one degree-0 element, the unit")
    for i, j in product(range(n), repeat=2):
        val = s.table[i][j]
        if val != s.table[j][i]:
            raise SurfaceError(f"non-commutative table: {s.symbols[i]}*{s.symbols[j]}")
        target = deg[i] + deg[j]
        for k, c in val.items():
            if c and deg[k] != target:
                raise SurfaceError(
                    f"degree violation: {s.symbols[i]}*{s.symbols[j]} has a term {s.symbols[k]} "
                    f"of degree {deg[k]}, expected {target}"
                )
    for i, j, k in product(range(1, n), repeat=3):
        left = _mul_vec(s.table, _mul_vec(s.table, {i: 1}, {j: 1}), {k: 1})
        right = _mul_vec(s.table, {i: 1}, _mul_vec(s.table, {j: 1}, {k: 1}))
        if left != right:
            raise SurfaceError(
                f"non-associative table at ({s.symbols[i]}, {s.symbols[j]}, {s.symbols[k]})"
            )
    for i, c in enumerate(s.integrals):
        if c and deg[i] != 2:
            raise SurfaceError(f"degree violation: integral of {s.symbols[i]} of degree {deg[i]}")
    for label, cls, d in (("canonical", s.canonical, 1), ("euler", s.euler, 2)):
        for i in cls:
            if deg[i] != d:
                raise SurfaceError(f"degree violation: {label} class has a term {s.symbols[i]}")
    try:
        _invert(s.pairing_matrix())
    except ZeroDivisionError:
        raise SurfaceError("degenerate pairing: the intersection pairing matrix is singular") from None


def _mul_vec(table, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    for i, a in x.items():
        for j, b in y.items():
            for k, c in table[i][j].items():
                out[k] = out.get(k, 0) + a * b * c
    return {k: c for k, c in out.items() if c}


def _invert(m: list[list[Fraction]]) -> list[list[Fraction]]:
    """Exact inverse over the rationals; ZeroDivisionError when singular."""
    mat = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m])
    if mat.det() == 0:
        raise ZeroDivisionError("singular matrix")
    inv = mat.inv()
    return [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(mat.cols)] for i in range(mat.rows)]
