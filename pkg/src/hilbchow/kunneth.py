"""The tensor algebra A*(S^k) over labeled factors.

Factor labels are plain integers: ``i >= 1`` is the external factor x_i and
``STAR`` (a large sentinel, so it sorts after every external) is the support
point of the current nested correspondence.

A monomial is a pair ``(content, links)``: ``content`` assigns one basis
index to some labels, ``links`` is a tuple of diagonal classes Delta(a, b).
Links are kept symbolic.  In normal form every linked component of labels is
a star centred at its smallest label, which carries the whole content of the
component; each superfluous link (a cycle, or a repeated link) contributes
one copy of the diagonal self-intersection on the centre.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .surface_algebra import SurfaceClass, SurfaceData, todd_inverse

STAR = 1 << 30

Content = tuple[tuple[int, int], ...]
Links = tuple[tuple[int, int], ...]
Monomial = tuple[Content, Links]


class KunnethError(ValueError):
    pass


def label_str(label: int) -> str:
    return "*" if label == STAR else str(label)


def parse_label(text: str) -> int:
    text = text.strip()
    if text in ("*", "star"):
        return STAR
    i = int(text)
    if i < 1:
        raise KunnethError(f"external labels are positive integers, got {i}")
    return i


def merge(
    surface: SurfaceData,
    content: Iterable[tuple[int, int]],
    links: Iterable[tuple[int, int]],
    drop: frozenset[int] | set[int] = frozenset(),
) -> tuple[dict[int, int], list[tuple[dict[int, int], Links, Fraction]]]:
    """Bring a raw product of symbols and diagonal links into normal form.

    Labels in ``drop`` are integrated out wherever the projection formula
    allows it, i.e. whenever they are linked to another label.  A component
    made only of dropped labels keeps one of them (its smallest).

    Returns the map sending every label of a nontrivial component to its
    centre, and the expanded list of ``(content, links, coeff)``.
    """
    parent: dict[int, int] = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    link_list = list(links)
    for a, b in link_list:
        parent.setdefault(a, a)
        parent.setdefault(b, b)
    comps_edges: dict[int, int] = {}
    for a, b in link_list:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    for a, b in link_list:
        r = find(a)
        comps_edges[r] = comps_edges.get(r, 0) + 1

    members: dict[int, list[int]] = {}
    for a in parent:
        members.setdefault(find(a), []).append(a)

    rep: dict[int, int] = {}
    new_links: list[tuple[int, int]] = []
    extra: dict[int, int] = {}
    for root, labs in members.items():
        kept = [x for x in labs if x not in drop]
        centre = min(kept) if kept else min(labs)
        for x in labs:
            rep[x] = centre
        for x in kept:
            if x != centre:
                new_links.append((centre, x))
        surplus = comps_edges.get(root, 0) - (len(labs) - 1)
        if surplus:
            extra[centre] = surplus

    # gather symbols per centre
    symbols: dict[int, list[int]] = {}
    for lab, idx in content:
        c = rep.get(lab, lab)
        if idx:
            symbols.setdefault(c, []).append(idx)
    for c, m in extra.items():
        symbols.setdefault(c, []).extend([-1] * m)

    per_label: list[tuple[int, dict[int, Fraction]]] = []
    for lab in sorted(symbols):
        vec = {0: Fraction(1)}
        for idx in symbols[lab]:
            factor = _self_intersection(surface) if idx == -1 else {idx: Fraction(1)}
            vec = _mul_vec(surface, vec, factor)
            if not vec:
                return rep, []
        per_label.append((lab, vec))

    links_t = tuple(sorted(new_links))
    out = []
    choices = [list(v.items()) for _, v in per_label]
    labs = [lab for lab, _ in per_label]
    for combo in product(*choices):
        coeff = Fraction(1)
        cont = {}
        for lab, (idx, c) in zip(labs, combo):
            coeff *= c
            if idx:
                cont[lab] = idx
        out.append((cont, links_t, coeff))
    return rep, out


_SELF: dict[int, dict[int, Fraction]] = {}


def _self_intersection(surface: SurfaceData) -> dict[int, Fraction]:
    key = id(surface)
    if key not in _SELF:
        _SELF[key] = surface.diagonal_self_intersection().coeffs
    return _SELF[key]


def _mul_vec(surface, x, y):
    out: dict[int, Fraction] = {}
    for i, a in x.items():
        for j, b in y.items():
            for k, c in surface.table[i][j].items():
                out[k] = out.get(k, 0) + a * b * c
    return {k: c for k, c in out.items() if c}


class MultiFactorClass:
    """A rational combination of normal-form Kuenneth monomials."""

    __slots__ = ("surface", "terms")

    def __init__(self, surface: SurfaceData, terms: Mapping[Monomial, Fraction] | None = None):
        self.surface = surface
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def one(cls, surface):
        return cls(surface, {((), ()): Fraction(1)})

    @classmethod
    def from_raw(cls, surface, raw: Iterable[tuple[Iterable, Iterable, Fraction]], drop=frozenset()):
        out: dict[Monomial, Fraction] = {}
        for content, links, coeff in raw:
            _, expanded = merge(surface, content, links, drop)
            for cont, lk, c in expanded:
                key = (tuple(sorted(cont.items())), lk)
                out[key] = out.get(key, 0) + coeff * c
        return cls(surface, out)

    def labels(self) -> set[int]:
        out = set()
        for content, links in self.terms:
            out.update(l for l, _ in content)
            for a, b in links:
                out.update((a, b))
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiFactorClass):
            return NotImplemented
        return self.surface is other.surface and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return MultiFactorClass(self.surface, out)

    def __neg__(self):
        return MultiFactorClass(self.surface, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MultiFactorClass(self.surface, {m: c * other for m, c in self.terms.items()})
        raw = [
            (c1 + c2, l1 + l2, a * b)
            for (c1, l1), a in self.terms.items()
            for (c2, l2), b in other.terms.items()
        ]
        return MultiFactorClass.from_raw(self.surface, raw)

    __rmul__ = __mul__

    def degree_of(self, mono: Monomial) -> int:
        deg = self.surface.degrees
        content, links = mono
        return sum(deg[i] for _, i in content) + 2 * len(links)

    def degree_part(self, d: int) -> "MultiFactorClass":
        return MultiFactorClass(self.surface, {m: c for m, c in self.terms.items() if self.degree_of(m) == d})

    def degrees(self) -> set[int]:
        return {self.degree_of(m) for m in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return render(self)


def promote(x: SurfaceClass, label: int) -> MultiFactorClass:
    """Pull a class on S back along the projection to the given factor."""
    terms = {}
    for i, c in x.coeffs.items():
        terms[(((label, i),) if i else (), ())] = c
    return MultiFactorClass(x.surface, terms)


def diagonal_class(surface: SurfaceData, a: int, b: int, expand: bool = False) -> MultiFactorClass:
    """[Delta(a, b)]; with ``expand`` the explicit dual-basis Kuenneth sum."""
    if a == b:
        raise KunnethError("diagonal_class needs two distinct labels")
    d = MultiFactorClass(surface, {((), (tuple(sorted((a, b))),)): Fraction(1)})
    return expand_links(d) if expand else d


def expand_links(x: MultiFactorClass) -> MultiFactorClass:
    """Rewrite every diagonal link as its dual-basis sum of symbols."""
    s = x.surface
    dterms = s.diagonal_terms()
    raw = []
    for (content, links), coeff in x.terms.items():
        for choice in product(dterms, repeat=len(links)):
            cont = list(content)
            c = coeff
            for (a, b), (i, j, v) in zip(links, choice):
                cont.append((a, i))
                cont.append((b, j))
                c *= v
            raw.append((cont, (), c))
    return MultiFactorClass.from_raw(s, raw)


def ch_diagonal(surface: SurfaceData, a: int, b: int) -> MultiFactorClass:
    """ch(O_Delta) = Delta(a,b) * td(S)^{-1} placed on a."""
    if a == b:
        raise KunnethError("ch_diagonal needs two distinct labels")
    return diagonal_class(surface, a, b) * promote(todd_inverse(surface), a)


def integrate_factor(x: MultiFactorClass, label: int) -> MultiFactorClass:
    """Push forward along the named factor."""
    s = x.surface
    out: dict[Monomial, Fraction] = {}
    drop = frozenset((label,))
    for (content, links), coeff in x.terms.items():
        rep, expanded = merge(s, content, links, drop)
        isolated = rep.get(label, label) == label
        for cont, lk, c in expanded:
            if isolated:
                c *= s.integrals[cont.pop(label, 0)]
            if not c:
                continue
            key = (tuple(sorted(cont.items())), lk)
            out[key] = out.get(key, 0) + coeff * c
    return MultiFactorClass(s, out)


def relabel(x: MultiFactorClass, mapping: Mapping[int, int]) -> MultiFactorClass:
    raw = []
    for (content, links), c in x.terms.items():
        cont = [(mapping.get(l, l), i) for l, i in content]
        lk = [(mapping.get(a, a), mapping.get(b, b)) for a, b in links]
        raw.append((cont, lk, c))
    return MultiFactorClass.from_raw(x.surface, raw)


def star_to_external(x: MultiFactorClass, i: int) -> MultiFactorClass:
    """Materialize the support point as the external factor i."""
    labels = x.labels()
    if i in labels:
        raise KunnethError(f"label clash: {i} already occurs")
    return relabel(x, {STAR: i})


def external_to_star(x: MultiFactorClass, i: int) -> MultiFactorClass:
    """Restrict factor i to the support point (graph restriction)."""
    labels = x.labels()
    if STAR in labels:
        raise KunnethError("label clash: the star label already occurs")
    return relabel(x, {i: STAR})


def to_surface_class(x: MultiFactorClass, label: int) -> SurfaceClass:
    """Read off a class living on a single factor."""
    coeffs: dict[int, Fraction] = {}
    for (content, links), c in x.terms.items():
        if links or any(l != label for l, _ in content):
            raise KunnethError("class is not supported on a single factor")
        idx = content[0][1] if content else 0
        coeffs[idx] = coeffs.get(idx, 0) + c
    return SurfaceClass(x.surface, coeffs)


# ---------------------------------------------------------------------------
# text form:  3/2*h[1]*pt[2] + Delta(1,2)*h[1] - 1

_FACTOR = re.compile(
    r"""\s*(?:
        (?P<delta>Delta\(\s*(?P<da>\d+|\*)\s*,\s*(?P<db>\d+|\*)\s*\))
      | (?P<sym>[A-Za-z_][\w']*)(?:\^(?P<pow>\d+))?\[(?P<lab>\d+|\*)\]
      | (?P<num>\d+(?:/\d+)?)
    )\s*""",
    re.VERBOSE,
)


def split_terms(text: str) -> list[tuple[int, str]]:
    """Split a sum at top-level signs, ignoring signs inside brackets."""
    out, depth, buf, sign = [], 0, "", 1
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and ch in "+-":
            if buf.strip():
                out.append((sign, buf))
                sign = 1
            buf = ""
            if ch == "-":
                sign = -sign
            continue
        buf += ch
    if buf.strip():
        out.append((sign, buf))
    return out


def split_factors(term: str) -> list[str]:
    out, depth, buf = [], 0, ""
    for ch in term:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append(buf)
            buf = ""
            continue
        buf += ch
    out.append(buf)
    return [f.strip() for f in out if f.strip()]


def parse_factor(surface: SurfaceData, text: str) -> tuple[list, list, Fraction]:
    """One factor of a product: ``sym[l]``, ``sym^p[l]``, ``Delta(a,b)`` or a rational."""
    m = _FACTOR.fullmatch(text)
    if not m:
        raise KunnethError(f"cannot parse factor {text!r}")
    if m["delta"]:
        a, b = parse_label(m["da"]), parse_label(m["db"])
        if a == b:
            raise KunnethError("Delta needs two distinct labels")
        return [], [(a, b)], Fraction(1)
    if m["sym"]:
        idx = surface.index(m["sym"])
        return [(parse_label(m["lab"]), idx)] * int(m["pow"] or 1), [], Fraction(1)
    return [], [], Fraction(m["num"])


def parse(surface: SurfaceData, text: str) -> MultiFactorClass:
    raw = []
    for sign, term in split_terms(text):
        coeff = Fraction(sign)
        content, links = [], []
        for f in split_factors(term):
            cont, lk, c = parse_factor(surface, f)
            content += cont
            links += lk
            coeff *= c
        raw.append((content, links, coeff))
    return MultiFactorClass.from_raw(surface, raw)


def render_monomial(surface: SurfaceData, content: Content, links: Links) -> list[str]:
    parts = [f"{surface.symbols[i]}[{label_str(l)}]" for l, i in content]
    parts += [f"Delta({label_str(a)},{label_str(b)})" for a, b in links]
    return parts


def format_sum(items: list[tuple[Fraction, list[str]]]) -> str:
    if not items:
        return "0"
    text = ""
    for n, (c, parts) in enumerate(items):
        mag = abs(c)
        body = "*".join(parts)
        if not body:
            body = str(mag)
        elif mag != 1:
            body = f"{mag}*{body}"
        if n == 0:
            text = ("-" if c < 0 else "") + body
        else:
            text += (" - " if c < 0 else " + ") + body
    return text


def render(x: MultiFactorClass) -> str:
    items = [(c, render_monomial(x.surface, *m)) for m, c in sorted(x.terms.items())]
    return format_sum(items)
