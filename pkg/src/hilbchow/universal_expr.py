"""Symbolic universal classes on the Hilbert-scheme tower.

A :class:`UniversalExpr` is a rational combination of monomials

    ch_{j1}(O_{Z_{m1}}^{(i1)}) ... c_1(L)^a c_1(L')^b * (Kuenneth coefficient)

living on a stage of the tower (Hilb_n, Hilb_{n,n+1} or Hilb_{n-1,n,n+1})
times a product of S factors.  Labels that are free on the stage are
visible factors; every other label occurring in a monomial is *bound*: the
monomial stands for the push-forward along that factor.  So an expression
on ``Hilb(n)`` with no free labels is a universal class
``pi_*[ P(ch_j(O_Z^{(i)})) ]``.

Normal form of a monomial:

* ch_j(O_{Z_m}) vanishes for m = 0, for j < 2 (Z has codimension 2) and for
  j > 2m + 2 (above the dimension of Hilb_m x S);
* the Kuenneth part is normalized by :func:`kunneth.merge`, and generators on
  a linked label move to the centre of its component;
* a bound label linked to anything is integrated by the projection formula;
  a bound label without generators is integrated numerically;
* the surviving bound labels are isolated and get renumbered canonically
  above the largest free external label;
* monomials of degree above the ambient dimension (or the truncation
  override) are dropped.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from . import kunneth
from .kunneth import STAR, MultiFactorClass, label_str, merge, parse_label
from .surface_algebra import SurfaceClass, SurfaceData

HILB, NESTED1, NESTED2 = "hilb", "nested1", "nested2"
SCHEMA = "hilbchow.universal_expr/1"

# (chgens, c1(L) power, c1(L') power, content, links)
TermKey = tuple[tuple[tuple[int, int, int], ...], int, int, tuple[tuple[int, int], ...], tuple[tuple[int, int], ...]]


class StageError(ValueError):
    """A generator or operation is not allowed on the current stage."""


class SupportError(ValueError):
    """A push-forward was requested along a factor without a support guarantee."""


class ResidualGeneratorError(ValueError):
    """Lower-level generators survived where they must have been eliminated."""


@dataclass(frozen=True)
class Stage:
    """A space of the tower times S^externals (times S for a live free star).

    ``level`` is the lowest Hilbert level: Hilb(level), Nested1(level,
    level+1) or Nested2(level, level+1, level+2).
    """

    kind: str
    level: int
    externals: frozenset[int] = frozenset()
    star: bool = False

    def __post_init__(self):
        if self.kind not in (HILB, NESTED1, NESTED2):
            raise StageError(f"unknown stage kind {self.kind!r}")
        if self.level < 0:
            raise StageError("negative level")
        if self.kind != HILB and not self.star:
            raise StageError("the support point is live on every nested stage")
        object.__setattr__(self, "externals", frozenset(self.externals))

    @classmethod
    def hilb(cls, n, externals=(), star=False):
        return cls(HILB, n, frozenset(externals), star)

    @property
    def levels(self) -> tuple[int, ...]:
        span = {HILB: 1, NESTED1: 2, NESTED2: 3}[self.kind]
        return tuple(range(self.level, self.level + span))

    @property
    def top(self) -> int:
        return self.levels[-1]

    @property
    def free(self) -> frozenset[int]:
        return self.externals | {STAR} if self.star else self.externals

    @property
    def base(self) -> int:
        return max(self.externals, default=0)

    def dimension(self) -> int:
        n = self.level
        dim = {HILB: 2 * n, NESTED1: 2 * n + 2, NESTED2: 2 * n + 3}[self.kind]
        dim += 2 * len(self.externals)
        if self.kind == HILB and self.star:
            dim += 2
        return dim

    def with_externals(self, externals) -> "Stage":
        return replace(self, externals=frozenset(externals))

    def __str__(self):
        name = {HILB: "Hilb", NESTED1: "Nested1", NESTED2: "Nested2"}[self.kind]
        text = f"{name}({','.join(map(str, self.levels))})"
        labels = sorted(self.externals)
        if self.star:
            labels.append(STAR)
        if labels:
            text += " x S[" + ",".join(label_str(l) for l in labels) + "]"
        return text

    def to_dict(self):
        return {"kind": self.kind, "level": self.level,
                "externals": sorted(self.externals), "star": self.star}

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], d["level"], frozenset(d["externals"]), d["star"])


def _term_labels(key: TermKey) -> set[int]:
    chg, _, _, content, links = key
    out = {l for l, _, _ in chg}
    out.update(l for l, _ in content)
    for a, b in links:
        out.add(a)
        out.add(b)
    return out


def _canon(
    surface: SurfaceData,
    stage: Stage,
    limit: int,
    chg: Iterable[tuple[int, int, int]],
    lp: int,
    lpp: int,
    content: Iterable[tuple[int, int]],
    links: Iterable[tuple[int, int]],
    coeff: Fraction,
    out: dict,
) -> None:
    """Add coeff times the normal form of one raw term to ``out``."""
    images = _canon_terms(surface, stage, limit, tuple(chg), lp, lpp, tuple(content), tuple(links))
    for key, c in images:
        out[key] = out.get(key, 0) + coeff * c


@lru_cache(maxsize=1 << 16)
def _canon_terms(surface, stage, limit, chg, lp, lpp, content, links) -> tuple:
    out: dict = {}
    chg = list(chg)
    levels = stage.levels
    for _, m, j in chg:
        if m == 0 or j < 2 or j > 2 * m + 2:
            return ()
        if m not in levels:
            raise StageError(f"ch generator of level {m} on stage {stage}")
    if lp and stage.kind == HILB:
        raise StageError(f"c1(L) on stage {stage}")
    if lpp and stage.kind != NESTED2:
        raise StageError(f"c1(L') on stage {stage}")
    free = stage.free
    content = list(content)
    links = list(links)
    labels = {l for l, _, _ in chg}
    labels.update(l for l, _ in content)
    for a, b in links:
        labels.add(a)
        labels.add(b)
    if STAR in labels and not stage.star:
        raise StageError(f"star label on stage {stage} without a live support point")
    drop = labels - free
    rep, expanded = merge(surface, content, links, drop)
    if rep:
        chg = [(rep.get(l, l), m, j) for l, m, j in chg]
    gen_labels = {l for l, _, _ in chg}
    bound_with_gens = sorted(gen_labels - free)
    base_deg = sum(j for _, _, j in chg) + lp + lpp
    degrees = surface.degrees
    integrals = surface.integrals
    for cont, lk, c in expanded:
        for lab in [l for l in cont if l not in free and l not in gen_labels]:
            c = c * integrals[cont.pop(lab)]
            if not c:
                break
        if not c:
            continue
        deg = base_deg + sum(degrees[i] for i in cont.values()) + 2 * len(lk) - 2 * len(bound_with_gens)
        if deg > limit:
            continue
        if bound_with_gens:
            sig = {
                b: (tuple(sorted((m, j) for l, m, j in chg if l == b)), cont.get(b, 0))
                for b in bound_with_gens
            }
            order = sorted(bound_with_gens, key=lambda b: sig[b])
            start = stage.base
            ren = {b: start + 1 + n for n, b in enumerate(order)}
            chg_t = tuple(sorted((ren.get(l, l), m, j) for l, m, j in chg))
            cont_t = tuple(sorted((ren.get(l, l), i) for l, i in cont.items()))
        else:
            chg_t = tuple(sorted(chg))
            cont_t = tuple(sorted(cont.items()))
        key = (chg_t, lp, lpp, cont_t, lk)
        out[key] = out.get(key, 0) + c
    return tuple((k, c) for k, c in out.items() if c)


def _shift_bound(key: TermKey, free: frozenset[int], start: int) -> tuple[TermKey, list[int]]:
    """Move the bound labels of a term to start+1, start+2, ..."""
    labels = _term_labels(key)
    bound = sorted(labels - free)
    if not bound:
        return key, []
    ren = {b: start + 1 + n for n, b in enumerate(bound)}
    chg, lp, lpp, content, links = key
    new = (
        tuple((ren.get(l, l), m, j) for l, m, j in chg),
        lp,
        lpp,
        tuple((ren.get(l, l), i) for l, i in content),
        tuple((ren.get(a, a), ren.get(b, b)) for a, b in links),
    )
    return new, [ren[b] for b in bound]


def _max_label(labels: Iterable[int]) -> int:
    return max((l for l in labels if l != STAR), default=0)


class UniversalExpr:
    """A normalized symbolic class on a stage of the tower."""

    __slots__ = ("surface", "stage", "terms", "truncation", "support")

    def __init__(
        self,
        surface: SurfaceData,
        stage: Stage,
        terms: Mapping[TermKey, Fraction] | None = None,
        truncation: int | None = None,
        support: Iterable[int] = (),
        *,
        normalized: bool = False,
    ):
        self.surface = surface
        self.stage = stage
        self.truncation = truncation
        self.support = frozenset(support)
        if normalized:
            self.terms = {k: c for k, c in (terms or {}).items() if c}
        else:
            out: dict = {}
            limit = self.limit
            for (chg, lp, lpp, content, links), c in (terms or {}).items():
                _canon(surface, stage, limit, chg, lp, lpp, content, links, Fraction(c), out)
            self.terms = {k: c for k, c in out.items() if c}

    # construction -----------------------------------------------------------
    @property
    def limit(self) -> int:
        dim = self.stage.dimension()
        return dim if self.truncation is None else min(dim, self.truncation)

    def _new(self, terms, stage=None, support=None, normalized=True) -> "UniversalExpr":
        return UniversalExpr(
            self.surface,
            stage or self.stage,
            terms,
            self.truncation,
            self.support if support is None else support,
            normalized=normalized,
        )

    @classmethod
    def one(cls, surface, stage, truncation=None) -> "UniversalExpr":
        return cls(surface, stage, {((), 0, 0, (), ()): Fraction(1)}, truncation)

    @classmethod
    def zero(cls, surface, stage, truncation=None) -> "UniversalExpr":
        return cls(surface, stage, {}, truncation, normalized=True)

    def like(self, terms: Mapping[TermKey, Fraction]) -> "UniversalExpr":
        """A new expression on the same stage from raw (unnormalized) terms."""
        return UniversalExpr(self.surface, self.stage, terms, self.truncation, self.support)

    def unit(self) -> "UniversalExpr":
        return self.like({((), 0, 0, (), ()): Fraction(1)})

    def chgen(self, level: int, label: int, degree: int) -> "UniversalExpr":
        return self.like({(((label, level, degree),), 0, 0, (), ()): Fraction(1)})

    def c1_L(self, power: int = 1) -> "UniversalExpr":
        return self.like({((), power, 0, (), ()): Fraction(1)})

    def c1_Lp(self, power: int = 1) -> "UniversalExpr":
        return self.like({((), 0, power, (), ()): Fraction(1)})

    def coefficient(self, x: MultiFactorClass | SurfaceClass, label: int | None = None) -> "UniversalExpr":
        if isinstance(x, SurfaceClass):
            x = kunneth.promote(x, label)
        return self.like({((), 0, 0, content, links): c for (content, links), c in x.terms.items()})

    # arithmetic ---------------------------------------------------------------
    def _check_same(self, other: "UniversalExpr"):
        if other.stage != self.stage:
            raise StageError(f"stage mismatch: {self.stage} vs {other.stage}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.unit() * other
        self._check_same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        if not self.terms:
            support = other.support
        elif not other.terms:
            support = self.support
        else:
            support = self.support & other.support
        trunc = _min_trunc(self.truncation, other.truncation)
        return UniversalExpr(self.surface, self.stage, out, trunc, support, normalized=True)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self._new({})
            return self._new({k: c * other for k, c in self.terms.items()})
        return mul_expr(self, other)

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, UniversalExpr):
            return NotImplemented
        return self.stage == other.stage and self.terms == other.terms

    def __hash__(self):
        return hash((self.stage, frozenset(self.terms.items())))

    # inspection -------------------------------------------------------------
    def degree_of(self, key: TermKey) -> int:
        chg, lp, lpp, content, links = key
        nbound = len({l for l, _, _ in chg} - self.stage.free)
        return (sum(j for _, _, j in chg) + lp + lpp
                + sum(self.surface.degrees[i] for _, i in content) + 2 * len(links) - 2 * nbound)

    def degrees(self) -> set[int]:
        return {self.degree_of(k) for k in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree_part(self, d: int) -> "UniversalExpr":
        return self._new({k: c for k, c in self.terms.items() if self.degree_of(k) == d})

    def is_zero(self) -> bool:
        return not self.terms

    def labels(self) -> set[int]:
        out = set()
        for k in self.terms:
            out |= _term_labels(k)
        return out

    def bound_labels(self) -> set[int]:
        return self.labels() - self.stage.free

    def generator_levels(self) -> set[int]:
        return {m for k in self.terms for _, m, _ in k[0]}

    def has_line_classes(self) -> bool:
        return any(k[1] or k[2] for k in self.terms)

    # stage changes ------------------------------------------------------------
    def retag(self, stage: Stage, mapping: Mapping[int, int] | None = None,
              support: Iterable[int] | None = None) -> "UniversalExpr":
        """Reinterpret on another stage, renaming free labels by ``mapping``.

        Bound labels are moved out of the way first so they cannot be
        captured by a label that is free on the new stage.
        """
        mapping = dict(mapping or {})
        start = max(_max_label(self.labels()), _max_label(stage.free), _max_label(mapping.values()))
        raw = {}
        for key, c in self.terms.items():
            key, _ = _shift_bound(key, self.stage.free, start)
            if mapping:
                key = _relabel_key(key, mapping)
            raw[key] = raw.get(key, 0) + c
        if support is None:
            support = {mapping.get(l, l) for l in self.support}
        return UniversalExpr(self.surface, stage, raw, self.truncation, support)

    def close(self, labels: Iterable[int], stage: Stage | None = None) -> "UniversalExpr":
        """Push forward along the given free factors (symbolically where needed)."""
        labels = set(labels)
        stage = stage or self.stage.with_externals(self.stage.externals - labels)
        if stage.free & labels:
            raise StageError("closed labels must not stay free")
        start = max(_max_label(self.labels()), _max_label(stage.free))
        raw = {}
        for key, c in self.terms.items():
            present = _term_labels(key)
            if not labels <= present:
                continue  # integrand constant along a closed factor
            key, _ = _shift_bound(key, self.stage.free, start)
            raw[key] = raw.get(key, 0) + c
        return UniversalExpr(self.surface, stage, raw, self.truncation, self.support - labels)

    # rendering ------------------------------------------------------------------
    def __repr__(self):
        return render(self)


def _min_trunc(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _relabel_key(key: TermKey, mapping: Mapping[int, int]) -> TermKey:
    chg, lp, lpp, content, links = key
    return (
        tuple((mapping.get(l, l), m, j) for l, m, j in chg),
        lp,
        lpp,
        tuple((mapping.get(l, l), i) for l, i in content),
        tuple((mapping.get(a, a), mapping.get(b, b)) for a, b in links),
    )


def mul_expr(x: UniversalExpr, y: UniversalExpr) -> UniversalExpr:
    """Product of classes on the same stage.

    Shared free labels multiply coefficients; bound labels of the two
    factors are kept apart (each factor has its own push-forward).
    """
    x._check_same(y)
    stage = x.stage
    free = stage.free
    trunc = _min_trunc(x.truncation, y.truncation)
    limit = stage.dimension() if trunc is None else min(stage.dimension(), trunc)
    surface = x.surface
    out: dict = {}
    ydeg = {k: y.degree_of(k) for k in y.terms}
    xdeg = {k: x.degree_of(k) for k in x.terms}
    for kx, cx in x.terms.items():
        start = max(_max_label(_term_labels(kx)), stage.base)
        for ky, cy in y.terms.items():
            if xdeg[kx] + ydeg[ky] > limit:
                continue
            ky2, _ = _shift_bound(ky, free, start)
            _canon(
                surface, stage, limit,
                kx[0] + ky2[0], kx[1] + ky2[1], kx[2] + ky2[2],
                kx[3] + ky2[3], kx[4] + ky2[4],
                cx * cy, out,
            )
    return UniversalExpr(surface, stage, out, trunc, x.support | y.support, normalized=True)


def normalize(x: UniversalExpr) -> UniversalExpr:
    """Recompute the normal form (idempotent on already normalized input)."""
    return UniversalExpr(x.surface, x.stage, x.terms, x.truncation, x.support)


def pad(x: UniversalExpr) -> UniversalExpr:
    """Rewrite a class over S^k as one over S^{k+1} via Delta(k, k+1)."""
    k = x.stage.base
    if k == 0:
        raise StageError("padding needs at least one external factor")
    if x.stage.externals != frozenset(range(1, k + 1)):
        raise StageError("padding expects externals 1..k")
    stage = x.stage.with_externals(x.stage.externals | {k + 1})
    support = set(x.support)
    if k in support:
        support.add(k + 1)
    y = x.retag(stage, support=support)
    delta = y.like({((), 0, 0, (), ((k, k + 1),)): Fraction(1)})
    return mul_expr(y, delta)


def push_over_factors(x: UniversalExpr, keep: int, *, require_support: bool = True) -> UniversalExpr:
    """Integrate out the external factors keep+1..k."""
    k = x.stage.base
    if x.stage.externals != frozenset(range(1, k + 1)):
        raise StageError("push_over_factors expects externals 1..k")
    if not 0 <= keep <= k:
        raise ValueError(f"keep must lie in 0..{k}")
    drop = set(range(keep + 1, k + 1))
    if require_support and not drop <= x.support:
        missing = sorted(drop - x.support)
        raise SupportError(f"no support guarantee along factors {missing}")
    top = x.stage.top
    for key in x.terms:
        for l, m, _ in key[0]:
            if l in drop and m != top:
                raise ResidualGeneratorError(
                    f"generator of level {m} on integrated factor {l} (stage level {top})"
                )
    return x.close(drop)


def substitute(x: UniversalExpr, rule: Callable[[int, int, int, "UniversalExpr"], "UniversalExpr | None"]) -> UniversalExpr:
    """Apply a ring substitution to ch generators, term by term.

    ``rule(label, level, degree, unit)`` returns the image of the generator
    as an expression on the stage of ``unit`` (in which every label of the
    term is free), or None to keep it.
    """
    stage = x.stage
    result = UniversalExpr.zero(x.surface, stage, x.truncation)
    result.support = x.support
    pieces: dict[frozenset, dict] = {}
    for key, c in x.terms.items():
        bound = frozenset(_term_labels(key) - stage.free)
        pieces.setdefault(bound, {})[key] = c
    for bound, terms in pieces.items():
        st2 = stage.with_externals(stage.externals | bound)
        unit = UniversalExpr.one(x.surface, st2, x.truncation)
        unit.support = x.support | bound
        cache: dict = {}
        images: dict = {}
        acc = UniversalExpr.zero(x.surface, st2, x.truncation)
        for key, c in terms.items():
            chg, lp, lpp, content, links = key
            keep, hit = [], []
            for g in chg:
                if g not in images:
                    images[g] = rule(*g, unit)
                (keep if images[g] is None else hit).append(g)
            base = unit.like({(tuple(keep), lp, lpp, content, links): c})
            if hit:
                hk = tuple(hit)
                if hk not in cache:
                    prod = unit
                    for g in hit:
                        prod = prod * images[g]
                    cache[hk] = prod
                base = base * cache[hk]
            acc = acc + base
        acc.support = unit.support
        closed = acc.close(bound, stage)
        result = result + closed
    result.support = x.support
    return result


def collect_powers(x: UniversalExpr, which: str) -> dict[int, UniversalExpr]:
    """Split x = sum_a c1(line)^a * R_a, with ``which`` in {'L', 'Lp'}."""
    idx = 1 if which == "L" else 2
    parts: dict[int, dict] = {}
    for key, c in x.terms.items():
        a = key[idx]
        k = list(key)
        k[idx] = 0
        parts.setdefault(a, {})[tuple(k)] = c
    return {a: x._new(t) for a, t in sorted(parts.items())}


# ---------------------------------------------------------------------------
# text and structured forms


def _render_term(surface: SurfaceData, stage: Stage, key: TermKey) -> list[str]:
    chg, lp, lpp, content, links = key
    parts = []
    if lpp:
        parts.append("c1(L')" + (f"^{lpp}" if lpp > 1 else ""))
    if lp:
        parts.append("c1(L)" + (f"^{lp}" if lp > 1 else ""))
    for l, m, j in chg:
        z = "O_Z" if stage.kind == HILB and m == stage.level else f"O_Z_{m}"
        parts.append(f"ch_{j}({z}[{label_str(l)}])")
    parts += kunneth.render_monomial(surface, content, links)
    return parts


def render(x: UniversalExpr) -> str:
    items = [(c, _render_term(x.surface, x.stage, k)) for k, c in sorted(x.terms.items())]
    body = kunneth.format_sum(items)
    if x.bound_labels():
        return f"pi_*[ {body} ]"
    return body


def render_lines(x: UniversalExpr) -> list[str]:
    """One line per term with its degree annotation."""
    out = []
    for k, c in sorted(x.terms.items()):
        text = kunneth.format_sum([(c, _render_term(x.surface, x.stage, k))])
        out.append(f"[deg {x.degree_of(k)}] {text}")
    return out


_GEN = re.compile(r"ch_(\d+)\(\s*O_Z(?:_(\d+))?\s*\[\s*(\d+|\*)\s*\]\s*\)")
_LINE = re.compile(r"c1\((L'?)\)(?:\^(\d+))?")


def parse(surface: SurfaceData, stage: Stage, text: str, truncation: int | None = None,
          support: Iterable[int] = ()) -> UniversalExpr:
    body = text.strip()
    m = re.fullmatch(r"pi_\*\[(.*)\]", body, re.S)
    if m:
        body = m[1]
    raw: dict = {}
    for sign, term in kunneth.split_terms(body):
        coeff = Fraction(sign)
        chg, content, links = [], [], []
        lp = lpp = 0
        for f in kunneth.split_factors(term):
            g = _GEN.fullmatch(f)
            if g:
                level = int(g[2]) if g[2] else stage.top
                chg.append((parse_label(g[3]), level, int(g[1])))
                continue
            ln = _LINE.fullmatch(f)
            if ln:
                p = int(ln[2] or 1)
                if ln[1] == "L":
                    lp += p
                else:
                    lpp += p
                continue
            cont, lk, c = kunneth.parse_factor(surface, f)
            content += cont
            links += lk
            coeff *= c
        key = (tuple(chg), lp, lpp, tuple(content), tuple(links))
        raw[key] = raw.get(key, 0) + coeff
    return UniversalExpr(surface, stage, raw, truncation, support)


def _label_json(l: int):
    return "*" if l == STAR else l


def _label_from_json(v) -> int:
    return STAR if v == "*" else int(v)


def to_dict(x: UniversalExpr) -> dict:
    terms = []
    for k, c in sorted(x.terms.items()):
        chg, lp, lpp, content, links = k
        terms.append({
            "coeff": str(c),
            "degree": x.degree_of(k),
            "ch": [[m, _label_json(l), j] for l, m, j in chg],
            "c1_L": lp,
            "c1_Lp": lpp,
            "symbols": [[_label_json(l), x.surface.symbols[i]] for l, i in content],
            "links": [[_label_json(a), _label_json(b)] for a, b in links],
        })
    return {
        "schema": SCHEMA,
        "surface": x.surface.name,
        "stage": x.stage.to_dict(),
        "truncation": x.truncation,
        "support": sorted(_label_json(l) for l in x.support if l != STAR) + (["*"] if STAR in x.support else []),
        "terms": terms,
    }


def from_dict(surface: SurfaceData, d: dict) -> UniversalExpr:
    if d.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {d.get('schema')!r}, expected {SCHEMA!r}")
    stage = Stage.from_dict(d["stage"])
    raw: dict = {}
    for t in d["terms"]:
        key = (
            tuple((_label_from_json(l), m, j) for m, l, j in t["ch"]),
            t["c1_L"],
            t["c1_Lp"],
            tuple((_label_from_json(l), surface.index(s)) for l, s in t["symbols"]),
            tuple((_label_from_json(a), _label_from_json(b)) for a, b in t["links"]),
        )
        raw[key] = raw.get(key, 0) + Fraction(t["coeff"])
    support = {_label_from_json(l) for l in d.get("support", [])}
    return UniversalExpr(surface, stage, raw, d.get("truncation"), support)


def dumps(x: UniversalExpr) -> str:
    return json.dumps(to_dict(x), indent=2)


def loads(surface: SurfaceData, text: str) -> UniversalExpr:
    return from_dict(surface, json.loads(text))
