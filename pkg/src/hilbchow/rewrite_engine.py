"""Rewriting Nakajima monomials on the vacuum into universal classes.

One creation operator is resolved through the nested Hilbert schemes as

    q_k = (p_+ x p_S)_* (pi_{+*} pi_-^*)^{k-1} p_-^*

and each step is a rule on :class:`UniversalExpr`:

* ``p_-^*``, ``pi_-^*``: retagging; pulling back along pi_- turns the line
  class L of the lower pair into L' of the triple.
* ``ses``: ch(O_{Z_lower}) = ch(O_{Z_upper}) - exp(c_1(line)) ch(O_Delta)(star, i)
  removes every lower-level generator.
* ``pi_+*``: c_1(L')^a -> (-1)^a c_{a+1}(I|_star (x) w^-1 - L (x) w^-1)
* ``(p_+ x p_S)_*``: c_1(L)^a -> (-1)^a c_{a+2}(I (x) w^-1), then the support
  point becomes a new external factor.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from . import chern_calculus as chern
from .kunneth import STAR, label_str
from .surface_algebra import SurfaceClass, SurfaceData, todd_inverse
from .universal_expr import (
    HILB,
    NESTED1,
    NESTED2,
    ResidualGeneratorError,
    Stage,
    StageError,
    UniversalExpr,
    collect_powers,
    push_over_factors,
    substitute,
)

log = logging.getLogger(__name__)

P_MINUS = "p_-^*"
PI_MINUS = "pi_-^*"
SES = "ses"
PI_PLUS = "pi_+*"
P_PLUS = "(p_+ x p_S)_*"


@dataclass
class RewriteState:
    level: int
    expr: UniversalExpr
    log: list[str] = field(default_factory=list)

    @classmethod
    def vacuum(cls, surface: SurfaceData, truncation: int | None = None) -> "RewriteState":
        return cls(0, UniversalExpr.one(surface, Stage.hilb(0), truncation))

    def _step(self, rule: str, expr: UniversalExpr, level: int | None = None) -> "RewriteState":
        line = f"{rule}\t{expr.stage}\tterms={len(expr.terms)}"
        log.debug(line)
        return RewriteState(self.level if level is None else level, expr, self.log + [line])

    @property
    def rules(self) -> list[str]:
        return [entry.split("\t", 1)[0] for entry in self.log]


def pull_p_minus(st: RewriteState) -> RewriteState:
    stage = st.expr.stage
    if stage.kind != HILB or stage.star:
        raise StageError(f"p_-^* needs a plain Hilb stage, got {stage}")
    new = Stage(NESTED1, stage.level, stage.externals, True)
    return st._step(P_MINUS, st.expr.retag(new))


def pull_pi_minus(st: RewriteState) -> RewriteState:
    x = st.expr
    if x.stage.kind != NESTED1:
        raise StageError(f"pi_-^* needs a Nested1 stage, got {x.stage}")
    new = Stage(NESTED2, x.stage.level, x.stage.externals, True)
    # the quotient I/I' of the pair is the L' of the triple
    raw = {(chg, 0, lp, cont, links): c for (chg, lp, _, cont, links), c in x.terms.items()}
    y = UniversalExpr(x.surface, new, raw, x.truncation, x.support)
    return st._step(PI_MINUS, y)


def _ses_image(surface: SurfaceData, lower: int, upper: int, line_index: int):
    td = todd_inverse(surface)
    td_parts = {d: [(i, c) for i, c in td.coeffs.items() if surface.degrees[i] == d] for d in (0, 1, 2)}

    def rule(label: int, level: int, j: int, unit: UniversalExpr):
        if level != lower:
            return None
        raw = {(((label, upper, j),), 0, 0, (), ()): Fraction(1)}
        link = ((STAR, label),)
        for a in range(0, j - 1):
            d = j - a - 2
            if d > 2:
                continue
            for i, c in td_parts[d]:
                lp, lpp = (a, 0) if line_index == 1 else (0, a)
                content = ((STAR, i),) if i else ()
                key = ((), lp, lpp, content, link)
                raw[key] = raw.get(key, 0) - c * Fraction(1, factorial(a))
        return unit.like(raw)

    return rule


def ses_rewrite(st: RewriteState) -> RewriteState:
    """Replace lower-level generators by upper-level ones via the short exact sequence."""
    x = st.expr
    kind = x.stage.kind
    if kind not in (NESTED1, NESTED2):
        raise StageError(f"ses rewriting needs a nested stage, got {x.stage}")
    lower = x.stage.level
    rule = _ses_image(x.surface, lower, lower + 1, 1 if kind == NESTED1 else 2)
    y = substitute(x, rule) if lower in x.generator_levels() else x
    return st._step(SES, y)


def _ideal_character(unit: UniversalExpr, level: int) -> chern.ChernVector:
    """ch(I_level (x) w^-1) with the S variable of the ideal at the support point."""
    d = unit.limit
    z = chern.character(0, [unit.chgen(level, STAR, j) for j in range(1, d + 1)], d, unit)
    minus_k = unit.coefficient(-unit.surface.K, STAR)
    return chern.twist(chern.ideal_from_structure(z), minus_k)


def push_pi_plus(st: RewriteState) -> RewriteState:
    x = st.expr
    if x.stage.kind != NESTED2:
        raise StageError(f"pi_+* needs a Nested2 stage, got {x.stage}")
    low = x.stage.level
    if low in x.generator_levels():
        raise ResidualGeneratorError(f"level-{low} generators must be eliminated before pi_+*")
    target = Stage(NESTED1, low + 1, x.stage.externals, True)
    unit = UniversalExpr.one(x.surface, target, x.truncation)
    d = unit.limit
    kclass = _ideal_character(unit, low + 1)
    minus_k = unit.coefficient(-x.surface.K, STAR)
    kclass = kclass - chern.line_character(unit.c1_L() + minus_k, d, unit)
    c = chern.chern_from_character(kclass)
    out = UniversalExpr.zero(x.surface, target, x.truncation)
    for a, r in collect_powers(x, "Lp").items():
        if a + 1 > d:
            continue
        image = c[a + 1] * (-1 if a % 2 else 1)
        out = out + r.retag(target) * image
    out.support = x.support
    return st._step(PI_PLUS, out, low + 1)


def push_p_plus(st: RewriteState, label: int | None = None) -> RewriteState:
    """Push along p_+ x p_S and materialize the support point as ``label``."""
    x = st.expr
    if x.stage.kind != NESTED1:
        raise StageError(f"(p_+ x p_S)_* needs a Nested1 stage, got {x.stage}")
    low = x.stage.level
    if low in x.generator_levels():
        raise ResidualGeneratorError(f"level-{low} generators must be eliminated before (p_+ x p_S)_*")
    if any(k[2] for k in x.terms):
        raise ResidualGeneratorError("c1(L') left on a Nested1 stage")
    n = low + 1
    target = Stage(HILB, n, x.stage.externals, True)
    unit = UniversalExpr.one(x.surface, target, x.truncation)
    d = unit.limit
    c = chern.chern_from_character(_ideal_character(unit, n))
    out = UniversalExpr.zero(x.surface, target, x.truncation)
    for a, r in collect_powers(x, "L").items():
        if a + 2 > d:
            continue
        image = c[a + 2] * (-1 if a % 2 else 1)
        out = out + r.retag(target) * image
    if label is None:
        label = x.stage.base + 1
    if label in x.stage.externals:
        raise StageError(f"label {label} is already an external factor")
    final = Stage(HILB, n, x.stage.externals | {label}, False)
    out = out.retag(final, {STAR: label}, support=set(x.support) | {label})
    return st._step(P_PLUS, out, n)


def q_to_universal(k: int, st: RewriteState, label: int | None = None) -> RewriteState:
    """Apply q_k, resolved through the nested tower, creating one external factor."""
    if k < 1:
        raise ValueError("only creation operators q_k with k >= 1 are supported")
    st = pull_p_minus(st)
    for _ in range(k - 1):
        st = push_pi_plus(ses_rewrite(pull_pi_minus(st)))
    return push_p_plus(ses_rewrite(st), label)


def check_log(rules: Sequence[str], ks: Sequence[int] | None = None) -> bool:
    """Whether a rule log follows p_-^* (pi_-^*; ses; pi_+*)^{k-1} ses (p_+ x p_S)_* per operator."""
    code = {P_MINUS: "P", PI_MINUS: "I", SES: "S", PI_PLUS: "U", P_PLUS: "Q"}
    try:
        word = "".join(code[r] for r in rules)
    except KeyError:
        return False
    if ks is None:
        return re.fullmatch(r"(?:P(?:ISU)*SQ)*", word) is not None
    expected = "".join("P" + "ISU" * (k - 1) + "SQ" for k in ks)
    return word == expected


def canonical_order(partition: Sequence[int], gamma: Sequence[SurfaceClass]):
    """Sort parts decreasingly, carrying the tensor factors along."""
    if len(partition) != len(gamma):
        raise ValueError("the tensor needs one factor per part")
    order = sorted(range(len(partition)), key=lambda i: -partition[i])
    return [partition[i] for i in order], [gamma[i] for i in order]


def application_order(partition: Sequence[int]) -> list[int]:
    """Part sizes in the order their operators act on the vacuum (rightmost first)."""
    return sorted(partition)


def nakajima_to_universal(
    partition: Sequence[int],
    gamma: Sequence[SurfaceClass],
    surface: SurfaceData,
    truncation: int | None = None,
    *,
    return_state: bool = False,
):
    """The universal class of q_{k_1} ... q_{k_t}(gamma_1 x ... x gamma_t) |0>."""
    parts, gamma = canonical_order(list(partition), list(gamma))
    if any(k < 1 for k in parts):
        raise ValueError("parts must be positive")
    for g in gamma:
        if g.surface is not surface:
            raise ValueError("tensor factor on a different surface")
        if not g.is_homogeneous():
            raise ValueError(f"tensor factor {g} is not homogeneous")
    t = len(parts)
    st = RewriteState.vacuum(surface, truncation)
    for i in range(t, 0, -1):
        st = q_to_universal(parts[i - 1], st, label=i)
    x = st.expr
    for i, g in enumerate(gamma, 1):
        x = x * x.coefficient(g, i)
    x = push_over_factors(x, 0)
    st = RewriteState(st.level, x, st.log + [f"integrate\t{x.stage}\tterms={len(x.terms)}"])
    return st if return_state else x


def codimension(partition: Sequence[int], gamma: Sequence[SurfaceClass]) -> int:
    """sum (k_i - 1) + deg gamma for homogeneous factors."""
    total = 0
    for k, g in zip(partition, gamma):
        (d,) = g.degrees() or {0}
        total += k - 1 + d
    return total


def describe(partition: Sequence[int], gamma: Sequence[SurfaceClass]) -> str:
    ops = " ".join(f"q{k}({g})" for k, g in zip(partition, gamma))
    return f"{ops} |0>" if ops else "|0>"
