"""Brute-force evaluation of universal classes on Hilb_1 = S.

At n = 1 the universal subscheme is the diagonal of S x S, so
ch(O_{Z_1}^{(i)}) = ch(O_Delta)(H, i) where H is the coordinate of
Hilb_1 = S.  Substituting this into a universal expression and integrating
the remaining factors evaluates it in A*(S).  Only the Kuenneth algebra is
used here, never the rewrite rules.
"""

from __future__ import annotations

from fractions import Fraction

from . import kunneth
from .kunneth import STAR, MultiFactorClass
from .surface_algebra import SurfaceClass
from .universal_expr import HILB, UniversalExpr

# the Hilb_1 = S coordinate
H = STAR


class OracleError(ValueError):
    pass


def evaluate_n1(x: UniversalExpr) -> SurfaceClass:
    """Evaluate a class on Hilb(1) x S^k to a class on S, integrating the S factors."""
    value = evaluate_n1_kunneth(x)
    for label in sorted(x.stage.externals):
        value = kunneth.integrate_factor(value, label)
    return kunneth.to_surface_class(value, H)


def evaluate_n1_kunneth(x: UniversalExpr) -> MultiFactorClass:
    """Evaluate on Hilb(1) x S^free; the result lives on H and the free labels."""
    s = x.surface
    if x.stage.kind != HILB or x.stage.level != 1 or x.stage.star:
        raise OracleError(f"expected a Hilb(1) expression, got {x.stage}")
    chd: dict[int, MultiFactorClass] = {}
    total = MultiFactorClass(s, {})
    for (chg, lp, lpp, content, links), coeff in x.terms.items():
        if lp or lpp:
            raise OracleError("line classes cannot be evaluated on Hilb(1)")
        value = MultiFactorClass(s, {(content, links): Fraction(1)})
        for label, level, j in chg:
            if level != 1:
                raise OracleError(f"generator of level {level} on Hilb(1)")
            if label not in chd:
                chd[label] = kunneth.ch_diagonal(s, H, label)
            value = value * chd[label].degree_part(j)
        present = set()
        for label, _, _ in chg:
            present.add(label)
        present.update(l for l, _ in content)
        for a, b in links:
            present.update((a, b))
        for label in sorted(present - x.stage.free):
            value = kunneth.integrate_factor(value, label)
        total = total + value * coeff
    return total
