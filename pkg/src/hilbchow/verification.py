"""Self-contained verification suites behind ``hilbchow verify``.

Each suite returns a :class:`SuiteResult`; none of them raises on a
mathematical failure.  Random inputs come from a seeded generator, so a run
is deterministic.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Callable

from . import chern_calculus as chern
from . import fock, kunneth
from .kunneth import MultiFactorClass
from .oracle import evaluate_n1
from .rewrite_engine import application_order, check_log, codimension, nakajima_to_universal
from .surface_algebra import SurfaceData, SurfaceError, load_surface, mul


@dataclass
class SuiteResult:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        tail = f": {self.detail}" if self.detail else ""
        return f"[{status}] {self.name} ({self.seconds:.2f}s){tail}"


def _failure_suite(err: SurfaceError) -> str:
    msg = str(err)
    if "pairing" in msg:
        return "pairing"
    if "associative" in msg or "commutative" in msg:
        return "associativity"
    return "surface"


def check_pairing(s: SurfaceData) -> str | None:
    g = s.pairing_matrix()
    ginv = s.inverse_pairing
    r = s.rank
    for i, j in product(range(r), repeat=2):
        v = sum(g[i][k] * ginv[k][j] for k in range(r))
        if v != (1 if i == j else 0):
            return f"G * G^-1 differs from the identity at ({i}, {j})"
    return None


def check_associativity(s: SurfaceData) -> str | None:
    for i, j, k in product(range(s.rank), repeat=3):
        a, b, c = (s.basis_class(t) for t in (i, j, k))
        if mul(mul(a, b), c) != mul(a, mul(b, c)):
            return f"({s.symbols[i]} {s.symbols[j]}) {s.symbols[k]} differs"
        if mul(a, b) != mul(b, a):
            return f"{s.symbols[i]} {s.symbols[j]} does not commute"
    return None


def ideal_diagonal_c2(s: SurfaceData) -> MultiFactorClass:
    """c_2(I_Delta (x) w^-1) on S x S, from ch(O_Delta) through the Chern calculus."""
    unit = MultiFactorClass.one(s)
    d = 4
    chd = kunneth.ch_diagonal(s, 1, 2)
    z = chern.character(0, [chd.degree_part(j) for j in range(1, d + 1)], d, unit)
    ideal = chern.twist(chern.ideal_from_structure(z), kunneth.promote(-s.K, 2))
    return chern.chern_from_character(ideal)[2]


def check_diagonal(s: SurfaceData) -> str | None:
    delta = kunneth.diagonal_class(s, 1, 2)
    for i in range(s.rank):
        g = s.basis_class(i)
        got = kunneth.integrate_factor(delta * kunneth.promote(g, 2), 2)
        if got != kunneth.promote(g, 1):
            return f"contraction of Delta with {g} gave {got}"
    expanded = kunneth.diagonal_class(s, 1, 2, expand=True)
    if kunneth.expand_links(delta) != expanded:
        return "symbolic and expanded diagonal disagree"
    c2 = ideal_diagonal_c2(s)
    if kunneth.expand_links(c2) != expanded:
        return f"c2(I_Delta (x) w^-1) = {c2}, expected Delta(1,2)"
    return None


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 6))


def check_chern(rng: random.Random, trials: int = 50, d: int = 12) -> str | None:
    for _ in range(trials):
        r = rng.randint(-3, 3)
        v = chern.character(r, [random_rational(rng) for _ in range(d)], d)
        c = chern.chern_from_character(v)
        if chern.character_from_chern(c) != v:
            return f"ch -> c -> ch round trip failed for {v.entries}"
        if any(chern.newton_residuals(v, c)):
            return "nonzero Newton residual"
        cv = chern.ChernVector(r, (Fraction(1), *(random_rational(rng) for _ in range(d))), chern.C)
        if chern.chern_from_character(chern.character_from_chern(cv)) != cv:
            return f"c -> ch -> c round trip failed for {cv.entries}"
        a, b = random_rational(rng), random_rational(rng)
        if chern.twist(chern.twist(v, a), b) != chern.twist(v, a + b):
            return "twist is not a group action"
    return None


def check_ranks(s: SurfaceData, n_max: int = 8) -> str | None:
    expected = fock.generating_function_coefficients(s.rank, n_max)
    for n in range(n_max + 1):
        got = fock.rank(n, s)
        if got != expected[n]:
            return f"rank({n}) = {got}, expected {expected[n]}"
    return None


def check_n1(s: SurfaceData) -> str | None:
    for i in range(s.rank):
        g = s.basis_class(i)
        got = evaluate_n1(nakajima_to_universal([1], [g], s))
        if got != g:
            return f"q1({g}) evaluates to {got}"
    return None


def audit_basis_element(s: SurfaceData, b: fock.FockBasisElement) -> str | None:
    """Homogeneity, forbidden generators and stage discipline for one basis element."""
    lam = list(b.partition)
    gamma = [s.basis_class(i) for _, i in b.tensor]
    st = nakajima_to_universal(lam, gamma, s, return_state=True)
    x = st.expr
    want = codimension(lam, gamma)
    name = b.render(s)
    if x.terms and x.degrees() != {want}:
        return f"{name}: degrees {sorted(x.degrees())}, expected {want}"
    if x.has_line_classes():
        return f"{name}: line classes survived"
    if not x.generator_levels() <= {b.n}:
        return f"{name}: generators of levels {sorted(x.generator_levels())}"
    if x.stage.star or x.stage.externals:
        return f"{name}: free factors survived on {x.stage}"
    if not check_log(st.rules[:-1], application_order(lam)):
        return f"{name}: rule log out of order"
    return None


def check_homogeneity(s: SurfaceData, n_max: int = 4) -> str | None:
    for n in range(n_max + 1):
        for b in fock.enumerate_basis(n, s):
            err = audit_basis_element(s, b)
            if err:
                return err
    return None


def run_suites(source: str | Path, seed: int = 0) -> list[SuiteResult]:
    try:
        s = load_surface(source)
    except SurfaceError as err:
        return [SuiteResult(_failure_suite(err), False, str(err))]
    rng = random.Random(seed)
    suites: list[tuple[str, Callable[[], str | None]]] = [
        ("pairing", lambda: check_pairing(s)),
        ("associativity", lambda: check_associativity(s)),
        ("diagonal", lambda: check_diagonal(s)),
        ("chern", lambda: check_chern(rng)),
        ("ranks", lambda: check_ranks(s)),
        ("n1-oracle", lambda: check_n1(s)),
        ("homogeneity", lambda: check_homogeneity(s)),
    ]
    results = []
    for name, fn in suites:
        t = time.perf_counter()
        err = fn()
        results.append(SuiteResult(name, err is None, err or "", time.perf_counter() - t))
    return results
