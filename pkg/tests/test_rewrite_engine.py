from fractions import Fraction

import pytest

from hilbchow import kunneth
from hilbchow.kunneth import STAR
from hilbchow.oracle import evaluate_n1
from hilbchow.rewrite_engine import (
    P_MINUS,
    P_PLUS,
    PI_MINUS,
    PI_PLUS,
    SES,
    RewriteState,
    application_order,
    canonical_order,
    check_log,
    codimension,
    describe,
    nakajima_to_universal,
    pull_p_minus,
    pull_pi_minus,
    push_p_plus,
    push_pi_plus,
    q_to_universal,
    ses_rewrite,
)
from hilbchow.universal_expr import (
    HILB,
    NESTED1,
    NESTED2,
    ResidualGeneratorError,
    Stage,
    StageError,
    UniversalExpr,
)


def state(s, stage, expr=None, level=None):
    expr = expr if expr is not None else UniversalExpr.one(s, stage)
    return RewriteState(stage.level if level is None else level, expr)


def test_pull_p_minus_on_vacuum(surface):
    st = pull_p_minus(RewriteState.vacuum(surface))
    assert st.expr.stage == Stage(NESTED1, 0, frozenset(), True)
    assert st.expr == UniversalExpr.one(surface, st.expr.stage)
    assert st.rules == [P_MINUS]


def test_pull_p_minus_keeps_degree_and_support(p2):
    stage = Stage.hilb(2, {1})
    u = UniversalExpr.one(p2, stage)
    x = (u.chgen(2, 1, 3) * u.coefficient(p2.cls("h"), 1)).retag(stage, support={1})
    y = pull_p_minus(state(p2, stage, x)).expr
    assert y.degrees() == x.degrees() == {4}
    assert y.support == x.support
    with pytest.raises(StageError):
        pull_p_minus(pull_p_minus(state(p2, stage, x)))


def test_pull_pi_minus_turns_L_into_L_prime(p2):
    n1 = Stage(NESTED1, 1, frozenset({1}), True)
    u = UniversalExpr.one(p2, n1)
    x = u.c1_L(2) * u.chgen(1, 1, 3) + u.chgen(2, STAR, 2)
    y = pull_pi_minus(state(p2, n1, x)).expr
    n2 = Stage(NESTED2, 1, frozenset({1}), True)
    v = UniversalExpr.one(p2, n2)
    assert y == v.c1_Lp(2) * v.chgen(1, 1, 3) + v.chgen(2, STAR, 2)
    assert pull_pi_minus(state(p2, n1)).expr == v


def ses_expected(s, stage, label, j):
    """ch_j(O_upper) - [exp(line) ch(O_Delta)(star, label)]_j, built from the Kuenneth side."""
    u = UniversalExpr.one(s, stage)
    line = u.c1_Lp if stage.kind == NESTED2 else u.c1_L
    chd = kunneth.ch_diagonal(s, STAR, label)
    out = u.chgen(stage.level + 1, label, j)
    for a in range(0, j - 1):
        out = out - line(a) * u.coefficient(chd.degree_part(j - a)) * Fraction(1, {0: 1, 1: 1, 2: 2, 3: 6, 4: 24}[a])
    return out


@pytest.mark.parametrize("kind", [NESTED1, NESTED2])
def test_ses_rewrite_shape(surface, kind):
    stage = Stage(kind, 1, frozenset({1}), True)
    u = UniversalExpr.one(surface, stage)
    for j in (2, 3, 4):
        got = ses_rewrite(state(surface, stage, u.chgen(1, 1, j))).expr
        assert got == ses_expected(surface, stage, 1, j)
        assert 1 not in got.generator_levels()


def test_ses_rewrite_on_the_support_point(p2):
    # ch_2(O_{Z_1})|star: the diagonal collapses to its self-intersection
    stage = Stage(NESTED1, 1, frozenset(), True)
    u = UniversalExpr.one(p2, stage)
    got = ses_rewrite(state(p2, stage, u.chgen(1, STAR, 2))).expr
    assert got == u.chgen(2, STAR, 2) - u.coefficient(p2.e, STAR)


def test_ses_rewrite_idempotent_and_noop(p2):
    stage = Stage(NESTED2, 1, frozenset({1}), True)
    u = UniversalExpr.one(p2, stage)
    x = u.chgen(1, 1, 3) * u.chgen(2, 1, 2) + u.c1_Lp()
    once = ses_rewrite(state(p2, stage, x))
    twice = ses_rewrite(once)
    assert once.expr == twice.expr
    assert ses_rewrite(state(p2, stage, u.chgen(3, 1, 2))).expr == u.chgen(3, 1, 2)
    with pytest.raises(StageError):
        ses_rewrite(state(p2, Stage.hilb(1)))


def test_push_pi_plus_closed_forms(p2):
    # K-class ch(I_{star}) exp(-K_star) - exp(L - K_star) has c_1 = -L and
    # -c_2 = -L^2 - ch_2(O_Z|star) + L K_star
    src = Stage(NESTED2, 0, frozenset(), True)
    tgt = Stage(NESTED1, 1, frozenset(), True)
    v = UniversalExpr.one(p2, tgt)
    s0 = state(p2, src)
    assert push_pi_plus(s0).expr == v.c1_L() * -1
    s1 = state(p2, src, UniversalExpr.one(p2, src).c1_Lp())
    want = -v.c1_L(2) - v.chgen(1, STAR, 2) + v.c1_L() * v.coefficient(p2.K, STAR)
    assert push_pi_plus(s1).expr == want


def test_push_pi_plus_preconditions(p2):
    src = Stage(NESTED2, 1, frozenset(), True)
    u = UniversalExpr.one(p2, src)
    with pytest.raises(ResidualGeneratorError):
        push_pi_plus(state(p2, src, u.chgen(1, STAR, 2)))
    with pytest.raises(StageError):
        push_pi_plus(state(p2, Stage(NESTED1, 1, frozenset(), True)))


def test_push_p_plus_closed_forms(p2):
    # c_2(I (x) w^-1) = ch_2(O_Z); -c_3(I (x) w^-1) = 2 ch_3(O_Z) - K ch_2(O_Z)
    src = Stage(NESTED1, 0, frozenset(), True)
    out = push_p_plus(state(p2, src)).expr
    assert out.stage == Stage.hilb(1, {1})
    w = UniversalExpr.one(p2, out.stage)
    assert out == w.chgen(1, 1, 2)
    assert out.support == frozenset({1})
    lin = push_p_plus(state(p2, src, UniversalExpr.one(p2, src).c1_L())).expr
    assert lin == w.chgen(1, 1, 3) * 2 - w.coefficient(p2.K, 1) * w.chgen(1, 1, 2)


def test_push_p_plus_truncates_high_powers(p2):
    src = Stage(NESTED1, 0, frozenset(), True)
    # Hilb(1) x S has dimension 4, so c_{a+2} with a + 2 > 4 vanishes
    assert push_p_plus(state(p2, src, UniversalExpr.one(p2, src).c1_L(3))).expr.is_zero()


def test_push_p_plus_preconditions(p2):
    src = Stage(NESTED1, 1, frozenset({1}), True)
    u = UniversalExpr.one(p2, src)
    with pytest.raises(ResidualGeneratorError):
        push_p_plus(state(p2, src, u.chgen(1, 1, 2)))
    with pytest.raises(StageError):
        push_p_plus(state(p2, src), label=1)


def test_q1_on_vacuum_is_c2_of_twisted_ideal(surface):
    st = q_to_universal(1, RewriteState.vacuum(surface))
    assert st.expr.stage == Stage.hilb(1, {1})
    assert st.expr == UniversalExpr.one(surface, st.expr.stage).chgen(1, 1, 2)
    assert st.rules == [P_MINUS, SES, P_PLUS]
    assert check_log(st.rules, [1])


def test_q_rejects_annihilators(p2):
    with pytest.raises(ValueError):
        q_to_universal(0, RewriteState.vacuum(p2))


def test_q2_on_vacuum(p2):
    st = q_to_universal(2, RewriteState.vacuum(p2))
    w = UniversalExpr.one(p2, Stage.hilb(2, {1}))
    assert st.expr == w.chgen(2, 1, 3) * -2 + w.coefficient(p2.K, 1) * w.chgen(2, 1, 2)
    assert st.rules == [P_MINUS, PI_MINUS, SES, PI_PLUS, SES, P_PLUS]


def test_check_log():
    one = [P_MINUS, SES, P_PLUS]
    two = [P_MINUS, PI_MINUS, SES, PI_PLUS, SES, P_PLUS]
    assert check_log(one + two)
    assert check_log(one + two, [1, 2])
    assert not check_log(one + two, [2, 1])
    assert not check_log([P_MINUS, P_PLUS])
    assert not check_log(["bogus"])


def test_application_and_canonical_order(p2):
    h, pt = p2.cls("h"), p2.cls("pt")
    assert canonical_order([1, 3, 2], [h, pt, h]) == ([3, 2, 1], [pt, h, h])
    assert application_order([3, 1, 2]) == [1, 2, 3]
    with pytest.raises(ValueError):
        canonical_order([1], [])


def test_empty_partition_is_unit(surface):
    x = nakajima_to_universal([], [], surface)
    assert x == UniversalExpr.one(surface, Stage.hilb(0))


def test_n1_classes_evaluate_to_themselves(surface):
    for i in range(surface.rank):
        g = surface.basis_class(i)
        x = nakajima_to_universal([1], [g], surface)
        assert x.stage == Stage.hilb(1)
        assert evaluate_n1(x) == g


def test_input_order_is_canonicalized(p2):
    h, one = p2.cls("h"), p2.cls("1")
    assert nakajima_to_universal([1, 2], [h, one], p2) == nakajima_to_universal([2, 1], [one, h], p2)


def test_nonhomogeneous_factor_rejected(p2):
    with pytest.raises(ValueError):
        nakajima_to_universal([1], [p2.cls("1 + h")], p2)
    with pytest.raises(ValueError):
        nakajima_to_universal([0], [p2.cls("1")], p2)


def test_linear_in_gamma(p2):
    a = nakajima_to_universal([2, 1], [p2.cls("h"), p2.cls("3*pt")], p2)
    b = nakajima_to_universal([2, 1], [p2.cls("h"), p2.cls("pt")], p2)
    assert a == b * 3


def test_codimension_and_describe(p2):
    gamma = [p2.cls("h"), p2.cls("pt")]
    assert codimension([2, 1], gamma) == 1 + 1 + 2
    assert describe([2, 1], gamma) == "q2(h) q1(pt) |0>"
    assert describe([], []) == "|0>"


@pytest.mark.parametrize("lam,gamma", [((1, 1), ("h", "pt")), ((2,), ("1",)), ((2, 1), ("h", "1")), ((3,), ("h",))])
def test_outputs_homogeneous_of_expected_codimension(p2, lam, gamma):
    gs = [p2.cls(g) for g in gamma]
    st = nakajima_to_universal(lam, gs, p2, return_state=True)
    x = st.expr
    assert x.degrees() == {codimension(lam, gs)}
    assert not x.has_line_classes()
    assert x.generator_levels() <= {sum(lam)}
    assert STAR not in x.labels()
    assert check_log(st.rules[:-1], application_order(lam))


def test_truncation_override_drops_high_terms(p2):
    full = nakajima_to_universal([3], [p2.cls("1")], p2)
    cut = nakajima_to_universal([3], [p2.cls("1")], p2, truncation=4)
    assert full.degrees() == {2}
    assert cut.degrees() <= {2}
