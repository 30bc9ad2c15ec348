"""Types, terms, substitution and the typechecker."""
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlui.calculus import (
    ACT, BOOL, FALSE, FAULT, OBJ, SKIP, TRUE, ActCall, App, Bool,
    Cond, ConstCall, Fun, Lambda, ObjVal, PredCall, Seq, Type,
    TypeCheckError, Var, alpha_equivalent, canonical, free_vars, is_pure,
    is_value, is_wellformed, substitute, type_of,
)
from nlui.toyblocks import B1, toyblocks_descriptor

from helpers import random_type, random_well_typed

IFACE = toyblocks_descriptor()


def all_types(depth: int) -> list[Type]:
    if depth == 0:
        return [OBJ, BOOL, ACT]
    smaller = all_types(depth - 1)
    out = list(smaller)
    out.extend(Fun(a, b) for a in smaller for b in smaller)
    return out


def test_is_pure_matches_defining_rules_up_to_depth_3():
    # the rules: Obj pure, Bool pure, every function type pure
    for t in all_types(3):
        expected = t == OBJ or t == BOOL or isinstance(t, Fun)
        assert is_pure(t) == expected


def reference_wellformed(t: Type) -> bool:
    if not isinstance(t, Fun):
        return True
    if not (reference_wellformed(t.domain) and
            reference_wellformed(t.codomain)):
        return False
    if is_pure(t.domain) and is_pure(t.codomain):
        return True
    return t.codomain == ACT


def test_is_wellformed_exhaustive_small():
    for t in all_types(2):
        assert is_wellformed(t) == reference_wellformed(t)


def test_wellformed_examples():
    assert is_wellformed(Fun(OBJ, Fun(OBJ, ACT)))
    assert is_wellformed(Fun(ACT, ACT))
    assert is_wellformed(Fun(BOOL, Fun(ACT, ACT)))
    assert not is_wellformed(Fun(ACT, BOOL))
    assert not is_wellformed(Fun(OBJ, Fun(ACT, OBJ)))
    # an effectful codomain must be Act itself, not merely end in Act
    assert not is_wellformed(Fun(ACT, Fun(ACT, ACT)))


def test_is_value():
    assert is_value(SKIP)
    assert is_value(TRUE)
    assert is_value(Lambda("x", OBJ, Var("x")))
    assert is_value(ObjVal(B1))
    assert is_value(FAULT)
    assert not is_value(Var("x"))
    assert not is_value(ConstCall("b1"))
    assert not is_value(Seq(SKIP, SKIP))


def test_free_vars():
    e = Lambda("x", OBJ, App(Var("x"), Var("y")))
    assert free_vars(e) == {"y"}
    assert free_vars(Seq(ActCall("move", (Var("a"), Var("b"))),
                         Var("c"))) == {"a", "b", "c"}
    assert free_vars(ConstCall("b1")) == frozenset()


def test_substitute_basic():
    body = App(Var("x"), Var("y"))
    assert substitute(body, "x", ConstCall("b1")) == App(
        ConstCall("b1"), Var("y"))
    # bound occurrences are untouched
    lam = Lambda("x", OBJ, Var("x"))
    assert substitute(lam, "x", ConstCall("b1")) == lam


def test_substitute_avoids_capture():
    # [y/x](\y. x) must not capture the substituted y
    e = Lambda("y", OBJ, Var("x"))
    out = substitute(e, "x", Var("y"))
    assert out == Lambda("y1", OBJ, Var("y"))
    # and the result is alpha-equivalent to \z. y
    assert alpha_equivalent(out, Lambda("z", OBJ, Var("y")))


def test_substitute_renames_only_when_needed():
    e = Lambda("y", OBJ, Var("x"))
    out = substitute(e, "x", ConstCall("b1"))
    assert out == Lambda("y", OBJ, ConstCall("b1"))


def test_alpha_equivalence():
    a = Lambda("x", OBJ, Lambda("y", OBJ, App(Var("x"), Var("y"))))
    b = Lambda("u", OBJ, Lambda("v", OBJ, App(Var("u"), Var("v"))))
    c = Lambda("u", OBJ, Lambda("v", OBJ, App(Var("v"), Var("u"))))
    assert alpha_equivalent(a, b)
    assert not alpha_equivalent(a, c)
    # free variables compare by name
    assert alpha_equivalent(Var("x"), Var("x"))
    assert not alpha_equivalent(Var("x"), Var("y"))
    # a bound variable is not a free one
    assert not alpha_equivalent(Lambda("x", OBJ, Var("x")),
                                Lambda("x", OBJ, Var("y")))


def test_canonical_is_alpha_invariant():
    a = Lambda("x", OBJ, Lambda("y", OBJ, App(Var("x"), Var("y"))))
    b = Lambda("p", OBJ, Lambda("q", OBJ, App(Var("p"), Var("q"))))
    assert canonical(a) == canonical(b)
    c = Lambda("p", OBJ, Lambda("q", OBJ, App(Var("q"), Var("p"))))
    assert canonical(a) != canonical(c)


# ---------------------------------------------------------------------------
# Typechecking


def test_type_of_literals_and_calls():
    assert type_of({}, TRUE, IFACE) == BOOL
    assert type_of({}, SKIP, IFACE) == ACT
    assert type_of({}, ObjVal(B1), IFACE) == OBJ
    assert type_of({}, ConstCall("table"), IFACE) == OBJ
    assert type_of({}, PredCall("is_on", (ConstCall("b1"),
                                          ConstCall("table"))),
                   IFACE) == BOOL
    assert type_of({}, ActCall("move", (ConstCall("b1"),
                                        ConstCall("b2"))), IFACE) == ACT


def test_type_of_conditional_lambda_type():
    # \x:Bool. \y:Act. x ? y : skip
    term = Lambda("x", BOOL, Lambda("y", ACT,
                                    Cond(Var("x"), Var("y"), SKIP)))
    assert type_of({}, term, IFACE) == Fun(BOOL, Fun(ACT, ACT))


def test_type_of_full_imperative_term():
    move = Lambda("x", OBJ, Lambda("y", OBJ,
                                   ActCall("move", (Var("x"), Var("y")))))
    ident = Lambda("x", OBJ, Var("x"))
    term = App(App(move, ConstCall("b1")), App(ident, ConstCall("b2")))
    assert type_of({}, term, IFACE) == ACT


def test_type_of_rejections():
    with pytest.raises(TypeCheckError):
        type_of({}, Var("x"), IFACE)
    with pytest.raises(TypeCheckError):
        type_of({}, FAULT, IFACE)
    with pytest.raises(TypeCheckError):
        type_of({}, App(TRUE, SKIP), IFACE)
    with pytest.raises(TypeCheckError):
        type_of({}, App(Lambda("x", OBJ, Var("x")), TRUE), IFACE)
    with pytest.raises(TypeCheckError):
        type_of({}, Cond(TRUE, SKIP, FALSE), IFACE)
    with pytest.raises(TypeCheckError):
        type_of({}, Cond(SKIP, SKIP, SKIP), IFACE)
    with pytest.raises(TypeCheckError):
        type_of({}, Seq(TRUE, SKIP), IFACE)
    with pytest.raises(TypeCheckError):
        type_of({}, ConstCall("b3"), IFACE)
    with pytest.raises(TypeCheckError):
        type_of({}, PredCall("is_on", (ConstCall("b1"),)), IFACE)
    with pytest.raises(TypeCheckError):
        type_of({}, ActCall("is_on", (ConstCall("b1"),
                                      ConstCall("b2"))), IFACE)


def test_type_of_rejects_illformed_lambda():
    # \x:Act. true would let an action hide inside a pure function
    with pytest.raises(TypeCheckError):
        type_of({}, Lambda("x", ACT, TRUE), IFACE)
    # \x:Act. x is the identity on actions and is fine
    assert type_of({}, Lambda("x", ACT, Var("x")), IFACE) == Fun(ACT, ACT)


def test_type_of_allows_shadowing():
    term = Lambda("x", OBJ, Lambda("x", BOOL, Var("x")))
    assert type_of({}, term, IFACE) == Fun(OBJ, Fun(BOOL, BOOL))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_alpha_variants_get_equal_types(seed):
    rng = random.Random(seed)
    target = random_type(rng, 2)
    e = random_well_typed(rng, target, depth=4)
    assert type_of({}, e, IFACE) == target
    assert type_of({}, canonical(e), IFACE) == target


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_substitution_preserves_types(seed):
    rng = random.Random(seed)
    arg_type = random_type(rng, 1)
    result_type = random_type(rng, 1)
    if not is_wellformed(Fun(arg_type, result_type)):
        result_type = ACT
    body = random_well_typed(rng, result_type, {"u": arg_type}, depth=4)
    arg = random_well_typed(rng, arg_type, depth=3)
    out = substitute(body, "u", arg)
    assert type_of({}, out, IFACE) == result_type


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_canonical_agrees_with_alpha_equivalence(seed):
    rng = random.Random(seed)
    target = random_type(rng, 2)
    e = random_well_typed(rng, target, depth=4)
    assert alpha_equivalent(e, canonical(e))
    assert canonical(e) == canonical(canonical(e))
