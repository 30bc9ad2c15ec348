"""Typed action calculus: terms, types, and the static judgments over them.

The calculus is a small call-by-name lambda calculus with three base types
(Obj for application objects, Bool, Act for actions) plus function types.
Programs interact with an application through three kinds of interface
calls: constant calls (state-dependent object lookups), predicate calls
(pure yes/no observations) and action calls (state changers).  A special
exception value Fault arises at run time when a call's arguments fall
outside the classes its signature admits; it is never part of surface
programs and the typechecker rejects it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterator, Mapping


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Type:
    """Base class for calculus types."""


@dataclass(frozen=True)
class Obj(Type):
    pass


@dataclass(frozen=True)
class Bool(Type):
    pass


@dataclass(frozen=True)
class Act(Type):
    pass


@dataclass(frozen=True)
class Fun(Type):
    domain: Type
    codomain: Type


OBJ = Obj()
BOOL = Bool()
ACT = Act()


def is_pure(t: Type) -> bool:
    """A type is pure when its values cannot change application state.

    Obj and Bool are pure, Act is not, and every function type is pure:
    a function value itself is inert until applied.
    """
    match t:
        case Obj() | Bool() | Fun():
            return True
        case Act():
            return False
    raise TypeError(f"not a Type: {t!r}")


def is_wellformed(t: Type) -> bool:
    """Well-formed types confine effects to Act-returning functions.

    Fun(a, b) is well-formed only when both sides are pure and well-formed,
    or when b is well-formed with final result Act.  Base types are always
    well-formed.
    """
    match t:
        case Fun(domain, codomain):
            if not (is_wellformed(domain) and is_wellformed(codomain)):
                return False
            if is_pure(domain) and is_pure(codomain):
                return True
            return codomain == ACT
        case Obj() | Bool() | Act():
            return True
    raise TypeError(f"not a Type: {t!r}")


# ---------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class Expr:
    """Base class for calculus expressions."""


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool


@dataclass(frozen=True)
class Lambda(Expr):
    param: str
    param_type: Type
    body: Expr


@dataclass(frozen=True)
class Skip(Expr):
    """The action that does nothing."""


@dataclass(frozen=True)
class ObjVal(Expr):
    """A resolved application object; appears only during evaluation.

    The payload is whatever object handle the application hands out.  It
    must support equality and str(); str() is used for display.
    """

    obj: Any


@dataclass(frozen=True)
class Fault(Expr):
    """The run-time exception value (printed `*`); not a surface term."""


@dataclass(frozen=True)
class ConstCall(Expr):
    name: str


@dataclass(frozen=True)
class PredCall(Expr):
    name: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class ActCall(Expr):
    name: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class App(Expr):
    fun: Expr
    arg: Expr


@dataclass(frozen=True)
class Cond(Expr):
    test: Expr
    then: Expr
    orelse: Expr


@dataclass(frozen=True)
class Seq(Expr):
    first: Expr
    second: Expr


SKIP = Skip()
FAULT = Fault()
TRUE = BoolLit(True)
FALSE = BoolLit(False)


def is_value(e: Expr) -> bool:
    """Values are the possible results of evaluation: literals, lambdas,
    skip, resolved objects and the exception value."""
    return isinstance(e, (BoolLit, Lambda, Skip, ObjVal, Fault))


def children(e: Expr) -> Iterator[Expr]:
    match e:
        case Lambda(_, _, body):
            yield body
        case PredCall(_, args) | ActCall(_, args):
            yield from args
        case App(fun, arg):
            yield fun
            yield arg
        case Cond(test, then, orelse):
            yield test
            yield then
            yield orelse
        case Seq(first, second):
            yield first
            yield second
        case _:
            return


def free_vars(e: Expr) -> frozenset[str]:
    match e:
        case Var(name):
            return frozenset((name,))
        case Lambda(param, _, body):
            return free_vars(body) - {param}
        case _:
            out: frozenset[str] = frozenset()
            for child in children(e):
                out |= free_vars(child)
            return out


def fresh_name(base: str, avoid: frozenset[str] | set[str]) -> str:
    """Pick a variant of `base` not in `avoid` by appending 1, 2, ..."""
    if base not in avoid:
        return base
    k = 1
    while f"{base}{k}" in avoid:
        k += 1
    return f"{base}{k}"


def substitute(body: Expr, var: str, replacement: Expr) -> Expr:
    """Capture-avoiding substitution of `replacement` for free `var`."""
    if var not in free_vars(body):
        return body
    rep_free = free_vars(replacement)

    def go(e: Expr) -> Expr:
        match e:
            case Var(name):
                return replacement if name == var else e
            case Lambda(param, param_type, inner):
                if param == var or var not in free_vars(inner):
                    return e
                if param in rep_free:
                    renamed = fresh_name(
                        param, rep_free | free_vars(inner) | {var})
                    inner = substitute(inner, param, Var(renamed))
                    param = renamed
                return Lambda(param, param_type, go(inner))
            case PredCall(name, args):
                return PredCall(name, tuple(go(a) for a in args))
            case ActCall(name, args):
                return ActCall(name, tuple(go(a) for a in args))
            case App(fun, arg):
                return App(go(fun), go(arg))
            case Cond(test, then, orelse):
                return Cond(go(test), go(then), go(orelse))
            case Seq(first, second):
                return Seq(go(first), go(second))
            case _:
                return e

    return go(body)


def alpha_equivalent(a: Expr, b: Expr) -> bool:
    """Structural equality up to consistent renaming of bound variables."""

    def go(x: Expr, y: Expr, mx: dict[str, int], my: dict[str, int],
           depth: int) -> bool:
        match x, y:
            case Var(n1), Var(n2):
                if n1 in mx or n2 in my:
                    return mx.get(n1) == my.get(n2)
                return n1 == n2
            case Lambda(p1, t1, b1), Lambda(p2, t2, b2):
                if t1 != t2:
                    return False
                return go(b1, b2, {**mx, p1: depth}, {**my, p2: depth},
                          depth + 1)
            case BoolLit(v1), BoolLit(v2):
                return v1 == v2
            case (Skip(), Skip()) | (Fault(), Fault()):
                return True
            case ObjVal(o1), ObjVal(o2):
                return o1 == o2
            case ConstCall(n1), ConstCall(n2):
                return n1 == n2
            case PredCall(n1, a1), PredCall(n2, a2):
                return n1 == n2 and len(a1) == len(a2) and all(
                    go(u, v, mx, my, depth) for u, v in zip(a1, a2))
            case ActCall(n1, a1), ActCall(n2, a2):
                return n1 == n2 and len(a1) == len(a2) and all(
                    go(u, v, mx, my, depth) for u, v in zip(a1, a2))
            case App(f1, x1), App(f2, x2):
                return go(f1, f2, mx, my, depth) and go(x1, x2, mx, my, depth)
            case Cond(c1, t1, e1), Cond(c2, t2, e2):
                return (go(c1, c2, mx, my, depth)
                        and go(t1, t2, mx, my, depth)
                        and go(e1, e2, mx, my, depth))
            case Seq(f1, s1), Seq(f2, s2):
                return go(f1, f2, mx, my, depth) and go(s1, s2, mx, my, depth)
            case _:
                return False

    return go(a, b, {}, {}, 0)


def canonical(e: Expr) -> Expr:
    """Rename bound variables to %1, %2, ... in traversal order.

    Two closed terms are alpha-equivalent iff their canonical forms are
    structurally equal, which makes the result usable as a set key.
    """
    counter = [0]

    def go(e: Expr, env: dict[str, str]) -> Expr:
        match e:
            case Var(name):
                return Var(env.get(name, name))
            case Lambda(param, param_type, body):
                counter[0] += 1
                new = f"%{counter[0]}"
                return Lambda(new, param_type, go(body, {**env, param: new}))
            case PredCall(name, args):
                return PredCall(name, tuple(go(a, env) for a in args))
            case ActCall(name, args):
                return ActCall(name, tuple(go(a, env) for a in args))
            case App(fun, arg):
                return App(go(fun, env), go(arg, env))
            case Cond(test, then, orelse):
                return Cond(go(test, env), go(then, env), go(orelse, env))
            case Seq(first, second):
                return Seq(go(first, env), go(second, env))
            case _:
                return e

    return go(e, {})


# ---------------------------------------------------------------------------
# Typechecking


class TypeCheckError(Exception):
    pass


def type_of(env: Mapping[str, Type], e: Expr, iface) -> Type:
    """Compute the unique type of `e` under `env`, or raise TypeCheckError.

    `iface` is an InterfaceDescriptor; interface calls are resolved against
    it (the name must exist with the right arity).  Lambdas must produce a
    well-formed function type.  The exception value is rejected: it has no
    surface typing rule.
    """
    match e:
        case Var(name):
            if name not in env:
                raise TypeCheckError(f"unbound variable {name}")
            return env[name]
        case BoolLit(_):
            return BOOL
        case Skip():
            return ACT
        case ObjVal(_):
            return OBJ
        case Fault():
            raise TypeCheckError("the exception value is not a surface term")
        case Lambda(param, param_type, body):
            body_type = type_of({**env, param: param_type}, body, iface)
            fun_type = Fun(param_type, body_type)
            if not is_wellformed(fun_type):
                raise TypeCheckError(
                    f"function type {fun_type} mixes effects badly: "
                    "an impure argument or result requires an Act codomain")
            return fun_type
        case ConstCall(name):
            if name not in iface.constants:
                raise TypeCheckError(f"unknown constant {name}")
            return OBJ
        case PredCall(name, args):
            if name not in iface.predicates:
                raise TypeCheckError(f"unknown predicate {name}")
            arity = iface.predicates[name]
            if len(args) != arity:
                raise TypeCheckError(
                    f"predicate {name} expects {arity} arguments, "
                    f"got {len(args)}")
            for arg in args:
                if type_of(env, arg, iface) != OBJ:
                    raise TypeCheckError(
                        f"argument of predicate {name} is not an Obj")
            return BOOL
        case ActCall(name, args):
            if name not in iface.actions:
                raise TypeCheckError(f"unknown action {name}")
            arity = iface.actions[name]
            if len(args) != arity:
                raise TypeCheckError(
                    f"action {name} expects {arity} arguments, "
                    f"got {len(args)}")
            for arg in args:
                if type_of(env, arg, iface) != OBJ:
                    raise TypeCheckError(
                        f"argument of action {name} is not an Obj")
            return ACT
        case App(fun, arg):
            fun_type = type_of(env, fun, iface)
            if not isinstance(fun_type, Fun):
                raise TypeCheckError(
                    f"applying a non-function of type {fun_type}")
            arg_type = type_of(env, arg, iface)
            if arg_type != fun_type.domain:
                raise TypeCheckError(
                    f"argument type {arg_type} does not match "
                    f"domain {fun_type.domain}")
            return fun_type.codomain
        case Cond(test, then, orelse):
            if type_of(env, test, iface) != BOOL:
                raise TypeCheckError("condition of ? : is not a Bool")
            then_type = type_of(env, then, iface)
            else_type = type_of(env, orelse, iface)
            if then_type != else_type:
                raise TypeCheckError(
                    f"branches of ? : disagree: {then_type} vs {else_type}")
            return then_type
        case Seq(first, second):
            if type_of(env, first, iface) != ACT:
                raise TypeCheckError("left of ; is not an Act")
            if type_of(env, second, iface) != ACT:
                raise TypeCheckError("right of ; is not an Act")
            return ACT
    raise TypeCheckError(f"not an expression: {e!r}")
