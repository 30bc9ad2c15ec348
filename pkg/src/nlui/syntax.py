"""Concrete text syntax for calculus terms and types.

Terms:
    \\x:Obj. body            lambda (body extends as far right as possible)
    f a b                    application, left-associative, binds tightest
    c ? e1 : e2              conditional, right-associative
    e1 ; e2                  sequencing, right-associative, binds loosest
    name()                   constant call (or zero-arity action call)
    name(e1, ..., en)        predicate or action call
    skip, true, false        literals

Types:  Obj, Bool, Act, and right-associative arrows like Obj -> Act.

Call syntax alone cannot distinguish predicates from actions, so parsing a
term requires the interface descriptor the term is written against.  A
name immediately applied to a parenthesized expression is read as an
interface call unless an enclosing lambda binds that name, so terms whose
binders reuse interface names may not have a faithful text form.
"""
from __future__ import annotations

import re

from .calculus import (
    ACT, BOOL, OBJ, Act, ActCall, App, Bool, BoolLit, Cond, ConstCall, Expr,
    Fault, Fun, Lambda, Obj, ObjVal, PredCall, Seq, Skip, Type, Var,
)


class TermSyntaxError(Exception):
    pass


_TOKEN = re.compile(r"\s*(->|[\\().,?:;]|[A-Za-z_][A-Za-z0-9_]*|\*)")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            if not rest:
                break
            raise TermSyntaxError(f"cannot tokenize at {rest[:20]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _Cursor:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise TermSyntaxError("unexpected end of input")
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise TermSyntaxError(f"expected {tok!r}, got {got!r}")


_BASE_TYPES = {"Obj": OBJ, "Bool": BOOL, "Act": ACT}


def _parse_type(cur: _Cursor) -> Type:
    left = _parse_type_atom(cur)
    if cur.peek() == "->":
        cur.next()
        return Fun(left, _parse_type(cur))
    return left


def _parse_type_atom(cur: _Cursor) -> Type:
    tok = cur.next()
    if tok == "(":
        inner = _parse_type(cur)
        cur.expect(")")
        return inner
    if tok in _BASE_TYPES:
        return _BASE_TYPES[tok]
    raise TermSyntaxError(f"expected a type, got {tok!r}")


def parse_type(text: str) -> Type:
    cur = _Cursor(_tokenize(text))
    t = _parse_type(cur)
    if cur.peek() is not None:
        raise TermSyntaxError(f"trailing input after type: {cur.peek()!r}")
    return t


_KEYWORDS = {"skip", "true", "false"}


def _parse_expr(cur: _Cursor, iface, bound: frozenset[str]) -> Expr:
    first = _parse_cond(cur, iface, bound)
    if cur.peek() == ";":
        cur.next()
        return Seq(first, _parse_expr(cur, iface, bound))
    return first


def _parse_cond(cur: _Cursor, iface, bound: frozenset[str]) -> Expr:
    test = _parse_app(cur, iface, bound)
    if cur.peek() == "?":
        cur.next()
        then = _parse_cond(cur, iface, bound)
        cur.expect(":")
        orelse = _parse_cond(cur, iface, bound)
        return Cond(test, then, orelse)
    return test


_ATOM_START = re.compile(r"[A-Za-z_]")


def _starts_atom(tok: str | None) -> bool:
    if tok is None:
        return False
    return tok in ("(", "\\", "*") or bool(_ATOM_START.match(tok))


def _parse_app(cur: _Cursor, iface, bound: frozenset[str]) -> Expr:
    expr = _parse_atom(cur, iface, bound)
    while _starts_atom(cur.peek()):
        expr = App(expr, _parse_atom(cur, iface, bound))
    return expr


def _parse_atom(cur: _Cursor, iface, bound: frozenset[str]) -> Expr:
    tok = cur.next()
    if tok == "(":
        inner = _parse_expr(cur, iface, bound)
        cur.expect(")")
        return inner
    if tok == "\\":
        param = cur.next()
        if not _ATOM_START.match(param) or param in _KEYWORDS:
            raise TermSyntaxError(f"bad lambda parameter {param!r}")
        cur.expect(":")
        param_type = _parse_type(cur)
        cur.expect(".")
        body = _parse_expr(cur, iface, bound | {param})
        return Lambda(param, param_type, body)
    if tok == "*":
        raise TermSyntaxError("the exception value cannot be written")
    if tok == "skip":
        return Skip()
    if tok == "true":
        return BoolLit(True)
    if tok == "false":
        return BoolLit(False)
    if _ATOM_START.match(tok):
        # `name(` is an interface call, except that a lambda-bound name
        # is always a variable (the parenthesis then starts its argument)
        if cur.peek() != "(" or tok in bound:
            return Var(tok)
        cur.next()
        args: list[Expr] = []
        if cur.peek() != ")":
            args.append(_parse_expr(cur, iface, bound))
            while cur.peek() == ",":
                cur.next()
                args.append(_parse_expr(cur, iface, bound))
        cur.expect(")")
        return _classify_call(tok, tuple(args), iface)
    raise TermSyntaxError(f"unexpected token {tok!r}")


def _classify_call(name: str, args: tuple[Expr, ...], iface) -> Expr:
    if name in iface.predicates:
        return PredCall(name, args)
    if name in iface.actions:
        return ActCall(name, args)
    if name in iface.constants:
        if args:
            raise TermSyntaxError(f"constant {name} takes no arguments")
        return ConstCall(name)
    raise TermSyntaxError(f"unknown interface name {name}")


def parse_term(text: str, iface) -> Expr:
    """Parse a term against the given interface descriptor."""
    cur = _Cursor(_tokenize(text))
    e = _parse_expr(cur, iface, frozenset())
    if cur.peek() is not None:
        raise TermSyntaxError(f"trailing input after term: {cur.peek()!r}")
    return e


# ---------------------------------------------------------------------------
# Printing


def format_type(t: Type) -> str:
    match t:
        case Obj():
            return "Obj"
        case Bool():
            return "Bool"
        case Act():
            return "Act"
        case Fun(domain, codomain):
            left = format_type(domain)
            if isinstance(domain, Fun):
                left = f"({left})"
            return f"{left} -> {format_type(codomain)}"
    raise TypeError(f"not a Type: {t!r}")


# precedence levels: 0 sequencing, 1 conditional, 2 application, 3 atoms
def _fmt(e: Expr, context: int) -> str:
    match e:
        case Var(name):
            return name
        case BoolLit(value):
            return "true" if value else "false"
        case Skip():
            return "skip"
        case Fault():
            return "*"
        case ObjVal(obj):
            return f"<{obj}>"
        case ConstCall(name):
            return f"{name}()"
        case PredCall(name, args) | ActCall(name, args):
            inner = ", ".join(_fmt(a, 0) for a in args)
            return f"{name}({inner})"
        case Lambda(param, param_type, body):
            text = f"\\{param}:{format_type(param_type)}. {_fmt(body, 0)}"
            return f"({text})" if context > 0 else text
        case App(fun, arg):
            text = f"{_fmt(fun, 2)} {_fmt(arg, 3)}"
            return f"({text})" if context > 2 else text
        case Cond(test, then, orelse):
            text = f"{_fmt(test, 2)} ? {_fmt(then, 1)} : {_fmt(orelse, 1)}"
            return f"({text})" if context > 1 else text
        case Seq(first, second):
            text = f"{_fmt(first, 1)}; {_fmt(second, 0)}"
            return f"({text})" if context > 0 else text
    raise TypeError(f"not an expression: {e!r}")


def format_term(e: Expr) -> str:
    """Render a term with minimal parentheses; reparses to the same term."""
    return _fmt(e, 0)
