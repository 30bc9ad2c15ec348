"""Small-step evaluator for the action calculus.

Each transition is justified by one named rule; evaluate() records the
outermost rule per step so traces can be audited.  Application is
call-by-name.  Interface calls evaluate their arguments left to right;
once all arguments are resolved objects the class guard is checked
against the connector's descriptor, and only if it passes is the
application's predicate or action actually invoked.  A failed guard
yields the exception value, which the propagation rules (Red App 2,
Red PCon 2, Red ACon 2, Red If 2, Red Seq 2) bubble to the top.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .calculus import (
    ACT, BOOL, FAULT, OBJ, ActCall, App, BoolLit, Cond, ConstCall, Expr,
    Fault, Fun, Lambda, ObjVal, PredCall, Seq, Skip, Type, TypeCheckError,
    Var, is_value, is_wellformed, substitute, type_of,
)
from .interface import ApplicationConnector, GuardFailure, guard_check
from .syntax import format_term


class StuckTerm(Exception):
    """Raised when no rule applies to a non-value; indicates an ill-typed
    or open input, never a fault of a well-typed program."""


class FuelExhausted(Exception):
    pass


@dataclass(frozen=True)
class Step:
    rule: str
    result: Expr
    note: str | None = None


@dataclass(frozen=True)
class StepTrace:
    initial: Expr
    steps: tuple[Step, ...]

    @property
    def final(self) -> Expr:
        return self.steps[-1].result if self.steps else self.initial


def _classes_text(classes) -> str:
    return "{" + ", ".join(sorted(classes)) + "}"


def _signature_text(signature) -> str:
    return "{" + ", ".join(
        "(" + ", ".join(tup) + ")" for tup in sorted(signature)) + "}"


def _call_text(name: str, objs) -> str:
    return f"{name}({', '.join(str(o) for o in objs)})"


def _guard_note(conn: ApplicationConnector, name: str, signature,
                objs) -> str | None:
    """None when the guard passes, otherwise a message naming the call,
    the argument classes and the admissible signature."""
    classes = [conn.classes_of(o.obj) for o in objs]
    if guard_check(signature, classes):
        return None
    shown = ", ".join(_classes_text(c) for c in classes)
    return (f"guard rejected {_call_text(name, (o.obj for o in objs))}: "
            f"argument classes ({shown}) match no tuple of the {name} "
            f"signature {_signature_text(signature)}")


def _split_args(args: tuple[Expr, ...]):
    """Index of the leftmost unevaluated argument, or None if all are
    values (which must then be resolved objects)."""
    for i, arg in enumerate(args):
        if not is_value(arg):
            return i
    for arg in args:
        if not isinstance(arg, ObjVal):
            raise StuckTerm(
                f"interface call argument {format_term(arg)} is not an "
                "object")
    return None


def step(conn: ApplicationConnector, e: Expr) -> Step | None:
    """One transition, or None when e is already a value.

    Raises StuckTerm when e is a non-value no rule applies to.
    """
    if is_value(e):
        return None
    match e:
        case Var(name):
            raise StuckTerm(f"free variable {name}")
        case App(fun, arg):
            if isinstance(fun, Lambda):
                return Step("Red App 3",
                            substitute(fun.body, fun.param, arg))
            if is_value(fun):
                raise StuckTerm(
                    f"applying the non-function {format_term(fun)}")
            inner = step(conn, fun)
            assert inner is not None
            if isinstance(inner.result, Fault):
                return Step("Red App 2", FAULT, inner.note)
            return Step("Red App 1", App(inner.result, arg), inner.note)
        case ConstCall(name):
            obj = conn.resolve_constant(name)
            return Step("Red OCon", ObjVal(obj), f"{name}() -> {obj}")
        case PredCall(name, args):
            i = _split_args(args)
            if i is not None:
                inner = step(conn, args[i])
                assert inner is not None
                if isinstance(inner.result, Fault):
                    return Step("Red PCon 2", FAULT, inner.note)
                new_args = args[:i] + (inner.result,) + args[i + 1:]
                return Step("Red PCon 1", PredCall(name, new_args),
                            inner.note)
            objs = args
            note = _guard_note(conn, name, conn.descriptor.sigma_pred[name],
                               objs)
            if note is not None:
                return Step("Red PCon 3", FAULT, note)
            result = conn.query_predicate(name,
                                          tuple(o.obj for o in objs))
            if isinstance(result, GuardFailure):
                return Step("Red PCon 3", FAULT,
                            f"{_call_text(name, (o.obj for o in objs))} "
                            "rejected by the application")
            text = "true" if result else "false"
            return Step("Red PCon 3", BoolLit(result),
                        f"{_call_text(name, (o.obj for o in objs))} -> "
                        f"{text}")
        case ActCall(name, args):
            i = _split_args(args)
            if i is not None:
                inner = step(conn, args[i])
                assert inner is not None
                if isinstance(inner.result, Fault):
                    return Step("Red ACon 2", FAULT, inner.note)
                new_args = args[:i] + (inner.result,) + args[i + 1:]
                return Step("Red ACon 1", ActCall(name, new_args),
                            inner.note)
            objs = args
            note = _guard_note(conn, name, conn.descriptor.sigma_act[name],
                               objs)
            if note is not None:
                return Step("Red ACon 4", FAULT, note)
            ack = conn.perform_action(name, tuple(o.obj for o in objs))
            if isinstance(ack, GuardFailure):
                return Step("Red ACon 4", FAULT,
                            f"{_call_text(name, (o.obj for o in objs))} "
                            "rejected by the application")
            return Step("Red ACon 3", Skip(),
                        f"{_call_text(name, (o.obj for o in objs))} "
                        "performed")
        case Cond(test, then, orelse):
            if isinstance(test, BoolLit):
                return Step("Red If 3", then if test.value else orelse)
            if is_value(test):
                raise StuckTerm(
                    f"conditional on the non-boolean {format_term(test)}")
            inner = step(conn, test)
            assert inner is not None
            if isinstance(inner.result, Fault):
                return Step("Red If 2", FAULT, inner.note)
            return Step("Red If 1", Cond(inner.result, then, orelse),
                        inner.note)
        case Seq(first, second):
            if isinstance(first, Fault):
                return Step("Red Seq 2", FAULT)
            if isinstance(first, Skip):
                return Step("Red Seq 3", second)
            if is_value(first):
                raise StuckTerm(
                    f"sequencing the non-action {format_term(first)}")
            inner = step(conn, first)
            assert inner is not None
            return Step("Red Seq 1", Seq(inner.result, second), inner.note)
    raise StuckTerm(f"no rule for {format_term(e)}")


def evaluate(conn: ApplicationConnector, e: Expr,
             fuel: int = 10000) -> StepTrace:
    """Run e to a value, recording every transition."""
    steps: list[Step] = []
    current = e
    while True:
        nxt = step(conn, current)
        if nxt is None:
            return StepTrace(initial=e, steps=tuple(steps))
        steps.append(nxt)
        current = nxt.result
        if len(steps) > fuel:
            raise FuelExhausted(f"no value after {fuel} steps")


def render_trace(trace: StepTrace) -> list[str]:
    """One line per transition, `<rule> | <term>`, then the final value."""
    lines = [f"{s.rule} | {format_term(s.result)}" for s in trace.steps]
    lines.append(f"value: {format_term(trace.final)}")
    return lines


def exception_note(trace: StepTrace) -> str | None:
    """The note attached to the transition that raised the exception."""
    if not isinstance(trace.final, Fault):
        return None
    for s in trace.steps:
        if isinstance(s.result, Fault) or (
                isinstance(s.result, Seq)
                and isinstance(s.result.first, Fault)):
            return s.note
    return None


# ---------------------------------------------------------------------------
# Preservation checking
#
# Run-time snapshots may contain the exception value, which the surface
# typechecker rejects.  The checker below types a snapshot against an
# expected type, treating the exception value as belonging to every type.

_ANY = object()


def _synth(env: Mapping[str, Type], e: Expr, iface):
    match e:
        case Fault():
            return _ANY
        case Lambda(param, param_type, body):
            body_type = _synth({**env, param: param_type}, body, iface)
            if body_type is _ANY:
                return _ANY
            fun_type = Fun(param_type, body_type)
            if not is_wellformed(fun_type):
                raise TypeCheckError(f"ill-formed {fun_type}")
            return fun_type
        case App(fun, arg):
            fun_type = _synth(env, fun, iface)
            if fun_type is _ANY:
                _synth(env, arg, iface)
                return _ANY
            if not isinstance(fun_type, Fun):
                raise TypeCheckError("applying a non-function")
            arg_type = _synth(env, arg, iface)
            if arg_type is not _ANY and arg_type != fun_type.domain:
                raise TypeCheckError("argument type mismatch")
            return fun_type.codomain
        case Cond(test, then, orelse):
            test_type = _synth(env, test, iface)
            if test_type is not _ANY and test_type != BOOL:
                raise TypeCheckError("non-boolean test")
            then_type = _synth(env, then, iface)
            else_type = _synth(env, orelse, iface)
            if then_type is _ANY:
                return else_type
            if else_type is _ANY:
                return then_type
            if then_type != else_type:
                raise TypeCheckError("branch mismatch")
            return then_type
        case Seq(first, second):
            for part in (first, second):
                part_type = _synth(env, part, iface)
                if part_type is not _ANY and part_type != ACT:
                    raise TypeCheckError("non-action in sequence")
            return ACT
        case PredCall(name, args) | ActCall(name, args):
            wanted = (iface.predicates if isinstance(e, PredCall)
                      else iface.actions)
            if name not in wanted or wanted[name] != len(args):
                raise TypeCheckError(f"bad call {name}")
            for arg in args:
                arg_type = _synth(env, arg, iface)
                if arg_type is not _ANY and arg_type != OBJ:
                    raise TypeCheckError("non-object argument")
            return BOOL if isinstance(e, PredCall) else ACT
        case _:
            return type_of(env, e, iface)


def typable_at(e: Expr, expected: Type, iface) -> bool:
    try:
        t = _synth({}, e, iface)
    except TypeCheckError:
        return False
    return t is _ANY or t == expected


def check_preservation(e: Expr, trace: StepTrace, iface) -> bool:
    """True iff every snapshot in the trace still has e's type (snapshots
    containing the exception value are checked as far as possible)."""
    try:
        expected = type_of({}, e, iface)
    except TypeCheckError:
        return False
    return all(typable_at(s.result, expected, iface) for s in trace.steps)
