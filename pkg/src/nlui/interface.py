"""Application interface layer.

An application exposes named constants, predicates and actions, a set of
class names, and a signature map sigma assigning classes to constants and
admissible class tuples to predicates and actions.  The evaluator talks to
an application only through the ApplicationConnector protocol; whether the
application is an explicit finite-state model or a live system is
invisible to it.

ModelApplication is the explicit form: finitely many states and objects
with lookup tables for every interface call.  It can be serialized to and
from a line-oriented text format (see load_model / dump_model).
"""
from __future__ import annotations

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class ObjectRef:
    """Handle for an application object.

    `ident` is the stable internal name, `display` the human-readable one
    used in traces and state listings.
    """

    ident: str
    display: str

    def __str__(self) -> str:
        return self.display


@dataclass(frozen=True)
class GuardFailure:
    """Returned by a connector when a call's arguments fall outside the
    classes its signature admits."""

    name: str
    args: tuple[ObjectRef, ...]


@dataclass(frozen=True)
class InterfaceDescriptor:
    constants: frozenset[str]
    predicates: dict[str, int]
    actions: dict[str, int]
    classes: frozenset[str]
    sigma_const: dict[str, frozenset[str]]
    sigma_pred: dict[str, frozenset[tuple[str, ...]]]
    sigma_act: dict[str, frozenset[tuple[str, ...]]]


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    message: str


def validate_descriptor(d: InterfaceDescriptor) -> list[Violation]:
    """Check internal consistency; returns one violation per failed rule."""
    out: list[Violation] = []

    def bad(kind: str, subject: str, message: str) -> None:
        out.append(Violation(kind, subject, message))

    overlap = (d.constants & set(d.predicates)) | \
        (d.constants & set(d.actions)) | \
        (set(d.predicates) & set(d.actions))
    for name in sorted(overlap):
        bad("name-clash", name, f"{name} is declared in more than one role")
    for name, arity in d.predicates.items():
        if arity < 1:
            bad("arity", name, f"predicate {name} must take arguments")
    for name, arity in d.actions.items():
        if arity < 0:
            bad("arity", name, f"action {name} has negative arity")
    for name in d.constants:
        if name not in d.sigma_const:
            bad("missing-sigma", name, f"constant {name} has no classes")
        elif not d.sigma_const[name]:
            bad("empty-sigma", name, f"constant {name} has an empty class set")
    for name in d.sigma_const:
        if name not in d.constants:
            bad("unknown-name", name, f"sigma names unknown constant {name}")
    for sigma, declared, role in (
            (d.sigma_pred, d.predicates, "predicate"),
            (d.sigma_act, d.actions, "action")):
        for name in declared:
            if name not in sigma:
                bad("missing-sigma", name, f"{role} {name} has no signature")
        for name, tuples in sigma.items():
            if name not in declared:
                bad("unknown-name", name,
                    f"sigma names unknown {role} {name}")
                continue
            for tup in tuples:
                if len(tup) != declared[name]:
                    bad("arity", name,
                        f"{role} {name} signature tuple {tup} does not "
                        f"match arity {declared[name]}")
    for name, classes in d.sigma_const.items():
        for cls in classes:
            if cls not in d.classes:
                bad("unknown-class", name,
                    f"constant {name} uses undeclared class {cls}")
    for sigma in (d.sigma_pred, d.sigma_act):
        for name, tuples in sigma.items():
            for tup in tuples:
                for cls in tup:
                    if cls not in d.classes:
                        bad("unknown-class", name,
                            f"{name} signature uses undeclared class {cls}")
    return out


def guard_check(signature: Iterable[tuple[str, ...]],
                arg_classes: Sequence[frozenset[str] | set[str]]) -> bool:
    """True iff some signature tuple is componentwise covered by the
    argument class sets.  A zero-arity signature containing the empty
    tuple admits the empty argument list."""
    return any(
        len(tup) == len(arg_classes)
        and all(cls in classes for cls, classes in zip(tup, arg_classes))
        for tup in signature)


class ApplicationConnector(ABC):
    """What the evaluator needs from a running application.

    query_predicate must never change observable state; perform_action may.
    Implementations check the class guard themselves and return
    GuardFailure instead of acting when it fails, so that a connector is
    safe to drive directly.
    """

    descriptor: InterfaceDescriptor

    @abstractmethod
    def resolve_constant(self, name: str) -> ObjectRef: ...

    @abstractmethod
    def query_predicate(self, name: str,
                        args: tuple[ObjectRef, ...]) -> bool | GuardFailure:
        ...

    @abstractmethod
    def perform_action(self, name: str,
                       args: tuple[ObjectRef, ...]) -> GuardFailure | None:
        ...

    @abstractmethod
    def classes_of(self, obj: ObjectRef) -> frozenset[str]: ...

    def guard_passes(self, signature: Iterable[tuple[str, ...]],
                     args: tuple[ObjectRef, ...]) -> bool:
        return guard_check(signature, [self.classes_of(o) for o in args])


class UnknownName(Exception):
    pass


class UnknownState(Exception):
    pass


class ModelError(Exception):
    pass


@dataclass(eq=True)
class ModelApplication:
    """Explicit-state application: lookup tables over finite states.

    Tables are keyed by object idents (strings) so that models loaded from
    text compare equal to ones built in code.
    """

    descriptor: InterfaceDescriptor
    states: frozenset[str]
    objects: dict[str, ObjectRef]
    object_classes: dict[str, frozenset[str]]
    const_table: dict[tuple[str, str], str]
    pred_table: dict[tuple[str, str, tuple[str, ...]], bool]
    act_table: dict[tuple[str, str, tuple[str, ...]], str]
    initial: str
    # runtime cursor, not part of the model's identity
    current: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if not self.current:
            self.current = self.initial

    def _object(self, ident: str) -> ObjectRef:
        if ident not in self.objects:
            raise UnknownName(f"unknown object {ident}")
        return self.objects[ident]


def model_step_constant(m: ModelApplication, name: str) -> ObjectRef:
    if name not in m.descriptor.constants:
        raise UnknownName(f"unknown constant {name}")
    try:
        ident = m.const_table[(m.current, name)]
    except KeyError:
        raise ModelError(
            f"constant {name} undefined in state {m.current}") from None
    return m._object(ident)


def _guard_objs(m: ModelApplication, name: str, sig, args) -> bool:
    classes = [m.object_classes[o.ident] for o in args]
    return guard_check(sig, classes)


def model_step_predicate(m: ModelApplication, name: str,
                         args: tuple[ObjectRef, ...]) -> bool | GuardFailure:
    if name not in m.descriptor.predicates:
        raise UnknownName(f"unknown predicate {name}")
    if not _guard_objs(m, name, m.descriptor.sigma_pred[name], args):
        return GuardFailure(name, tuple(args))
    key = (m.current, name, tuple(o.ident for o in args))
    try:
        return m.pred_table[key]
    except KeyError:
        raise ModelError(
            f"predicate table undefined at {key}") from None


def model_step_action(m: ModelApplication, name: str,
                      args: tuple[ObjectRef, ...]) -> str | GuardFailure:
    """Compute the successor state; does not change m.current."""
    if name not in m.descriptor.actions:
        raise UnknownName(f"unknown action {name}")
    if not _guard_objs(m, name, m.descriptor.sigma_act[name], args):
        return GuardFailure(name, tuple(args))
    key = (m.current, name, tuple(o.ident for o in args))
    try:
        return m.act_table[key]
    except KeyError:
        raise ModelError(f"action table undefined at {key}") from None


class _ModelConnector(ApplicationConnector):
    def __init__(self, model: ModelApplication):
        self.model = model
        self.descriptor = model.descriptor

    def resolve_constant(self, name: str) -> ObjectRef:
        return model_step_constant(self.model, name)

    def query_predicate(self, name, args):
        return model_step_predicate(self.model, name, args)

    def perform_action(self, name, args):
        result = model_step_action(self.model, name, args)
        if isinstance(result, GuardFailure):
            return result
        self.model.current = result
        return None

    def classes_of(self, obj: ObjectRef) -> frozenset[str]:
        if obj.ident not in self.model.object_classes:
            raise UnknownName(f"unknown object {obj.ident}")
        return self.model.object_classes[obj.ident]


def model_as_connector(m: ModelApplication) -> ApplicationConnector:
    return _ModelConnector(m)


def validate_model(m: ModelApplication) -> list[Violation]:
    """Check a model against its descriptor: table totality on exactly the
    guarded tuples, valid successor states, and constant classes covered
    by their denotations' classes in every state."""
    out: list[Violation] = []
    out.extend(validate_descriptor(m.descriptor))
    d = m.descriptor
    if m.initial not in m.states:
        out.append(Violation("unknown-state", m.initial,
                             f"initial state {m.initial} not declared"))
    for ident, classes in m.object_classes.items():
        for cls in classes:
            if cls not in d.classes:
                out.append(Violation(
                    "unknown-class", ident,
                    f"object {ident} uses undeclared class {cls}"))

    idents = sorted(m.objects)
    for state in sorted(m.states):
        for name in sorted(d.constants):
            if (state, name) not in m.const_table:
                out.append(Violation(
                    "partial-table", name,
                    f"constant {name} undefined in state {state}"))
                continue
            ident = m.const_table[(state, name)]
            if ident not in m.objects:
                out.append(Violation(
                    "unknown-name", name,
                    f"constant {name} denotes unknown object {ident}"))
                continue
            missing = d.sigma_const[name] - m.object_classes[ident]
            if missing:
                out.append(Violation(
                    "class-mismatch", name,
                    f"in state {state}, {name} denotes {ident} which lacks "
                    f"classes {sorted(missing)}"))

    def guarded(sig, arity):
        from itertools import product
        for tup in product(idents, repeat=arity):
            if guard_check(sig, [m.object_classes[i] for i in tup]):
                yield tup

    for name, arity in d.predicates.items():
        want = set(guarded(d.sigma_pred[name], arity))
        for state in sorted(m.states):
            have = {k[2] for k in m.pred_table
                    if k[0] == state and k[1] == name}
            for tup in sorted(want - have):
                out.append(Violation(
                    "partial-table", name,
                    f"predicate {name} undefined at {state} {tup}"))
            for tup in sorted(have - want):
                out.append(Violation(
                    "overdefined-table", name,
                    f"predicate {name} defined at unguarded {state} {tup}"))
    for name, arity in d.actions.items():
        want = set(guarded(d.sigma_act[name], arity))
        for state in sorted(m.states):
            have = {k[2] for k in m.act_table
                    if k[0] == state and k[1] == name}
            for tup in sorted(want - have):
                out.append(Violation(
                    "partial-table", name,
                    f"action {name} undefined at {state} {tup}"))
            for tup in sorted(have - want):
                out.append(Violation(
                    "overdefined-table", name,
                    f"action {name} defined at unguarded {state} {tup}"))
            for tup in sorted(want & have):
                succ = m.act_table[(state, name, tup)]
                if succ not in m.states:
                    out.append(Violation(
                        "unknown-state", name,
                        f"action {name} at {state} {tup} leads to "
                        f"undeclared state {succ}"))
    return out


# ---------------------------------------------------------------------------
# Text format

_QUOTED = re.compile(r'^(\S+)\s+"([^"]*)"\s*:\s*(.*)$')
_CALL_LINE = re.compile(
    r"^(\S+)\s+([A-Za-z_][A-Za-z0-9_]*)\((.*?)\)\s*->\s*(\S+)$")


class ModelFormatError(Exception):
    pass


def _split_names(text: str) -> list[str]:
    text = text.strip()
    if not text:
        return []
    return [part.strip() for part in text.split(",")]


def load_model(text: str) -> ModelApplication:
    classes: frozenset[str] = frozenset()
    constants: set[str] = set()
    predicates: dict[str, int] = {}
    actions: dict[str, int] = {}
    sigma_const: dict[str, frozenset[str]] = {}
    sigma_pred: dict[str, frozenset[tuple[str, ...]]] = {}
    sigma_act: dict[str, frozenset[tuple[str, ...]]] = {}
    states: frozenset[str] = frozenset()
    initial: str | None = None
    objects: dict[str, ObjectRef] = {}
    object_classes: dict[str, frozenset[str]] = {}
    const_table: dict[tuple[str, str], str] = {}
    pred_table: dict[tuple[str, str, tuple[str, ...]], bool] = {}
    act_table: dict[tuple[str, str, tuple[str, ...]], str] = {}

    def parse_tuples(text: str, lineno: int) -> frozenset[tuple[str, ...]]:
        tuples = []
        for group in re.findall(r"\(([^)]*)\)", text):
            tuples.append(tuple(_split_names(group)))
        if not tuples:
            raise ModelFormatError(
                f"line {lineno}: expected (class, ...) groups")
        return frozenset(tuples)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "classes:":
            classes = frozenset(_split_names(rest))
        elif keyword == "constant":
            name, sep, clss = rest.partition(":")
            if not sep:
                raise ModelFormatError(f"line {lineno}: missing ':'")
            name = name.strip()
            constants.add(name)
            sigma_const[name] = frozenset(_split_names(clss))
        elif keyword in ("predicate", "action"):
            head, sep, sig = rest.partition(":")
            if not sep or "/" not in head:
                raise ModelFormatError(
                    f"line {lineno}: expected name/arity : (classes)")
            name, arity_text = head.strip().split("/", 1)
            arity = int(arity_text)
            tuples = parse_tuples(sig, lineno)
            if keyword == "predicate":
                predicates[name] = arity
                sigma_pred[name] = tuples
            else:
                actions[name] = arity
                sigma_act[name] = tuples
        elif keyword == "states:":
            states = frozenset(_split_names(rest))
        elif keyword == "initial:":
            initial = rest
        elif keyword == "object":
            m = _QUOTED.match(rest)
            if m is None:
                raise ModelFormatError(
                    f'line {lineno}: expected: object ident "display" : '
                    "classes")
            ident, display, clss = m.groups()
            objects[ident] = ObjectRef(ident, display)
            object_classes[ident] = frozenset(_split_names(clss))
        elif keyword == "const":
            parts = rest.split()
            if len(parts) != 4 or parts[2] != "->":
                raise ModelFormatError(
                    f"line {lineno}: expected: const state name -> ident")
            state, name, _, ident = parts
            const_table[(state, name)] = ident
        elif keyword in ("pred", "act"):
            m = _CALL_LINE.match(rest)
            if m is None:
                raise ModelFormatError(
                    f"line {lineno}: expected: {keyword} state "
                    "name(args) -> result")
            state, name, arg_text, result = m.groups()
            args = tuple(_split_names(arg_text))
            if keyword == "pred":
                if result not in ("true", "false"):
                    raise ModelFormatError(
                        f"line {lineno}: predicate result must be "
                        "true or false")
                pred_table[(state, name, args)] = result == "true"
            else:
                act_table[(state, name, args)] = result
        else:
            raise ModelFormatError(
                f"line {lineno}: unknown directive {keyword!r}")

    if initial is None:
        raise ModelFormatError("missing 'initial:' line")
    if not states:
        raise ModelFormatError("missing 'states:' line")

    descriptor = InterfaceDescriptor(
        constants=frozenset(constants),
        predicates=predicates,
        actions=actions,
        classes=classes,
        sigma_const=sigma_const,
        sigma_pred=sigma_pred,
        sigma_act=sigma_act,
    )
    return ModelApplication(
        descriptor=descriptor,
        states=states,
        objects=objects,
        object_classes=object_classes,
        const_table=const_table,
        pred_table=pred_table,
        act_table=act_table,
        initial=initial,
        current=initial,
    )


def dump_model(m: ModelApplication) -> str:
    """Serialize in a canonical order; load_model(dump_model(m)) == m.
    The current-state cursor is not serialized (loads start initial)."""
    d = m.descriptor
    lines: list[str] = []
    lines.append(f"classes: {', '.join(sorted(d.classes))}")
    lines.append("")
    for name in sorted(d.constants):
        lines.append(
            f"constant {name} : {', '.join(sorted(d.sigma_const[name]))}")
    for name in sorted(d.predicates):
        tuples = " ".join(
            f"({', '.join(tup)})" for tup in sorted(d.sigma_pred[name]))
        lines.append(f"predicate {name}/{d.predicates[name]} : {tuples}")
    for name in sorted(d.actions):
        tuples = " ".join(
            f"({', '.join(tup)})" for tup in sorted(d.sigma_act[name]))
        lines.append(f"action {name}/{d.actions[name]} : {tuples}")
    lines.append("")
    lines.append(f"states: {', '.join(sorted(m.states))}")
    lines.append(f"initial: {m.initial}")
    for ident in sorted(m.objects):
        ref = m.objects[ident]
        classes = ", ".join(sorted(m.object_classes[ident]))
        lines.append(f'object {ident} "{ref.display}" : {classes}')
    lines.append("")
    for (state, name), ident in sorted(m.const_table.items()):
        lines.append(f"const {state} {name} -> {ident}")
    lines.append("")
    for (state, name, args), value in sorted(m.pred_table.items()):
        rendered = "true" if value else "false"
        lines.append(f"pred {state} {name}({', '.join(args)}) -> {rendered}")
    lines.append("")
    for (state, name, args), succ in sorted(m.act_table.items()):
        lines.append(f"act {state} {name}({', '.join(args)}) -> {succ}")
    return "\n".join(lines) + "\n"
