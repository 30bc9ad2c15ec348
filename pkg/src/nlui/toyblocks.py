"""ToyBlocks reference application.

Two blocks and a table.  A block can sit on the table or on the other
block, giving three reachable configurations:

    s1  both blocks on the table
    s2  block 1 on block 2, block 2 on the table
    s3  block 2 on block 1, block 1 on the table

The application is shipped in two interchangeable forms: an explicit
finite-state model whose lookup tables are written out literally below,
and a live connector that computes the same behavior from a mutable
world.  Tests hold the two against each other; do not derive one from
the other.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from .grammar import Lexicon, load_lexicon
from .interface import (
    ApplicationConnector, GuardFailure, InterfaceDescriptor, ModelApplication,
    ObjectRef, UnknownName, guard_check,
)

BLOCK = "block"
POSITION = "position"

B1 = ObjectRef("b1", "block 1")
B2 = ObjectRef("b2", "block 2")
TABLE = ObjectRef("t", "the table")

OBJECT_CLASSES: dict[str, frozenset[str]] = {
    "b1": frozenset({BLOCK, POSITION}),
    "b2": frozenset({BLOCK, POSITION}),
    "t": frozenset({POSITION}),
}


def toyblocks_descriptor() -> InterfaceDescriptor:
    return InterfaceDescriptor(
        constants=frozenset({"b1", "b2", "table"}),
        predicates={"is_on": 2},
        actions={"move": 2},
        classes=frozenset({BLOCK, POSITION}),
        sigma_const={
            "b1": frozenset({BLOCK, POSITION}),
            "b2": frozenset({BLOCK, POSITION}),
            "table": frozenset({POSITION}),
        },
        sigma_pred={"is_on": frozenset({(BLOCK, POSITION)})},
        sigma_act={"move": frozenset({(BLOCK, POSITION)})},
    )


def toyblocks_model() -> ModelApplication:
    """The explicit three-state model, tables spelled out in full."""
    states = frozenset({"s1", "s2", "s3"})
    objects = {"b1": B1, "b2": B2, "t": TABLE}

    const_table = {
        (state, name): ident
        for state in ("s1", "s2", "s3")
        for name, ident in (("b1", "b1"), ("b2", "b2"), ("table", "t"))
    }

    pred_rows = [
        # state, first, second, holds
        ("s1", "b1", "b1", False),
        ("s1", "b1", "b2", False),
        ("s1", "b1", "t", True),
        ("s1", "b2", "b1", False),
        ("s1", "b2", "b2", False),
        ("s1", "b2", "t", True),
        ("s2", "b1", "b1", False),
        ("s2", "b1", "b2", True),
        ("s2", "b1", "t", False),
        ("s2", "b2", "b1", False),
        ("s2", "b2", "b2", False),
        ("s2", "b2", "t", True),
        ("s3", "b1", "b1", False),
        ("s3", "b1", "b2", False),
        ("s3", "b1", "t", True),
        ("s3", "b2", "b1", True),
        ("s3", "b2", "b2", False),
        ("s3", "b2", "t", False),
    ]
    pred_table = {
        (state, "is_on", (a, b)): holds for state, a, b, holds in pred_rows}

    act_rows = [
        # state, block, target, successor
        ("s1", "b1", "b1", "s1"),
        ("s1", "b1", "b2", "s2"),
        ("s1", "b1", "t", "s1"),
        ("s1", "b2", "b1", "s3"),
        ("s1", "b2", "b2", "s1"),
        ("s1", "b2", "t", "s1"),
        ("s2", "b1", "b1", "s2"),
        ("s2", "b1", "b2", "s2"),
        ("s2", "b1", "t", "s1"),
        ("s2", "b2", "b1", "s2"),
        ("s2", "b2", "b2", "s2"),
        ("s2", "b2", "t", "s2"),
        ("s3", "b1", "b1", "s3"),
        ("s3", "b1", "b2", "s3"),
        ("s3", "b1", "t", "s3"),
        ("s3", "b2", "b1", "s3"),
        ("s3", "b2", "b2", "s3"),
        ("s3", "b2", "t", "s1"),
    ]
    act_table = {
        (state, "move", (a, b)): succ for state, a, b, succ in act_rows}

    return ModelApplication(
        descriptor=toyblocks_descriptor(),
        states=states,
        objects=objects,
        object_classes=dict(OBJECT_CLASSES),
        const_table=const_table,
        pred_table=pred_table,
        act_table=act_table,
        initial="s1",
        current="s1",
    )


# ---------------------------------------------------------------------------
# Live world


@dataclass
class ToyBlocksWorld:
    """Mutable block world; `on` maps a block to what it rests on."""

    on: dict[str, str] = field(
        default_factory=lambda: {"b1": "t", "b2": "t"})

    def carried(self, ident: str) -> bool:
        return any(pos == ident for pos in self.on.values())

    def move(self, block: str, target: str) -> None:
        # a block with another block on it cannot move; moving a block
        # onto itself means leaving it where it is
        if self.carried(block) or block == target:
            return
        self.on[block] = target

    def is_on(self, block: str, target: str) -> bool:
        return self.on[block] == target

    def state_label(self) -> str:
        if self.on == {"b1": "t", "b2": "t"}:
            return "s1"
        if self.on == {"b1": "b2", "b2": "t"}:
            return "s2"
        if self.on == {"b1": "t", "b2": "b1"}:
            return "s3"
        raise ValueError(f"unreachable configuration {self.on}")


def world_for_state(label: str) -> ToyBlocksWorld:
    layouts = {
        "s1": {"b1": "t", "b2": "t"},
        "s2": {"b1": "b2", "b2": "t"},
        "s3": {"b1": "t", "b2": "b1"},
    }
    if label not in layouts:
        raise ValueError(f"unknown state {label}")
    return ToyBlocksWorld(on=dict(layouts[label]))


_CONSTANT_OBJECTS = {"b1": B1, "b2": B2, "table": TABLE}


class _WorldConnector(ApplicationConnector):
    def __init__(self, world: ToyBlocksWorld):
        self.world = world
        self.descriptor = toyblocks_descriptor()

    def resolve_constant(self, name: str) -> ObjectRef:
        if name not in _CONSTANT_OBJECTS:
            raise UnknownName(f"unknown constant {name}")
        return _CONSTANT_OBJECTS[name]

    def classes_of(self, obj: ObjectRef) -> frozenset[str]:
        if obj.ident not in OBJECT_CLASSES:
            raise UnknownName(f"unknown object {obj.ident}")
        return OBJECT_CLASSES[obj.ident]

    def _guard(self, signature, args) -> bool:
        return guard_check(signature, [self.classes_of(o) for o in args])

    def query_predicate(self, name, args):
        if name != "is_on":
            raise UnknownName(f"unknown predicate {name}")
        if not self._guard(self.descriptor.sigma_pred[name], args):
            return GuardFailure(name, tuple(args))
        block, target = args
        return self.world.is_on(block.ident, target.ident)

    def perform_action(self, name, args):
        if name != "move":
            raise UnknownName(f"unknown action {name}")
        if not self._guard(self.descriptor.sigma_act[name], args):
            return GuardFailure(name, tuple(args))
        block, target = args
        self.world.move(block.ident, target.ident)
        return None


def toyblocks_live_connector(
        world: ToyBlocksWorld | None = None) -> ApplicationConnector:
    return _WorldConnector(world if world is not None else ToyBlocksWorld())


def toyblocks_lexicon() -> Lexicon:
    text = resources.files("nlui").joinpath("data/toyblocks.lex").read_text()
    return load_lexicon(text, toyblocks_descriptor())
