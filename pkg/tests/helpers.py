"""Shared test machinery: spy connectors, independent oracles and a
random well-typed term generator.

The oracles here are deliberately written from first principles (brute
force, direct rule instantiation) rather than by calling the code under
test, so they can disagree with it.
"""
from __future__ import annotations

import itertools
import random

from nlui.calculus import (
    ACT, BOOL, OBJ, ActCall, App, BoolLit, Cond, ConstCall, Expr, Fun,
    Lambda, PredCall, Seq, Skip, Type, Var, canonical, is_wellformed,
)
from nlui.grammar import (
    Base, Category, Over, Under, assign_type, beta_normalize,
)
from nlui.interface import ApplicationConnector

# one verdict string per end-to-end criterion, printed by conftest.py in
# the terminal summary
ACCEPTANCE_VERDICTS: list[str] = []


class SpyConnector(ApplicationConnector):
    """Wraps a connector and records every call reaching the application."""

    def __init__(self, inner: ApplicationConnector):
        self.inner = inner
        self.descriptor = inner.descriptor
        self.performed: list[tuple[str, tuple]] = []
        self.queried: list[tuple[str, tuple]] = []
        self.resolved: list[str] = []

    def resolve_constant(self, name):
        self.resolved.append(name)
        return self.inner.resolve_constant(name)

    def query_predicate(self, name, args):
        self.queried.append((name, tuple(args)))
        return self.inner.query_predicate(name, args)

    def perform_action(self, name, args):
        self.performed.append((name, tuple(args)))
        return self.inner.perform_action(name, args)

    def classes_of(self, obj):
        return self.inner.classes_of(obj)


def brute_force_guard(signature, arg_classes) -> bool:
    """Reference guard: expand the full Cartesian product of the argument
    class sets and intersect with the signature."""
    product = itertools.product(*[sorted(classes) for classes in arg_classes])
    return any(tup in signature for tup in product)


# ---------------------------------------------------------------------------
# Independent sequent enumerator


def connective_count(c: Category) -> int:
    if isinstance(c, Base):
        return 0
    if isinstance(c, Over):
        return 1 + connective_count(c.result) + connective_count(c.arg)
    return 1 + connective_count(c.arg) + connective_count(c.result)


def enumerate_meanings(items, goal, assignment) -> frozenset:
    """All meanings derivable for `items => goal`, as canonical beta-normal
    terms, found by directly instantiating the five rule schemas with an
    explicit depth bound (total connective count plus slack).
    """
    fuel = (sum(connective_count(c) for _, c in items)
            + connective_count(goal) + 2)
    counter = itertools.count(1)

    def key(term: Expr) -> Expr:
        return canonical(beta_normalize(term))

    def search(items, goal, fuel) -> list[Expr]:
        if not items or fuel < 0:
            return []
        found: dict[Expr, Expr] = {}

        def add(term: Expr) -> None:
            found.setdefault(key(term), term)

        if len(items) == 1 and items[0][1] == goal:
            add(items[0][0])
        for i, (alpha, cat) in enumerate(items):
            if isinstance(cat, Over):
                for j in range(i + 2, len(items) + 1):
                    for beta in search(items[i + 1:j], cat.arg, fuel - 1):
                        squeezed = (items[:i]
                                    + ((App(alpha, beta), cat.result),)
                                    + items[j:])
                        for gamma in search(squeezed, goal, fuel - 1):
                            add(gamma)
            elif isinstance(cat, Under):
                for k in range(i):
                    for beta in search(items[k:i], cat.arg, fuel - 1):
                        squeezed = (items[:k]
                                    + ((App(alpha, beta), cat.result),)
                                    + items[i + 1:])
                        for gamma in search(squeezed, goal, fuel - 1):
                            add(gamma)
        if isinstance(goal, Over):
            x = f"y{next(counter)}"
            premise = items + ((Var(x), goal.arg),)
            for beta in search(premise, goal.result, fuel - 1):
                add(Lambda(x, assign_type(assignment, goal.arg), beta))
        elif isinstance(goal, Under):
            x = f"y{next(counter)}"
            premise = ((Var(x), goal.arg),) + items
            for beta in search(premise, goal.result, fuel - 1):
                add(Lambda(x, assign_type(assignment, goal.arg), beta))
        return list(found.values())

    return frozenset(key(t) for t in search(tuple(items), goal, fuel))


# ---------------------------------------------------------------------------
# Random well-typed terms over the ToyBlocks interface


def _random_pure_type(rng: random.Random, depth: int) -> Type:
    if depth <= 0 or rng.random() < 0.6:
        return rng.choice((OBJ, BOOL))
    return Fun(_random_pure_type(rng, depth - 1),
               _random_pure_type(rng, depth - 1))


def random_type(rng: random.Random, depth: int = 2) -> Type:
    """A random well-formed type, impure ones included."""
    roll = rng.random()
    if depth <= 0 or roll < 0.5:
        return rng.choice((OBJ, BOOL, ACT))
    if roll < 0.75:
        return Fun(_random_pure_type(rng, depth - 1),
                   _random_pure_type(rng, depth - 1))
    # an effectful function: anything -> Act
    t = Fun(random_type(rng, depth - 1), ACT)
    assert is_wellformed(t)
    return t


def random_well_typed(rng: random.Random, target: Type,
                      env: dict[str, Type] | None = None,
                      depth: int = 6) -> Expr:
    """A closed (when env is empty) expression of the target type, built
    over the ToyBlocks interface names."""
    env = {} if env is None else env

    def leaf(target: Type) -> Expr:
        candidates: list[Expr] = [
            Var(name) for name, t in env.items() if t == target]
        if target == OBJ:
            candidates.extend(
                ConstCall(rng.choice(("b1", "b2", "table")))
                for _ in range(2))
        elif target == BOOL:
            candidates.append(BoolLit(rng.random() < 0.5))
        elif target == ACT:
            candidates.append(Skip())
        else:
            assert isinstance(target, Fun)
            param = f"v{len(env) + 1}"
            body = random_well_typed(
                rng, target.codomain, {**env, param: target.domain}, 0)
            candidates.append(Lambda(param, target.domain, body))
        return rng.choice(candidates)

    def build(target: Type, depth: int) -> Expr:
        if depth <= 0:
            return leaf(target)
        options = ["leaf", "cond", "app"]
        if target == BOOL:
            options.append("pred")
        if target == ACT:
            options.extend(["act", "seq"])
        if isinstance(target, Fun):
            options.extend(["lambda", "lambda"])
        choice = rng.choice(options)
        if choice == "leaf":
            return leaf(target)
        if choice == "cond":
            return Cond(build(BOOL, depth - 1), build(target, depth - 1),
                        build(target, depth - 1))
        if choice == "app":
            # the function type must stay well-formed
            if target == ACT:
                domain = random_type(rng, 1)
            else:
                domain = _random_pure_type(rng, 1)
            fun = build(Fun(domain, target), depth - 1)
            return App(fun, build(domain, depth - 1))
        if choice == "pred":
            return PredCall("is_on", (build(OBJ, depth - 1),
                                      build(OBJ, depth - 1)))
        if choice == "act":
            return ActCall("move", (build(OBJ, depth - 1),
                                    build(OBJ, depth - 1)))
        if choice == "seq":
            return Seq(build(ACT, depth - 1), build(ACT, depth - 1))
        assert choice == "lambda" and isinstance(target, Fun)
        param = f"v{len(env) + 1}"
        env[param] = target.domain
        body = build(target.codomain, depth - 1)
        del env[param]
        return Lambda(param, target.domain, body)

    return build(target, depth)
