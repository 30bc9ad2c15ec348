"""Categorial grammar over the action calculus.

Categories are built from base names (for the shipped vocabulary: np, pp,
s, a) with two functor forms: A/B consumes a B to its right, B\\A one to
its left.  A lexicon pairs multiword phrases with readings, each a closed
calculus term together with a category; the type assignment sends base
categories to calculus types and functors to function types.

Parsing is backward proof search over sequents whose items are
(term, category) pairs.  Each rule application composes the item terms,
so a derivation of the goal category carries the sentence's meaning.
Search terminates because every rule strictly shrinks the total number
of functor connectives.  Derivations whose sequents mention a functor
category with an ill-formed type are discarded: such categories would
let effectful meanings hide inside pure ones.

A sentence is considered unambiguous when all surviving derivations have
beta-equal meanings; parse() collapses them and returns one witness term.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .calculus import (
    App, Expr, Lambda, Type, TypeCheckError, Var, canonical, free_vars,
    is_wellformed, substitute, type_of,
)
from .interface import InterfaceDescriptor
from .syntax import (
    TermSyntaxError, format_term, format_type, parse_term, parse_type,
)


# ---------------------------------------------------------------------------
# Categories


@dataclass(frozen=True)
class Category:
    """Base class for grammar categories."""


@dataclass(frozen=True)
class Base(Category):
    name: str


@dataclass(frozen=True)
class Over(Category):
    """result/arg: consumes an `arg` phrase on the right."""

    result: Category
    arg: Category


@dataclass(frozen=True)
class Under(Category):
    """arg\\result: consumes an `arg` phrase on the left."""

    arg: Category
    result: Category


class CategorySyntaxError(Exception):
    pass


class UnknownBaseCategory(Exception):
    pass


_CAT_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|[/\\()])")


def parse_category(text: str) -> Category:
    tokens: list[str] = []
    pos = 0
    while pos < len(text):
        m = _CAT_TOKEN.match(text, pos)
        if m is None:
            if not text[pos:].strip():
                break
            raise CategorySyntaxError(f"bad category text {text!r}")
        tokens.append(m.group(1))
        pos = m.end()
    i = 0

    def atom() -> Category:
        nonlocal i
        if i >= len(tokens):
            raise CategorySyntaxError(f"truncated category {text!r}")
        tok = tokens[i]
        i += 1
        if tok == "(":
            inner = chain()
            if i >= len(tokens) or tokens[i] != ")":
                raise CategorySyntaxError(f"unbalanced parens in {text!r}")
            i += 1
            return inner
        if tok in ("/", "\\", ")"):
            raise CategorySyntaxError(f"unexpected {tok!r} in {text!r}")
        return Base(tok)

    def chain() -> Category:
        # operators associate left: a/pp/np reads as (a/pp)/np
        nonlocal i
        left = atom()
        while i < len(tokens) and tokens[i] in ("/", "\\"):
            op = tokens[i]
            i += 1
            right = atom()
            left = Over(left, right) if op == "/" else Under(left, right)
        return left

    out = chain()
    if i != len(tokens):
        raise CategorySyntaxError(f"trailing input in category {text!r}")
    return out


def format_category(c: Category) -> str:
    def wrap(part: Category) -> str:
        text = format_category(part)
        return f"({text})" if isinstance(part, (Over, Under)) else text

    match c:
        case Base(name):
            return name
        case Over(result, arg):
            return f"{wrap(result)}/{wrap(arg)}"
        case Under(arg, result):
            return f"{wrap(arg)}\\{wrap(result)}"
    raise TypeError(f"not a Category: {c!r}")


def assign_type(assignment: Mapping[str, Type], c: Category) -> Type:
    """Map a category to its calculus type; functors become functions
    from the argument category's type to the result category's type."""
    from .calculus import Fun

    match c:
        case Base(name):
            if name not in assignment:
                raise UnknownBaseCategory(name)
            return assignment[name]
        case Over(result, arg):
            return Fun(assign_type(assignment, arg),
                       assign_type(assignment, result))
        case Under(arg, result):
            return Fun(assign_type(assignment, arg),
                       assign_type(assignment, result))
    raise TypeError(f"not a Category: {c!r}")


# ---------------------------------------------------------------------------
# Lexicon


@dataclass(frozen=True)
class LexiconEntry:
    phrase: tuple[str, ...]
    readings: tuple[tuple[Expr, Category], ...]


class LexiconError(Exception):
    pass


@dataclass
class Lexicon:
    entries: tuple[LexiconEntry, ...]
    assignment: dict[str, Type]
    interface: InterfaceDescriptor

    def __post_init__(self) -> None:
        self.by_phrase: dict[tuple[str, ...], LexiconEntry] = {
            e.phrase: e for e in self.entries}
        self.phrase_lengths = sorted(
            {len(p) for p in self.by_phrase}, reverse=True)


def load_lexicon(text: str, iface: InterfaceDescriptor) -> Lexicon:
    """Parse lexicon text: a `types:` header mapping base categories to
    calculus types, then `phrase := term : category` lines.  Every
    reading must be closed and typecheck at its category's type."""
    assignment: dict[str, Type] = {}
    readings: dict[tuple[str, ...], list[tuple[Expr, Category]]] = {}
    order: list[tuple[str, ...]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("types:"):
            for part in line[len("types:"):].split(","):
                name, sep, type_text = part.partition("=")
                if not sep:
                    raise LexiconError(
                        f"line {lineno}: bad types entry {part.strip()!r}")
                try:
                    assignment[name.strip()] = parse_type(type_text)
                except TermSyntaxError as exc:
                    raise LexiconError(f"line {lineno}: {exc}") from None
            continue
        phrase_text, sep, rest = line.partition(":=")
        if not sep:
            raise LexiconError(
                f"line {lineno}: expected 'phrase := term : category'")
        phrase = tuple(phrase_text.split())
        if not phrase:
            raise LexiconError(f"line {lineno}: empty phrase")
        # the category is everything after the last colon; categories
        # never contain one, while terms may (lambdas, conditionals)
        term_text, sep, cat_text = rest.rpartition(":")
        if not sep:
            raise LexiconError(
                f"line {lineno}: missing ': category' after the term")
        if not assignment:
            raise LexiconError(
                f"line {lineno}: entry before the 'types:' header")
        try:
            term = parse_term(term_text, iface)
            category = parse_category(cat_text)
        except (TermSyntaxError, CategorySyntaxError) as exc:
            raise LexiconError(f"line {lineno}: {exc}") from None
        if free_vars(term):
            raise LexiconError(
                f"line {lineno}: reading for '{' '.join(phrase)}' has free "
                f"variables {sorted(free_vars(term))}")
        try:
            expected = assign_type(assignment, category)
        except UnknownBaseCategory as exc:
            raise LexiconError(
                f"line {lineno}: unknown base category {exc}") from None
        try:
            actual = type_of({}, term, iface)
        except TypeCheckError as exc:
            raise LexiconError(f"line {lineno}: {exc}") from None
        if actual != expected:
            raise LexiconError(
                f"line {lineno}: term has type {format_type(actual)} but "
                f"category {format_category(category)} demands "
                f"{format_type(expected)}")
        if phrase not in readings:
            readings[phrase] = []
            order.append(phrase)
        readings[phrase].append((term, category))

    entries = tuple(
        LexiconEntry(phrase, tuple(readings[phrase])) for phrase in order)
    return Lexicon(entries=entries, assignment=assignment, interface=iface)


def format_lexicon_entry(entry: LexiconEntry) -> list[str]:
    return [
        f"{' '.join(entry.phrase)} := {format_term(term)} : "
        f"{format_category(category)}"
        for term, category in entry.readings]


# ---------------------------------------------------------------------------
# Sequents and proof search


Item = tuple[Expr, Category]


@dataclass(frozen=True)
class Sequent:
    antecedent: tuple[Item, ...]
    succedent: Item


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Sequent
    premises: tuple["Derivation", ...]


def derive(antecedent: Sequence[Item], goal: Category,
           assignment: Mapping[str, Type]) -> list[Derivation]:
    """All cut-free derivations of `antecedent => goal`.

    Fresh lambda parameters are named x1, x2, ... in discovery order, so
    the result is deterministic for a given input.
    """
    counter = itertools.count(1)

    def go(items: tuple[Item, ...], goal: Category) -> list[Derivation]:
        if not items:
            return []
        found: list[Derivation] = []
        if len(items) == 1 and items[0][1] == goal:
            found.append(Derivation("Seq Id", Sequent(items, items[0]), ()))
        for i, (alpha, cat) in enumerate(items):
            if isinstance(cat, Over):
                for j in range(i + 2, len(items) + 1):
                    delta = items[i + 1:j]
                    for d1 in go(delta, cat.arg):
                        beta = d1.conclusion.succedent[0]
                        squeezed = (items[:i]
                                    + ((App(alpha, beta), cat.result),)
                                    + items[j:])
                        for d2 in go(squeezed, goal):
                            gamma = d2.conclusion.succedent[0]
                            found.append(Derivation(
                                "Seq App Right",
                                Sequent(items, (gamma, goal)), (d1, d2)))
            elif isinstance(cat, Under):
                for k in range(i):
                    delta = items[k:i]
                    for d1 in go(delta, cat.arg):
                        beta = d1.conclusion.succedent[0]
                        squeezed = (items[:k]
                                    + ((App(alpha, beta), cat.result),)
                                    + items[i + 1:])
                        for d2 in go(squeezed, goal):
                            gamma = d2.conclusion.succedent[0]
                            found.append(Derivation(
                                "Seq App Left",
                                Sequent(items, (gamma, goal)), (d1, d2)))
        if isinstance(goal, Over):
            x = f"x{next(counter)}"
            for d1 in go(items + ((Var(x), goal.arg),), goal.result):
                beta = d1.conclusion.succedent[0]
                lam = Lambda(x, assign_type(assignment, goal.arg), beta)
                found.append(Derivation(
                    "Seq Abs Right", Sequent(items, (lam, goal)), (d1,)))
        elif isinstance(goal, Under):
            x = f"x{next(counter)}"
            for d1 in go(((Var(x), goal.arg),) + items, goal.result):
                beta = d1.conclusion.succedent[0]
                lam = Lambda(x, assign_type(assignment, goal.arg), beta)
                found.append(Derivation(
                    "Seq Abs Left", Sequent(items, (lam, goal)), (d1,)))
        return found

    return go(tuple(antecedent), goal)


def sequents_of(d: Derivation) -> Iterator[Sequent]:
    yield d.conclusion
    for premise in d.premises:
        yield from sequents_of(premise)


def respects_imperative_structure(d: Derivation,
                                  assignment: Mapping[str, Type]) -> bool:
    """Every functor category appearing in the derivation must map to a
    well-formed type; otherwise an action could masquerade as a pure
    phrase (e.g. category a\\np) and escape the effect discipline."""
    for seq in sequents_of(d):
        for _, cat in (*seq.antecedent, seq.succedent):
            if isinstance(cat, (Over, Under)):
                if not is_wellformed(assign_type(assignment, cat)):
                    return False
    return True


def derivation_conforms(d: Derivation,
                        assignment: Mapping[str, Type]) -> bool:
    """Audit that every node is a correct instance of its named rule."""
    items = d.conclusion.antecedent
    term, goal = d.conclusion.succedent
    if d.rule == "Seq Id":
        return (not d.premises and len(items) == 1
                and d.conclusion.succedent == items[0])
    if d.rule in ("Seq App Right", "Seq App Left"):
        if len(d.premises) != 2:
            return False
        d1, d2 = d.premises
        beta = d1.conclusion.succedent[0]
        for i, (alpha, cat) in enumerate(items):
            if d.rule == "Seq App Right":
                if not isinstance(cat, Over):
                    continue
                for j in range(i + 2, len(items) + 1):
                    if d1.conclusion != Sequent(items[i + 1:j],
                                                (beta, cat.arg)):
                        continue
                    squeezed = (items[:i]
                                + ((App(alpha, beta), cat.result),)
                                + items[j:])
                    if d2.conclusion == Sequent(squeezed, (term, goal)):
                        return (derivation_conforms(d1, assignment)
                                and derivation_conforms(d2, assignment))
            else:
                if not isinstance(cat, Under):
                    continue
                for k in range(i):
                    if d1.conclusion != Sequent(items[k:i],
                                                (beta, cat.arg)):
                        continue
                    squeezed = (items[:k]
                                + ((App(alpha, beta), cat.result),)
                                + items[i + 1:])
                    if d2.conclusion == Sequent(squeezed, (term, goal)):
                        return (derivation_conforms(d1, assignment)
                                and derivation_conforms(d2, assignment))
        return False
    if d.rule in ("Seq Abs Right", "Seq Abs Left"):
        if len(d.premises) != 1 or not isinstance(term, Lambda):
            return False
        d1 = d.premises[0]
        if d.rule == "Seq Abs Right":
            if not isinstance(goal, Over):
                return False
            arg, result = goal.arg, goal.result
            wanted = items + ((Var(term.param), arg),)
        else:
            if not isinstance(goal, Under):
                return False
            arg, result = goal.arg, goal.result
            wanted = ((Var(term.param), arg),) + items
        if term.param_type != assign_type(assignment, arg):
            return False
        if d1.conclusion != Sequent(wanted, (term.body, result)):
            return False
        return derivation_conforms(d1, assignment)
    return False


# ---------------------------------------------------------------------------
# Normalization


class NormalizationFuelExhausted(Exception):
    pass


def _beta_step(e: Expr) -> Expr | None:
    from .calculus import ActCall, Cond, PredCall, Seq

    match e:
        case App(Lambda(param, _, body), arg):
            return substitute(body, param, arg)
        case App(fun, arg):
            r = _beta_step(fun)
            if r is not None:
                return App(r, arg)
            r = _beta_step(arg)
            return None if r is None else App(fun, r)
        case Lambda(param, param_type, body):
            r = _beta_step(body)
            return None if r is None else Lambda(param, param_type, r)
        case PredCall(name, args) | ActCall(name, args):
            make = PredCall if isinstance(e, PredCall) else ActCall
            for i, arg in enumerate(args):
                r = _beta_step(arg)
                if r is not None:
                    return make(name, args[:i] + (r,) + args[i + 1:])
            return None
        case Cond(test, then, orelse):
            r = _beta_step(test)
            if r is not None:
                return Cond(r, then, orelse)
            r = _beta_step(then)
            if r is not None:
                return Cond(test, r, orelse)
            r = _beta_step(orelse)
            return None if r is None else Cond(test, then, r)
        case Seq(first, second):
            r = _beta_step(first)
            if r is not None:
                return Seq(r, second)
            r = _beta_step(second)
            return None if r is None else Seq(first, r)
        case _:
            return None


def beta_normalize(e: Expr, fuel: int = 10000) -> Expr:
    """Leftmost-outermost beta reduction to normal form (no eta)."""
    for _ in range(fuel):
        r = _beta_step(e)
        if r is None:
            return e
        e = r
    raise NormalizationFuelExhausted(format_term(e))


# ---------------------------------------------------------------------------
# Sentence parsing


class ParseFailure(Exception):
    pass


class UnknownVocabulary(ParseFailure):
    def __init__(self, message: str, tokens: tuple[str, ...]):
        super().__init__(message)
        self.tokens = tokens


class NoParse(ParseFailure):
    pass


class AmbiguousParse(ParseFailure):
    def __init__(self, message: str, candidates: list[str]):
        super().__init__(message)
        self.candidates = candidates


def segmentations(tokens: Sequence[str],
                  lexicon: Lexicon) -> list[tuple[LexiconEntry, ...]]:
    """All covers of the token list by lexicon phrases, longest phrase
    first at each position."""
    tokens = tuple(tokens)
    out: list[tuple[LexiconEntry, ...]] = []
    acc: list[LexiconEntry] = []

    def go(i: int) -> None:
        if i == len(tokens):
            out.append(tuple(acc))
            return
        for length in lexicon.phrase_lengths:
            if i + length > len(tokens):
                continue
            entry = lexicon.by_phrase.get(tokens[i:i + length])
            if entry is None:
                continue
            acc.append(entry)
            go(i + length)
            acc.pop()

    go(0)
    return out


def _coverage_blame(tokens: tuple[str, ...], lexicon: Lexicon) -> str:
    reachable = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for length in lexicon.phrase_lengths:
            if (i + length <= len(tokens)
                    and tokens[i:i + length] in lexicon.by_phrase):
                if i + length not in reachable:
                    reachable.add(i + length)
                    frontier.append(i + length)
    stuck = max(reachable)
    if stuck >= len(tokens):
        # every prefix is coverable yet no full cover exists
        return "the words cannot be grouped into known phrases"
    return f"no lexicon phrase matches at '{tokens[stuck]}'"


def parse(tokens: Sequence[str], lexicon: Lexicon, goal: Category) -> Expr:
    """Parse a token list at the goal category.

    Raises UnknownVocabulary when the tokens cannot be covered by lexicon
    phrases, NoParse when no derivation survives, and AmbiguousParse when
    derivations disagree modulo beta-equality.  On success returns the
    meaning term of one witness derivation, unnormalized.
    """
    tokens = tuple(tokens)
    sentence = " ".join(tokens)
    if not tokens:
        raise NoParse("empty input")
    segs = segmentations(tokens, lexicon)
    if not segs:
        raise UnknownVocabulary(
            f"unknown vocabulary in '{sentence}': "
            f"{_coverage_blame(tokens, lexicon)}", tokens)
    witnesses: list[Expr] = []
    for seg in segs:
        for combo in itertools.product(*(e.readings for e in seg)):
            for d in derive(tuple(combo), goal, lexicon.assignment):
                if respects_imperative_structure(d, lexicon.assignment):
                    witnesses.append(d.conclusion.succedent[0])
    if not witnesses:
        raise NoParse(
            f"'{sentence}' has no reading at category "
            f"{format_category(goal)}")
    by_meaning: dict[Expr, Expr] = {}
    for term in witnesses:
        by_meaning.setdefault(canonical(beta_normalize(term)), term)
    if len(by_meaning) > 1:
        candidates = [format_term(key) for key in by_meaning]
        raise AmbiguousParse(
            f"'{sentence}' is ambiguous between: " + "; ".join(candidates),
            candidates)
    return next(iter(by_meaning.values()))


def check_admissible_typing(d: Derivation, lexicon: Lexicon) -> bool:
    """The meaning of a derivation must typecheck at the type assigned
    to its goal category (given well-typed lexicon readings and the
    imperative-structure condition)."""
    term, goal = d.conclusion.succedent
    try:
        actual = type_of({}, term, lexicon.interface)
    except TypeCheckError:
        return False
    try:
        expected = assign_type(lexicon.assignment, goal)
    except UnknownBaseCategory:
        return False
    return actual == expected
