"""Command sessions: parse a sentence, evaluate it, report the outcome.

A sentence ending in '?' is a yes/no question and parses at the sentence
category s; anything else is first tried as an order at category a and,
when that fails to parse, retried as a question.  Questions are pure:
answering one never changes the application state, so reads can be
replayed freely.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import IO

from .calculus import BoolLit, Fault, Skip, TypeCheckError, type_of
from .grammar import (
    AmbiguousParse, Base, Lexicon, NoParse, ParseFailure, UnknownVocabulary,
    format_lexicon_entry, parse,
)
from .interface import ApplicationConnector, guard_check
from .interpreter import (
    StepTrace, evaluate, exception_note, render_trace,
)
from .syntax import TermSyntaxError, format_term, format_type, parse_term

IMPERATIVE_GOAL = Base("a")
QUERY_GOAL = Base("s")


@dataclass(frozen=True)
class Fact:
    predicate: str
    args: tuple[str, ...]
    value: bool

    def render(self) -> str:
        value = "true" if self.value else "false"
        return f"{self.predicate}({', '.join(self.args)}) = {value}"


@dataclass(frozen=True)
class CommandResult:
    kind: str                      # "imperative" | "query" | "error"
    outcome: str                   # "ok" | "exception" | "error"
    answer: bool | None = None
    detail: str | None = None
    trace: StepTrace | None = None
    state: tuple[Fact, ...] = ()


def tokenize_sentence(sentence: str) -> tuple[tuple[str, ...], bool]:
    """Lowercase, split on whitespace, strip '?' and remember it."""
    is_query = "?" in sentence
    cleaned = sentence.replace("?", " ").lower()
    return tuple(cleaned.split()), is_query


class Session:
    """One connected application plus its vocabulary."""

    def __init__(self, lexicon: Lexicon, connector: ApplicationConnector):
        self.lexicon = lexicon
        self.connector = connector

    def state_view(self) -> tuple[Fact, ...]:
        """Every predicate instance whose arguments pass the class guard,
        queried in a deterministic order."""
        d = self.connector.descriptor
        facts = []
        constants = sorted(d.constants)
        for name in sorted(d.predicates):
            arity = d.predicates[name]
            signature = d.sigma_pred[name]
            for combo in itertools.product(constants, repeat=arity):
                objs = tuple(self.connector.resolve_constant(c)
                             for c in combo)
                classes = [self.connector.classes_of(o) for o in objs]
                if not guard_check(signature, classes):
                    continue
                value = self.connector.query_predicate(name, objs)
                facts.append(Fact(name, tuple(str(o) for o in objs),
                                  bool(value)))
        return tuple(facts)

    def run_command(self, sentence: str) -> CommandResult:
        tokens, is_query = tokenize_sentence(sentence)
        if not tokens:
            return CommandResult(
                kind="error", outcome="error", detail="empty sentence",
                state=self.state_view())
        if is_query:
            kind = "query"
            try:
                term = parse(tokens, self.lexicon, QUERY_GOAL)
            except ParseFailure as exc:
                return self._parse_error(exc)
        else:
            kind = "imperative"
            try:
                term = parse(tokens, self.lexicon, IMPERATIVE_GOAL)
            except (UnknownVocabulary, AmbiguousParse) as exc:
                return self._parse_error(exc)
            except NoParse:
                # a declarative sentence without the question mark; try
                # reading it as a statement to be checked
                kind = "query"
                try:
                    term = parse(tokens, self.lexicon, QUERY_GOAL)
                except ParseFailure as exc:
                    return self._parse_error(exc)
        trace = evaluate(self.connector, term)
        final = trace.final
        if isinstance(final, Fault):
            return CommandResult(
                kind=kind, outcome="exception",
                detail=exception_note(trace), trace=trace,
                state=self.state_view())
        if kind == "query":
            assert isinstance(final, BoolLit)
            return CommandResult(
                kind=kind, outcome="ok", answer=final.value, trace=trace,
                state=self.state_view())
        assert isinstance(final, Skip)
        return CommandResult(
            kind=kind, outcome="ok", trace=trace, state=self.state_view())

    def _parse_error(self, exc: ParseFailure) -> CommandResult:
        return CommandResult(
            kind="error", outcome="error", detail=str(exc),
            state=self.state_view())


def _print_result(result: CommandResult, out: IO[str],
                  show_trace: bool) -> None:
    if show_trace and result.trace is not None:
        print(f"term: {format_term(result.trace.initial)}", file=out)
        for line in render_trace(result.trace):
            print(line, file=out)
    if result.outcome == "error":
        print(f"error: {result.detail}", file=out)
    elif result.outcome == "exception":
        print(f"exception: {result.detail}", file=out)
    elif result.kind == "query":
        print("yes." if result.answer else "no.", file=out)
    else:
        print("ok.", file=out)


def repl(session: Session, instream: IO[str], outstream: IO[str],
         show_trace: bool = False, prompt: bool = False) -> int:
    """Line-oriented loop; returns the process exit code.

    Meta commands: :state, :lexicon, :trace on|off, :term EXPR, :quit.
    """
    while True:
        if prompt:
            outstream.write("> ")
            outstream.flush()
        line = instream.readline()
        if not line:
            return 0
        line = line.strip()
        if not line:
            continue
        if line.startswith(":"):
            parts = line.split(None, 1)
            command = parts[0]
            rest = parts[1] if len(parts) > 1 else ""
            if command == ":quit":
                return 0
            if command == ":state":
                for fact in session.state_view():
                    print(fact.render(), file=outstream)
            elif command == ":lexicon":
                for entry in session.lexicon.entries:
                    for text in format_lexicon_entry(entry):
                        print(text, file=outstream)
            elif command == ":trace":
                if rest in ("on", "off"):
                    show_trace = rest == "on"
                else:
                    print("usage: :trace on|off", file=outstream)
            elif command == ":term":
                _describe_term(session, rest, outstream)
            else:
                print(
                    "commands: :state :lexicon :trace on|off :term EXPR "
                    ":quit", file=outstream)
            continue
        result = session.run_command(line)
        _print_result(result, outstream, show_trace)


def _describe_term(session: Session, text: str, out: IO[str]) -> None:
    if not text:
        print("usage: :term EXPR", file=out)
        return
    try:
        term = parse_term(text, session.connector.descriptor)
    except TermSyntaxError as exc:
        print(f"error: {exc}", file=out)
        return
    try:
        t = type_of({}, term, session.connector.descriptor)
    except TypeCheckError as exc:
        print(f"error: {exc}", file=out)
        return
    print(f"{format_term(term)} : {format_type(t)}", file=out)
