"""Command line front end: repl, serve, parse."""
from __future__ import annotations

import argparse
import sys

from .grammar import ParseFailure, load_lexicon, parse
from .interface import load_model, model_as_connector
from .session import (
    IMPERATIVE_GOAL, QUERY_GOAL, Session, repl, tokenize_sentence,
)
from .syntax import format_term
from .toyblocks import toyblocks_lexicon, toyblocks_live_connector


def _add_app_arguments(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--app", choices=["toyblocks"], default=None,
        help="built-in application to connect to (default: toyblocks)")
    sub.add_argument(
        "--model", metavar="FILE", default=None,
        help="explicit-state model file to run instead of a built-in app")
    sub.add_argument(
        "--lexicon", metavar="FILE", default=None,
        help="vocabulary file (required with --model)")


def build_session(args: argparse.Namespace) -> Session:
    if args.model is not None:
        if args.app is not None:
            raise SystemExit("error: --model conflicts with --app")
        if args.lexicon is None:
            raise SystemExit("error: --model requires --lexicon")
        with open(args.model) as fh:
            model = load_model(fh.read())
        connector = model_as_connector(model)
        with open(args.lexicon) as fh:
            lexicon = load_lexicon(fh.read(), model.descriptor)
        return Session(lexicon, connector)
    if args.lexicon is not None:
        raise SystemExit("error: --lexicon requires --model")
    # default application
    return Session(toyblocks_lexicon(), toyblocks_live_connector())


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="nlui",
        description="Control an application in plain English: commands "
                    "are parsed into typed programs and executed against "
                    "a pluggable application.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_repl = subs.add_parser("repl", help="interactive session on stdin")
    _add_app_arguments(p_repl)
    p_repl.add_argument(
        "--trace", action="store_true",
        help="show the parsed term and each evaluation step")

    p_serve = subs.add_parser("serve", help="run the HTTP service")
    _add_app_arguments(p_serve)
    p_serve.add_argument("--port", type=int, default=8000)

    p_parse = subs.add_parser(
        "parse", help="parse one sentence and print its meaning term")
    _add_app_arguments(p_parse)
    p_parse.add_argument("sentence")
    p_parse.add_argument(
        "--goal", choices=["a", "s"], default=None,
        help="goal category: a for orders, s for statements "
             "(default: s when the sentence ends in '?', else a)")

    args = parser.parse_args(argv)
    session = build_session(args)

    if args.command == "repl":
        return repl(session, sys.stdin, sys.stdout,
                    show_trace=args.trace, prompt=sys.stdin.isatty())
    if args.command == "serve":
        from .service import serve

        serve(session, args.port)
        return 0
    if args.command == "parse":
        tokens, is_query = tokenize_sentence(args.sentence)
        if args.goal is not None:
            goal = QUERY_GOAL if args.goal == "s" else IMPERATIVE_GOAL
        else:
            goal = QUERY_GOAL if is_query else IMPERATIVE_GOAL
        try:
            term = parse(tokens, session.lexicon, goal)
        except ParseFailure as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(format_term(term))
        return 0
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
