"""JSON-over-HTTP surface for a session.

Three routes:
    POST /command  {"sentence": "..."} -> result, revision, state listing
    GET  /state    -> revision, state listing
    GET  /lexicon  -> the vocabulary

The revision counter bumps once per imperative evaluated (successful or
not); queries never bump it, and repeated reads of /state between
imperatives are byte-identical.  Requests are serialized with a lock, so
one evaluation's steps never interleave with another's.  Permissive CORS
headers are sent so a browser page served from anywhere can talk to it.
"""
from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import IO

from .grammar import format_category
from .interpreter import render_trace
from .session import CommandResult, Session
from .syntax import format_term


def result_payload(result: CommandResult, revision: int) -> dict:
    payload: dict = {"kind": result.kind, "outcome": result.outcome}
    if result.answer is not None:
        payload["answer"] = result.answer
    if result.detail is not None:
        payload["detail"] = result.detail
    if result.trace is not None:
        payload["trace"] = render_trace(result.trace)
    payload["revision"] = revision
    payload["state"] = [
        {"predicate": f.predicate, "args": list(f.args), "value": f.value}
        for f in result.state]
    return payload


def state_payload(session: Session, revision: int) -> dict:
    return {
        "revision": revision,
        "state": [
            {"predicate": f.predicate, "args": list(f.args),
             "value": f.value}
            for f in session.state_view()],
    }


def lexicon_payload(session: Session) -> dict:
    entries = []
    for entry in session.lexicon.entries:
        for term, category in entry.readings:
            entries.append({
                "phrase": " ".join(entry.phrase),
                "term": format_term(term),
                "category": format_category(category),
            })
    return {"entries": entries}


class _Handler(BaseHTTPRequestHandler):
    server: "ServiceServer"

    def log_message(self, format: str, *args) -> None:
        pass  # keep test output clean

    def _send(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self) -> None:
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods",
                         "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def do_GET(self) -> None:
        server = self.server
        if self.path == "/state":
            with server.lock:
                self._send(200, state_payload(server.session,
                                              server.revision))
        elif self.path == "/lexicon":
            with server.lock:
                self._send(200, lexicon_payload(server.session))
        elif self.path == "/command":
            self._send(405, {"error": "use POST for /command"})
        else:
            self._send(404, {"error": f"no route {self.path}"})

    def do_POST(self) -> None:
        server = self.server
        if self.path != "/command":
            if self.path in ("/state", "/lexicon"):
                self._send(405, {"error": f"use GET for {self.path}"})
            else:
                self._send(404, {"error": f"no route {self.path}"})
            return
        length = int(self.headers.get("Content-Length", "0"))
        raw = self.rfile.read(length)
        try:
            body = json.loads(raw)
        except json.JSONDecodeError:
            self._send(400, {"error": "body is not valid JSON"})
            return
        if not isinstance(body, dict) or not isinstance(
                body.get("sentence"), str):
            self._send(400, {"error": "expected {\"sentence\": \"...\"}"})
            return
        sentence = body["sentence"]
        if not sentence.strip():
            self._send(400, {"error": "parse-error: empty sentence"})
            return
        with server.lock:
            result = server.session.run_command(sentence)
            if result.kind == "imperative":
                server.revision += 1
            self._send(200, result_payload(result, server.revision))


class ServiceServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, session: Session, address: tuple[str, int]):
        super().__init__(address, _Handler)
        self.session = session
        self.lock = threading.Lock()
        self.revision = 0


def build_server(session: Session, port: int,
                 host: str = "127.0.0.1") -> ServiceServer:
    return ServiceServer(session, (host, port))


def serve(session: Session, port: int, out: IO[str] | None = None) -> None:
    import sys

    server = build_server(session, port)
    stream = out if out is not None else sys.stdout
    host, bound_port = server.server_address[:2]
    print(f"listening on http://{host}:{bound_port}", file=stream)
    stream.flush()
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
