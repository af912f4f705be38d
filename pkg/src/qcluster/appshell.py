"""CLI, verification runner, and the JSON-over-HTTP session service.

A session wraps a seed lineage: its defining spec (how to build the initial
seed) plus an event log of mutations and undos.  Replaying the log from the
initial seed reproduces the current state bit-exactly, which is also the
persistence format: snapshots store only (spec, log), never variable caches.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from .errors import (
    FrozenMutation,
    QClusterError,
    RedVertexMutation,
    SchemaVersionMismatch,
)
from .exchange import CompatiblePair
from .gls import CartanDatum, ReducedWord, gls_pair
from .glnsatake import build_gln_pair, build_conjectural_b, mu_prime_sequence, mu_sequence
from .green import FramedQuiver, kedem_sequence
from .qseed import QuantumSeed
from .verify import run_suite

SCHEMA_VERSION = 1
VARIABLE_TERM_CAP = 5000


def _parse_vertex(text):
    if isinstance(text, (list, tuple)):
        return tuple(text)
    if "," in str(text):
        return tuple(int(x) for x in str(text).split(","))
    return int(text)


def _vertex_json(v):
    return list(v) if isinstance(v, tuple) else v


class Session:
    """A seed lineage identified by (spec, event log)."""

    def __init__(self, spec: dict, session_id: Optional[str] = None):
        self.id = session_id or uuid.uuid4().hex[:12]
        self.spec = spec
        self.log: list[dict] = []
        self.lock = threading.Lock()
        self.green_mode = bool(spec.get("green_mode", False))
        self._rebuild()

    # -- construction -----------------------------------------------------

    def _initial_pair(self) -> CompatiblePair:
        kind = self.spec.get("type")
        if kind == "gln":
            return build_gln_pair(int(self.spec["n"]))
        if kind == "gls":
            cartan = CartanDatum(self.spec["cartan"])
            word = ReducedWord(self.spec["word"], cartan.rank)
            return gls_pair(cartan, word)
        raise ValueError(f"unknown session spec type {kind!r}")

    def _rebuild(self) -> None:
        pair = self._initial_pair()
        seed = QuantumSeed.initial(pair)
        framed = FramedQuiver.frame(pair.b)
        applied: list = []
        for event in self.log:
            if event["op"] == "mutate":
                v = _parse_vertex(event["vertex"])
                seed = seed.mutate(v)
                framed = framed.mutate(v)
                applied.append(v)
            elif event["op"] == "undo":
                if applied:
                    applied.pop()
                    seed = QuantumSeed.initial(pair)
                    framed = FramedQuiver.frame(pair.b)
                    for v in applied:
                        seed = seed.mutate(v)
                        framed = framed.mutate(v)
            else:
                raise ValueError(f"unknown event {event['op']!r}")
        self.seed = seed
        self.framed = framed
        self.applied = applied

    # -- operations ----------------------------------------------------------

    def mutate(self, vertex) -> None:
        v = _parse_vertex(vertex)
        if v in self.seed.pair.b.frozen:
            raise FrozenMutation(v)
        if self.green_mode and not self.framed.is_green(v):
            raise RedVertexMutation(v)
        self.seed = self.seed.mutate(v)
        self.framed = self.framed.mutate(v)
        self.applied.append(v)
        self.log.append({"op": "mutate", "vertex": _vertex_json(v)})

    def undo(self) -> None:
        self.log.append({"op": "undo"})
        self._rebuild()

    # -- views ------------------------------------------------------------------

    def summary(self) -> dict:
        b = self.seed.pair.b
        return {
            "id": self.id,
            "spec": {k: v for k, v in self.spec.items()},
            "indices": [_vertex_json(ix) for ix in b.indices],
            "frozen": [_vertex_json(ix) for ix in sorted(b.frozen, key=str)],
            "B": [list(r) for r in b.B],
            "L": [list(r) for r in self.seed.pair.L],
            "green": {str(v): c for v, c in self.framed.colors().items()},
            "history": [_vertex_json(v) for v in self.applied],
            "fingerprint": self.fingerprint(),
        }

    def variable_payload(self, vertex) -> dict:
        v = _parse_vertex(vertex)
        el = self.seed.variable(v)
        frozen_pos = [self.seed.pair.b._pos[ix] for ix in self.seed.pair.b.frozen]
        data = el.to_json()
        truncated = False
        if len(data["terms"]) > VARIABLE_TERM_CAP:
            data["terms"] = data["terms"][:VARIABLE_TERM_CAP]
            truncated = True
        spec = el.specialize(frozen_pos)
        return {
            "vertex": _vertex_json(v),
            "element": data,
            "terms": len(el),
            "truncated": truncated,
            "specialized": {
                "nvars": spec.nvars,
                "terms": [[list(k), c] for k, c in sorted(spec.terms.items())],
            },
        }

    def fingerprint(self) -> str:
        return self.seed.fingerprint()

    # -- persistence -----------------------------------------------------------

    def snapshot(self) -> dict:
        return {"schema": SCHEMA_VERSION, "id": self.id, "spec": self.spec, "log": self.log}

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.snapshot(), indent=1, sort_keys=True))

    @classmethod
    def load(cls, path) -> "Session":
        try:
            data = json.loads(Path(path).read_text())
        except (json.JSONDecodeError, OSError) as exc:
            raise SchemaVersionMismatch(f"unreadable session snapshot: {exc}") from exc
        if data.get("schema") != SCHEMA_VERSION:
            raise SchemaVersionMismatch(data.get("schema"))
        sess = cls.__new__(cls)
        sess.id = data["id"]
        sess.spec = data["spec"]
        sess.log = list(data["log"])
        sess.lock = threading.Lock()
        sess.green_mode = bool(sess.spec.get("green_mode", False))
        sess._rebuild()
        return sess


class SessionStore:
    """In-memory sessions with optional snapshot files in a directory."""

    def __init__(self, directory: Optional[str] = None):
        self.directory = Path(directory) if directory else None
        self.sessions: dict[str, Session] = {}

    def create(self, spec: dict) -> Session:
        sess = Session(spec)
        self.sessions[sess.id] = sess
        self.persist(sess)
        return sess

    def get(self, session_id: str) -> Session:
        if session_id in self.sessions:
            return self.sessions[session_id]
        if self.directory:
            path = self.directory / f"{session_id}.json"
            if path.exists():
                sess = Session.load(path)
                self.sessions[sess.id] = sess
                return sess
        raise KeyError(session_id)

    def persist(self, sess: Session) -> None:
        if self.directory:
            self.directory.mkdir(parents=True, exist_ok=True)
            sess.save(self.directory / f"{sess.id}.json")


def _sequence_for(name: str, sess: Session) -> list:
    spec = sess.spec
    if name == "mu":
        if spec.get("type") != "gln":
            raise ValueError("mu sequence needs a gln session")
        return mu_sequence(int(spec["n"]))
    if name.startswith("muprime:"):
        steps = int(name.split(":", 1)[1])
        n = int(spec["n"])
        labels = mu_prime_sequence(n, steps)
        return ["label:" + json.dumps(lbl) for lbl in labels]
    if name == "kedem":
        return kedem_sequence(int(spec["n"]))
    path = Path(name)
    if path.exists():
        return [_parse_vertex(v) for v in json.loads(path.read_text())]
    raise ValueError(f"unknown sequence {name!r}")


def _apply_sequence(sess: Session, seq: list) -> None:
    label_state = None
    for step in seq:
        if isinstance(step, str) and step.startswith("label:"):
            # mu-prime steps address variables by their (k, l) labels; track
            # them through the session's own history
            if label_state is None:
                label_state = _label_tracker(sess)
            lbl = tuple(json.loads(step[len("label:"):]))
            vertex = label_state[lbl]
            label_state[(lbl[0], lbl[1] + 2)] = vertex
            del label_state[lbl]
            sess.mutate(vertex)
        else:
            sess.mutate(step)


def _label_tracker(sess: Session) -> dict:
    """(k, l) label -> slot for a gln session, replayed from its history."""
    n = int(sess.spec["n"])
    labels = {ix: ix for ix in build_gln_pair(n).b.indices}
    for v in sess.applied:
        lbl = labels[v]
        labels[v] = (lbl[0], lbl[1] + 2)
    return {lbl: slot for slot, lbl in labels.items()}


# ---------------------------------------------------------------------------
# HTTP service
# ---------------------------------------------------------------------------


def make_handler(store: SessionStore):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):
            pass

        def _send(self, code: int, payload: dict) -> None:
            body = json.dumps(payload).encode()
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _send_text(self, code: int, text: str, ctype: str) -> None:
            body = text.encode()
            self.send_response(code)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(body)

        def _read_json(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b"{}"
            return json.loads(raw or b"{}")

        def _session(self, session_id: str) -> Session:
            return store.get(session_id)

        def do_OPTIONS(self):
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.end_headers()

        def do_POST(self):
            parts = [p for p in self.path.split("/") if p]
            try:
                if parts == ["sessions"]:
                    try:
                        spec = self._read_json()
                        sess = store.create(spec)
                    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
                        self._send(422, {"error": "malformed spec", "detail": str(exc)})
                        return
                    self._send(200, {"id": sess.id, **sess.summary()})
                    return
                if len(parts) == 3 and parts[0] == "sessions" and parts[2] == "mutate":
                    sess = self._session(parts[1])
                    with sess.lock:
                        try:
                            body = self._read_json()
                        except json.JSONDecodeError as exc:
                            self._send(422, {"error": "malformed body", "detail": str(exc)})
                            return
                        if "vertex" not in body:
                            self._send(422, {"error": "vertex required"})
                            return
                        try:
                            sess.mutate(body["vertex"])
                        except (FrozenMutation, RedVertexMutation) as exc:
                            self._send(409, {"error": type(exc).__name__, "detail": str(exc)})
                            return
                        except (KeyError, ValueError) as exc:
                            self._send(422, {"error": "bad vertex", "detail": str(exc)})
                            return
                        store.persist(sess)
                        self._send(200, sess.summary())
                    return
                if len(parts) == 3 and parts[0] == "sessions" and parts[2] == "undo":
                    sess = self._session(parts[1])
                    with sess.lock:
                        sess.undo()
                        store.persist(sess)
                        self._send(200, sess.summary())
                    return
                self._send(404, {"error": "no such endpoint"})
            except KeyError:
                self._send(404, {"error": "unknown session"})
            except QClusterError as exc:
                self._send(500, {"error": type(exc).__name__, "detail": str(exc)})

        def do_GET(self):
            parts = [p for p in self.path.split("/") if p]
            try:
                if len(parts) == 2 and parts[0] == "sessions":
                    self._send(200, self._session(parts[1]).summary())
                    return
                if len(parts) == 4 and parts[0] == "sessions" and parts[2] == "variable":
                    sess = self._session(parts[1])
                    try:
                        payload = sess.variable_payload(parts[3])
                    except KeyError as exc:
                        self._send(404, {"error": "unknown vertex", "detail": str(exc)})
                        return
                    self._send(200, payload)
                    return
                if len(parts) == 3 and parts[0] == "sessions" and parts[2] == "export.dot":
                    sess = self._session(parts[1])
                    self._send_text(200, sess.framed.to_dot(), "text/vnd.graphviz")
                    return
                if len(parts) == 3 and parts[0] == "sessions" and parts[2] == "export.json":
                    sess = self._session(parts[1])
                    self._send(200, sess.seed.to_json())
                    return
                self._send(404, {"error": "no such endpoint"})
            except KeyError:
                self._send(404, {"error": "unknown session"})
            except QClusterError as exc:
                self._send(500, {"error": type(exc).__name__, "detail": str(exc)})

    return Handler


def serve_http(port: int, store: Optional[SessionStore] = None) -> ThreadingHTTPServer:
    server = ThreadingHTTPServer(("127.0.0.1", port), make_handler(store or SessionStore()))
    return server


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


def _load_cartan_word(args) -> dict:
    data = json.loads(Path(args.cartan).read_text())
    out = {"cartan": data["cartan"]}
    if getattr(args, "word", None):
        out["word"] = [int(x) for x in args.word.split(",")]
    elif "word" in data:
        out["word"] = data["word"]
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qcluster", description="quantum cluster engine")
    ap.add_argument("--store", default=None, help="session snapshot directory")
    sub = ap.add_subparsers(dest="command", required=True)

    seed = sub.add_parser("seed", help="create a session")
    seed_sub = seed.add_subparsers(dest="seed_kind", required=True)
    s_gln = seed_sub.add_parser("gln")
    s_gln.add_argument("--n", type=int, required=True)
    s_gln.add_argument("--green-mode", action="store_true")
    s_gls = seed_sub.add_parser("gls")
    s_gls.add_argument("--cartan", required=True, help="JSON file {cartan, word}")
    s_gls.add_argument("--word", default=None, help="comma separated letters")
    s_conj = seed_sub.add_parser("conj")
    s_conj.add_argument("--cartan", required=True)

    mut = sub.add_parser("mutate", help="mutate a session at a vertex")
    mut.add_argument("--session", required=True)
    mut.add_argument("--vertex", required=True)

    run = sub.add_parser("run", help="run a named sequence on a session")
    run.add_argument("--session", required=True)
    run.add_argument("--sequence", required=True, help="mu | muprime:J | kedem | file")

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("suite")
    ver.add_argument("--n", type=int, default=3)
    ver.add_argument("--count", type=int, default=None)
    ver.add_argument("--seed", type=int, default=0)

    exp = sub.add_parser("export", help="export a session")
    exp.add_argument("--session", required=True)
    fmt = exp.add_mutually_exclusive_group(required=True)
    fmt.add_argument("--dot", action="store_true")
    fmt.add_argument("--json", action="store_true")
    exp.add_argument("--out", default=None)

    cop = sub.add_parser("class-of-p", help="print a simple-object class")
    cop.add_argument("--n", type=int, required=True)
    cop.add_argument("--k", type=int, required=True)
    cop.add_argument("--l", type=int, required=True)
    cop.add_argument("--wedge", default=None, help="comma separated wedge entries")

    qs = sub.add_parser("qsystem", help="print both sides of one recursion instance")
    qs.add_argument("--n", type=int, required=True)
    qs.add_argument("--k", type=int, required=True)
    qs.add_argument("--l", type=int, required=True)

    srv = sub.add_parser("serve", help="serve the JSON session API")
    srv.add_argument("--port", type=int, default=int(os.environ.get("QCLUSTER_PORT", "8764")))
    return ap


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    store = SessionStore(args.store or "qcluster-sessions")
    out = sys.stdout

    try:
        if args.command == "seed":
            if args.seed_kind == "gln":
                spec = {"type": "gln", "n": args.n, "green_mode": bool(getattr(args, "green_mode", False))}
            elif args.seed_kind == "gls":
                spec = {"type": "gls", **_load_cartan_word(args)}
            else:
                data = json.loads(Path(args.cartan).read_text())
                b = build_conjectural_b(data["cartan"])
                json.dump({"conjectural_b": b.to_json()}, out, indent=1)
                out.write("\n")
                return 0
            sess = store.create(spec)
            json.dump(sess.summary(), out, indent=1)
            out.write("\n")
            return 0

        if args.command == "mutate":
            sess = store.get(args.session)
            try:
                sess.mutate(args.vertex)
            except (FrozenMutation, RedVertexMutation) as exc:
                json.dump({"error": type(exc).__name__, "detail": str(exc)}, out)
                out.write("\n")
                return 2
            store.persist(sess)
            json.dump(sess.summary(), out, indent=1)
            out.write("\n")
            return 0

        if args.command == "run":
            sess = store.get(args.session)
            seq = _sequence_for(args.sequence, sess)
            try:
                _apply_sequence(sess, seq)
            except (FrozenMutation, RedVertexMutation) as exc:
                json.dump({"error": type(exc).__name__, "detail": str(exc)}, out)
                out.write("\n")
                return 2
            store.persist(sess)
            json.dump(sess.summary(), out, indent=1)
            out.write("\n")
            return 0

        if args.command == "verify":
            opts = {"n": args.n, "seed": args.seed}
            if args.suite in ("mutequiv", "frozen-rows", "keyminors", "green"):
                opts["n_max"] = args.n
            if args.count is not None:
                opts["count"] = args.count
            reports = run_suite(args.suite, **opts)
            ok = True
            for rep in reports:
                ok = ok and rep["status"] == "ok"
                line = f"{rep['check']}: {rep['status']} ({rep['cases']} cases, {rep['seconds']}s)"
                print(line, file=out)
                failed_names = {f.get("case") for f in rep["failures"]}
                for name in rep.get("case_names") or []:
                    print(f"  {name}: {'FAIL' if name in failed_names else 'ok'}", file=out)
            if not ok:
                json.dump({"error": "verification failed", "reports": reports}, out, indent=1)
                out.write("\n")
                return 1
            return 0

        if args.command == "export":
            sess = store.get(args.session)
            text = sess.framed.to_dot() if args.dot else json.dumps(sess.seed.to_json(), indent=1)
            if args.out:
                Path(args.out).write_text(text)
            else:
                out.write(text + "\n")
            return 0

        if args.command == "class-of-p":
            from .glnsatake import GLnContext

            ctx = GLnContext(args.n)
            if args.wedge:
                jj = tuple(int(x) for x in args.wedge.split(","))
                cls = ctx.wedge_class(args.k, args.l, jj)
            else:
                cls = ctx.class_of_p(args.k, args.l)
            json.dump(
                {"provenance": cls.provenance, "element": cls.element.to_json()}, out, indent=1
            )
            out.write("\n")
            return 0

        if args.command == "qsystem":
            from .characters import q_system_check, schur_rect

            lhs = schur_rect(args.n, args.k, args.l) * schur_rect(args.n, args.k, args.l)
            rhs = (
                schur_rect(args.n, args.k, args.l + 1) * schur_rect(args.n, args.k, args.l - 1)
                + schur_rect(args.n, args.k - 1, args.l) * schur_rect(args.n, args.k + 1, args.l)
            )
            ok, _witness = q_system_check(args.n, args.k, args.l)
            json.dump(
                {
                    "n": args.n,
                    "k": args.k,
                    "l": args.l,
                    "lhs": repr(lhs),
                    "rhs": repr(rhs),
                    "verdict": "ok" if ok else "failed",
                },
                out,
                indent=1,
            )
            out.write("\n")
            return 0 if ok else 1

        if args.command == "serve":
            server = serve_http(args.port, store)
            print(f"serving on 127.0.0.1:{server.server_address[1]}", file=out, flush=True)
            try:
                server.serve_forever()
            except KeyboardInterrupt:
                pass
            return 0
    except (QClusterError, KeyError, ValueError, OSError) as exc:
        json.dump({"error": type(exc).__name__, "detail": str(exc)}, out)
        out.write("\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
