"""Sessions, CLI, HTTP service, persistence."""

import json
import threading
import urllib.error
import urllib.request

import pytest

from qcluster.appshell import Session, SessionStore, main, serve_http
from qcluster.errors import FrozenMutation, RedVertexMutation, SchemaVersionMismatch
from qcluster.verify import SUITES, run_suite


def test_session_replay_determinism(tmp_path):
    sess = Session({"type": "gln", "n": 2})
    fp0 = sess.fingerprint()
    sess.mutate((1, 1))
    fp1 = sess.fingerprint()
    sess.undo()
    assert sess.fingerprint() == fp0
    sess.mutate((1, 1))
    assert sess.fingerprint() == fp1
    # persistence replays the log only
    path = tmp_path / "s.json"
    sess.save(path)
    loaded = Session.load(path)
    assert loaded.fingerprint() == fp1
    assert loaded.applied == [(1, 1)]


def test_session_frozen_and_green_mode():
    sess = Session({"type": "gln", "n": 2})
    with pytest.raises(FrozenMutation):
        sess.mutate((2, 0))
    green = Session({"type": "gln", "n": 2, "green_mode": True})
    green.mutate((1, 0))
    with pytest.raises(RedVertexMutation):
        green.mutate((1, 0))


def test_session_gls_spec():
    sess = Session({"type": "gls", "cartan": [[2, -2], [-2, 2]], "word": [0, 1, 0, 1]})
    assert sess.seed.pair.b.frozen == {3, 4}
    sess.mutate(1)
    assert sess.applied == [1]


def test_snapshot_schema_guard(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"schema": 99, "id": "x", "spec": {}, "log": []}')
    with pytest.raises(SchemaVersionMismatch):
        Session.load(path)
    path.write_text('{"schema": 1, "id":')
    with pytest.raises(SchemaVersionMismatch):
        Session.load(path)


def test_variable_payload_truncation():
    sess = Session({"type": "gln", "n": 2})
    sess.mutate((1, 1))
    payload = sess.variable_payload((1, 1))
    assert payload["terms"] == 2
    assert not payload["truncated"]
    assert payload["specialized"]["terms"]


def test_cli_roundtrip(tmp_path, capsys):
    store = str(tmp_path / "store")
    rc = main(["--store", store, "seed", "gln", "--n", "2"])
    assert rc == 0
    sid = json.loads(capsys.readouterr().out)["id"]
    rc = main(["--store", store, "mutate", "--session", sid, "--vertex", "1,1"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["history"] == [[1, 1]]
    rc = main(["--store", store, "mutate", "--session", sid, "--vertex", "2,0"])
    assert rc == 2
    assert json.loads(capsys.readouterr().out)["error"] == "FrozenMutation"
    rc = main(["--store", store, "export", "--session", sid, "--dot"])
    assert rc == 0
    assert capsys.readouterr().out.startswith("digraph")


def test_cli_run_sequences(tmp_path, capsys):
    store = str(tmp_path / "store")
    main(["--store", store, "seed", "gln", "--n", "3"])
    sid = json.loads(capsys.readouterr().out)["id"]
    rc = main(["--store", store, "run", "--session", sid, "--sequence", "mu"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["history"] == [[1, 0], [2, 0], [1, 1]]
    rc = main(["--store", store, "run", "--session", sid, "--sequence", "muprime:1"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out["history"]) == 5


def test_cli_kedem_and_class_of_p(tmp_path, capsys):
    store = str(tmp_path / "store")
    main(["--store", store, "seed", "gln", "--n", "2"])
    sid = json.loads(capsys.readouterr().out)["id"]
    rc = main(["--store", store, "run", "--session", sid, "--sequence", "kedem"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert all(c == "red" for c in out["green"].values())
    rc = main(["class-of-p", "--n", "2", "--k", "1", "--l", "2"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["provenance"] == "P[1,2]"
    assert len(data["element"]["terms"]) == 2


def test_cli_verify(tmp_path, capsys):
    rc = main(["verify", "fixtures"])
    assert rc == 0
    assert "fixtures: ok" in capsys.readouterr().out
    rc = main(["verify", "laurent", "--count", "5"])
    assert rc == 0
    capsys.readouterr()
    with pytest.raises(SystemExit):
        main(["verify"])  # suite name required


def test_suite_registry_names():
    assert set(SUITES) == {
        "fixtures",
        "compatibility",
        "mutequiv",
        "minors-lambda",
        "laurent",
        "lambda",
        "comm",
        "mutation-identity",
        "wedge",
        "frozen-rows",
        "keyminors",
        "twist",
        "green",
        "qsystem",
    }
    rep = run_suite("fixtures")[0]
    assert rep["status"] == "ok"
    with pytest.raises(KeyError):
        run_suite("bogus")


@pytest.fixture
def http_server():
    store = SessionStore()
    server = serve_http(0, store)
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{port}"
    server.shutdown()


def _post(base, path, data=None):
    req = urllib.request.Request(
        base + path, data=json.dumps(data or {}).encode(), headers={"Content-Type": "application/json"}
    )
    try:
        with urllib.request.urlopen(req) as r:
            return r.status, json.load(r)
    except urllib.error.HTTPError as e:
        return e.code, json.load(e)


def _get(base, path):
    try:
        with urllib.request.urlopen(base + path) as r:
            ctype = r.headers.get("Content-Type", "")
            return r.status, (json.load(r) if "json" in ctype else r.read().decode())
    except urllib.error.HTTPError as e:
        return e.code, json.load(e)


def test_http_session_lifecycle(http_server):
    code, created = _post(http_server, "/sessions", {"type": "gln", "n": 2})
    assert code == 200
    sid = created["id"]
    fp0 = created["fingerprint"]

    code, state = _post(http_server, f"/sessions/{sid}/mutate", {"vertex": [1, 1]})
    assert code == 200
    assert state["green"]["(1, 1)"] == "red"

    code, payload = _get(http_server, f"/sessions/{sid}/variable/1,1")
    assert code == 200
    exps = sorted(t["v"] for t in payload["element"]["terms"])
    assert exps == [[0, 1, -1, 0], [2, 0, -1, 0]]

    code, state = _post(http_server, f"/sessions/{sid}/undo")
    assert code == 200
    assert state["fingerprint"] == fp0

    code, dot = _get(http_server, f"/sessions/{sid}/export.dot")
    assert code == 200 and dot.startswith("digraph")


def test_http_error_codes(http_server):
    assert _post(http_server, "/sessions", {"type": "nope"})[0] == 422
    assert _post(http_server, "/sessions/zzz/mutate", {"vertex": [1, 1]})[0] == 404
    assert _get(http_server, "/sessions/zzz")[0] == 404
    code, created = _post(http_server, "/sessions", {"type": "gln", "n": 2})
    sid = created["id"]
    assert _post(http_server, f"/sessions/{sid}/mutate", {"vertex": [2, 0]})[0] == 409
    assert _post(http_server, f"/sessions/{sid}/mutate", {})[0] == 422
    code, created = _post(http_server, "/sessions", {"type": "gln", "n": 2, "green_mode": True})
    sid = created["id"]
    assert _post(http_server, f"/sessions/{sid}/mutate", {"vertex": [1, 0]})[0] == 200
    assert _post(http_server, f"/sessions/{sid}/mutate", {"vertex": [1, 0]})[0] == 409


def test_cli_qsystem(capsys):
    rc = main(["qsystem", "--n", "2", "--k", "1", "--l", "1"])
    assert rc == 0
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"] == "ok"
    assert data["lhs"] == data["rhs"]


def test_cli_run_sequence_from_file(tmp_path, capsys):
    store = str(tmp_path / "store")
    main(["--store", store, "seed", "gln", "--n", "2"])
    sid = json.loads(capsys.readouterr().out)["id"]
    seqfile = tmp_path / "seq.json"
    seqfile.write_text('[[1, 0], [1, 0]]')
    rc = main(["--store", store, "run", "--session", sid, "--sequence", str(seqfile)])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["history"] == [[1, 0], [1, 0]]
