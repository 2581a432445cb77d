import io
import json
import threading
import urllib.error
import urllib.request

import pytest

from conftest import F2D3
from fanodb import cli
from fanodb.docstore import DocumentStore
from fanodb.pipeline import COLLECTION, GROUP, parse_table
from fanodb.service import encode, handle, make_server

Q = {"DIM": 3, "N_FACETS": 5}


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture(scope="module")
def store_dir(tmp_path_factory, built_store):
    root = tmp_path_factory.mktemp("cli") / "store"
    dump = root.parent / "all.ndjson"
    built_store.export_collection(dump, GROUP, COLLECTION)
    code, text = run("--store", str(root), "import", "--file", str(dump))
    assert code == 0 and "imported 24" in text
    return root


def test_query_prints_ndjson(store_dir):
    code, text = run("--store", str(store_dir), "query", "--q", json.dumps(Q))
    assert code == 0
    docs = [json.loads(line) for line in text.splitlines()]
    assert len(docs) == 4
    assert sorted(d["N_LATTICE_POINTS"] for d in docs) == [30, 30, 31, 34]
    code, text = run("--store", str(store_dir), "query", "--q", json.dumps(Q), "--skip", "1", "--limit", "2")
    assert [json.loads(x) for x in text.splitlines()] == docs[1:3]


def test_info(store_dir):
    code, text = run("--store", str(store_dir), "info")
    assert code == 0
    assert text.startswith(f"DATABASE: {GROUP}\n")
    assert f"Collection: {COLLECTION}" in text


def test_decompose(store_dir):
    code, text = run("--store", str(store_dir), "decompose", "--dim", "2", "3")
    assert code == 0
    rows = dict(((d, name), c) for d, name, c in parse_table(text))
    assert rows[(3, "skew bipyramids")] == 9
    assert rows[(2, "total decomposable")] == 3
    code, text = run("--store", str(store_dir), "decompose", "--dim", "2", "--format", "ndjson", "--splitinfo")
    lines = [json.loads(x) for x in text.splitlines()]
    assert {"dimension": 2, "row": "free sums", "count": 1} in lines
    assert any("splits" in x for x in lines)


def test_enumerate_command():
    code, text = run("enumerate", "--dim", "2")
    assert code == 0
    assert text.splitlines()[0] == "dimension 2: 5 classes"
    assert len(text.splitlines()) == 6


@pytest.mark.parametrize(
    "argv, code",
    [
        (["query", "--q", '{"$frob": 1}'], cli.EXIT_BAD_QUERY),
        (["query", "--q", "not json"], cli.EXIT_BAD_QUERY),
        (["query", "--collection", "Nope"], cli.EXIT_NO_COLLECTION),
        (["decompose", "--dim", "4"], cli.EXIT_DATA),
        (["enumerate", "--dim", "9"], cli.EXIT_ERROR),
        (["frobnicate"], cli.EXIT_USAGE),
    ],
)
def test_exit_codes(store_dir, argv, code, capsys):
    assert run("--store", str(store_dir), *argv)[0] == code
    if code != cli.EXIT_USAGE:
        assert capsys.readouterr().err.startswith("fanodb: ")


def test_import_errors(tmp_path):
    bad = tmp_path / "bad.ndjson"
    bad.write_text('{"_id": "a"}\nnot json\n')
    assert run("--store", str(tmp_path / "s"), "import", "--file", str(bad))[0] == cli.EXIT_DATA
    one = tmp_path / "one.ndjson"
    one.write_text(json.dumps(F2D3) + "\n")
    assert run("--store", str(tmp_path / "s"), "import", "--file", str(one))[0] == 0
    assert run("--store", str(tmp_path / "s"), "import", "--file", str(one))[0] == cli.EXIT_DATA
    code, text = run("--store", str(tmp_path / "s"), "query", "--q", '{"LATTICE_VOLUME": 7}')
    assert json.loads(text) == F2D3


def test_export_round_trip(store_dir, tmp_path):
    out = tmp_path / "x.ndjson"
    assert run("--store", str(store_dir), "export", "--file", str(out))[0] == 0
    assert len(out.read_text().splitlines()) == 24


def test_handle_routes(built_store):
    status, info = handle(built_store, "GET", "/info")
    assert status == 200 and info[GROUP]["collections"][COLLECTION]["size"] == 24
    status, doc = handle(built_store, "GET", f"/{GROUP}/{COLLECTION}/F.2D.0")
    assert status == 200 and doc["_id"] == "F.2D.0"
    assert handle(built_store, "GET", f"/{GROUP}/{COLLECTION}/F.9D.0")[0] == 404
    assert handle(built_store, "GET", f"/{GROUP}/Nope/F.2D.0")[0] == 404
    assert handle(built_store, "GET", "/a/b/c/d")[0] == 404
    assert handle(built_store, "POST", "/info")[0] == 405
    assert handle(built_store, "DELETE", f"/{GROUP}/{COLLECTION}/F.2D.0")[0] == 405


def test_handle_query(built_store):
    body = json.dumps({"q": Q, "skip": 1, "limit": 2}).encode()
    status, payload = handle(built_store, "POST", f"/{GROUP}/{COLLECTION}/query", body)
    assert status == 200 and payload["total"] == 4 and len(payload["documents"]) == 2
    for bad in (b"{", b"[]", b'{"q": {"$frob": 1}}', b'{"q": {}, "sort": 1}', b'{"skip": -1}'):
        assert handle(built_store, "POST", f"/{GROUP}/{COLLECTION}/query", bad)[0] == 400
    assert handle(built_store, "POST", f"/{GROUP}/Nope/query", b"{}")[0] == 404


def test_live_server_matches_cli(built_store, store_dir):
    server = make_server(DocumentStore(store_dir), "127.0.0.1", 0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    base = "http://127.0.0.1:%d" % server.server_address[1]
    try:
        req = urllib.request.Request(
            f"{base}/{GROUP}/{COLLECTION}/query",
            data=json.dumps({"q": Q}).encode(),
            headers={"Content-Type": "application/json"},
        )
        with urllib.request.urlopen(req) as resp:
            over_http = json.loads(resp.read())["documents"]
        _, text = run("--store", str(store_dir), "query", "--q", json.dumps(Q))
        assert over_http == [json.loads(x) for x in text.splitlines()]
        with urllib.request.urlopen(f"{base}/info") as resp:
            assert GROUP in json.loads(resp.read())
        with pytest.raises(urllib.error.HTTPError) as err:
            urllib.request.urlopen(f"{base}/{GROUP}/{COLLECTION}/missing")
        assert err.value.code == 404
    finally:
        server.shutdown()
        server.server_close()


def test_pentagon_over_http(built_store):
    (doc,) = built_store.db_query({"DIM": 2, "N_VERTICES": 5}, GROUP, COLLECTION)
    status, got = handle(built_store, "GET", f"/{GROUP}/{COLLECTION}/{doc['_id']}")
    assert status == 200 and got["F_VECTOR"] == [5, 5]
    status, payload = handle(built_store, "POST", f"/{GROUP}/{COLLECTION}/query", b'{"q": {"DIM": 2}}')
    assert payload["total"] == 5
    status, payload = handle(built_store, "POST", f"/{GROUP}/{COLLECTION}/query",
                             b'{"q": {"DIM": {"$frobnicate": 2}}}')
    assert status == 400 and "$frobnicate" in payload["error"]


def test_responses_are_byte_identical(built_store):
    body = b'{"q": {"DIM": 3}, "limit": 5}'
    first = encode(handle(built_store, "POST", f"/{GROUP}/{COLLECTION}/query", body)[1])
    assert first == encode(handle(built_store, "POST", f"/{GROUP}/{COLLECTION}/query", body)[1])


def test_enumerate_dim_one_and_small_table(store_dir):
    assert run("enumerate", "--dim", "1")[1].startswith("dimension 1: 1 classes\n")
    _, text = run("--store", str(store_dir), "decompose", "--dim", "2")
    assert [c for _, _, c in parse_table(text)] == [5, 1, 1, 2, 1, 3, 3]
