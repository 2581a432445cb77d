"""Read-only HTTP/JSON access to a document store.

Routes::

    GET  /info
    GET  /{group}/{collection}/{id}
    POST /{group}/{collection}/query   body: {"q": {...}, "skip": n, "limit": n}
"""

from __future__ import annotations

import json
import logging
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import unquote, urlsplit

from fanodb.docstore import DocumentStore, Query, QueryError, UnknownCollectionError

log = logging.getLogger(__name__)


def encode(payload) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()


def handle(store: DocumentStore, method: str, path: str, body: bytes = b"") -> tuple[int, dict]:
    """Route one request; returns ``(status, json payload)``."""
    parts = [unquote(p) for p in urlsplit(path).path.split("/") if p]
    if parts == ["info"]:
        if method != "GET":
            return 405, {"error": "method not allowed"}
        return 200, store.info()
    if len(parts) != 3:
        return 404, {"error": "no such route"}
    group, collection, last = parts
    if last == "query" and method == "POST":
        try:
            request = json.loads(body or b"{}")
            if not isinstance(request, dict):
                raise QueryError("request body must be a JSON object")
            unknown = set(request) - {"q", "skip", "limit"}
            if unknown:
                raise QueryError(f"unknown request keys {sorted(unknown)}")
            skip = request.get("skip", 0)
            limit = request.get("limit")
            full = store.db_query(Query(request.get("q", {})), group, collection)
            page = Query(request.get("q", {}), skip=skip, limit=limit)
        except (QueryError, json.JSONDecodeError) as exc:
            return 400, {"error": f"malformed query: {exc}"}
        except UnknownCollectionError as exc:
            return 404, {"error": str(exc)}
        end = None if page.limit is None else page.skip + page.limit
        return 200, {"total": len(full), "documents": full[page.skip:end]}
    if method != "GET":
        return 405, {"error": "method not allowed"}
    try:
        doc = store.get(group, collection, last)
    except UnknownCollectionError as exc:
        return 404, {"error": str(exc)}
    if doc is None:
        return 404, {"error": f"no document {last!r}"}
    return 200, doc


def make_handler(store: DocumentStore):
    class Handler(BaseHTTPRequestHandler):
        server_version = "fanodb"

        def _reply(self, status, payload):
            data = encode(payload)
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def do_GET(self):
            self._reply(*handle(store, "GET", self.path))

        def do_POST(self):
            length = int(self.headers.get("Content-Length") or 0)
            self._reply(*handle(store, "POST", self.path, self.rfile.read(length)))

        def log_message(self, fmt, *args):
            log.info("%s - %s", self.address_string(), fmt % args)

    return Handler


def make_server(store: DocumentStore, host: str = "127.0.0.1", port: int = 8080) -> ThreadingHTTPServer:
    return ThreadingHTTPServer((host, port), make_handler(store))


def serve(store: DocumentStore, host: str = "127.0.0.1", port: int = 8080) -> None:
    server = make_server(store, host, port)
    log.info("serving on http://%s:%d", *server.server_address[:2])
    try:
        server.serve_forever()
    finally:
        server.server_close()


__all__ = ["encode", "handle", "make_server", "serve"]
