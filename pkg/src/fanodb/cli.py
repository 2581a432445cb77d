"""Command line entry point: ``fanodb [--store DIR] <command> ...``.

The store directory defaults to ``$FANODB_STORE`` or ``./fanodb-store``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from fanodb.docstore import (
    DocumentStore,
    DuplicateIdError,
    ImportFormatError,
    Query,
    QueryError,
    StoreError,
    UnknownCollectionError,
)
from fanodb.docstore.store import dumps
from fanodb.enumerate import EnumerationError, enumerate_smooth_fano
from fanodb.pipeline import (
    COLLECTION,
    GROUP,
    DataUnavailableError,
    PolytopeNotFoundError,
    build_collection,
    decomposition_stats,
    format_table,
    rows_ndjson,
)
from fanodb.service import serve

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_BAD_QUERY = 3
EXIT_NO_COLLECTION = 4
EXIT_DATA = 5
EXIT_NOT_FOUND = 6

STORE_ENV = "FANODB_STORE"


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fanodb", description=__doc__.splitlines()[0])
    ap.add_argument("--store", default=os.environ.get(STORE_ENV, "fanodb-store"),
                    help=f"store directory (default: ${STORE_ENV} or ./fanodb-store)")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("info", help="list collection groups and collections")

    q = sub.add_parser("query", help="print matching documents as NDJSON")
    q.add_argument("--group", default=GROUP)
    q.add_argument("--collection", default=COLLECTION)
    q.add_argument("--q", default="{}", help="query as a JSON object")
    q.add_argument("--skip", type=int, default=0)
    q.add_argument("--limit", type=int)

    for name in ("import", "export"):
        c = sub.add_parser(name, help=f"{name} a collection as NDJSON")
        c.add_argument("--file", required=True)
        c.add_argument("--group", default=GROUP)
        c.add_argument("--collection", default=COLLECTION)

    b = sub.add_parser("build", help="enumerate and store smooth reflexive polytopes")
    b.add_argument("--max-dim", type=int, default=3)
    b.add_argument("--bound", type=int, default=2)

    e = sub.add_parser("enumerate", help="classify smooth Fano polytopes of one dimension")
    e.add_argument("--dim", type=int, required=True)
    e.add_argument("--bound", type=int, default=2)

    d = sub.add_parser("decompose", help="count free sums, skew bipyramids and simplex sums")
    d.add_argument("--dim", type=int, nargs="+", required=True)
    d.add_argument("--splitinfo", action="store_true")
    d.add_argument("--format", choices=("table", "ndjson"), default="table")

    s = sub.add_parser("serve", help="serve the store read-only over HTTP")
    s.add_argument("--addr", default="127.0.0.1:8080", help="HOST:PORT")
    return ap


def _run(args, out) -> int:
    store = DocumentStore(args.store)
    if args.command == "info":
        out.write(store.db_info())
    elif args.command == "query":
        try:
            spec = json.loads(args.q)
        except json.JSONDecodeError as exc:
            raise QueryError(f"query is not valid JSON: {exc}") from None
        for doc in store.db_query(Query(spec, skip=args.skip, limit=args.limit),
                                  args.group, args.collection):
            out.write(dumps(doc) + "\n")
    elif args.command == "import":
        n = store.import_collection(args.file, args.group, args.collection)
        out.write(f"imported {n} documents into {args.group}/{args.collection}\n")
    elif args.command == "export":
        n = store.export_collection(args.file, args.group, args.collection)
        out.write(f"exported {n} documents from {args.group}/{args.collection}\n")
    elif args.command == "build":
        n = build_collection(store, args.max_dim, args.bound)
        out.write(f"stored {n} documents in {GROUP}/{COLLECTION}\n")
    elif args.command == "enumerate":
        reps = enumerate_smooth_fano(args.dim, args.bound)
        out.write(f"dimension {args.dim}: {len(reps)} classes\n")
        for p in reps:
            out.write(json.dumps([list(v) for v in p.points]) + "\n")
    elif args.command == "decompose":
        reports = [decomposition_stats(dim, store, splitinfo=args.splitinfo) for dim in args.dim]
        if args.format == "table":
            out.write(format_table(reports))
        else:
            out.write(rows_ndjson(reports))
        if args.splitinfo:
            for r in reports:
                for name in sorted(r.splits):
                    splits = sorted(list(s) for s in r.splits[name])
                    out.write(json.dumps({"_id": name, "splits": splits}) + "\n")
    elif args.command == "serve":
        host, _, port = args.addr.rpartition(":")
        serve(store, host or "127.0.0.1", int(port))
    return EXIT_OK


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return _run(args, out)
    except QueryError as exc:
        code, msg = EXIT_BAD_QUERY, f"malformed query: {exc}"
    except UnknownCollectionError as exc:
        code, msg = EXIT_NO_COLLECTION, str(exc)
    except (DuplicateIdError, ImportFormatError, DataUnavailableError, StoreError) as exc:
        code, msg = EXIT_DATA, str(exc)
    except PolytopeNotFoundError as exc:
        code, msg = EXIT_NOT_FOUND, str(exc)
    except (EnumerationError, ValueError, OSError) as exc:
        code, msg = EXIT_ERROR, str(exc)
    print(f"fanodb: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
