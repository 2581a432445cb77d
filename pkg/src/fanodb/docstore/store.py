"""Embedded document store organised as collection groups of collections.

Every group carries a ``type_information`` collection describing its
collections. On disk a store is a directory with one subdirectory per group
holding ``manifest.json`` and one newline-delimited JSON file per collection.
Writers replace a collection's document map wholesale, so cursors and
readers keep whatever snapshot they started with.
"""

from __future__ import annotations

import copy
import json
import logging
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from fanodb.docstore.query import Query, QueryError, _is_num, lookup, _MISSING

log = logging.getLogger(__name__)

TYPE_INFORMATION = "type_information"


class StoreError(Exception):
    pass


class UnknownCollectionError(StoreError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown collection"


class DuplicateIdError(StoreError):
    pass


class ImportFormatError(StoreError):
    pass


class CursorExhaustedError(StoreError):
    pass


def _index_key(value):
    if isinstance(value, bool):
        return ("bool", value)
    if _is_num(value):
        return ("num", value)
    if isinstance(value, str):
        return ("str", value)
    return None


def _sort_key(doc, path):
    v = lookup(doc, path)
    if v is _MISSING or v is None:
        return (0, 0)
    if _is_num(v):
        return (1, v)
    if isinstance(v, str):
        return (2, v)
    return (3, json.dumps(v, sort_keys=True))


def _order(docs: list[dict], sort: Sequence[tuple[str, int]]) -> list[dict]:
    keys = list(sort)
    if not any(path == "_id" for path, _ in keys):
        keys.append(("_id", 1))
    for path, direction in reversed(keys):
        docs.sort(key=lambda d: _sort_key(d, path), reverse=direction < 0)
    return docs


@dataclass
class Collection:
    group: str
    name: str
    description: str = ""
    index_fields: tuple[str, ...] = ()
    _docs: dict[str, dict] = field(default_factory=dict, repr=False)
    _indexes: dict[str, dict] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._rebuild_indexes(self._docs)

    def __len__(self):
        return len(self._docs)

    def snapshot(self) -> dict[str, dict]:
        return self._docs

    def _rebuild_indexes(self, docs):
        indexes = {}
        for path in self.index_fields:
            idx: dict = {}
            for _id, doc in docs.items():
                key = _index_key(lookup(doc, path))
                if key is not None:
                    idx.setdefault(key, set()).add(_id)
            indexes[path] = idx
        self._indexes = indexes

    def insert_many(self, docs: Iterable[Mapping]) -> int:
        new = dict(self._docs)
        count = 0
        for doc in docs:
            doc = _check_doc(doc)
            if doc["_id"] in new:
                raise DuplicateIdError(f"duplicate _id {doc['_id']!r} in {self.group}/{self.name}")
            new[doc["_id"]] = copy.deepcopy(doc)
            count += 1
        self._rebuild_indexes(new)
        self._docs = new
        return count

    def find(self, query: Query, use_index: bool = True) -> list[dict]:
        docs, indexes = self._docs, self._indexes
        candidates = None
        if use_index:
            for path, values in query.equality_terms():
                if path not in indexes:
                    continue
                ids = set()
                for v in values:
                    key = _index_key(v)
                    if key is not None:
                        ids |= indexes[path].get(key, set())
                candidates = ids if candidates is None else candidates & ids
        pool = docs.values() if candidates is None else (docs[i] for i in candidates)
        hits = [d for d in pool if query.matches(d)]
        hits = _order(hits, query.sort)
        end = None if query.limit is None else query.skip + query.limit
        return [copy.deepcopy(d) for d in hits[query.skip : end]]


def _check_doc(doc) -> dict:
    if not isinstance(doc, Mapping):
        raise StoreError("documents must be JSON objects")
    _id = doc.get("_id")
    if not isinstance(_id, str) or not _id:
        raise StoreError("documents need a nonempty string _id")
    return dict(doc)


class Cursor:
    """Iterates a query result one document at a time over a fixed snapshot."""

    def __init__(self, docs: list[dict]):
        self._docs = docs
        self._pos = 0

    def at_end(self) -> bool:
        return self._pos >= len(self._docs)

    def next(self) -> dict:
        if self.at_end():
            raise CursorExhaustedError("cursor is exhausted")
        doc = self._docs[self._pos]
        self._pos += 1
        return doc

    def __iter__(self):
        return self

    def __next__(self):
        if self.at_end():
            raise StopIteration
        return self.next()


@dataclass
class Group:
    name: str
    description: str = ""
    collections: dict[str, Collection] = field(default_factory=dict)

    def __post_init__(self):
        if TYPE_INFORMATION not in self.collections:
            self.collections[TYPE_INFORMATION] = Collection(
                self.name, TYPE_INFORMATION, "format descriptions of this group's collections"
            )


class DocumentStore:
    """Groups of collections of JSON documents, optionally backed by a directory."""

    def __init__(self, root: str | os.PathLike | None = None):
        self.root = Path(root) if root is not None else None
        self.groups: dict[str, Group] = {}
        self._lock = threading.RLock()
        if self.root is not None and self.root.exists():
            self._load()

    # -- schema ------------------------------------------------------------

    def create_collection(
        self,
        group: str,
        name: str,
        description: str = "",
        indexes: Sequence[str] = (),
        type_info: Mapping | None = None,
        group_description: str = "",
    ) -> Collection:
        if name == TYPE_INFORMATION:
            raise StoreError(f"{TYPE_INFORMATION} is reserved")
        with self._lock:
            g = self.groups.get(group)
            if g is None:
                g = self.groups[group] = Group(group, group_description)
            elif group_description and not g.description:
                g.description = group_description
            if name in g.collections:
                raise StoreError(f"collection {group}/{name} already exists")
            coll = Collection(group, name, description, tuple(indexes))
            g.collections[name] = coll
            info = {"_id": name, "description": description, "indexes": list(indexes)}
            info.update(type_info or {})
            info["_id"] = name
            g.collections[TYPE_INFORMATION].insert_many([info])
            self._persist(group)
            return coll

    def collection(self, group: str, name: str) -> Collection:
        try:
            return self.groups[group].collections[name]
        except KeyError:
            raise UnknownCollectionError(f"no collection {group}/{name}") from None

    def has_collection(self, group: str, name: str) -> bool:
        return group in self.groups and name in self.groups[group].collections

    def type_information(self, group: str, name: str) -> dict:
        info = self.collection(group, TYPE_INFORMATION).snapshot().get(name)
        return copy.deepcopy(info) if info else {}

    # -- writes --------------------------------------------------------------

    def insert_many(self, group: str, name: str, docs: Iterable[Mapping]) -> int:
        with self._lock:
            n = self.collection(group, name).insert_many(docs)
            self._persist(group)
            return n

    def import_collection(self, path, group: str, name: str) -> int:
        """Load newline-delimited JSON; all or nothing."""
        docs = []
        seen = set()
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    doc = json.loads(line)
                    doc = _check_doc(doc)
                except (json.JSONDecodeError, StoreError) as exc:
                    raise ImportFormatError(f"{path}:{lineno}: {exc}") from None
                if doc["_id"] in seen:
                    raise DuplicateIdError(f"{path}:{lineno}: duplicate _id {doc['_id']!r}")
                seen.add(doc["_id"])
                docs.append(doc)
        with self._lock:
            if not self.has_collection(group, name):
                self.create_collection(group, name)
            coll = self.collection(group, name)
            clash = seen & coll.snapshot().keys()
            if clash:
                raise DuplicateIdError(f"duplicate _id {sorted(clash)[0]!r} already stored")
            return self.insert_many(group, name, docs)

    def export_collection(self, path, group: str, name: str) -> int:
        docs = self.collection(group, name).snapshot()
        _write_ndjson(Path(path), [docs[k] for k in sorted(docs)])
        return len(docs)

    # -- reads -------------------------------------------------------------

    def db_info(self) -> str:
        """Human-readable listing of groups and their collections."""
        blocks = []
        for gname in sorted(self.groups):
            g = self.groups[gname]
            lines = [f"DATABASE: {gname}"]
            if g.description:
                lines.append(g.description)
            infos = g.collections[TYPE_INFORMATION].snapshot()
            for cname in sorted(g.collections):
                if cname == TYPE_INFORMATION:
                    continue
                lines.append("")
                lines.append(f"Collection: {cname}")
                desc = infos.get(cname, {}).get("description") or g.collections[cname].description
                if desc:
                    lines.append(desc)
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + ("\n" if blocks else "")

    def info(self) -> dict:
        return {
            gname: {
                "description": g.description,
                "collections": {
                    c: {"description": coll.description, "size": len(coll)}
                    for c, coll in sorted(g.collections.items())
                    if c != TYPE_INFORMATION
                },
            }
            for gname, g in sorted(self.groups.items())
        }

    def db_query(self, query: Query | Mapping, group: str, collection: str, *,
                 use_index: bool = True, **options: Any) -> list[dict]:
        if not isinstance(query, Query):
            query = Query(query, **options)
        elif options:
            raise QueryError("options go into the Query object")
        return self.collection(group, collection).find(query, use_index=use_index)

    def db_cursor(self, query: Query | Mapping, group: str, collection: str, **options: Any) -> Cursor:
        return Cursor(self.db_query(query, group, collection, **options))

    def find_one(self, query: Query | Mapping, group: str, collection: str) -> dict | None:
        hits = self.db_query(query, group, collection)
        return hits[0] if hits else None

    def get(self, group: str, collection: str, _id: str) -> dict | None:
        doc = self.collection(group, collection).snapshot().get(_id)
        return copy.deepcopy(doc) if doc is not None else None

    # -- persistence -------------------------------------------------------

    def _persist(self, group: str) -> None:
        if self.root is None:
            return
        g = self.groups[group]
        gdir = self.root / group
        gdir.mkdir(parents=True, exist_ok=True)
        manifest = {
            "group": group,
            "description": g.description,
            "collections": {
                c: {"description": coll.description, "indexes": list(coll.index_fields)}
                for c, coll in sorted(g.collections.items())
            },
        }
        for c, coll in g.collections.items():
            docs = coll.snapshot()
            _write_ndjson(gdir / f"{c}.ndjson", [docs[k] for k in sorted(docs)])
        _atomic_write(gdir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    def _load(self) -> None:
        for manifest_path in sorted(self.root.glob("*/manifest.json")):
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
            group = Group(manifest["group"], manifest.get("description", ""), {})
            for cname, meta in manifest["collections"].items():
                coll = Collection(group.name, cname, meta.get("description", ""),
                                  tuple(meta.get("indexes", ())))
                fpath = manifest_path.parent / f"{cname}.ndjson"
                if fpath.exists():
                    with open(fpath, encoding="utf-8") as fh:
                        coll.insert_many(json.loads(line) for line in fh if line.strip())
                group.collections[cname] = coll
            self.groups[group.name] = group


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def dumps(doc: Mapping) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _write_ndjson(path: Path, docs: Iterable[Mapping]) -> None:
    _atomic_write(path, "".join(dumps(d) + "\n" for d in docs))
