"""A small MongoDB-flavoured query language.

Supported: implicit equality, ``$lt``, ``$lte``, ``$gt``, ``$gte``, ``$ne``,
``$in`` on (dotted) field paths, and ``$and`` / ``$or`` at any level. Any
other ``$`` key is a parse error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Number
from typing import Any, Mapping, Sequence


class QueryError(ValueError):
    """Malformed query."""


COMPARISONS = ("$lt", "$lte", "$gt", "$gte")
FIELD_OPS = frozenset(COMPARISONS + ("$eq", "$ne", "$in"))
_MISSING = object()


def _is_num(x) -> bool:
    return isinstance(x, Number) and not isinstance(x, bool)


def values_equal(a, b) -> bool:
    """Equality with numbers compared numerically and everything else exactly."""
    if _is_num(a) and _is_num(b):
        return a == b
    if isinstance(a, bool) or isinstance(b, bool):
        return type(a) is type(b) and a == b
    if isinstance(a, str) or isinstance(b, str):
        return type(a) is type(b) and a == b
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(values_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, dict) and isinstance(b, dict):
        return a.keys() == b.keys() and all(values_equal(a[k], b[k]) for k in a)
    return a is None and b is None


def _compare(op: str, a, b) -> bool:
    if _is_num(a) and _is_num(b):
        pass
    elif isinstance(a, str) and isinstance(b, str):
        pass
    else:
        return False
    if op == "$lt":
        return a < b
    if op == "$lte":
        return a <= b
    if op == "$gt":
        return a > b
    return a >= b


def lookup(doc: Mapping, path: str):
    cur: Any = doc
    for part in path.split("."):
        if not isinstance(cur, Mapping) or part not in cur:
            return _MISSING
        cur = cur[part]
    return cur


class Node:
    def matches(self, doc: Mapping) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class FieldTest(Node):
    path: str
    op: str
    value: Any

    def matches(self, doc):
        got = lookup(doc, self.path)
        if self.op == "$ne":
            return got is _MISSING or not values_equal(got, self.value)
        if got is _MISSING:
            return False
        if self.op == "$eq":
            return values_equal(got, self.value)
        if self.op == "$in":
            return any(values_equal(got, v) for v in self.value)
        return _compare(self.op, got, self.value)


@dataclass(frozen=True)
class And(Node):
    children: tuple[Node, ...]

    def matches(self, doc):
        return all(c.matches(doc) for c in self.children)


@dataclass(frozen=True)
class Or(Node):
    children: tuple[Node, ...]

    def matches(self, doc):
        return any(c.matches(doc) for c in self.children)


def _parse_clauses(name: str, value) -> tuple[Node, ...]:
    if not isinstance(value, list) or not value:
        raise QueryError(f"{name} takes a nonempty list of queries")
    return tuple(parse(v) for v in value)


def _parse_field(path: str, cond) -> list[Node]:
    if not path or path.startswith("$"):
        raise QueryError(f"unknown operator {path!r}")
    if isinstance(cond, dict) and any(k.startswith("$") for k in cond):
        if not all(k.startswith("$") for k in cond):
            raise QueryError(f"field {path!r} mixes operators and plain keys")
        tests = []
        for op, val in cond.items():
            if op not in FIELD_OPS:
                raise QueryError(f"unknown operator {op!r}")
            if op == "$in" and not isinstance(val, list):
                raise QueryError("$in takes a list")
            tests.append(FieldTest(path, op, val))
        return tests
    return [FieldTest(path, "$eq", cond)]


def parse(spec: Mapping) -> Node:
    """Parse a query document into a predicate tree."""
    if not isinstance(spec, Mapping):
        raise QueryError("a query must be a JSON object")
    nodes: list[Node] = []
    for key, value in spec.items():
        if key == "$and":
            nodes.append(And(_parse_clauses(key, value)))
        elif key == "$or":
            nodes.append(Or(_parse_clauses(key, value)))
        else:
            nodes.extend(_parse_field(key, value))
    return And(tuple(nodes))


@dataclass(frozen=True)
class Query:
    """A parsed predicate plus result options."""

    predicate: Mapping = field(default_factory=dict)
    skip: int = 0
    limit: int | None = None
    sort: Sequence[tuple[str, int]] = (("_id", 1),)

    def __post_init__(self):
        object.__setattr__(self, "tree", parse(self.predicate))
        if not isinstance(self.skip, int) or self.skip < 0:
            raise QueryError("skip must be a nonnegative integer")
        if self.limit is not None and (not isinstance(self.limit, int) or self.limit < 0):
            raise QueryError("limit must be a nonnegative integer")
        for item in self.sort:
            if len(item) != 2 or item[1] not in (1, -1):
                raise QueryError("sort entries are (field, 1 | -1) pairs")

    def matches(self, doc: Mapping) -> bool:
        return self.tree.matches(doc)

    def equality_terms(self) -> list[tuple[str, list]]:
        """Top-level ``field == value`` / ``$in`` terms usable by an index."""
        out = []
        for node in self.tree.children:
            if isinstance(node, FieldTest) and node.op == "$eq":
                out.append((node.path, [node.value]))
            elif isinstance(node, FieldTest) and node.op == "$in":
                out.append((node.path, list(node.value)))
        return out
