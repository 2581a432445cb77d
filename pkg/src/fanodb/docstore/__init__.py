from fanodb.docstore.query import Query, QueryError, parse, values_equal
from fanodb.docstore.store import (
    TYPE_INFORMATION,
    Collection,
    Cursor,
    CursorExhaustedError,
    DocumentStore,
    DuplicateIdError,
    ImportFormatError,
    StoreError,
    UnknownCollectionError,
)

__all__ = [
    "Collection",
    "Cursor",
    "CursorExhaustedError",
    "DocumentStore",
    "DuplicateIdError",
    "ImportFormatError",
    "Query",
    "QueryError",
    "StoreError",
    "TYPE_INFORMATION",
    "UnknownCollectionError",
    "parse",
    "values_equal",
]
