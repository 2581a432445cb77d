import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F2D3
from fanodb.docstore import (
    CursorExhaustedError,
    DocumentStore,
    DuplicateIdError,
    ImportFormatError,
    Query,
    QueryError,
    UnknownCollectionError,
)

FIELDS = ("a", "b", "c")


def reference(doc, q):
    """Straight-line evaluator over the same tiny query language."""
    for key, cond in q.items():
        if key == "$and":
            if not all(reference(doc, c) for c in cond):
                return False
            continue
        if key == "$or":
            if not any(reference(doc, c) for c in cond):
                return False
            continue
        have = key in doc
        val = doc.get(key)
        ops = cond if isinstance(cond, dict) else {"$eq": cond}
        for op, x in ops.items():
            if op == "$ne":
                ok = not have or val != x
            elif not have:
                ok = False
            elif op == "$eq":
                ok = val == x
            elif op == "$in":
                ok = val in x
            else:
                ok = {"$lt": val < x, "$lte": val <= x, "$gt": val > x, "$gte": val >= x}[op]
            if not ok:
                return False
    return True


def random_docs(rng, n=60):
    docs = []
    for i in range(n):
        doc = {"_id": f"d{i:03d}"}
        for f in FIELDS:
            if rng.random() < 0.85:
                doc[f] = rng.randint(0, 5)
        docs.append(doc)
    return docs


leaf = st.builds(
    lambda f, op, v, vs: {f: v} if op == "eq" else {f: {op: vs if op == "$in" else v}},
    st.sampled_from(FIELDS),
    st.sampled_from(["eq", "$lt", "$lte", "$gt", "$gte", "$ne", "$in"]),
    st.integers(0, 5),
    st.lists(st.integers(0, 5), min_size=1, max_size=3),
)
queries = st.recursive(
    leaf,
    lambda inner: st.one_of(
        st.builds(lambda xs: {"$and": xs}, st.lists(inner, min_size=1, max_size=3)),
        st.builds(lambda xs: {"$or": xs}, st.lists(inner, min_size=1, max_size=3)),
    ),
    max_leaves=5,
)


@pytest.fixture(scope="module")
def small_store():
    store = DocumentStore()
    store.create_collection("G", "C", "test docs", indexes=("a", "b"))
    store.insert_many("G", "C", random_docs(random.Random(1)))
    return store


@settings(max_examples=200, deadline=None)
@given(queries)
def test_query_matches_reference(small_store, q):
    docs = small_store.collection("G", "C").snapshot().values()
    expected = sorted(d["_id"] for d in docs if reference(d, q))
    got = [d["_id"] for d in small_store.db_query(q, "G", "C")]
    assert got == expected
    assert got == [d["_id"] for d in small_store.db_query(q, "G", "C", use_index=False)]


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 5))
def test_complementary_queries_partition(small_store, f, v):
    def ids(q):
        return {d["_id"] for d in small_store.db_query(q, "G", "C")}

    everything = ids({})
    eq, ne = ids({f: v}), ids({f: {"$ne": v}})
    assert eq | ne == everything and not eq & ne
    lt, gte, missing = ids({f: {"$lt": v}}), ids({f: {"$gte": v}}), everything - ids({f: {"$gte": -1}})
    assert lt | gte | missing == everything
    assert len(lt) + len(gte) + len(missing) == len(everything)


@settings(max_examples=100, deadline=None)
@given(queries, st.integers(0, 10), st.one_of(st.none(), st.integers(0, 10)))
def test_cursor_agrees_with_query(small_store, q, skip, limit):
    listed = small_store.db_query(q, "G", "C", skip=skip, limit=limit)
    cur = small_store.db_cursor(q, "G", "C", skip=skip, limit=limit)
    walked = []
    while not cur.at_end():
        walked.append(cur.next())
    assert walked == listed
    with pytest.raises(CursorExhaustedError):
        cur.next()


def test_indexed_and_scanned_results_agree_on_random_queries(small_store):
    rng = random.Random(9)
    for _ in range(50):
        q = {f: rng.randint(0, 5) for f in rng.sample(FIELDS, rng.randint(1, 3))}
        assert small_store.db_query(q, "G", "C") == small_store.db_query(q, "G", "C", use_index=False)


@pytest.mark.parametrize(
    "bad",
    [{"$frob": 1}, {"a": {"$regex": "x"}}, {"$and": []}, {"$or": 3}, {"a": {"$in": 3}},
     {"a": {"$gt": 1, "b": 2}}, [1, 2]],
)
def test_malformed_queries(small_store, bad):
    with pytest.raises(QueryError):
        small_store.db_query(bad, "G", "C")


def test_bad_options():
    with pytest.raises(QueryError):
        Query({}, skip=-1)
    with pytest.raises(QueryError):
        Query({}, limit=-2)


def test_numeric_and_bool_equality():
    store = DocumentStore()
    store.create_collection("G", "C")
    store.insert_many("G", "C", [{"_id": "x", "v": 1}, {"_id": "y", "v": True}, {"_id": "z", "v": 1.0}])
    assert [d["_id"] for d in store.db_query({"v": 1}, "G", "C")] == ["x", "z"]
    assert [d["_id"] for d in store.db_query({"v": True}, "G", "C")] == ["y"]


def test_dotted_paths():
    store = DocumentStore()
    store.create_collection("G", "C")
    store.insert_many("G", "C", [{"_id": "x", "m": {"k": 3}}, {"_id": "y", "m": {"k": 4}}])
    assert [d["_id"] for d in store.db_query({"m.k": {"$gt": 3}}, "G", "C")] == ["y"]


def test_unknown_collection(small_store):
    with pytest.raises(UnknownCollectionError):
        small_store.db_query({}, "G", "nope")
    with pytest.raises(UnknownCollectionError):
        small_store.db_query({}, "nope", "C")


def test_results_are_copies(small_store):
    doc = small_store.db_query({}, "G", "C", limit=1)[0]
    doc["a"] = "changed"
    assert small_store.get("G", "C", doc["_id"])["a"] != "changed"


def test_cursor_keeps_its_snapshot():
    store = DocumentStore()
    store.create_collection("G", "C")
    store.insert_many("G", "C", [{"_id": "a"}])
    cur = store.db_cursor({}, "G", "C")
    store.insert_many("G", "C", [{"_id": "b"}])
    assert [d["_id"] for d in cur] == ["a"]


def test_duplicate_ids(tmp_path):
    store = DocumentStore()
    store.create_collection("G", "C")
    store.insert_many("G", "C", [{"_id": "a"}])
    with pytest.raises(DuplicateIdError):
        store.insert_many("G", "C", [{"_id": "b"}, {"_id": "a"}])
    assert store.get("G", "C", "b") is None
    f = tmp_path / "dup.ndjson"
    f.write_text('{"_id": "x"}\n{"_id": "x"}\n')
    with pytest.raises(DuplicateIdError, match="dup.ndjson:2"):
        store.import_collection(f, "G", "D")


def test_import_is_atomic(tmp_path):
    store = DocumentStore()
    f = tmp_path / "bad.ndjson"
    f.write_text('{"_id": "x"}\n{"_id": "y"\n')
    with pytest.raises(ImportFormatError, match="bad.ndjson:2"):
        store.import_collection(f, "G", "C")
    assert not store.has_collection("G", "C") or len(store.collection("G", "C")) == 0


def test_import_export_round_trip(tmp_path, small_store):
    out = tmp_path / "c.ndjson"
    assert small_store.export_collection(out, "G", "C") == 60
    other = DocumentStore()
    other.import_collection(out, "G", "C")
    assert other.db_query({}, "G", "C") == small_store.db_query({}, "G", "C")
    again = tmp_path / "d.ndjson"
    other.export_collection(again, "G", "C")
    assert again.read_bytes() == out.read_bytes()


def test_f2d3_entry_import(tmp_path):
    f = tmp_path / "one.ndjson"
    f.write_text(json.dumps(F2D3) + "\n")
    store = DocumentStore()
    store.import_collection(f, "LatticePolytopes", "SmoothReflexive")
    for key in ("DIM", "N_LATTICE_POINTS", "LATTICE_VOLUME", "F_VECTOR", "H_STAR_VECTOR", "CENTROID"):
        hits = store.db_query({key: F2D3[key]}, "LatticePolytopes", "SmoothReflexive")
        assert [d["_id"] for d in hits] == ["F.2D.3"]
    assert store.get("LatticePolytopes", "SmoothReflexive", "F.2D.3") == F2D3


def test_db_info_lists_groups_in_order():
    store = DocumentStore()
    assert store.db_info() == ""
    store.create_collection("Zeta", "b", "second")
    store.create_collection("Alpha", "z", "last", group_description="first group")
    store.create_collection("Alpha", "a", "first")
    text = store.db_info()
    assert text.index("DATABASE: Alpha") < text.index("DATABASE: Zeta")
    assert text.index("Collection: a") < text.index("Collection: z")
    assert "type_information" not in text
    assert store.type_information("Alpha", "a")["description"] == "first"


def test_persistence(tmp_path):
    store = DocumentStore(tmp_path / "db")
    store.create_collection("G", "C", "persisted", indexes=("a",))
    store.insert_many("G", "C", random_docs(random.Random(2), 10))
    reopened = DocumentStore(tmp_path / "db")
    assert reopened.db_query({}, "G", "C") == store.db_query({}, "G", "C")
    assert reopened.collection("G", "C").index_fields == ("a",)
    assert reopened.db_info() == store.db_info()
    assert not list((tmp_path / "db").glob("*/*.tmp"))
