"""
Building and querying a store
=============================

Build the collection of dimensions 1 to 3 in memory and run a few queries.
"""

from fanodb.docstore import DocumentStore
from fanodb.pipeline import COLLECTION, GROUP, build_collection

store = DocumentStore()  # pass a directory to persist it
build_collection(store, max_dim=3)
print(store.db_info())

# documents hold the polar duals of the smooth Fano polytopes
docs = store.db_query({"DIM": 3, "N_FACETS": 5}, GROUP, COLLECTION)
for doc in docs:
    print(doc["_id"], doc["N_LATTICE_POINTS"])

# operators, dotted paths and paging
q = {"$or": [{"N_VERTICES": {"$gte": 12}}, {"polyDB.format": "fanodb-polytope-1", "DIM": 1}]}
for doc in store.db_query(q, GROUP, COLLECTION, limit=3):
    print(doc["_id"], doc["DIM"], doc["N_VERTICES"])

# cursors walk a snapshot one document at a time
cur = store.db_cursor({"DIM": 2}, GROUP, COLLECTION)
while not cur.at_end():
    print(cur.next()["F_VECTOR"])
