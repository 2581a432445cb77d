"""
Counting decomposable polytopes
===============================

Which smooth Fano polytopes are free sums, skew bipyramids or generalized
simplex sums of smaller ones.
"""

from fanodb.docstore import DocumentStore
from fanodb.pipeline import build_collection, decomposition_stats, format_table, replay_split

store = DocumentStore()
build_collection(store, max_dim=3)

reports = [decomposition_stats(d, store, splitinfo=True) for d in (2, 3)]
print(format_table(reports))

# every split can be rebuilt and identified again
for name, splits in sorted(reports[1].splits.items())[:4]:
    for split in sorted(splits):
        print(name, split, "->", replay_split(store, split))
