import pytest

from fanodb.docstore import DocumentStore
from fanodb.pipeline import build_collection
from fanodb.polytope import from_homogeneous, from_vertices

# a complete stored entry, used as a fixture
F2D3 = {
    "_id": "F.2D.3",
    "DIM": 2,
    "FACETS": [[1, 0, 1], [1, 0, -1], [1, 1, 0], [1, -1, -1], [1, -1, 0]],
    "VERTICES": [[1, -1, -1], [1, -1, 1], [1, 0, 1], [1, 1, 0], [1, 1, -1]],
    "F_VECTOR": [5, 5],
    "EHRHART_POLYNOMIAL_COEFF": ["1", "7/2", "7/2"],
    "H_STAR_VECTOR": [1, 5, 1],
    "CENTROID": ["1", "-2/21", "-2/21"],
    "N_LATTICE_POINTS": 8,
    "NORMAL": "true",
    "VERY_AMPLE": "true",
    "LATTICE_VOLUME": 7,
    "polyDB": {},
}

# the five smooth Fano polygons
POLYGONS = {
    "P6": [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)],
    "P5": [(1, 0), (0, 1), (-1, 1), (0, -1), (1, -1)],
    "P4a": [(1, 0), (0, 1), (-1, 0), (0, -1)],
    "P4b": [(1, 0), (0, 1), (1, -1), (-1, 0)],
    "P3": [(1, 0), (0, 1), (-1, -1)],
}

# two 5-polytopes related by a unimodular map
P3_EXT = [[1, 0, 1, 1, 0, 0], [1, -1, 0, 0, 0, 0], [1, 0, 0, 1, 0, 0],
          [1, 0, -1, 0, 0, 0], [1, 0, 0, -1, 0, 0], [1, 1, 0, -1, 0, 0],
          [1, 0, 0, 0, -1, 0], [1, 0, 0, 0, 0, -1],
          [1, 0, 0, -2, 1, 1]]
P5 = [[1, 0, 0, 0, 0, 1], [1, 0, 0, 1, 0, -1], [1, 0, 0, -1, 0, 0],
      [1, 0, 0, 0, -1, 0], [1, 0, 0, 0, 0, -1], [1, -1, 0, 0, 0, 0],
      [1, 0, -1, 0, 0, 0], [1, 0, 1, 0, 0, 1], [1, 1, 0, 0, 1, 2]]


def square():
    return from_vertices([(a, b) for a in (-1, 1) for b in (-1, 1)])


def cube():
    return from_vertices([(a, b, c) for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)])


@pytest.fixture(scope="session")
def f2d3():
    return from_homogeneous(F2D3["VERTICES"])


@pytest.fixture(scope="session")
def polygons():
    return {name: from_vertices(pts) for name, pts in POLYGONS.items()}


@pytest.fixture(scope="session")
def built_store():
    store = DocumentStore()
    build_collection(store, 3)
    return store


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fano_corpus():
    from fanodb.enumerate import enumerate_smooth_fano

    return {d: enumerate_smooth_fano(d) for d in (1, 2, 3)}
