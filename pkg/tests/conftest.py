import pathlib

import pytest

from coxdom.core import INF, CoxeterDatum, load_datum_file
from coxdom.roots import RootStore

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

BONDS = {
    "atilde1": (2, {(0, 1): INF}),
    "atilde2": (3, {(0, 1): 3, (0, 2): 3, (1, 2): 3}),
    "triangle_337": (3, {(0, 1): 3, (0, 2): 3, (1, 2): 7}),
    "universal3": (3, {(0, 1): INF, (0, 2): INF, (1, 2): INF}),
    "a2": (2, {(0, 1): 3}),
    "b2": (2, {(0, 1): 4}),
    "i2_5": (2, {(0, 1): 5}),
    "g2": (2, {(0, 1): 6}),
}
INFINITE = ("atilde1", "atilde2", "triangle_337")
FINITE = ("a2", "b2", "i2_5", "g2")


def datum(name, backend="float"):
    rank, bonds = BONDS[name]
    return CoxeterDatum.from_bonds(rank, bonds, backend=backend)


def store(name, backend="float", **kw):
    return RootStore(datum(name, backend), **kw)


@pytest.fixture
def a1():
    return store("atilde1")


@pytest.fixture
def a2t():
    return store("atilde2")


@pytest.fixture
def tri():
    return store("triangle_337")


@pytest.fixture
def data_dir():
    return DATA


def load(name, backend="float"):
    return load_datum_file(DATA / f"{name}.cox", backend=backend)


def vecs(store, ids):
    """Rounded coefficient tuples for a set of root ids."""
    return {tuple(round(c, 9) + 0.0 for c in store.roots[i].coeffs) for i in ids}
