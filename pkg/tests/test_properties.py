"""Randomised checks of the order axioms and group-action compatibility."""

from hypothesis import given, settings, strategies as st

from coxdom.core import bilinear, negate
from coxdom.dominance import dominated_set, dominates
from coxdom.roots import act, element_from_word, reduce_word, word_matrix

from conftest import store

STORES = {name: store(name) for name in ("atilde2", "triangle_337", "universal3")}
for _s in STORES.values():
    _s.ensure_depth(6)

names = st.sampled_from(sorted(STORES))


def _root(s, i, sign):
    roots = s.roots_up_to(5)
    v = roots[i % len(roots)].coeffs
    return v if sign else negate(v)


roots = st.tuples(st.integers(0, 10**6), st.booleans())


@settings(max_examples=150, deadline=None)
@given(names, roots, roots, roots)
def test_partial_order(name, a, b, c):
    s = STORES[name]
    x, y, z = _root(s, *a), _root(s, *b), _root(s, *c)
    assert dominates(s, x, x).holds
    xy, yx = dominates(s, x, y).holds, dominates(s, y, x).holds
    if xy and yx:
        assert s.arithmetic.vectors_equal(x, y)
    if xy and dominates(s, y, z).holds:
        assert dominates(s, x, z).holds


@settings(max_examples=150, deadline=None)
@given(names, roots, roots)
def test_negation_reverses_the_order(name, a, b):
    s = STORES[name]
    x, y = _root(s, *a), _root(s, *b)
    assert dominates(s, x, y).holds == dominates(s, negate(y), negate(x)).holds
    if dominates(s, x, y).holds and not s.arithmetic.vectors_equal(x, y):
        assert bilinear(s.datum, x, y) >= 1 - 1e-9


@settings(max_examples=100, deadline=None)
@given(names, roots, st.lists(st.integers(0, 2), max_size=4))
def test_dominance_is_w_equivariant(name, a, word):
    # x dom y iff wx dom wy; both sides evaluated through the store
    s = STORES[name]
    x = _root(s, *a)
    w = element_from_word(s.datum, tuple(word))
    for r in s.roots_up_to(3):
        y = r.coeffs
        assert dominates(s, x, y).holds == dominates(s, act(w, x), act(w, y)).holds


@settings(max_examples=100, deadline=None)
@given(names, st.integers(0, 10**6), st.integers(0, 2))
def test_dominated_sets_grow_along_ascents(name, i, a):
    s = STORES[name]
    x = _root(s, i, True)
    up = act(element_from_word(s.datum, (a,)), x)
    rx, _ = s.locate(x)
    ru, sign = s.locate(up)
    if sign > 0 and ru.depth == rx.depth + 1:
        assert len(dominated_set(s, up)) >= len(dominated_set(s, x))


@settings(max_examples=150, deadline=None)
@given(names, st.lists(st.integers(0, 2), max_size=10))
def test_reduce_word_preserves_the_element(name, word):
    s = STORES[name]
    word = tuple(word)
    r = reduce_word(s.datum, word)
    assert len(r.word) <= len(word) and len(r.word) % 2 == len(word) % 2
    assert all(
        abs(p - q) < 1e-9
        for row_a, row_b in zip(word_matrix(s.datum, r.word), word_matrix(s.datum, word))
        for p, q in zip(row_a, row_b)
    )
