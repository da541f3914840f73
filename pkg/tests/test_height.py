import itertools

import pytest

from coxdom.core import matrices_equal, root_reflection_matrix
from coxdom.dominance import dominates
from coxdom.errors import InvalidArgument
from coxdom.height import (
    conjugate_decomposition,
    enumerate_Tn,
    infinity_height,
    standard_height,
    verify_height_identities,
    widened_decomposition,
)
from coxdom.roots import element_from_word, reflection_word

from conftest import store, vecs


def test_standard_height_examples(a1, a2t):
    t = element_from_word(a1.datum, (0, 1, 0))
    assert standard_height(a1, (2, 1)) == 1
    assert reflection_word(a1, (2, 1)).word == t.word
    assert standard_height(a2t, (2, 1, 1)) == 2


def test_infinity_height_examples(a1, a2t):
    rep = infinity_height(a1, (3, 2))
    assert rep.infinity == rep.via_decomposition == 2 and rep.methods_agree
    rep = infinity_height(a2t, (2, 1, 1))
    assert rep.standard == 2 and rep.infinity == 1 and rep.methods_agree
    assert [h for s, h in rep.per_subsystem if s.infinite] == [1]
    assert infinity_height(a2t, (2, 1, 1), method="via-dominance").via_decomposition is None
    with pytest.raises(InvalidArgument):
        infinity_height(a1, (1, 0), method="nope")


@pytest.mark.parametrize("name", ["atilde1", "atilde2", "triangle_337", "universal3"])
def test_heights_against_brute_force(name):
    s = store(name)
    s.ensure_depth(6)
    roots = s.roots_up_to(6)
    for r in roots:
        rep = infinity_height(s, r.coeffs)
        length = len(reflection_word(s, r.coeffs).word)
        assert rep.standard == (length - 1) // 2
        brute = sum(1 for q in roots if q.id != r.id and dominates(s, r.coeffs, q.coeffs).holds)
        assert rep.infinity == brute == rep.via_decomposition
        assert rep.infinity <= rep.standard
        assert sum(h for _, h in rep.per_subsystem) == rep.standard


def test_widening_stays_within_reflection_length(tri):
    tri.ensure_depth(8)
    for r in tri.roots_up_to(8)[::7]:
        dec, tried = widened_decomposition(tri, r.coeffs)
        assert tried == sorted(tried) and tried[-1] <= 2 * r.depth - 1
        assert dec.height_sum() == r.depth - 1


def test_tn_examples(a1, a2t):
    tn = enumerate_Tn(a1, 2)
    assert tn.sizes() == {0: 2, 1: 2, 2: 2}
    assert vecs(a1, tn.sets[1]) == {(2, 1), (1, 2)}
    assert enumerate_Tn(a2t, 0).sizes() == {0: 6}
    fin = store("a2")
    tn = enumerate_Tn(fin, 2)
    assert tn.sizes() == {0: 3, 1: 0, 2: 0}


@pytest.mark.parametrize("name", ["atilde2", "triangle_337"])
def test_tn_is_a_bijection_onto_reflections(name):
    s = store(name)
    tn = enumerate_Tn(s, 2)
    ids = sorted(set().union(*tn.sets.values()))
    mats = [root_reflection_matrix(s.datum, s.roots[i].coeffs) for i in ids]
    for a, b in itertools.combinations(range(len(ids)), 2):
        assert not matrices_equal(s.arithmetic, mats[a], mats[b])
    for n, members in tn.sets.items():
        for i in members:
            assert infinity_height(s, s.roots[i].coeffs, method="via-dominance").infinity == n


def test_conjugate_decomposition_atilde1(a1):
    tn = enumerate_Tn(a1, 2)
    t = a1.find((2, 1))[0]
    z, tp = conjugate_decomposition(a1, t, tn, 1)
    assert vecs(a1, [z]) == {(1, 0)} and vecs(a1, [tp]) == {(0, 1)}


@pytest.mark.parametrize("name", ["atilde1", "atilde2", "triangle_337", "universal3", "a2", "b2"])
def test_verify_height_identities(name):
    rep = verify_height_identities(store(name), max_length=11, n_max=3)
    assert rep["ok"]
    assert all(r["certified"] for r in rep["a"])
    if rep["finite_group"]:
        assert all(r["skipped"] for r in rep["b"])
    else:
        assert all(r["size"] > 0 for r in rep["b"])
