import math
from fractions import Fraction

import pytest

from coxdom.core import (
    INF,
    CoxeterDatum,
    bilinear,
    chain_coefficient,
    chain_coefficients,
    identity_matrix,
    load_datum,
    mat_mul,
    mat_vec,
    matrices_equal,
    reflection_matrix,
    validate_datum,
)
from coxdom.errors import C1Violation, InvalidBond, ParseError, UnsupportedBackend
from coxdom.scalar import FloatArithmetic, Ordering, RationalArithmetic, compare

from conftest import BONDS, datum, load


def test_load_infinite_bond_default():
    d = load_datum("rank 2\nbond 1 2 inf")
    assert d.gram == ((1.0, -1.0), (-1.0, 1.0))


def test_load_finite_bond():
    d = load_datum("rank 2\nbond 1 2 3")
    assert d.gram[0][1] == pytest.approx(-0.5)


def test_infinite_bond_value_above_minus_one_rejected():
    with pytest.raises(InvalidBond):
        load_datum("rank 2\nbond 1 2 inf -0.5")


def test_explicit_infinite_value_and_comments():
    d = load_datum("# comment\nrank 2  # two generators\nbond 2 1 inf -3/2\n", backend="rational")
    assert d.gram[0][1] == Fraction(-3, 2)


@pytest.mark.parametrize("text", ["", "bond 1 2 3", "rank x", "rank 2\nbond 1 3 3", "rank 2\nbond 1 2 x",
                                  "rank 2\nbond 1 2 3 -1", "rank 2\nbond 1 2 3\nbond 1 2 4"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        load_datum(text)


def test_label_below_two():
    with pytest.raises(InvalidBond):
        load_datum("rank 2\nbond 1 2 1")


def test_parse_error_carries_line():
    with pytest.raises(ParseError) as info:
        load_datum("rank 2\n\nbond 1 2 q")
    assert info.value.line == 3


def test_unspecified_bonds_commute():
    d = load_datum("rank 3\nbond 1 2 3")
    assert d.gram[0][2] == 0 and d.label(0, 2) == 2


def test_validate_accepts_test_data():
    for name in BONDS:
        assert validate_datum(datum(name))["valid"]


def test_validate_rejects_bad_diagonal():
    d = CoxeterDatum.from_gram([[2, -1], [-1, 1]])
    with pytest.raises(C1Violation):
        validate_datum(d)


def test_validate_atilde2_entries():
    d = load("atilde2", backend="rational")
    assert validate_datum(d)["valid"]
    assert d.gram[0][1] == Fraction(-1, 2)


def test_finite_form_flag():
    assert datum("a2").is_finite_form
    assert not datum("atilde1").is_finite_form
    assert not datum("triangle_337").is_finite_form


def test_bilinear_examples():
    assert bilinear(datum("atilde1"), (2, 1), (1, 0)) == 1
    assert bilinear(datum("atilde2", "rational"), (2, 1, 1), (0, 1, 1)) == -1
    d = datum("triangle_337")
    for i in range(3):
        e = tuple(1.0 if j == i else 0.0 for j in range(3))
        assert bilinear(d, e, e) == 1


def test_reflection_matrix_examples():
    assert reflection_matrix(datum("atilde1"), 0) == ((-1.0, 2.0), (0.0, 1.0))
    m = reflection_matrix(datum("a2", "rational"), 0)
    assert m == ((-1, 1), (0, 1))


@pytest.mark.parametrize("name", list(BONDS))
def test_reflections_are_involutions_and_isometries(name):
    d = datum(name)
    vs = [(1.0, 2.0, 0.5)[: d.rank], (0.3, -1.0, 2.0)[: d.rank]]
    for a in range(d.rank):
        m = reflection_matrix(d, a)
        assert matrices_equal(d.arithmetic, mat_mul(m, m), identity_matrix(d))
        u, v = (mat_vec(m, x) for x in vs)
        assert bilinear(d, u, v) == pytest.approx(bilinear(d, *vs))


def test_finite_bond_entries():
    for m in range(2, 12):
        d = CoxeterDatum.from_bonds(2, {(0, 1): m})
        assert abs(d.gram[0][1] + math.cos(math.pi / m)) < 1e-12


def test_rational_backend_refuses_irrational_labels():
    with pytest.raises(UnsupportedBackend):
        CoxeterDatum.from_bonds(2, {(0, 1): 5}, backend="rational")


def test_chain_coefficient_examples():
    assert chain_coefficient(0.0, 5) == 5
    assert chain_coefficient(0.9, 1) == pytest.approx(1)
    assert chain_coefficient(math.acosh(1.5), 2) == pytest.approx(3)


@pytest.mark.parametrize("ch", [1.0, 1.5, 2.0, math.cosh(0.37)])
def test_chain_recurrence_matches_closed_form(ch):
    cs = chain_coefficients(ch, 21)
    theta = math.acosh(ch)
    assert cs[:2] == [0, 1]
    for i in range(2, 21):
        assert cs[i] == pytest.approx(2 * ch * cs[i - 1] - cs[i - 2])
        assert cs[i] == pytest.approx(chain_coefficient(theta, i), rel=1e-9)


def test_chain_coefficients_exact():
    assert chain_coefficients(Fraction(3, 2), 5, RationalArithmetic()) == [0, 1, 3, 8, 21]


def test_compare_examples():
    assert compare(1.0, 1.0 + 1e-12) == Ordering.EQUAL
    assert compare(-1, -0.5) == Ordering.LESS
    t = 0.7
    assert compare(math.cosh(2 * t) - (2 * math.cosh(t) ** 2 - 1), 0) == Ordering.EQUAL
    assert FloatArithmetic(1e-3).compare(1.0, 1.0005) == Ordering.EQUAL


def test_rational_export():
    r = RationalArithmetic()
    assert r.export(Fraction(4, 2)) == 2
    assert r.export(Fraction(-3, 2)) == "-3/2"
    assert r.scalar(0.5) == Fraction(1, 2)


def test_fingerprint_and_text_round_trip():
    d = load("triangle_337")
    again = load_datum(d.to_text())
    assert again.fingerprint() == d.fingerprint()
    assert d.fingerprint() != load("atilde2").fingerprint()
    assert d.label(1, 2) == 7 and datum("atilde1").label(0, 1) == INF
