"""Functors, natural transformations, and isomorphism search."""

from __future__ import annotations

import pytest

from lincat.core import catalog, opposite
from lincat.errors import AxiomViolation, NotComposable, ShapeMismatch, UnknownName
from lincat.fields import GF, QQ
from lincat.functors import (
    CertifiedNo,
    NoneFound,
    Witness,
    compose_functors,
    find_isomorphism,
    identity_functor,
    identity_nat,
    is_equivalence,
    is_nat_iso,
    new_functor,
    new_nat_trans,
    validate_functor,
    validate_nat_trans,
    vertical_compose,
)

from conftest import BASE_CATALOG


@pytest.mark.parametrize("name", BASE_CATALOG)
def test_identity_functor_validates_and_is_an_equivalence(name):
    c = catalog(name)
    f = identity_functor(c)
    assert validate_functor(f) == []
    rep = is_equivalence(f)
    assert rep.fully_faithful
    assert rep.equivalence == "yes"


def test_new_functor_checks_its_equations():
    fc = catalog("field_cat")
    tp = catalog("truncated_poly(2)")
    # x -> 1 is the only unital algebra map from the base field
    f = new_functor(fc, tp, {"x": "x"}, {("x", "x"): [[1], [0]]})
    assert validate_functor(f) == []
    with pytest.raises(AxiomViolation):
        new_functor(fc, tp, {"x": "x"}, {("x", "x"): [[0], [1]]})
    with pytest.raises(ShapeMismatch):
        new_functor(fc, tp, {"x": "x"}, {("x", "x"): [[1]]})
    with pytest.raises(UnknownName):
        new_functor(fc, tp, {"x": "y"}, {("x", "x"): [[1], [0]]})
    with pytest.raises(ShapeMismatch):
        new_functor(fc, catalog("truncated_poly(2)", field=GF(3)), {"x": "x"}, None)


def test_compose_functors_applies_left_argument_first():
    fc = catalog("field_cat")
    ind = catalog("indiscrete(2)")
    inc = new_functor(fc, ind, {"x": "0"}, {("x", "x"): [[1]]})
    comp = compose_functors(identity_functor(fc), inc)
    assert comp.obj("x") == "0"
    assert comp.matrices[("x", "x")].to_lists() == inc.matrices[("x", "x")].to_lists()
    with pytest.raises(NotComposable):
        compose_functors(inc, identity_functor(fc))


def test_the_indiscrete_inclusion_is_an_equivalence():
    fc = catalog("field_cat")
    ind = catalog("indiscrete(2)")
    inc = new_functor(fc, ind, {"x": "0"}, {("x", "x"): [[1]]})
    rep = is_equivalence(inc)
    assert rep.fully_faithful
    assert rep.essentially_surjective == "yes"
    assert rep.equivalence == "yes"


def test_the_interval_inclusion_is_not_an_equivalence():
    fc = catalog("field_cat")
    iv = catalog("interval")
    inc = new_functor(fc, iv, {"x": "0"}, {("x", "x"): [[1]]})
    rep = is_equivalence(inc)
    assert rep.equivalence != "yes"


def test_find_isomorphism_outcomes():
    ind = catalog("indiscrete(2)")
    w = find_isomorphism(ind, "0", "1")
    assert isinstance(w, Witness)
    iv = catalog("interval")
    no = find_isomorphism(iv, "0", "1")
    assert isinstance(no, CertifiedNo)
    same = find_isomorphism(iv, "0", "0")
    assert isinstance(same, Witness)
    with pytest.raises(UnknownName):
        find_isomorphism(iv, "0", "9")


def test_witnesses_compose_to_units():
    from lincat.core import compose

    for field in (QQ, GF(5)):
        ind = catalog("indiscrete(2)", field=field)
        w = find_isomorphism(ind, "0", "1")
        assert isinstance(w, Witness)
        fwd, bwd = list(w.fwd), list(w.bwd)
        assert compose(ind, "0", "1", "0", fwd, bwd) == list(ind.units["0"])
        assert compose(ind, "1", "0", "1", bwd, fwd) == list(ind.units["1"])


def test_nat_trans_validation_and_vertical_composition():
    tp = catalog("truncated_poly(2)")
    f = identity_functor(tp)
    one = identity_nat(f)
    assert validate_nat_trans(one) == []
    ok, inv = is_nat_iso(one)
    assert ok and inv is not None
    twice = vertical_compose(one, one)
    assert twice.components == one.components
    # the algebra is commutative, so the nilpotent is natural but not invertible
    nil = new_nat_trans(f, f, {"x": [0, 1]})
    ok, inv = is_nat_iso(nil)
    assert not ok and inv is None
    scaled = new_nat_trans(f, f, {"x": [2, 0]})
    ok, inv = is_nat_iso(scaled)
    assert ok
    assert vertical_compose(scaled, inv).components == one.components
    # a non-central matrix does not commute with every hom
    m2 = catalog("matrix_algebra(2)")
    with pytest.raises(AxiomViolation):
        new_nat_trans(identity_functor(m2), identity_functor(m2), {"x": [0, 1, 0, 0]})


def test_nat_iso_fails_on_non_invertible_components():
    iv = catalog("interval")
    f = identity_functor(iv)
    zero = new_nat_trans(f, f, {"0": [0], "1": [0]})
    ok, inv = is_nat_iso(zero)
    assert not ok and inv is None


def test_functor_between_opposites():
    c = catalog("chain(2)")
    op = opposite(c)
    f = identity_functor(op)
    assert validate_functor(f) == []
    assert is_equivalence(f).equivalence == "yes"
