"""Bimodules, evaluation pairings, Morita certification, and the Ext oracle."""

from __future__ import annotations

import pytest

from lincat.core import catalog, matrix_ring
from lincat.errors import AlgebraMismatch, AxiomViolation
from lincat.fields import GF, QQ
from lincat.bimodules import (
    Invertible,
    NotInvertible,
    bimodule_map_space,
    bimodule_of_functor,
    dual_and_pairings,
    enveloping_module,
    find_bimodule_isomorphism,
    hochschild_dims_by_ext,
    is_invertible,
    module_ext_complex,
    morita_check,
    new_bimodule,
    regular_bimodule,
    tensor_over_middle,
    validate_bimodule,
    validate_bimodule_map,
)
from lincat.functors import identity_functor, new_functor
from lincat.hochschild import hh_dims


def _algebra(name, field=QQ):
    a, _ = matrix_ring(catalog(name, field=field))
    return a


@pytest.mark.parametrize("name", ["field_cat", "truncated_poly(2)", "interval", "matrix_algebra(2)"])
def test_regular_bimodule_validates(name):
    a = _algebra(name)
    reg = regular_bimodule(a)
    assert validate_bimodule(reg) == []
    assert reg.dim == a.total_dim()
    assert reg.field == a.field


def test_new_bimodule_rejects_broken_actions():
    a = _algebra("truncated_poly(2)")
    reg = regular_bimodule(a)
    left = [[list(v) for v in row] for row in reg.left_action]
    left[1][0] = [QQ.one, QQ.one]
    with pytest.raises(AxiomViolation):
        new_bimodule(a, a, left, reg.right_action)
    with pytest.raises(AlgebraMismatch):
        new_bimodule(a, _algebra("truncated_poly(2)", GF(3)), reg.left_action, reg.right_action)


def test_identity_functor_gives_the_regular_bimodule():
    a = _algebra("interval")
    v = bimodule_of_functor(identity_functor(a))
    reg = regular_bimodule(a)
    assert v.dim == reg.dim
    iso = find_bimodule_isomorphism(v, reg)
    assert iso is not None
    assert validate_bimodule_map(iso) == []


def test_tensor_with_the_regular_bimodule_changes_nothing():
    a = _algebra("truncated_poly(2)")
    reg = regular_bimodule(a)
    prod = tensor_over_middle(reg, reg)
    assert validate_bimodule(prod) == []
    assert prod.dim == reg.dim
    iso = find_bimodule_isomorphism(prod, reg)
    assert iso is not None
    assert validate_bimodule_map(iso) == []


def test_map_space_between_regulars_matches_the_center():
    a = _algebra("truncated_poly(2)")
    reg = regular_bimodule(a)
    space = bimodule_map_space(reg, reg)
    assert len(space) == hh_dims(catalog("truncated_poly(2)"), 0)[0]


def test_regular_bimodule_is_invertible():
    a = _algebra("interval")
    rep = is_invertible(regular_bimodule(a))
    assert isinstance(rep, Invertible)
    assert rep.e_b.bijective and rep.e_c.bijective
    assert validate_bimodule(rep.w) == []


def test_morita_check_certifies_the_indiscrete_inclusion():
    fc = catalog("field_cat")
    ind = catalog("indiscrete(2)")
    inc = new_functor(fc, ind, {"x": "0"}, {("x", "x"): [[1]]})
    rep = morita_check(inc)
    assert isinstance(rep, Invertible)


def test_morita_check_rejects_the_interval_inclusion():
    fc = catalog("field_cat")
    iv = catalog("interval")
    inc = new_functor(fc, iv, {"x": "0"}, {("x", "x"): [[1]]})
    rep = morita_check(inc)
    assert isinstance(rep, NotInvertible)
    assert "pairing" in rep.reason


def test_dual_pairing_report_shapes():
    a = _algebra("field_cat")
    rep = dual_and_pairings(regular_bimodule(a))
    assert rep.rho_bijective
    assert rep.e_b.bijective
    assert rep.e_c is not None and rep.e_c.bijective


@pytest.mark.parametrize(
    "name", ["field_cat", "matrix_algebra(2)", "interval", "truncated_poly(2)"]
)
def test_ext_oracle_agrees_with_the_complex(name):
    c = catalog(name)
    direct = hh_dims(c, 2)
    by_ext, method = hochschild_dims_by_ext(c, 2)
    assert by_ext == direct
    assert method in ("direct", "certified-modular", "exact")


def test_enveloping_module_ext_reports():
    env, mod = enveloping_module(catalog("truncated_poly(2)"))
    rep = module_ext_complex(env, mod, 1)
    assert rep.degree == 1
    assert rep.dim_hh == rep.dim_cocycles - rep.dim_coboundaries
    assert rep.dim_hh == hh_dims(catalog("truncated_poly(2)"), 1)[1]


def test_ext_oracle_over_a_finite_field():
    c = catalog("interval", field=GF(5))
    assert hochschild_dims_by_ext(c, 2)[0] == hh_dims(c, 2)
