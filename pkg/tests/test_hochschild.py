"""Cochain complex, cohomology tables, deformations, center, derivations."""

from __future__ import annotations

import random
from itertools import product as iproduct

import pytest

from lincat.core import catalog, compose, validate
from lincat.errors import AxiomViolation, NotACocycle, ShapeMismatch
from lincat.fields import GF, QQ, DualNumbers
from lincat.functors import compose_functors, validate_functor, validate_nat_trans
from lincat.hochschild import (
    Cochain,
    NonTrivial,
    Trivial,
    apply_differential,
    center,
    cochain_blocks,
    cochain_dim,
    cochain_from_map,
    cohomology,
    deform,
    deformed_law_violations,
    derivations,
    differential_matrix,
    eval_cochain,
    hh_dims,
    inner_derivations,
    nat_iso_from_0cochain,
    normalized_two_cocycles,
    random_cochain,
    trivialize,
    zero_cochain,
)

from conftest import BASE_CATALOG

HH_TABLE = {
    "field_cat": [1, 0, 0],
    "truncated_poly(2)": [2, 1, 1],
    "truncated_poly(3)": [3, 2, 2],
    "matrix_algebra(2)": [1, 0, 0],
    "interval": [1, 0, 0],
    "invertible_interval": [1, 0, 0],
    "indiscrete(2)": [1, 0, 0],
    "chain(2)": [1, 0, 0],
}


@pytest.mark.parametrize("name", BASE_CATALOG)
def test_differential_squares_to_zero(name):
    c = catalog(name)
    for n in range(3):
        prod = differential_matrix(c, n + 1).matmul(differential_matrix(c, n))
        assert prod.is_zero()


@pytest.mark.parametrize("name", BASE_CATALOG)
def test_cohomology_dimension_table(name):
    assert hh_dims(catalog(name), 2) == HH_TABLE[name]


def test_cohomology_report_is_consistent():
    c = catalog("truncated_poly(2)")
    for n in range(3):
        rep = cohomology(c, n)
        assert rep.dim_hh == rep.dim_cocycles - rep.dim_coboundaries
        assert rep.dim_cochains == cochain_dim(c, n)
        d_n = differential_matrix(c, n)
        for v in rep.cocycle_basis:
            assert all(c.field.is_zero(x) for x in d_n.apply(v))
        for v in rep.coboundary_basis:
            assert all(c.field.is_zero(x) for x in d_n.apply(v))


def test_every_f2_interval_two_cochain_matches_the_law_check():
    # exhaustive: a 2-cochain is closed exactly when the deformed law validates
    c = catalog("interval", field=GF(2))
    dim = cochain_dim(c, 2)
    assert dim == 4
    d2 = differential_matrix(c, 2)
    agreements = 0
    for bits in iproduct((0, 1), repeat=dim):
        mu = Cochain(c, 2, tuple(bits))
        closed = all(v % 2 == 0 for v in d2.apply(list(mu.coords)))
        lawful = deformed_law_violations(c, mu) == []
        assert closed == lawful
        agreements += 1
    assert agreements == 16


def test_eval_cochain_reproduces_entries():
    c = catalog("truncated_poly(2)")
    mu = cochain_from_map(c, 2, {(("x", "x", "x"), (1, 1), 0): 1})
    e2 = [QQ.zero, QQ.one]
    out = eval_cochain(mu, ("x", "x", "x"), (e2, e2))
    assert out == [QQ.one, QQ.zero]
    e1 = [QQ.one, QQ.zero]
    assert eval_cochain(mu, ("x", "x", "x"), (e1, e2)) == [QQ.zero, QQ.zero]
    z = zero_cochain(c, 2)
    assert z.is_zero()
    assert eval_cochain(z, ("x", "x", "x"), (e2, e2)) == [QQ.zero, QQ.zero]
    with pytest.raises(ShapeMismatch):
        eval_cochain(mu, ("x", "x"), (e2, e2))
    with pytest.raises(ShapeMismatch):
        cochain_from_map(c, 2, {(("x", "x", "x"), (1, 2), 0): 1})
    with pytest.raises(ShapeMismatch):
        cochain_from_map(c, 2, {(("x", "y", "x"), (0, 0), 0): 1})


def test_deform_accepts_cocycles_and_rejects_the_rest():
    c = catalog("truncated_poly(2)")
    mu = cochain_from_map(c, 2, {(("x", "x", "x"), (1, 1), 0): 1})
    dc = deform(c, mu)
    assert validate(dc.cat) == []
    assert isinstance(dc.cat.field, DualNumbers)
    d2 = differential_matrix(c, 2)
    # pick a basis cochain with nonzero differential
    j = next(
        j for j in range(d2.cols)
        if any(not QQ.is_zero(d2.at(i, j)) for i in range(d2.rows))
    )
    coords = [QQ.zero] * d2.cols
    coords[j] = QQ.one
    with pytest.raises(NotACocycle):
        deform(c, Cochain(c, 2, tuple(coords)))


def test_trivialize_round_trip_and_inverse():
    c = catalog("interval")
    rng = random.Random(4)
    f = random_cochain(c, 1, rng)
    mu = apply_differential(c, f)
    res = trivialize(c, mu)
    assert isinstance(res, Trivial)
    assert list(apply_differential(c, res.f).coords) == list(mu.coords)
    assert validate_functor(res.iso) == []
    assert validate_functor(res.inverse) == []
    for comp in (compose_functors(res.iso, res.inverse),
                 compose_functors(res.inverse, res.iso)):
        ring = comp.dst.field
        for m in comp.matrices.values():
            ident = [[ring.one if i == j else ring.zero for j in range(m.cols)]
                     for i in range(m.rows)]
            assert m.to_lists() == ident


def test_trivialize_refuses_an_essential_deformation():
    c = catalog("truncated_poly(2)")
    mu = cochain_from_map(c, 2, {(("x", "x", "x"), (1, 1), 0): 1})
    assert isinstance(trivialize(c, mu), NonTrivial)


CENTER_DIMS = {
    "field_cat": 1,
    "truncated_poly(2)": 2,
    "truncated_poly(3)": 3,
    "matrix_algebra(2)": 1,
    "interval": 1,
    "invertible_interval": 1,
    "indiscrete(2)": 1,
    "chain(2)": 1,
}


@pytest.mark.parametrize("name", BASE_CATALOG)
def test_center_dimensions_and_closure(name):
    c = catalog(name)
    rep = center(c)
    assert rep.dimension == CENTER_DIMS[name]
    assert rep.dimension == hh_dims(c, 0)[0]
    # the product table re-expands inside the center basis
    k = c.field
    blocks = {b.objs[0]: b.offset for b in cochain_blocks(c, 0)}
    for i, u in enumerate(rep.basis):
        for j, v in enumerate(rep.basis):
            coords = rep.product_table[i][j]
            for x in c.objects:
                dx = c.d(x, x)
                off = blocks[x]
                prod = compose(c, x, x, x, u[off:off + dx], v[off:off + dx])
                mixed = [k.zero] * dx
                for t, w in enumerate(rep.basis):
                    for s in range(dx):
                        mixed[s] = k.add(mixed[s], k.mul(coords[t], w[off + s]))
                assert prod == mixed


DERIVATION_DIMS = {
    "field_cat": (0, 0),
    "truncated_poly(2)": (1, 0),
    "truncated_poly(3)": (2, 0),
    "matrix_algebra(2)": (3, 3),
    "interval": (1, 1),
    "invertible_interval": (1, 1),
    "indiscrete(2)": (1, 1),
    "chain(2)": (2, 2),
}


@pytest.mark.parametrize("name", BASE_CATALOG)
def test_derivation_dimensions(name):
    c = catalog(name)
    der = derivations(c)
    inner = inner_derivations(c)
    assert (len(der), len(inner)) == DERIVATION_DIMS[name]
    assert len(der) - len(inner) == hh_dims(c, 1)[1]


def test_zero_cochain_gives_the_identity_transformation():
    c = catalog("truncated_poly(2)")
    alpha, target = nat_iso_from_0cochain(c, zero_cochain(c, 0))
    assert validate_nat_trans(alpha) == []
    assert validate_functor(target) == []
    ring = target.dst.field
    for m in target.matrices.values():
        ident = [[ring.one if i == j else ring.zero for j in range(m.cols)]
                 for i in range(m.rows)]
        assert m.to_lists() == ident


def test_nontrivial_0cochain_transformation():
    c = catalog("matrix_algebra(2)")
    g = cochain_from_map(c, 0, {(("x",), (), 1): 1})
    alpha, target = nat_iso_from_0cochain(c, g)
    assert validate_nat_trans(alpha) == []
    assert validate_functor(target) == []


NORMALIZED_DIMS = {
    "field_cat": 0,
    "truncated_poly(2)": 2,
    "truncated_poly(3)": 6,
    "matrix_algebra(2)": 9,
    "interval": 0,
    "invertible_interval": 1,
    "indiscrete(2)": 1,
    "chain(2)": 1,
}


@pytest.mark.parametrize("name", BASE_CATALOG)
def test_normalized_two_cocycles_are_closed_and_unit_free(name):
    c = catalog(name)
    vecs = normalized_two_cocycles(c)
    assert len(vecs) == NORMALIZED_DIMS[name]
    d2 = differential_matrix(c, 2)
    k = c.field
    for v in vecs:
        assert all(k.is_zero(x) for x in d2.apply(v))
        mu = Cochain(c, 2, tuple(v))
        for x in c.objects:
            for y in c.objects:
                if c.d(x, y) == 0:
                    continue
                for i in range(c.d(x, y)):
                    f = [k.zero] * c.d(x, y)
                    f[i] = k.one
                    left = eval_cochain(mu, (x, x, y), (list(c.units[x]), f))
                    right = eval_cochain(mu, (x, y, y), (f, list(c.units[y])))
                    assert all(k.is_zero(u) for u in left)
                    assert all(k.is_zero(u) for u in right)


def test_random_cochain_is_seed_deterministic():
    c = catalog("chain(2)")
    a = random_cochain(c, 2, random.Random(99))
    b = random_cochain(c, 2, random.Random(99))
    other = random_cochain(c, 2, random.Random(100))
    assert a.coords == b.coords
    assert a.degree == 2 and len(a.coords) == cochain_dim(c, 2)
    assert a.coords != other.coords
