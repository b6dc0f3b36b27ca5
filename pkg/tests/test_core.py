"""Structure constants, catalog categories, and the matrix ring round-trip."""

from __future__ import annotations

import pytest

from lincat.core import (
    GraphType,
    alg_dim,
    alg_mul,
    alg_unit,
    catalog,
    catalog_names,
    category_from_idempotents,
    compose,
    disjoint_union,
    extend_to_duals,
    matrix_ring,
    matrix_ring_layout,
    new_lincat,
    opposite,
    structural_equal,
    tensor_product,
    validate,
    validate_idempotent_family,
)
from lincat.errors import AxiomViolation, BadParams, ShapeMismatch, UnknownName
from lincat.fields import GF, QQ, DualNumbers

from conftest import BASE_CATALOG, composite_categories


def _basis(c, x, y, i):
    v = [c.field.zero] * c.d(x, y)
    v[i] = c.field.one
    return v


@pytest.mark.parametrize("name", BASE_CATALOG)
@pytest.mark.parametrize("field", [QQ, GF(2), GF(7)], ids=["Q", "F2", "F7"])
def test_catalog_categories_satisfy_the_axioms(name, field):
    c = catalog(name, field=field)
    assert validate(c) == []


@pytest.mark.parametrize("name,cat", composite_categories(), ids=lambda v: v if isinstance(v, str) else "")
def test_composites_satisfy_the_axioms(name, cat):
    assert validate(cat) == []


def test_graph_requires_every_ordered_pair():
    with pytest.raises(ShapeMismatch):
        GraphType(("a", "b"), {("a", "a"): 1, ("b", "b"): 1, ("a", "b"): 1})
    with pytest.raises(ShapeMismatch):
        GraphType(("a",), {("a", "a"): -1})


def test_new_lincat_rejects_a_broken_law():
    g = GraphType(("x",), {("x", "x"): 2})
    # the declared unit kills e2, so the left unit law fails
    mult = {("x", "x", "x"): [[[1, 0], [0, 0]], [[0, 0], [1, 1]]]}
    units = {"x": [1, 0]}
    with pytest.raises(AxiomViolation):
        new_lincat(QQ, g, mult, units)
    c = new_lincat(QQ, g, mult, units, validate_laws=False)
    assert validate(c) != []


def test_units_are_neutral_for_composition():
    for name in BASE_CATALOG:
        c = catalog(name)
        for x in c.objects:
            for y in c.objects:
                for i in range(c.d(x, y)):
                    f = _basis(c, x, y, i)
                    assert compose(c, x, x, y, c.units[x], f) == f
                    assert compose(c, x, y, y, f, c.units[y]) == f


def test_composition_is_associative_on_basis_triples():
    c = catalog("matrix_algebra(2)")
    x = c.objects[0]
    n = c.d(x, x)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                f, g, h = (_basis(c, x, x, t) for t in (i, j, k))
                left = compose(c, x, x, x, compose(c, x, x, x, f, g), h)
                right = compose(c, x, x, x, f, compose(c, x, x, x, g, h))
                assert left == right


def test_opposite_is_an_involution():
    for name in BASE_CATALOG:
        c = catalog(name)
        op = opposite(c)
        assert validate(op) == []
        assert structural_equal(opposite(op), c)
        for x in c.objects:
            for y in c.objects:
                assert op.d(x, y) == c.d(y, x)


def test_tensor_product_multiplies_dimensions():
    a = catalog("interval")
    b = catalog("truncated_poly(2)")
    t = tensor_product(a, b)
    assert validate(t) == []
    assert t.total_dim() == sum(
        a.d(x0, y0) * b.d(x1, y1)
        for x0 in a.objects for y0 in a.objects
        for x1 in b.objects for y1 in b.objects
    )


def test_disjoint_union_keeps_parts_apart():
    a = catalog("interval")
    b = catalog("field_cat")
    u = disjoint_union(a, b)
    assert validate(u) == []
    assert len(u.objects) == len(a.objects) + len(b.objects)
    assert u.total_dim() == a.total_dim() + b.total_dim()
    names = list(u.objects)
    for xa in names[: len(a.objects)]:
        for xb in names[len(a.objects):]:
            assert u.d(xa, xb) == 0 and u.d(xb, xa) == 0


def test_extend_to_duals_keeps_the_laws():
    for name in ("interval", "matrix_algebra(2)"):
        c = catalog(name)
        d = extend_to_duals(c)
        assert isinstance(d.field, DualNumbers)
        assert validate(d) == []
        assert d.objects == c.objects


def test_catalog_name_errors():
    with pytest.raises(UnknownName):
        catalog("nope")
    with pytest.raises(UnknownName):
        catalog("chain(2")
    with pytest.raises(BadParams):
        catalog("field_cat(3)")
    with pytest.raises(BadParams):
        catalog("matrix_algebra")
    with pytest.raises(BadParams):
        catalog("tensor(interval)")


def test_catalog_aliases_and_recursion():
    assert structural_equal(catalog("m2"), catalog("matrix_algebra(2)"))
    assert structural_equal(catalog("tpoly3"), catalog("truncated_poly(3)"))
    assert structural_equal(catalog("delta1"), catalog("invertible_interval"))
    assert validate(catalog("tensor(interval,opposite(chain(2)))")) == []
    assert validate(catalog("disjoint_union(field_cat,m2)", field=GF(3))) == []
    assert "matrix_algebra" in catalog_names() and "m2" in catalog_names()


def test_algebra_helpers_on_the_matrix_ring():
    c = catalog("matrix_algebra(2)")
    assert alg_dim(c) == 4
    u = alg_unit(c)
    e = _basis(c, "x", "x", 1)
    assert alg_mul(c, u, e) == e
    assert alg_mul(c, e, u) == e


@pytest.mark.parametrize("name", BASE_CATALOG)
def test_matrix_ring_round_trip(name):
    c = catalog(name)
    a, fam = matrix_ring(c)
    assert validate(a) == []
    assert alg_dim(a) == c.total_dim()
    assert validate_idempotent_family(a, fam.elements) == []
    # one layout entry per flat coordinate of the matrix ring
    layout = matrix_ring_layout(c)
    assert len(layout) == c.total_dim()
    assert all(0 <= i < c.d(x, y) for x, y, i in layout)
    back = category_from_idempotents(a, fam)
    assert validate(back) == []
    # reconstruction renames objects canonically but keeps every constant
    rename = dict(zip(c.objects, back.objects))
    assert len(rename) == len(c.objects)
    for (x, y), n in c.graph.dims.items():
        assert back.d(rename[x], rename[y]) == n
    for (x, y, z), tensor in c.mult.items():
        assert back.mult[(rename[x], rename[y], rename[z])] == tensor
    for x in c.objects:
        assert back.units[rename[x]] == c.units[x]


def test_structural_equality_notices_every_field():
    c = catalog("interval")
    assert structural_equal(c, catalog("interval"))
    assert not structural_equal(c, catalog("interval", field=GF(5)))
    assert not structural_equal(c, catalog("invertible_interval"))
    assert not structural_equal(c, opposite(c))
