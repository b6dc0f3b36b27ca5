"""Structure equation emission, tangent spaces, cocycle inclusion, enumeration."""

from __future__ import annotations

from itertools import product as iproduct

import pytest

from lincat.core import GraphType, catalog, new_lincat, validate
from lincat.errors import BadParams, NotAPoint, SearchTooLarge
from lincat.fields import GF, QQ
from lincat.functors import identity_functor, new_functor
from lincat.moduli import (
    Poly,
    PolySystem,
    check_hz2_inclusion,
    emit_system,
    enumerate_points,
    structure_point,
    tangent_space,
)

from conftest import BASE_CATALOG

CAT1_TEXT = """# associativity
0
# left units
1*m[1,1,1][1,1,1]*u[1][1] + -1
# right units
1*m[1,1,1][1,1,1]*u[1][1] + -1
"""


def test_one_dimensional_category_scheme_text():
    sys = emit_system("cat", 1)
    assert sys.text() == CAT1_TEXT
    assert sys.variables == ("m[1,1,1][1,1,1]", "u[1][1]")
    assert len(sys.equations) == 3
    assert sys.inverted_minors == ()


def test_emission_is_deterministic():
    for args in (("cat", 2), ("ass", 2), ("com", 1)):
        assert emit_system(*args).text() == emit_system(*args).text()


def test_commutator_section_is_empty_in_dimension_one():
    text = emit_system("com", 1).text()
    assert text.endswith("# commutators\n")
    assert text.startswith(CAT1_TEXT.rstrip("\n"))


def test_associativity_only_scheme_has_no_unit_variables():
    sys = emit_system("ass", 2)
    assert all(v.startswith("m[") for v in sys.variables)
    assert [label for label, _ in sys.sections] == ["associativity"]


def test_bimodule_scheme_in_dimension_one():
    fc = catalog("field_cat")
    sys = emit_system("bim", fc, fc, 1)
    assert sys.text() == "# action compatibility\n1*mu[1][1,1,1]*mu[1][1,1,1] + -1*mu[1][1,1,1]\n"


def test_functor_scheme_has_the_identity_as_a_point():
    fc = catalog("field_cat")
    sys = emit_system("fct", fc, fc)
    assert sys.variables == ("f[x,x][1,1]",)
    ts = tangent_space(sys, {"f[x,x][1,1]": 1})
    assert ts.dimension == 0
    iv = catalog("interval")
    sys2 = emit_system("fct", iv, iv)
    point = {}
    for x in iv.objects:
        for y in iv.objects:
            for i in range(iv.d(x, y)):
                for j in range(iv.d(x, y)):
                    point[f"f[{x},{y}][{i + 1},{j + 1}]"] = 1 if i == j else 0
    tangent_space(sys2, point)  # identity satisfies every equation
    with pytest.raises(BadParams):
        emit_system("fct", fc, catalog("interval"))
    with pytest.raises(BadParams):
        emit_system("fct", fc, catalog("field_cat", field=GF(3)))


def test_naturality_scheme_solves_to_matching_components():
    iv = catalog("interval")
    f = identity_functor(iv)
    sys = emit_system("tn", f, f)
    assert sys.variables == ("a[0][1]", "a[1][1]")
    # components must agree along the arrow, one linear relation
    res = enumerate_points(sys, 3)
    assert res.count == 3
    assert all(pt[0] == pt[1] for pt in res.points)
    fc = catalog("field_cat")
    with pytest.raises(BadParams):
        emit_system("tn", f, identity_functor(fc))


def test_category_scheme_tangent_space_at_the_base_point():
    sys = emit_system("cat", 1)
    ts = tangent_space(sys, {"m[1,1,1][1,1,1]": 1, "u[1][1]": 1})
    assert ts.dimension == 1
    (vec,) = ts.basis
    assert vec[0] == -vec[1] and vec[0] != 0


def test_non_points_are_rejected_with_residuals():
    sys = emit_system("cat", 1)
    with pytest.raises(NotAPoint) as info:
        tangent_space(sys, {"m[1,1,1][1,1,1]": 0, "u[1][1]": 0})
    assert info.value.violations


def test_structure_points_satisfy_their_own_scheme():
    for name in BASE_CATALOG:
        c = catalog(name)
        sys = emit_system("cat", c.graph)
        tangent_space(sys, structure_point(c))


INCLUSION_DIMS = {
    "field_cat": (1, 0, 1),
    "truncated_poly(2)": (4, 2, 4),
    "interval": (2, 0, 2),
}


@pytest.mark.parametrize("name", sorted(INCLUSION_DIMS))
def test_cocycle_inclusion_reports(name):
    rep = check_hz2_inclusion(catalog(name))
    assert rep.included and rep.failures == ()
    assert (rep.dim_cocycles, rep.dim_normalized, rep.dim_tangent) == INCLUSION_DIMS[name]


@pytest.mark.parametrize("name", BASE_CATALOG)
def test_normalized_cocycles_never_exceed_the_tangent_space(name):
    rep = check_hz2_inclusion(catalog(name))
    assert rep.included
    assert rep.dim_normalized <= rep.dim_tangent


def test_enumeration_counts_for_the_smallest_scheme():
    sys = emit_system("cat", 1)
    r2 = enumerate_points(sys, 2)
    assert (r2.count, r2.points) == (1, ((1, 1),))
    r3 = enumerate_points(sys, 3)
    assert (r3.count, r3.points) == (2, ((1, 1), (2, 2)))
    # each point really is a category over GF(p)
    for p, res in ((2, r2), (3, r3)):
        g = GraphType(("1",), {("1", "1"): 1})
        for m, u in res.points:
            c = new_lincat(GF(p), g, {("1", "1", "1"): [[[m]]]}, {"1": [u]})
            assert validate(c) == []


def test_enumeration_is_lexicographic_and_matches_brute_force():
    sys = emit_system("ass", 2)
    res = enumerate_points(sys, 2)
    index = {name: t for t, name in enumerate(sys.variables)}
    want = []
    for assignment in iproduct(range(2), repeat=len(sys.variables)):
        ok = True
        for poly in sys.equations:
            acc = 0
            for mono, coef in poly.terms:
                term = coef % 2
                for v in mono:
                    term = term * assignment[index[v]] % 2
                acc = (acc + term) % 2
            if acc:
                ok = False
                break
        if ok:
            want.append(tuple(assignment))
    assert res.points == tuple(want)
    assert res.count == len(want) == 28


def test_enumeration_guards():
    sys = emit_system("cat", 1)
    with pytest.raises(BadParams):
        enumerate_points(sys, 4)
    with pytest.raises(BadParams):
        enumerate_points(sys, 1)
    with pytest.raises(SearchTooLarge):
        enumerate_points(emit_system("cat", 2), 7)


def test_scheme_parameter_guards():
    # dim 0 is a degenerate but well-formed graph: no variables, no laws
    assert emit_system("cat", 0).variables == ()
    with pytest.raises(BadParams):
        emit_system("cat", -1)
    with pytest.raises(BadParams):
        emit_system("nope", 1)
    with pytest.raises(BadParams):
        emit_system("bim", catalog("interval"), catalog("field_cat"), 1)


def test_poly_calculus():
    sys = emit_system("cat", 1)
    (assoc,) = sys.sections[0][1]
    assert assoc.render() == "0"
    left = sys.sections[1][1][0]
    m, u = sys.variables
    assert left.evaluate(QQ, {m: QQ.from_int(1), u: QQ.from_int(1)}) == QQ.zero
    assert left.evaluate(GF(3), {m: 2, u: 2}) == 0
    dm = left.derivative(m)
    assert dm.render() == "1*u[1][1]"
    du = left.derivative(u)
    assert du.render() == "1*m[1,1,1][1,1,1]"
    assert left.derivative("zz").render() == "0"
    assert left.variables() == (m, u)


def test_multi_object_scheme_variables_follow_the_grammar():
    c = catalog("interval")
    sys = emit_system("cat", c.graph)
    assert "m[0,0,1][1,1,1]" in sys.variables
    assert "u[0][1]" in sys.variables and "u[1][1]" in sys.variables
    # zero-dimensional hom spaces contribute no variables
    assert not any("[1,0]" in v and v.startswith("m[1,0") for v in sys.variables)
