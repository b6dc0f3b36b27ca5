"""Completion fragments: realized homs, embeddings, projector splitting."""

from __future__ import annotations

import pytest

from lincat.core import catalog, compose, validate
from lincat.bimodules import Invertible, morita_check
from lincat.errors import NotIdempotent, UnknownName
from lincat.fields import QQ
from lincat.functors import validate_functor
from lincat.karoubi import (
    NotPresent,
    Split,
    biproduct_object,
    build_fragment,
    embed,
    is_karoubian_within,
    new_karoubi_object,
    split_projector,
    unit_object,
    zero_object,
)


def _first_summand_projector(c, x):
    """On x (+) x, project onto the first summand."""
    d = c.d(x, x)
    u = list(c.units[x])
    z = [c.field.zero] * d
    return [[u, list(z)], [list(z), list(z)]]


def _units_fragment(c, extra=()):
    objs = [unit_object(c, x) for x in c.objects] + list(extra)
    return build_fragment(c, objs)


def test_karoubi_objects_must_be_idempotent():
    c = catalog("matrix_algebra(2)")
    assert unit_object(c, "x").is_idempotent()
    assert zero_object(c).is_idempotent()
    with pytest.raises(NotIdempotent):
        build_fragment(c, [new_karoubi_object(c, ("x",), [[[0, 1, 0, 0]]])])


def test_fragment_realizes_a_valid_category():
    c = catalog("interval")
    units = [unit_object(c, x) for x in c.objects]
    bi = biproduct_object(units[0], units[1])
    frag = build_fragment(c, units + [zero_object(c), bi])
    assert validate(frag.realized) == []
    assert len(frag.names) == 4
    z = frag.index_of(zero_object(c))
    assert frag.realized.d(frag.names[z], frag.names[z]) == 0
    b = frag.index_of(bi)
    assert frag.realized.d(frag.names[b], frag.names[b]) == c.total_dim()


def test_embedding_validates_and_is_morita_invertible():
    for name in ("interval", "truncated_poly(2)"):
        c = catalog(name)
        frag = _units_fragment(c, extra=[zero_object(c)])
        f = embed(c, frag)
        assert validate_functor(f) == []
        assert isinstance(morita_check(f), Invertible)


def test_split_projector_produces_exact_witnesses():
    c = catalog("matrix_algebra(2)")
    x = "x"
    units = [unit_object(c, x)]
    bi = biproduct_object(units[0], units[0])
    split_obj = new_karoubi_object(c, (x, x), _first_summand_projector(c, x))
    frag = build_fragment(c, units + [bi, split_obj])
    bi_idx = frag.index_of(bi)
    p = frag.to_coords(bi_idx, bi_idx, split_obj.projector)
    res = split_projector(frag, bi_idx, p)
    assert isinstance(res, Split)
    r = frag.realized
    im = frag.names[res.image_index]
    ker = frag.names[res.kernel_index]
    ob = frag.names[bi_idx]
    assert compose(r, im, ob, im, res.r, res.s) == list(r.units[im])
    assert compose(r, ob, im, ob, res.s, res.r) == list(p)
    comp = [r.field.sub(u, v) for u, v in zip(r.units[ob], p)]
    assert compose(r, ker, ob, ker, res.r_ker, res.s_ker) == list(r.units[ker])
    assert compose(r, ob, ker, ob, res.s_ker, res.r_ker) == comp


def test_split_projector_reports_missing_images():
    c = catalog("matrix_algebra(2)")
    frag = build_fragment(c, [unit_object(c, "x")])
    # diag(1, 0) splits off a rank-one module that no fragment object realizes
    res = split_projector(frag, 0, [1, 0, 0, 0])
    assert isinstance(res, NotPresent)
    with pytest.raises(UnknownName):
        split_projector(frag, 5, [1, 0, 0, 0])


def test_unit_projectors_split_trivially():
    c = catalog("interval")
    frag = _units_fragment(c, extra=[zero_object(c)])
    for i, x in enumerate(c.objects):
        res = split_projector(frag, i, list(frag.realized.units[frag.names[i]]))
        assert isinstance(res, Split)
        assert res.image_index == i


def test_karoubian_report_flags_missing_pieces():
    c = catalog("matrix_algebra(2)")
    units_only = build_fragment(c, [unit_object(c, "x")])
    rep = is_karoubian_within(units_only, seed=0, samples=6)
    assert not rep.zero_object_present
    assert not rep.karoubian
    assert rep.checked_projectors > 0
    # diag-type projectors stay unsplit inside this fragment, honestly reported
    assert rep.unsplit or rep.missing_biproducts


def test_karoubian_report_accepts_a_completed_field_fragment():
    c = catalog("field_cat")
    units = [unit_object(c, "x")]
    bi = biproduct_object(units[0], units[0])
    frag = build_fragment(c, units + [zero_object(c), bi, biproduct_object(bi, units[0])])
    rep = is_karoubian_within(frag, seed=1, samples=4)
    assert rep.zero_object_present
    assert rep.checked_projectors > 0
