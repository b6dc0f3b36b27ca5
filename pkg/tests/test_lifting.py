"""Square-zero idempotent lifting for matrices, algebras, and families."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from lincat.core import (
    alg_dim,
    alg_mul,
    alg_unit,
    catalog,
    extend_to_duals,
    matrix_ring,
    validate_idempotent_family,
)
from lincat.errors import InvalidFamily, NotIdempotentModEps, ShapeMismatch
from lincat.fields import GF, QQ, DualNumbers
from lincat.lifting import (
    DualMatrix,
    dual_identity,
    lift_algebra_idempotent,
    lift_idempotent,
    lift_orthogonal_family,
    lift_projective_presentation,
    new_dual_matrix,
    reduction_algebra,
)

DUAL_Q = DualNumbers(QQ)


def _random_idempotent_reduction(rng, n):
    """diag(1..1, 0..0) conjugated by unipotent integer moves, kept integral."""
    r = rng.randint(0, n)
    base = [[Fraction(1 if i == j and i < r else 0) for j in range(n)] for i in range(n)]
    for _ in range(4):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        lam = Fraction(rng.randint(-2, 2))
        for t in range(n):
            base[i][t] += lam * base[j][t]
        for t in range(n):
            base[t][j] -= lam * base[t][i]
    return base


def test_dual_matrix_arithmetic():
    a = new_dual_matrix(DUAL_Q, [[(1, 2), (0, 1)], [(0, 0), (1, 0)]])
    ident = dual_identity(DUAL_Q, 2)
    assert a.matmul(ident).equals(a)
    assert ident.matmul(a).equals(a)
    assert a.sub(a).is_zero()
    assert a.add(a).equals(a.scale_int(2))
    assert a.reduction() == [[QQ.one, QQ.zero], [QQ.zero, QQ.one]]
    assert a.eps_component() == [[QQ.from_int(2), QQ.one], [QQ.zero, QQ.zero]]


def test_already_idempotent_matrices_are_returned_unchanged():
    p = new_dual_matrix(DUAL_Q, [[(1, 0), (0, 1)], [(0, 0), (0, 0)]])
    q = lift_idempotent(p)
    assert q.equals(p)


def test_lift_corrects_random_eps_noise():
    rng = random.Random(2026)
    for _ in range(50):
        n = rng.randint(1, 4)
        base = _random_idempotent_reduction(rng, n)
        p = new_dual_matrix(
            DUAL_Q,
            [[(str(base[i][j]), rng.randint(-3, 3)) for j in range(n)] for i in range(n)],
        )
        q = lift_idempotent(p)
        assert q.matmul(q).equals(q)
        assert q.reduction() == p.reduction()


def test_lift_works_over_a_finite_field():
    dual = DualNumbers(GF(5))
    p = new_dual_matrix(dual, [[(1, 3), (0, 2)], [(0, 4), (0, 0)]])
    q = lift_idempotent(p)
    assert q.matmul(q).equals(q)
    assert q.reduction() == p.reduction()


def test_lift_rejects_non_idempotent_reductions():
    p = new_dual_matrix(DUAL_Q, [[(1, 0), (1, 0)], [(1, 0), (1, 0)]])
    with pytest.raises(NotIdempotentModEps):
        lift_idempotent(p)


def test_algebra_idempotent_lift_in_the_interval_ring():
    c = catalog("interval")
    a, fam = matrix_ring(c)
    d = extend_to_duals(a)
    r = d.field
    assert alg_dim(reduction_algebra(d)) == alg_dim(a)
    e = fam.elements[0]
    noisy = [(v, QQ.from_int(3)) for v in e]
    q = lift_algebra_idempotent(d, noisy)
    prod = alg_mul(d, q, q)
    assert all(r.eq(u, v) for u, v in zip(prod, q))
    assert tuple(v[0] for v in q) == tuple(e)


def test_worked_pair_is_already_exact_and_kept():
    m2 = catalog("matrix_algebra(2)")
    a, _ = matrix_ring(m2)
    d = extend_to_duals(a)
    z, o = QQ.zero, QQ.one
    p1 = [(o, z), (z, o), (z, z), (z, z)]
    p2 = [(z, z), (z, QQ.neg(o)), (z, z), (o, z)]
    fam = lift_orthogonal_family(d, [p1, p2])
    assert list(fam.elements[0]) == p1
    assert list(fam.elements[1]) == p2
    assert validate_idempotent_family(d, fam.elements) == []


@pytest.mark.parametrize("name", ["matrix_algebra(2)", "interval"])
def test_perturbed_families_lift_to_exact_families(name):
    c = catalog(name)
    a, base_fam = matrix_ring(c)
    d = extend_to_duals(a)
    rng = random.Random(7)
    for _ in range(20):
        pert = [
            [(v, QQ.from_int(rng.randint(-3, 3))) for v in e]
            for e in base_fam.elements
        ]
        out = lift_orthogonal_family(d, pert)
        assert validate_idempotent_family(d, out.elements) == []
        for q, e in zip(out.elements, base_fam.elements):
            assert tuple(v[0] for v in q) == tuple(e)


def test_family_lift_rejects_broken_reductions():
    c = catalog("matrix_algebra(2)")
    a, _ = matrix_ring(c)
    d = extend_to_duals(a)
    z, o = QQ.zero, QQ.one
    not_orthogonal = [[(o, z), (z, z), (z, z), (z, z)], [(o, z), (z, z), (z, z), (o, z)]]
    with pytest.raises(InvalidFamily):
        lift_orthogonal_family(d, not_orthogonal)
    with pytest.raises(ShapeMismatch):
        lift_orthogonal_family(d, [[(o, z)]])


def test_presentation_lift_flat_and_matrix_shapes():
    c = catalog("truncated_poly(2)")
    a, _ = matrix_ring(c)
    d = extend_to_duals(a)
    r = d.field
    unit = alg_unit(d)
    # flat shape: one algebra element with eps noise on the unit
    noisy = [(v[0], QQ.one) for v in unit]
    q = lift_projective_presentation(d, noisy)
    prod = alg_mul(d, q, q)
    assert all(r.eq(u, v) for u, v in zip(prod, q))
    # matrix shape: a 2x2 presentation projector diag(1, 0) with eps noise
    zero = tuple(r.zero for _ in range(alg_dim(d)))
    noisy_cell = tuple((v[0], QQ.from_int(2)) for v in unit)
    mat = [[noisy_cell, zero], [zero, zero]]
    out = lift_projective_presentation(d, mat)
    assert len(out) == 2 and len(out[0]) == 2
    # q*q = q through explicit block multiplication
    for i in range(2):
        for j in range(2):
            acc = list(zero)
            for t in range(2):
                prod = alg_mul(d, out[i][t], out[t][j])
                acc = [r.add(u, v) for u, v in zip(acc, prod)]
            assert all(r.eq(u, v) for u, v in zip(acc, out[i][j]))
    with pytest.raises(ShapeMismatch):
        lift_projective_presentation(d, [[noisy_cell, zero]])


def test_presentation_lift_rejects_non_idempotent_reduction():
    c = catalog("field_cat")
    a, _ = matrix_ring(c)
    d = extend_to_duals(a)
    with pytest.raises(NotIdempotentModEps):
        lift_projective_presentation(d, [(QQ.from_int(2), QQ.zero)])
